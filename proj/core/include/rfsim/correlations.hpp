#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "rfsim/emitter.hpp"
#include "rfsim/interferometry.hpp"

// Closed-form evaluators for coherence, spectra, AMZI-filtered photon
// statistics and phase-dependent HOM coincidences, plus the fock-engine
// oracles that validate them.
namespace rfsim {

// Coincidence lags grouped by time degeneracy: |dt| far from 0 and tau,
// dt = +tau / -tau, and dt = 0.
enum class DegeneracyClass { nondegenerate, side_plus, side_minus, zero };

std::string to_string(DegeneracyClass c);
DegeneracyClass degeneracy_class_from_string(const std::string& s);

// First-order coherence: |g1| = p1 e^{-tau/T2} + p0 e^{-tau/TL} with
// carrier phase e^{-i 2 pi nu tau}. With include_indistinguishability the
// plateau term picks up sqrt(M).
std::complex<double> g1_model(double tau_delay, const EmitterParams& params,
                              bool include_indistinguishability = false);

struct SpectrumComponent {
    std::string name;
    double weight = 0.0;
    double fwhm_hz = 0.0;
};

struct SpectrumTrace {
    std::vector<double> frequency_hz;  // offset from the carrier nu
    std::vector<double> density;       // 1/Hz, unit integral when unfiltered
    std::vector<std::vector<double>> component_density;
    std::vector<SpectrumComponent> components;
    std::optional<double> instrument_fwhm_hz;
    std::optional<double> fringe_period_hz;  // set by filtered_spectrum
};

// Two normalized Lorentzians centred on the carrier: weight p1 with
// FWHM 1/(pi T2) and weight p0 with FWHM 1/(pi TL). The optional
// instrument Lorentzian convolves analytically (FWHMs add).
SpectrumTrace spectrum_analytic(const EmitterParams& params, double f_min, double f_max,
                                std::size_t points,
                                std::optional<double> instrument_fwhm_hz = std::nullopt);

double lorentzian_density(double f, double fwhm);

// Multiplies the density by the AMZI port transfer
//   d: (1 + cos(2 pi f tau + phi))/2,   c: (1 - cos(...))/2.
// Errors if the grid resolves a fringe with fewer than 8 points.
SpectrumTrace filtered_spectrum(const SpectrumTrace& spectrum, const AmziConfig& cfg,
                                std::string_view port);

// Filtered-RF auto-correlation at phi = pi: 1 (nondegenerate),
// 1/p1^2 (zero), (1+2 p1)/(4 p1^2) (side).
double g2_filtered(DegeneracyClass c, double p1);

struct CoincidenceProbabilities {
    double baseline = 0.0;  // C0, four independent emission times
    double side = 0.0;      // C(+-tau), three-time degeneracy
    double zero = 0.0;      // C(0),    two-time degeneracy
};

// Phase-dependent HOM coincidences. The side value uses the canonical
// form (1/16) p0 p1^2 (3 - 2 M cos 2phi) + (3/16) p1^3, exact in (p0,p1)
// without using the simplex constraint.
CoincidenceProbabilities hom_coincidences(double phi, const EmitterParams& params);

// Documented simplification of the side coincidence,
// (p1^2/16)(3 - 2 p0 M cos 2phi); equals the canonical form when p2 = 0.
double hom_side_simplified(double phi, const EmitterParams& params);

// Brute-force coincidence expectation on tensor products of per-time
// photon states with the exact port operators (entrance splitter kept as
// a 3 dB attenuation). Identical-photon case only: requires M = M' = 1.
// The zero and side classes are exact for any p2 (side by cubic
// homogeneity); the nondegenerate baseline requires p2 = 0, matching the
// closed form's absorbed normalization.
double oracle_coincidences(double phi, const EmitterParams& params, DegeneracyClass c);

// Brute-force filtered-RF g2 from the entangled light-matter states and
// the phi = pi AMZI (drop convention); validates g2_filtered.
double oracle_filtered_g2(DegeneracyClass c, double p1);

}  // namespace rfsim

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "rfsim/fock.hpp"

// Steady-state light-matter states of the driven two-level emitter and the
// mapping from excitation flux to populations.
namespace rfsim {

struct EmitterParams {
    double p0 = 1.0;
    double p1 = 0.0;
    double p2 = 0.0;
    double nbar = 0.0;      // mean incident photons per T1
    // Scattering efficiency; x = 2*eta_ab. The default 0.97 is inferred
    // from the fitted visibility slope x = 1.94, not quoted directly.
    double eta_ab = 0.97;
    double T1 = 67.2e-12;   // s
    double T2 = 137.4e-12;  // s
    double TL = 1.59e-6;    // laser coherence time, s
    double nu = 3.28885685762556e14;  // carrier frequency, Hz
    double M = 0.89;        // photon indistinguishability
    double Mprime = 0.92;   // post-selective two-photon visibility
    bool no_pure_dephasing = false;

    double x() const { return 2.0 * eta_ab; }

    // Hard invariants; throws config_error.
    void validate() const;
    // Soft model-validity conditions, e.g. p2 << p1^2/2.
    std::vector<std::string> warnings() const;
};

// p1 = 2 nbar eta_ab / (1 + 2 nbar eta_ab). Monotone, ->1 as nbar -> inf.
double saturation_p1(double nbar, double eta_ab);
// Inverse of saturation_p1.
double saturation_nbar(double p1, double eta_ab);

// Flux-to-population map with both parameter views (eta_ab and x).
struct SaturationModel {
    double eta_ab = 0.97;
    bool no_pure_dephasing = true;  // the law assumes T2 = 2*T1

    double x() const { return 2.0 * eta_ab; }
    double p1(double nbar) const { return saturation_p1(nbar, eta_ab); }
    double nbar(double p1) const { return saturation_nbar(p1, eta_ab); }
};

// Warning text when the no-pure-dephasing condition T2 = 2*T1 behind the
// saturation law does not hold; empty string otherwise.
std::string saturation_validity_warning(const EmitterParams& params);

// sqrt(p0)|0,g> + sqrt(p1/2) e^{i carrier_phase} (|0,e> + |1,g>) on one
// photon mode and one matter mode. The optical carrier is carried as a
// phase argument, never as an absolute e^{i 2 pi nu t} at optical scale;
// everything in scope depends only on phase differences.
fock::ModeState steady_state(const EmitterParams& params, std::string_view photon_label,
                             std::string_view matter_label, double carrier_phase = 0.0,
                             int truncation = 2);

// sqrt(p0)|0> + sqrt(p1)|1> + sqrt(p2)|2> on one photon mode.
fock::ModeState photon_pure_state(double p0, double p1, double p2,
                                  std::string_view label, int truncation = 2);

// (p0 + p1/2)|0><0| + (p1/2)|1><1| + sqrt(p0 p1/2)(|1><0| + |0><1|);
// equals tracing the matter out of steady_state.
fock::DensityState reduced_photon_density(double p0, double p1,
                                          std::string_view label = "a",
                                          int truncation = 2);

}  // namespace rfsim

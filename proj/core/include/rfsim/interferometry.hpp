#pragma once

#include <span>
#include <string>
#include <vector>

#include "rfsim/emitter.hpp"
#include "rfsim/fock.hpp"

// Asymmetric Mach-Zehnder interferometer on model states: output-state
// construction, fringe visibility and count-based visibility estimation.
namespace rfsim {

// The entrance splitter can be kept as a 3 dB attenuation (coincidence
// operators carry 1/2 per port) or dropped, which interferes the field
// with a full-amplitude delayed copy of itself. Closed forms state which
// convention they use.
enum class EntranceConvention { keep_3db, drop };

struct AmziConfig {
    double tau = 4.92e-9;  // differential delay, s
    double phi = 0.0;      // interferometer phase, rad
    EntranceConvention entrance = EntranceConvention::drop;
    std::string port_c = "c";
    std::string port_d = "d";

    void validate() const;
    // Model validity needs T1 << tau << TL (factor-10 thresholds).
    std::vector<std::string> warnings(const EmitterParams& params) const;
};

// Joint state over photon ports d,c and the matter modes of time bins
// t-tau ("mE") and t ("mL"), drop convention, indistinguishable photons.
// Mode order: photon d, photon c, matter mE, matter mL.
fock::ModeState amzi_output_state(const EmitterParams& params, const AmziConfig& cfg);

// Same state built through the fock-engine pipeline
// tensor -> phase -> splitter; agrees with the closed form to 1e-12.
fock::ModeState amzi_output_state_pipeline(const EmitterParams& params,
                                           const AmziConfig& cfg);

// Interference fringe visibility sqrt(M) * p0.
double fringe_visibility(const EmitterParams& params);

// Mean per-slot detection probabilities of the two ports for the
// photon-number-state input, entrance splitter kept as 3 dB:
//   P_c = (p1/2)(1 - sqrt(M) p0 cos phi),  P_d = (p1/2)(1 + ...).
struct PortRates {
    double c = 0.0;
    double d = 0.0;
};
PortRates port_rates(const EmitterParams& params, double phi);

// Two-channel summation estimate: each channel is normalized by the
// per-bin two-channel sum, then V = (max-min)/(max+min) of the fringe.
// If one channel carries no counts at all the raw fringe of the other
// channel is used instead.
double visibility_from_counts(std::span<const double> counts_c,
                              std::span<const double> counts_d);

// <n> of a photon port.
double port_mean_photons(const fock::ModeState& state, std::string_view port);

}  // namespace rfsim

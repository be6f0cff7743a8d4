#include "rfsim/interferometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace rfsim {

namespace {
constexpr double k_validity_factor = 10.0;
}

void AmziConfig::validate() const {
    if (!(tau > 0.0)) throw config_error("AMZI delay tau must be positive");
    if (port_c == port_d) throw config_error("AMZI ports need distinct labels");
}

std::vector<std::string> AmziConfig::warnings(const EmitterParams& params) const {
    std::vector<std::string> out;
    if (tau < k_validity_factor * params.T1) {
        std::ostringstream os;
        os << "AMZI delay tau = " << tau << " s is not large against T1 = " << params.T1
           << " s; temporal modes are no longer independent";
        out.push_back(os.str());
    }
    if (params.TL < k_validity_factor * tau) {
        std::ostringstream os;
        os << "laser coherence TL = " << params.TL << " s is not large against tau = "
           << tau << " s; the laser phase is no longer locked across the delay";
        out.push_back(os.str());
    }
    return out;
}

fock::ModeState amzi_output_state(const EmitterParams& params, const AmziConfig& cfg) {
    params.validate();
    cfg.validate();
    if (params.p2 != 0.0)
        throw config_error("AMZI output state is derived for p2 = 0");
    if (cfg.entrance != EntranceConvention::drop)
        throw config_error(
            "the joint output state is a pure state only when the entrance "
            "splitter is dropped; keep_3db applies to the coincidence operators");

    const double p0 = params.p0, p1 = params.p1;
    const fock::cplx eiphi = std::polar(1.0, cfg.phi);
    const double a = std::sqrt(p0 * p1);  // sqrt(p0 p1)
    const double b = p1 / (2.0 * std::sqrt(2.0));

    fock::ModeSpec spec({fock::Mode::photon(cfg.port_d, 2), fock::Mode::photon(cfg.port_c, 2),
                         fock::Mode::matter("mE"), fock::Mode::matter("mL")});
    std::vector<fock::cplx> amp(spec.dimension(), fock::cplx{0.0, 0.0});
    auto set = [&](int nd, int nc, int me, int ml, fock::cplx v) {
        const std::vector<int> occ{nd, nc, me, ml};
        amp[spec.flat_index(occ)] = v;
    };
    // No-photon line.
    set(0, 0, 0, 0, p0);
    set(0, 0, 0, 1, std::sqrt(p0 * p1 / 2.0));
    set(0, 0, 1, 0, std::sqrt(p0 * p1 / 2.0));
    set(0, 0, 1, 1, p1 / 2.0);
    // Port c singles: (1 - e^{i phi}) interference term plus which-transition terms.
    set(0, 1, 0, 0, a * (1.0 - eiphi) / 2.0);
    set(0, 1, 0, 1, b);
    set(0, 1, 1, 0, -b * eiphi);
    // Port d singles.
    set(1, 0, 0, 0, a * (1.0 + eiphi) / 2.0);
    set(1, 0, 0, 1, b);
    set(1, 0, 1, 0, b * eiphi);
    // HOM pair terms.
    set(0, 2, 0, 0, -b * eiphi);
    set(2, 0, 0, 0, b * eiphi);
    return fock::ModeState(std::move(spec), std::move(amp));
}

fock::ModeState amzi_output_state_pipeline(const EmitterParams& params,
                                           const AmziConfig& cfg) {
    params.validate();
    cfg.validate();
    if (params.p2 != 0.0)
        throw config_error("AMZI output state is derived for p2 = 0");
    if (cfg.entrance != EntranceConvention::drop)
        throw config_error(
            "the joint output state is a pure state only when the entrance "
            "splitter is dropped; keep_3db applies to the coincidence operators");

    // Early bin t-tau and late bin t; time-evolution carrier phases drop
    // out of every observable in scope and are set to zero here.
    auto early = steady_state(params, "pE", "mE");
    auto late = steady_state(params, "pL", "mL");
    auto joint = tensor(early, late);
    joint = fock::apply_phase(joint, "pL", cfg.phi);
    // Early slot becomes port d, late slot port c under the engine's
    // 50:50 convention (a,b) -> ((a+b)/sqrt2, (a-b)/sqrt2).
    joint = fock::apply_beam_splitter(joint, "pE", "pL", 0.5);
    const std::vector<std::string> from{"pE", "pL"};
    const std::vector<std::string> to{cfg.port_d, cfg.port_c};
    joint = fock::relabel(joint, from, to);
    const std::vector<std::string> order{cfg.port_d, cfg.port_c, "mE", "mL"};
    return fock::permute_modes(joint, order);
}

double fringe_visibility(const EmitterParams& params) {
    params.validate();
    return std::sqrt(params.M) * params.p0;
}

PortRates port_rates(const EmitterParams& params, double phi) {
    params.validate();
    const double v = std::sqrt(params.M) * params.p0;
    return PortRates{params.p1 / 2.0 * (1.0 - v * std::cos(phi)),
                     params.p1 / 2.0 * (1.0 + v * std::cos(phi))};
}

double visibility_from_counts(std::span<const double> counts_c,
                              std::span<const double> counts_d) {
    if (counts_c.empty() || counts_c.size() != counts_d.size())
        throw config_error("count series must be nonempty and of equal length");

    double total_c = 0.0, total_d = 0.0;
    for (double v : counts_c) total_c += v;
    for (double v : counts_d) total_d += v;
    if (total_c == 0.0 && total_d == 0.0)
        throw config_error("both channels are empty");

    auto raw_fringe = [](std::span<const double> series) {
        const auto [lo, hi] = std::minmax_element(series.begin(), series.end());
        if (*lo + *hi == 0.0) throw config_error("fringe has zero total counts");
        return (*hi - *lo) / (*hi + *lo);
    };
    // Single-channel fallback: intensity-drift immunity is lost but the
    // fringe itself still carries the visibility.
    if (total_d == 0.0) return raw_fringe(counts_c);
    if (total_c == 0.0) return raw_fringe(counts_d);

    std::vector<double> normalized(counts_c.size());
    for (std::size_t i = 0; i < counts_c.size(); ++i) {
        const double sum = counts_c[i] + counts_d[i];
        if (sum == 0.0)
            throw config_error("zero total counts in bin " + std::to_string(i));
        normalized[i] = counts_c[i] / sum;
    }
    return raw_fringe(normalized);
}

double port_mean_photons(const fock::ModeState& state, std::string_view port) {
    const std::vector<std::string> labels{std::string(port)};
    return fock::correlator(state, labels, labels).real();
}

}  // namespace rfsim

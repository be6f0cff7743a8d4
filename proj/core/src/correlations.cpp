#include "rfsim/correlations.hpp"

#include <cmath>
#include <numbers>

namespace rfsim {

using fock::cplx;
using fock::LoweringTerm;
using std::numbers::pi;

std::string to_string(DegeneracyClass c) {
    switch (c) {
        case DegeneracyClass::nondegenerate: return "nondegenerate";
        case DegeneracyClass::side_plus: return "side+";
        case DegeneracyClass::side_minus: return "side-";
        case DegeneracyClass::zero: return "zero";
    }
    throw config_error("bad degeneracy class");
}

DegeneracyClass degeneracy_class_from_string(const std::string& s) {
    if (s == "nondegenerate" || s == "baseline") return DegeneracyClass::nondegenerate;
    if (s == "side+" || s == "side_plus") return DegeneracyClass::side_plus;
    if (s == "side-" || s == "side_minus") return DegeneracyClass::side_minus;
    if (s == "side") return DegeneracyClass::side_plus;
    if (s == "zero") return DegeneracyClass::zero;
    throw config_error("unknown degeneracy class '" + s + "'");
}

std::complex<double> g1_model(double tau_delay, const EmitterParams& params,
                              bool include_indistinguishability) {
    params.validate();
    if (tau_delay < 0.0) throw config_error("g1 delay must be nonnegative");
    const double plateau_scale = include_indistinguishability ? std::sqrt(params.M) : 1.0;
    const double mag = params.p1 * std::exp(-tau_delay / params.T2) +
                       plateau_scale * params.p0 * std::exp(-tau_delay / params.TL);
    return mag * std::polar(1.0, -2.0 * pi * params.nu * tau_delay);
}

double lorentzian_density(double f, double fwhm) {
    const double u = 2.0 * f / fwhm;
    return 2.0 / (pi * fwhm) / (1.0 + u * u);
}

SpectrumTrace spectrum_analytic(const EmitterParams& params, double f_min, double f_max,
                                std::size_t points,
                                std::optional<double> instrument_fwhm_hz) {
    params.validate();
    if (points < 2 || !(f_max > f_min)) throw config_error("bad spectrum grid");
    const double instrument = instrument_fwhm_hz.value_or(0.0);
    if (instrument < 0.0) throw config_error("instrument FWHM must be nonnegative");

    SpectrumTrace out;
    out.components = {
        // A laser quoted at 100 kHz linewidth comes with TL = 1.59 us,
        // yet 1/(pi TL) is 200 kHz. TL is taken literally here; the
        // factor-2 linewidth convention is left unresolved.
        {"laser_like", params.p0, 1.0 / (pi * params.TL) + instrument},
        {"broadband", params.p1, 1.0 / (pi * params.T2) + instrument},
    };
    if (instrument > 0.0) out.instrument_fwhm_hz = instrument;

    out.frequency_hz.resize(points);
    out.density.assign(points, 0.0);
    out.component_density.assign(out.components.size(), std::vector<double>(points, 0.0));
    const double df = (f_max - f_min) / static_cast<double>(points - 1);
    for (std::size_t i = 0; i < points; ++i) {
        const double f = f_min + df * static_cast<double>(i);
        out.frequency_hz[i] = f;
        for (std::size_t k = 0; k < out.components.size(); ++k) {
            const double d =
                out.components[k].weight * lorentzian_density(f, out.components[k].fwhm_hz);
            out.component_density[k][i] = d;
            out.density[i] += d;
        }
    }
    return out;
}

SpectrumTrace filtered_spectrum(const SpectrumTrace& spectrum, const AmziConfig& cfg,
                                std::string_view port) {
    cfg.validate();
    if (spectrum.frequency_hz.size() < 2) throw config_error("spectrum grid too small");
    if (port != cfg.port_c && port != cfg.port_d)
        throw config_error("unknown AMZI port '" + std::string(port) + "'");
    const double fringe = 1.0 / cfg.tau;
    double max_step = 0.0;
    for (std::size_t i = 1; i < spectrum.frequency_hz.size(); ++i)
        max_step = std::max(max_step, spectrum.frequency_hz[i] - spectrum.frequency_hz[i - 1]);
    if (max_step > fringe / 8.0)
        throw config_error("spectrum grid coarser than 8 points per AMZI fringe");

    const double sign = (port == cfg.port_d) ? 1.0 : -1.0;
    SpectrumTrace out = spectrum;
    out.fringe_period_hz = fringe;
    for (std::size_t i = 0; i < out.frequency_hz.size(); ++i) {
        const double transfer =
            0.5 * (1.0 + sign * std::cos(2.0 * pi * out.frequency_hz[i] * cfg.tau + cfg.phi));
        out.density[i] *= transfer;
        for (auto& comp : out.component_density) comp[i] *= transfer;
    }
    return out;
}

double g2_filtered(DegeneracyClass c, double p1) {
    if (p1 < 0.0 || p1 > 1.0) throw config_error("p1 must lie in (0,1]");
    if (c == DegeneracyClass::nondegenerate) return 1.0;
    if (p1 <= 1e-12)
        throw numeric_error("filtered g2 diverges as p1 -> 0 (ideal-limit divergence)");
    if (c == DegeneracyClass::zero) return 1.0 / (p1 * p1);
    return (1.0 + 2.0 * p1) / (4.0 * p1 * p1);
}

CoincidenceProbabilities hom_coincidences(double phi, const EmitterParams& params) {
    params.validate();
    const double p0 = params.p0, p1 = params.p1, p2 = params.p2;
    const double M = params.M, Mp = params.Mprime;
    const double c2 = std::cos(2.0 * phi);
    const double c1 = std::cos(phi);
    CoincidenceProbabilities out;
    out.baseline = p1 * p1 / 4.0 * (1.0 - M * p0 * p0 * c1 * c1);
    out.side = p0 * p1 * p1 / 16.0 * (3.0 - 2.0 * M * c2) + 3.0 / 16.0 * p1 * p1 * p1;
    const double one_quanta = p1 + 2.0 * p2;
    out.zero = p2 / 4.0 * (1.0 - p0 * M * c2) + one_quanta * one_quanta / 8.0 * (1.0 - Mp);
    return out;
}

double hom_side_simplified(double phi, const EmitterParams& params) {
    params.validate();
    return params.p1 * params.p1 / 16.0 *
           (3.0 - 2.0 * params.p0 * params.M * std::cos(2.0 * phi));
}

namespace {

fock::ModeState two_level_product(double p0, double p1, int n_modes,
                                  std::vector<std::string>& labels) {
    labels.clear();
    std::vector<fock::ModeState> states;
    const double s = p0 + p1;
    for (int i = 0; i < n_modes; ++i) {
        labels.push_back("t" + std::to_string(i));
        fock::ModeSpec spec({fock::Mode::photon(labels.back(), 1)});
        std::vector<cplx> amp{std::sqrt(p0 / s), std::sqrt(p1 / s)};
        states.emplace_back(std::move(spec), std::move(amp));
    }
    return fock::tensor(states);
}

}  // namespace

double oracle_coincidences(double phi, const EmitterParams& params, DegeneracyClass c) {
    params.validate();
    if (params.M != 1.0 || params.Mprime != 1.0)
        throw config_error("coincidence oracle covers identical photons only (M = M' = 1)");
    const double p0 = params.p0, p1 = params.p1, p2 = params.p2;
    const cplx e1 = std::polar(1.0, phi);
    const cplx e2 = std::polar(1.0, 2.0 * phi);
    std::vector<std::string> t;

    switch (c) {
        case DegeneracyClass::nondegenerate: {
            if (p2 != 0.0)
                throw config_error(
                    "nondegenerate oracle requires p2 = 0; evaluate at the "
                    "(p0,p1)-renormalized point");
            // c_t d_{t'} over four independent times, entrance kept as 3 dB:
            // (1/4)[a0 a2 + e^{i phi} a0 a3 - e^{i phi} a1 a2 - e^{2i phi} a1 a3]
            auto state = two_level_product(p0, p1, 4, t);
            const std::vector<LoweringTerm> terms{
                {cplx{0.25, 0.0}, {t[0], t[2]}},
                {0.25 * e1, {t[0], t[3]}},
                {-0.25 * e1, {t[1], t[2]}},
                {-0.25 * e2, {t[1], t[3]}},
            };
            return fock::quadratic_expectation(state, terms);
        }
        case DegeneracyClass::side_plus: {
            // c_t d_{t+tau} over times (t-tau, t, t+tau); cubic homogeneity
            // in (p0,p1) lets the normalized two-level evaluation rescale
            // exactly for any p2.
            auto state = two_level_product(p0, p1, 3, t);
            const std::vector<LoweringTerm> terms{
                {cplx{0.25, 0.0}, {t[0], t[1]}},
                {0.25 * e1, {t[0], t[2]}},
                {-0.25 * e1, {t[1], t[1]}},
                {-0.25 * e2, {t[1], t[2]}},
            };
            const double s = p0 + p1;
            return s * s * s * fock::quadratic_expectation(state, terms);
        }
        case DegeneracyClass::side_minus: {
            // c_t d_{t-tau} over times (t-2tau, t-tau, t).
            auto state = two_level_product(p0, p1, 3, t);
            const std::vector<LoweringTerm> terms{
                {cplx{0.25, 0.0}, {t[1], t[0]}},
                {0.25 * e1, {t[1], t[1]}},
                {-0.25 * e1, {t[2], t[0]}},
                {-0.25 * e2, {t[2], t[1]}},
            };
            const double s = p0 + p1;
            return s * s * s * fock::quadratic_expectation(state, terms);
        }
        case DegeneracyClass::zero: {
            // c_t d_t on two times with the full three-level state. The
            // cross terms cancel for identical photons; they are kept so
            // the cancellation happens in the operator algebra itself.
            auto early = photon_pure_state(p0, p1, p2, "tA");
            auto late = photon_pure_state(p0, p1, p2, "tB");
            auto state = fock::tensor(early, late);
            const std::vector<LoweringTerm> terms{
                {cplx{0.25, 0.0}, {"tA", "tA"}},
                {-0.25 * e2, {"tB", "tB"}},
                {0.25 * e1, {"tA", "tB"}},
                {-0.25 * e1, {"tB", "tA"}},
            };
            return fock::quadratic_expectation(state, terms);
        }
    }
    throw config_error("bad degeneracy class");
}

double oracle_filtered_g2(DegeneracyClass c, double p1) {
    if (!(p1 > 0.0 && p1 <= 1.0)) throw config_error("p1 must lie in (0,1]");
    EmitterParams params;
    params.p0 = 1.0 - p1;
    params.p1 = p1;
    params.p2 = 0.0;
    params.M = params.Mprime = 1.0;

    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    auto bin = [&](int i) {
        return steady_state(params, "q" + std::to_string(i), "w" + std::to_string(i));
    };

    switch (c) {
        case DegeneracyClass::zero: {
            // g2(0) of port d of the joint output state at phi = pi.
            AmziConfig cfg;
            cfg.phi = pi;
            auto out = amzi_output_state_pipeline(params, cfg);
            const std::vector<std::string> d{"d"}, dd{"d", "d"};
            const double num = fock::correlator(out, dd, dd).real();
            const double den = fock::correlator(out, d, d).real();
            return num / (den * den);
        }
        case DegeneracyClass::side_plus:
        case DegeneracyClass::side_minus: {
            // Three entangled bins; d_t = (a0 - a1)/sqrt2, d_{t+tau} =
            // (a1 - a2)/sqrt2 at phi = pi (entrance splitter dropped).
            auto state = fock::tensor(bin(0), bin(1), bin(2));
            const std::vector<LoweringTerm> pair{
                {cplx{0.5, 0.0}, {"q0", "q1"}},
                {cplx{-0.5, 0.0}, {"q0", "q2"}},
                {cplx{-0.5, 0.0}, {"q1", "q1"}},
                {cplx{0.5, 0.0}, {"q1", "q2"}},
            };
            const std::vector<LoweringTerm> single{
                {cplx{inv_sqrt2, 0.0}, {"q0"}},
                {cplx{-inv_sqrt2, 0.0}, {"q1"}},
            };
            const double num = fock::quadratic_expectation(state, pair);
            const double den = fock::quadratic_expectation(state, single);
            return num / (den * den);
        }
        case DegeneracyClass::nondegenerate: {
            // Four independent bins, two disjoint output slots.
            auto state = fock::tensor(fock::tensor(bin(0), bin(1)),
                                      fock::tensor(bin(2), bin(3)));
            const std::vector<LoweringTerm> pair{
                {cplx{0.5, 0.0}, {"q0", "q2"}},
                {cplx{-0.5, 0.0}, {"q0", "q3"}},
                {cplx{-0.5, 0.0}, {"q1", "q2"}},
                {cplx{0.5, 0.0}, {"q1", "q3"}},
            };
            const std::vector<LoweringTerm> single{
                {cplx{inv_sqrt2, 0.0}, {"q0"}},
                {cplx{-inv_sqrt2, 0.0}, {"q1"}},
            };
            const double num = fock::quadratic_expectation(state, pair);
            const double den = fock::quadratic_expectation(state, single);
            return num / (den * den);
        }
    }
    throw config_error("bad degeneracy class");
}

}  // namespace rfsim

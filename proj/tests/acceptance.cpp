// Acceptance suite: one pass/fail line per criterion, nonzero exit when
// any criterion fails. Statistical gates are 5 Poisson sigma; everything
// else is a fixed numeric tolerance pinned here.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "rfsim/correlations.hpp"
#include "rfsim/estimate.hpp"
#include "rfsim/simulate.hpp"

using namespace rfsim;
using std::numbers::pi;

namespace {

struct Criterion {
    int id;
    std::string name;
    bool pass = true;
    std::ostringstream detail;

    Criterion(int id_, std::string name_) : id(id_), name(std::move(name_)) {}

    void gate(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << "[FAILED: " << what << "] ";
        }
    }
};

struct Rng {
    std::mt19937_64 gen;
    explicit Rng(std::uint64_t seed) : gen(seed) {}
    double uniform() { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }
    double gaussian() {
        const double u1 = std::max(uniform(), 1e-300);
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * pi * uniform());
    }
    void simplex3(double& a, double& b, double& c) {
        a = -std::log(std::max(uniform(), 1e-300));
        b = -std::log(std::max(uniform(), 1e-300));
        c = -std::log(std::max(uniform(), 1e-300));
        const double s = a + b + c;
        a /= s;
        b /= s;
        c /= s;
    }
};

EmitterParams ideal_params(double p0, double p1, double p2) {
    EmitterParams p;
    p.p0 = p0;
    p.p1 = p1;
    p.p2 = p2;
    p.M = p.Mprime = 1.0;
    return p;
}

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// --- criterion 1 ---------------------------------------------------------

Criterion oracle_equivalence() {
    Criterion c{1, "oracle equivalence (coincidence closed forms vs fock engine)"};
    const auto t0 = std::chrono::steady_clock::now();
    Rng rng(1001);
    double max_dev = 0.0;
    const int trials = 1000;
    for (int i = 0; i < trials; ++i) {
        double p0, p1, p2;
        rng.simplex3(p0, p1, p2);
        const double phi = 2.0 * pi * rng.uniform();
        auto params = ideal_params(p0, p1, p2);
        auto closed = hom_coincidences(phi, params);

        max_dev = std::max(max_dev, std::abs(closed.zero - oracle_coincidences(
                                                 phi, params, DegeneracyClass::zero)));
        max_dev = std::max(max_dev,
                           std::abs(closed.side - oracle_coincidences(
                                        phi, params, DegeneracyClass::side_plus)));
        max_dev = std::max(max_dev,
                           std::abs(closed.side - oracle_coincidences(
                                        phi, params, DegeneracyClass::side_minus)));
        // The baseline form absorbed (p0+p1)^2 = 1; its brute-force
        // counterpart is exact on the two-photon-free slice of the draw.
        const double s = p0 + p1;
        auto two_level = ideal_params(p0 / s, p1 / s, 0.0);
        max_dev = std::max(
            max_dev, std::abs(hom_coincidences(phi, two_level).baseline -
                              oracle_coincidences(phi, two_level,
                                                  DegeneracyClass::nondegenerate)));
    }
    const double secs = seconds_since(t0);
    c.gate(max_dev <= 1e-10, "max deviation above 1e-10");
    c.gate(secs < 60.0, "runtime above one minute");
    c.detail << trials << " draws, max |closed - oracle| = " << max_dev << ", "
             << secs << " s";
    return c;
}

// --- criterion 2 ---------------------------------------------------------

Criterion filtered_super_bunching() {
    Criterion c{2, "filtered super-bunching g2(0) = 1/p1^2 and side ratio"};
    double worst_identity = 0.0;
    for (int i = 1; i <= 100; ++i) {
        const double p1 = static_cast<double>(i) / 100.0;
        worst_identity = std::max(
            worst_identity, std::abs(g2_filtered(DegeneracyClass::zero, p1) * p1 * p1 - 1.0));
    }
    c.gate(worst_identity <= 1e-14, "g2(0) * p1^2 identity broken");

    const double at_546 = g2_filtered(DegeneracyClass::zero, 0.546);
    c.gate(std::abs(at_546 - 3.35) <= 0.01, "bunching at p1 = 0.546 outside 3.35 +- 0.01");

    // g2(+-tau)/g2(0) = (1+2p1)/4 -> 1/4 in the weak-drive limit.
    double worst_ratio = 0.0;
    for (double p1 : {1e-6, 1e-3, 0.012, 0.1, 0.3, 0.546}) {
        const double ratio = g2_filtered(DegeneracyClass::side_plus, p1) /
                             g2_filtered(DegeneracyClass::zero, p1);
        worst_ratio = std::max(worst_ratio, std::abs(ratio - (1.0 + 2.0 * p1) / 4.0));
    }
    c.gate(worst_ratio <= 1e-12, "side/zero ratio identity broken");
    const double limit = g2_filtered(DegeneracyClass::side_plus, 1e-6) /
                         g2_filtered(DegeneracyClass::zero, 1e-6);
    c.gate(std::abs(limit - 0.25) <= 1e-5, "weak-drive side ratio not 1/4");

    c.detail << "g2(0)|_{p1=0.546} = " << at_546
             << " (measured 168.9 at the lowest flux is background-dominated and not "
                "reproduced; ideal-model values asserted), ratio -> "
             << limit;
    return c;
}

// --- criterion 3 ---------------------------------------------------------

Criterion saturation_law() {
    Criterion c{3, "saturation law p1(nbar)"};
    const double p1 = saturation_p1(0.62, 0.97);  // x = 2 eta_ab = 1.94
    c.gate(std::abs(p1 - 0.546) <= 0.001, "p1(0.62) outside 0.546 +- 0.001");

    Rng rng(3003);
    bool monotone = true, bounded = true;
    for (int i = 0; i < 500; ++i) {
        const double eta = 0.05 + 0.95 * rng.uniform();
        const double a = 50.0 * rng.uniform();
        const double b = a + 1e-6 + 10.0 * rng.uniform();
        const double pa = saturation_p1(a, eta), pb = saturation_p1(b, eta);
        monotone = monotone && pb > pa;
        bounded = bounded && pa >= 0.0 && pb < 1.0;
    }
    c.gate(monotone, "not monotone");
    c.gate(bounded, "not bounded in [0,1)");
    c.gate(saturation_p1(0.0, 0.97) == 0.0, "p1(0) != 0");
    c.gate(std::abs(saturation_p1(1e12, 0.97) - 1.0) < 1e-11, "p1 does not saturate to 1");
    c.detail << "p1(0.62; x=1.94) = " << p1;
    return c;
}

// --- criterion 4 ---------------------------------------------------------

Criterion visibility_refit() {
    Criterion c{4, "visibility curve refit in both model forms"};
    std::vector<VisibilityPoint> data;
    for (double nbar = 1e-3; nbar < 12.0; nbar *= 1.6)
        data.push_back({nbar, 0.946 / (1.0 + 1.94 * nbar)});

    auto sat = fit_visibility_curve(data, VisibilityModel::saturation);
    c.gate(std::abs(sat.values.at("x") - 1.94) <= 1e-6, "x not recovered to 1e-6");
    c.gate(std::abs(sat.values.at("V0") - 0.946) <= 1e-6, "V0 not recovered to 1e-6");

    const double T1 = 67.2e-12, T2 = 1.62 * 67.2e-12;
    auto rabi = fit_visibility_curve(data, VisibilityModel::rabi, T1, T2);
    const double omega = rabi.values.at("Omega_scale");
    double max_resid = 0.0;
    for (const auto& p : data) {
        const double sat_curve = sat.values.at("V0") / (1.0 + sat.values.at("x") * p.nbar);
        const double rabi_curve =
            rabi.values.at("V0") / (1.0 + omega * omega * T1 * T2 * p.nbar);
        max_resid = std::max(max_resid, std::abs(sat_curve - rabi_curve));
    }
    c.gate(max_resid <= 1e-9, "Rabi-form equivalence residual above 1e-9");
    c.detail << "x = " << sat.values.at("x") << ", V0 = " << sat.values.at("V0")
             << ", form-equivalence residual = " << max_resid;
    return c;
}

// --- criterion 5 ---------------------------------------------------------

Criterion spectrum_checks() {
    Criterion c{5, "spectrum: widths, weight, fringe period, numeric FT"};
    EmitterParams p;
    p.p1 = saturation_p1(0.62, 0.97);
    p.p0 = 1.0 - p.p1;

    auto spec = spectrum_analytic(p, -1e9, 1e9, 200001);
    const double fwhm_bb = spec.components[1].fwhm_hz;
    c.gate(std::abs(fwhm_bb - 2.3e9) / 2.3e9 <= 0.02,
           "broadband FWHM not within 2% of 2.3 GHz");

    // Laser-like weight: Simpson over the grid plus analytic tails.
    const double df = spec.frequency_hz[1] - spec.frequency_hz[0];
    double integral = spec.component_density[0][0] + spec.component_density[0].back();
    for (std::size_t i = 1; i + 1 < spec.frequency_hz.size(); ++i)
        integral += spec.component_density[0][i] * (i % 2 == 1 ? 4.0 : 2.0);
    integral *= df / 3.0;
    const double tail =
        p.p0 * (1.0 - 2.0 / pi * std::atan(2.0 * 1e9 / spec.components[0].fwhm_hz));
    c.gate(std::abs(integral + tail - p.p0) <= 1e-10,
           "laser-like weight not p0 within 1e-10");

    const double fringe = 1.0 / 4.92e-9;
    c.gate(std::abs(fringe - 203.25e6) / 203.25e6 <= 1e-3,
           "fringe period not 203.25 MHz within 0.1%");

    // Quadrature FT oracle on a scale-reduced laser coherence time.
    EmitterParams ft = p;
    ft.TL = 100.0 * ft.T2;
    const double t_max = 14.0 * ft.TL;
    const std::size_t n = 400000;
    double worst_ft = 0.0;
    for (double f : {0.0, 2.0e8, 1.0e9, 2.3e9}) {
        const double analytic = ft.p1 * lorentzian_density(f, 1.0 / (pi * ft.T2)) +
                                ft.p0 * lorentzian_density(f, 1.0 / (pi * ft.TL));
        const double h = t_max / static_cast<double>(n);
        auto integrand = [&](double t) {
            const double mag =
                ft.p1 * std::exp(-t / ft.T2) + ft.p0 * std::exp(-t / ft.TL);
            return mag * std::cos(2.0 * pi * f * t);
        };
        double sum = integrand(0.0) + integrand(t_max);
        for (std::size_t i = 1; i < n; ++i)
            sum += integrand(h * static_cast<double>(i)) * (i % 2 == 1 ? 4.0 : 2.0);
        const double numeric = 2.0 * sum * h / 3.0;
        worst_ft = std::max(worst_ft, std::abs(numeric - analytic) / analytic);
    }
    c.gate(worst_ft <= 1e-4, "numeric FT deviates from analytic by more than 1e-4");

    c.detail << "broadband FWHM = " << fwhm_bb << " Hz, weight residual = "
             << std::abs(integral + tail - p.p0) << ", FT rel dev = " << worst_ft;
    return c;
}

// --- criterion 6 ---------------------------------------------------------

Criterion output_state_audit() {
    Criterion c{6, "AMZI output state closed form vs engine pipeline"};
    double max_dev = 0.0;
    for (int pi_idx = 1; pi_idx <= 9; ++pi_idx) {
        const double p1 = 0.1 * pi_idx;
        if (p1 > 0.95) continue;
        for (int k = 0; k <= 8; ++k) {
            EmitterParams p;
            p.p1 = p1;
            p.p0 = 1.0 - p1;
            AmziConfig cfg;
            cfg.phi = k * pi / 4.0;
            auto closed = amzi_output_state(p, cfg);
            auto pipeline = amzi_output_state_pipeline(p, cfg);
            for (std::size_t i = 0; i < closed.spec().dimension(); ++i)
                max_dev = std::max(max_dev, std::abs(closed.amplitudes()[i] -
                                                     pipeline.amplitudes()[i]));
        }
    }
    c.gate(max_dev <= 1e-12, "state mismatch above 1e-12");
    c.detail << "p1 in {0.1..0.9} x phi in {0..2pi}, max amplitude mismatch = " << max_dev;
    return c;
}

// --- criterion 7 ---------------------------------------------------------

Criterion loss_invariance() {
    Criterion c{7, "loss invariance of g1 and g2"};
    Rng rng(7007);
    fock::ModeSpec spec({fock::Mode::photon("a"), fock::Mode::photon("b")});
    const std::vector<std::string> la{"a"}, lb{"b"}, laa{"a", "a"};
    double max_dev = 0.0;
    for (int i = 0; i < 40; ++i) {
        std::vector<fock::cplx> amp(spec.dimension());
        double norm = 0.0;
        for (auto& v : amp) {
            v = fock::cplx(rng.gaussian(), rng.gaussian());
            norm += std::norm(v);
        }
        norm = std::sqrt(norm);
        for (auto& v : amp) v /= norm;
        fock::ModeState state(spec, std::move(amp));
        const double g2 = fock::correlator(state, laa, laa).real() /
                          std::pow(fock::correlator(state, la, la).real(), 2);
        const double g1 = std::abs(fock::correlator(state, la, lb)) /
                          std::sqrt(fock::correlator(state, la, la).real() *
                                    fock::correlator(state, lb, lb).real());
        for (double eta : {0.1, 0.5, 0.9}) {
            auto lossy = apply_loss(apply_loss(state, "a", eta), "b", eta);
            const double g2l = fock::correlator(lossy, laa, laa).real() /
                               std::pow(fock::correlator(lossy, la, la).real(), 2);
            const double g1l = std::abs(fock::correlator(lossy, la, lb)) /
                               std::sqrt(fock::correlator(lossy, la, la).real() *
                                         fock::correlator(lossy, lb, lb).real());
            max_dev = std::max({max_dev, std::abs(g2l - g2), std::abs(g1l - g1)});
        }
    }
    c.gate(max_dev <= 1e-10, "g1/g2 shifted by loss beyond 1e-10");
    c.detail << "40 random two-mode states, eta in {0.1,0.5,0.9}, max shift = " << max_dev;
    return c;
}

// --- criterion 8 ---------------------------------------------------------

struct McPointResult {
    double g2_zero, g2_zero_sigma, g2_side, g2_side_sigma;
    double coincidences;
    double secs;
};

McPointResult run_mc_point(double p1, double duration_slots) {
    SimConfig cfg;
    cfg.params = ideal_params(1.0 - p1, p1, 0.0);
    cfg.amzi.phi = pi;
    cfg.slot_width = cfg.amzi.tau / 7.0;
    cfg.duration = duration_slots * cfg.slot_width;
    cfg.seed = 88;

    const auto t0 = std::chrono::steady_clock::now();
    HistogramAccumulator acc(Pairing::auto_port_d, 256, cfg.delay_slots(),
                             cfg.slot_width);
    SimStats stats = simulate_clicks(cfg, [&acc](const ClickRecord& r) { acc.add(r); });
    acc.set_total_slots(stats.slots);
    auto g2 = g2_from_trace(acc.finish());
    const double secs = seconds_since(t0);

    // The auto-correlation is symmetric; its lag-k bin is the +-tau feature.
    const auto k = static_cast<std::int64_t>(cfg.delay_slots());
    McPointResult r{};
    r.g2_zero = g2.value_at_lag(0);
    r.g2_zero_sigma = g2.error_at_lag(0);
    r.g2_side = g2.value_at_lag(k);
    r.g2_side_sigma = g2.error_at_lag(k);
    const auto raw = acc.finish();
    r.coincidences = raw.value_at_lag(0) + raw.value_at_lag(k);
    r.secs = secs;
    return r;
}

Criterion monte_carlo_consistency() {
    Criterion c{8, "Monte Carlo g2 vs closed forms at phi = pi"};
    struct Point {
        double p1;
        double slots;
    };
    for (const Point pt : {Point{0.012, 2.6e9}, Point{0.3, 6.0e6}}) {
        auto r = run_mc_point(pt.p1, pt.slots);
        const double zero_expected = g2_filtered(DegeneracyClass::zero, pt.p1);
        const double side_expected = g2_filtered(DegeneracyClass::side_plus, pt.p1);
        std::ostringstream tag;
        tag << "p1=" << pt.p1;
        c.gate(std::abs(r.g2_zero - zero_expected) <= 5.0 * r.g2_zero_sigma,
               tag.str() + ": g2(0) outside 5 sigma");
        c.gate(std::abs(r.g2_side - side_expected) <= 5.0 * r.g2_side_sigma,
               tag.str() + ": g2(tau) outside 5 sigma");
        c.gate(r.coincidences >= 1e5, tag.str() + ": fewer than 1e5 coincidences");
        c.gate(r.secs <= 300.0, tag.str() + ": runtime above 5 minutes");
        c.detail << "[p1 = " << pt.p1 << ": g2(0) = " << r.g2_zero << " +- "
                 << r.g2_zero_sigma << " (model " << zero_expected
                 << "), g2(tau) = " << r.g2_side << " +- " << r.g2_side_sigma
                 << " (model " << side_expected << "), N = " << r.coincidences
                 << " coincidences, " << r.secs << " s] ";
    }
    return c;
}

// --- criterion 9 ---------------------------------------------------------

Criterion mle_round_trip() {
    Criterion c{9, "MLE round trip, coverage and crossover"};
    struct Set {
        const char* name;
        double p0, p1, p2, mp;
    };
    const Set sets[] = {{"nbar=0.0062", 0.98 / 1.003008, 0.023 / 1.003008,
                         8.0e-6 / 1.003008, 0.96},
                        {"nbar=0.25", 0.69 / 0.9922, 0.30 / 0.9922, 2.2e-3 / 0.9922, 0.94},
                        {"nbar=0.62", 0.49 / 0.998, 0.50 / 0.998, 8.0e-3 / 0.998, 0.92}};

    auto forward = [](const EmitterParams& truth, double noise, Rng* rng) {
        std::vector<CoincidencePoint> data;
        for (int i = 0; i <= 8; ++i) {
            const double phi = pi * i / 8.0;
            for (auto clazz : {DegeneracyClass::zero, DegeneracyClass::side_plus}) {
                CoincidencePoint p;
                p.phi = phi;
                p.clazz = clazz;
                const double m = coincidence_model(phi, clazz, truth);
                p.error = noise > 0.0 ? noise * m : 0.0;
                p.value = m + (rng ? p.error * rng->gaussian() : 0.0);
                data.push_back(p);
            }
        }
        return data;
    };

    const char* names[4] = {"p0", "p1", "p2", "Mprime"};
    for (const auto& s : sets) {
        EmitterParams truth;
        truth.p0 = s.p0;
        truth.p1 = s.p1;
        truth.p2 = s.p2;
        truth.M = 0.89;
        truth.Mprime = s.mp;
        const double tv[4] = {truth.p0, truth.p1, truth.p2, truth.Mprime};

        auto fit = mle_fit_coincidences(forward(truth, 0.0, nullptr), 0.89);
        double worst = 0.0;
        for (int k = 0; k < 4; ++k)
            worst = std::max(worst, std::abs(fit.values.at(names[k]) - tv[k]));
        c.gate(worst <= 1e-6, std::string(s.name) + ": noiseless recovery above 1e-6");

        Rng rng(9009);
        int covered = 0, total = 0;
        const int seeds = 100;
        for (int seed = 0; seed < seeds; ++seed) {
            auto noisy = mle_fit_coincidences(forward(truth, 0.02, &rng), 0.89);
            for (int k = 0; k < 4; ++k) {
                ++total;
                if (std::abs(noisy.values.at(names[k]) - tv[k]) <=
                    3.0 * noisy.stderrs.at(names[k]))
                    ++covered;
            }
        }
        const double coverage = static_cast<double>(covered) / total;
        c.gate(coverage >= 0.95, std::string(s.name) + ": 3-sigma coverage below 95%");
        c.detail << "[" << s.name << ": noiseless max dev = " << worst
                 << ", coverage = " << 100.0 * coverage << "%] ";
    }

    // Crossover between C(+-tau) and the baseline: present at nbar = 0.25,
    // absent at nbar = 0.0062.
    auto crossover = [](const Set& s) {
        EmitterParams p;
        p.p0 = s.p0;
        p.p1 = s.p1;
        p.p2 = s.p2;
        p.M = 0.89;
        p.Mprime = s.mp;
        bool above = false, below = false;
        for (double phi = 0.0; phi <= pi + 1e-9; phi += pi / 96.0) {
            const double r = coincidence_model(phi, DegeneracyClass::side_plus, p);
            (r > 1.0 ? above : below) = true;
        }
        return above && below;
    };
    c.gate(crossover(sets[1]), "crossover missing at nbar = 0.25");
    c.gate(!crossover(sets[0]), "spurious crossover at nbar = 0.0062");
    c.detail << "[crossover: mid=yes, weak=no]";
    return c;
}

// --- criterion 10 --------------------------------------------------------

Criterion hom_baseline_visibility() {
    Criterion c{10, "two-channel visibility of analytic fringes"};
    double worst = 0.0;
    for (const auto& [m, p0] : std::vector<std::pair<double, double>>{
             {1.0, 1.0}, {0.89, 1.0}, {0.89, 0.7}, {1.0, 0.454}}) {
        const double v_true = std::sqrt(m) * p0;
        std::vector<double> counts_c, counts_d;
        for (int i = 0; i <= 48; ++i) {
            const double phi = 2.0 * pi * i / 48.0;
            const double drift = 1.0 + 0.4 * std::sin(0.71 * i);
            counts_c.push_back(drift * (1.0 - v_true * std::cos(phi)));
            counts_d.push_back(drift * (1.0 + v_true * std::cos(phi)));
        }
        worst = std::max(worst,
                         std::abs(visibility_from_counts(counts_c, counts_d) - v_true));
    }
    c.gate(worst <= 1e-12, "recovered visibility off by more than 1e-12");

    const double device = std::sqrt(0.89) * 1.0;
    c.gate(std::abs(device - 0.946) / 0.946 <= 0.005,
           "sqrt(M) at the plateau further than 0.5% from 0.946");
    c.detail << "max |V - sqrt(M) p0| = " << worst << "; sqrt(0.89) = " << device
             << " vs plateau 0.946 (0.27% gap, M quoted to two digits)";
    return c;
}

}  // namespace

int main() {
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<Criterion> results;
    results.push_back(oracle_equivalence());
    results.push_back(filtered_super_bunching());
    results.push_back(saturation_law());
    results.push_back(visibility_refit());
    results.push_back(spectrum_checks());
    results.push_back(output_state_audit());
    results.push_back(loss_invariance());
    results.push_back(monte_carlo_consistency());
    results.push_back(mle_round_trip());
    results.push_back(hom_baseline_visibility());

    int failures = 0;
    for (const auto& c : results) {
        std::printf("%s criterion %2d: %s — %s\n", c.pass ? "PASS" : "FAIL", c.id,
                    c.name.c_str(), c.detail.str().c_str());
        if (!c.pass) ++failures;
    }
    std::printf("%d/%zu criteria passed in %.1f s\n", static_cast<int>(results.size()) - failures,
                results.size(), seconds_since(t0));
    return failures == 0 ? 0 : 1;
}

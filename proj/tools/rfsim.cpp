#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "rfsim/config.hpp"
#include "rfsim/correlations.hpp"
#include "rfsim/estimate.hpp"
#include "rfsim/simulate.hpp"
#include "rfsim/trace.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace rfsim;
using std::numbers::pi;

namespace {

constexpr int k_exit_ok = 0;
constexpr int k_exit_config = 2;
constexpr int k_exit_numeric = 3;
constexpr int k_exit_io = 4;

struct Context {
    RunConfig cfg;
    fs::path out_root;
    std::string config_hash;
    std::vector<std::string> artifacts;  // paths relative to out_root

    fs::path command_dir(const std::string& command) const { return out_root / command; }

    void note(const fs::path& path) {
        artifacts.push_back(fs::relative(path, out_root).generic_string());
    }
};

void log_line(const Context& ctx, const std::string& text) {
    std::ofstream log(ctx.out_root / "run.log", std::ios::app);
    const auto now = std::chrono::system_clock::now();
    const auto t = std::chrono::system_clock::to_time_t(now);
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%F %T", std::gmtime(&t));
    log << stamp << " " << text << "\n";
}

void print_warnings(const std::vector<std::string>& warnings) {
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
}

// The manifest carries no timestamps so reruns stay byte-identical.
void update_manifest(const Context& ctx, const std::string& command) {
    const fs::path path = ctx.out_root / "manifest.json";
    json manifest;
    manifest["schema_version"] = "rfsim.manifest.v1";
    manifest["artifacts"] = json::array();
    if (fs::exists(path)) {
        std::ifstream is(path);
        json old;
        try {
            is >> old;
            for (const auto& a : old.value("artifacts", json::array()))
                if (a.value("command", "") != command) manifest["artifacts"].push_back(a);
        } catch (...) {
            // Unreadable manifests are rebuilt from scratch.
        }
    }
    std::vector<std::string> sorted = ctx.artifacts;
    std::sort(sorted.begin(), sorted.end());
    for (const auto& rel : sorted)
        manifest["artifacts"].push_back(
            {{"path", rel}, {"command", command}, {"config_hash", ctx.config_hash}});
    std::sort(manifest["artifacts"].begin(), manifest["artifacts"].end(),
              [](const json& a, const json& b) {
                  return a.at("path").get<std::string>() < b.at("path").get<std::string>();
              });
    std::ofstream os(path);
    if (!os) throw io_error("cannot write manifest at " + path.string());
    os << manifest.dump(2) << "\n";
}

std::ofstream open_artifact(Context& ctx, const fs::path& path) {
    fs::create_directories(path.parent_path());
    std::ofstream os(path);
    if (!os) throw io_error("cannot open '" + path.string() + "' for writing");
    os.precision(17);
    ctx.note(path);
    return os;
}

void write_spectrum_csv(Context& ctx, const fs::path& path, const SpectrumTrace& s) {
    auto os = open_artifact(ctx, path);
    os << "# schema=rfsim.spectrum.v1\n";
    os << "frequency_offset_hz,density";
    for (const auto& c : s.components) os << "," << c.name;
    os << "\n";
    for (std::size_t i = 0; i < s.frequency_hz.size(); ++i) {
        os << s.frequency_hz[i] << "," << s.density[i];
        for (const auto& comp : s.component_density) os << "," << comp[i];
        os << "\n";
    }
}

void write_json_artifact(Context& ctx, const fs::path& path, const json& j) {
    auto os = open_artifact(ctx, path);
    os << j.dump(2) << "\n";
}

int cmd_spectrum(Context& ctx) {
    const auto& e = ctx.cfg.emitter;
    const auto& g = ctx.cfg.spectrum;
    const auto dir = ctx.command_dir("spectrum");

    auto unfiltered = spectrum_analytic(e, g.f_min, g.f_max, g.points);
    auto convolved = spectrum_analytic(e, g.f_min, g.f_max, g.points, g.instrument_fwhm);
    auto port_c = filtered_spectrum(unfiltered, ctx.cfg.amzi, ctx.cfg.amzi.port_c);
    auto port_d = filtered_spectrum(unfiltered, ctx.cfg.amzi, ctx.cfg.amzi.port_d);

    write_spectrum_csv(ctx, dir / "unfiltered.csv", unfiltered);
    write_spectrum_csv(ctx, dir / "fpi_convolved.csv", convolved);
    write_spectrum_csv(ctx, dir / "amzi_filtered_c.csv", port_c);
    write_spectrum_csv(ctx, dir / "amzi_filtered_d.csv", port_d);

    json summary;
    summary["schema_version"] = "rfsim.spectrum_summary.v1";
    summary["components"] = json::array();
    for (const auto& c : unfiltered.components)
        summary["components"].push_back(
            {{"name", c.name}, {"weight", c.weight}, {"fwhm_hz", c.fwhm_hz}});
    summary["laser_like_weight"] = e.p0;
    summary["broadband_fwhm_hz"] = 1.0 / (pi * e.T2);
    summary["fringe_period_hz"] = 1.0 / ctx.cfg.amzi.tau;
    summary["amzi_phi"] = ctx.cfg.amzi.phi;
    const std::size_t mid = g.points / 2;
    summary["carrier_density_port_d"] = port_d.density[mid];
    summary["instrument_fwhm_hz"] = g.instrument_fwhm;
    write_json_artifact(ctx, dir / "summary.json", summary);
    return k_exit_ok;
}

int cmd_curves(Context& ctx) {
    if (ctx.cfg.sweep.nbar_grid.empty() || ctx.cfg.sweep.phi_grid.empty())
        throw config_error("curves needs sweep.nbar_grid and sweep.phi_grid");
    const auto dir = ctx.command_dir("curves");
    const auto& e = ctx.cfg.emitter;

    {
        auto os = open_artifact(ctx, dir / "visibility_vs_nbar.csv");
        os << "# schema=rfsim.curve.v1\n";
        os << "nbar,p1,visibility\n";
        for (double nbar : ctx.cfg.sweep.nbar_grid) {
            EmitterParams p = e;
            p.nbar = nbar;
            p.p1 = saturation_p1(nbar, e.eta_ab);
            p.p0 = 1.0 - p.p1;
            p.p2 = 0.0;
            os << nbar << "," << p.p1 << "," << fringe_visibility(p) << "\n";
        }
    }
    {
        auto os = open_artifact(ctx, dir / "filtered_g2_vs_nbar.csv");
        os << "# schema=rfsim.curve.v1\n";
        os << "nbar,p1,g2_zero,g2_side,side_over_zero\n";
        for (double nbar : ctx.cfg.sweep.nbar_grid) {
            const double p1 = saturation_p1(nbar, e.eta_ab);
            if (p1 <= 1e-12) continue;  // ideal-limit divergence
            const double zero = g2_filtered(DegeneracyClass::zero, p1);
            const double side = g2_filtered(DegeneracyClass::side_plus, p1);
            os << nbar << "," << p1 << "," << zero << "," << side << ","
               << side / zero << "\n";
        }
    }

    json summary;
    summary["schema_version"] = "rfsim.curves_summary.v1";
    summary["parameter_sets"] = json::array();
    auto sets = ctx.cfg.sweep.parameter_sets;
    if (sets.empty()) {
        ParameterSet self{"configured", e.p0, e.p1, e.p2, e.Mprime};
        sets.push_back(self);
    }
    for (const auto& set : sets) {
        auto params = set.to_params(e);
        auto os = open_artifact(ctx, dir / ("hom_vs_phi_" + set.label + ".csv"));
        os << "# schema=rfsim.hom_curve.v1\n";
        os << "phi,baseline,side,zero,side_over_baseline,zero_over_baseline\n";
        bool side_above = false, side_below = false;
        for (double phi : ctx.cfg.sweep.phi_grid) {
            auto c = hom_coincidences(phi, params);
            os << phi << "," << c.baseline << "," << c.side << "," << c.zero << ","
               << c.side / c.baseline << "," << c.zero / c.baseline << "\n";
            (c.side > c.baseline ? side_above : side_below) = true;
        }
        summary["parameter_sets"].push_back({{"label", set.label},
                                             {"p0", params.p0},
                                             {"p1", params.p1},
                                             {"p2", params.p2},
                                             {"Mprime", params.Mprime},
                                             {"side_baseline_crossover",
                                              side_above && side_below}});
    }
    write_json_artifact(ctx, dir / "summary.json", summary);
    return k_exit_ok;
}

int cmd_simulate(Context& ctx) {
    if (!ctx.cfg.sim) throw config_error("simulate needs the config's sim section");
    const auto dir = ctx.command_dir("simulate");
    SimConfig sim = *ctx.cfg.sim;
    print_warnings(sim.warnings());

    SimStats stats;
    std::vector<ClickRecord> clicks = simulate_clicks(sim, &stats);

    fs::create_directories(dir);
    write_clicks_binary((dir / "clicks.bin").string(), clicks);
    ctx.note(dir / "clicks.bin");
    if (ctx.cfg.format == "csv") {
        write_clicks_csv((dir / "clicks.csv").string(), clicks);
        ctx.note(dir / "clicks.csv");
    }

    json summary;
    summary["schema_version"] = "rfsim.sim_summary.v1";
    summary["slots"] = stats.slots;
    summary["photons_c"] = stats.photons_c;
    summary["photons_d"] = stats.photons_d;
    summary["clamped_records"] = stats.clamped_records;
    summary["seed"] = sim.seed;

    if (clicks.empty()) {
        std::cerr << "warning: empty click stream; histograms skipped\n";
        summary["warning"] = "empty click stream; histograms skipped";
        write_json_artifact(ctx, dir / "summary.json", summary);
        update_manifest(ctx, "simulate");
        return k_exit_ok;
    }

    const std::uint64_t max_lag = std::min<std::uint64_t>(
        16 * sim.delay_slots(), stats.slots > 1 ? stats.slots - 1 : 1);
    auto auto_d = histogram(clicks, Pairing::auto_port_d, max_lag, sim.delay_slots(),
                            sim.slot_width, stats.slots);
    auto cross = histogram(clicks, Pairing::cross_c_d, max_lag, sim.delay_slots(),
                           sim.slot_width, stats.slots);
    write_trace_csv((dir / "histogram_auto_d.csv").string(), auto_d);
    ctx.note(dir / "histogram_auto_d.csv");
    write_trace_csv((dir / "histogram_cross_cd.csv").string(), cross);
    ctx.note(dir / "histogram_cross_cd.csv");
    auto g2_auto = g2_from_trace(auto_d);
    auto g2_cross = g2_from_trace(cross);
    write_trace_csv((dir / "g2_auto_d.csv").string(), g2_auto);
    ctx.note(dir / "g2_auto_d.csv");
    write_trace_csv((dir / "g2_cross_cd.csv").string(), g2_cross);
    ctx.note(dir / "g2_cross_cd.csv");
    if (ctx.cfg.format == "json") {
        auto os = open_artifact(ctx, dir / "g2_auto_d.json");
        os << trace_json(g2_auto) << "\n";
    }

    // Phase sweep: per-phi cross histograms condensed into the
    // coincidence table the fit command consumes.
    if (!ctx.cfg.sweep.phi_grid.empty()) {
        std::vector<CoincidencePoint> points;
        const auto k = static_cast<std::int64_t>(sim.delay_slots());
        std::size_t index = 0;
        for (double phi : ctx.cfg.sweep.phi_grid) {
            SimConfig run = sim;
            run.amzi.phi = phi;
            run.seed = sim.seed + 1000003 * index++;
            SimStats run_stats;
            auto run_clicks = simulate_clicks(run, &run_stats);
            if (run_clicks.empty()) continue;
            auto trace = histogram(run_clicks, Pairing::cross_c_d, max_lag,
                                   run.delay_slots(), run.slot_width, run_stats.slots);
            auto normalized = g2_from_trace(trace);
            CoincidencePoint zero;
            zero.phi = phi;
            zero.clazz = DegeneracyClass::zero;
            zero.value = normalized.value_at_lag(0);
            zero.error = normalized.error_at_lag(0);
            points.push_back(zero);
            CoincidencePoint side;
            side.phi = phi;
            side.clazz = DegeneracyClass::side_plus;
            side.value = 0.5 * (normalized.value_at_lag(k) + normalized.value_at_lag(-k));
            side.error = 0.5 * std::hypot(normalized.error_at_lag(k),
                                          normalized.error_at_lag(-k));
            points.push_back(side);
        }
        if (!points.empty()) {
            write_coincidence_csv((dir / "coincidences.csv").string(), points);
            ctx.note(dir / "coincidences.csv");
        }
    }

    write_json_artifact(ctx, dir / "summary.json", summary);
    update_manifest(ctx, "simulate");
    return k_exit_ok;
}

int cmd_fit(Context& ctx, const std::string& input, const std::string& kind_flag) {
    const auto dir = ctx.command_dir("fit");

    std::string kind = kind_flag;
    if (kind == "auto") {
        std::ifstream is(input);
        if (!is) throw io_error("cannot open '" + input + "'");
        std::string line;
        while (std::getline(is, line) && !line.empty() && line[0] == '#') {}
        if (line.rfind("phi_radians,", 0) == 0) kind = "coincidences";
        else if (line.rfind("nbar,", 0) == 0) kind = "visibility";
        else throw io_error("cannot infer fit kind from header '" + line + "'");
    }

    FitResult fit;
    json curve = json::array();
    if (kind == "coincidences") {
        auto data = read_coincidence_csv(input);
        fit = mle_fit_coincidences(data, ctx.cfg.emitter.M);
        EmitterParams fitted = ctx.cfg.emitter;
        fitted.p0 = fit.values.at("p0");
        fitted.p1 = fit.values.at("p1");
        fitted.p2 = fit.values.at("p2");
        fitted.Mprime = fit.values.at("Mprime");
        auto os = open_artifact(ctx, dir / "model_curve.csv");
        os << "# schema=rfsim.hom_curve.v1\n";
        os << "phi,baseline,side,zero,side_over_baseline,zero_over_baseline\n";
        for (int i = 0; i <= 64; ++i) {
            const double phi = 2.0 * pi * i / 64.0;
            auto c = hom_coincidences(phi, fitted);
            os << phi << "," << c.baseline << "," << c.side << "," << c.zero << ","
               << c.side / c.baseline << "," << c.zero / c.baseline << "\n";
        }
    } else if (kind == "visibility") {
        auto data = read_visibility_csv(input);
        fit = fit_visibility_curve(data, VisibilityModel::saturation);
        auto os = open_artifact(ctx, dir / "model_curve.csv");
        os << "# schema=rfsim.curve.v1\n";
        os << "nbar,visibility\n";
        for (const auto& p : data)
            os << p.nbar << ","
               << fit.values.at("V0") / (1.0 + fit.values.at("x") * p.nbar) << "\n";
    } else {
        throw config_error("fit kind must be coincidences, visibility or auto");
    }

    auto os = open_artifact(ctx, dir / "fit_result.json");
    os << fit_result_json(fit) << "\n";
    update_manifest(ctx, "fit");
    std::cout << fit_result_json(fit) << "\n";
    return fit.converged ? k_exit_ok : k_exit_numeric;
}

int cmd_oracle_check(Context& ctx, int trials) {
    const auto dir = ctx.command_dir("oracle-check");
    std::mt19937_64 gen(ctx.cfg.sim ? ctx.cfg.sim->seed : 12345);
    auto uniform = [&gen]() { return static_cast<double>(gen() >> 11) * 0x1.0p-53; };

    struct Check {
        std::string name;
        double max_dev = 0.0;
        double tolerance = 0.0;
        bool pass() const { return max_dev <= tolerance; }
    };
    std::vector<Check> checks;

    {
        Check c{"hom_coincidences_vs_oracle", 0.0, 1e-10};
        for (int i = 0; i < trials; ++i) {
            double a = -std::log(std::max(uniform(), 1e-300));
            double b = -std::log(std::max(uniform(), 1e-300));
            double d = -std::log(std::max(uniform(), 1e-300));
            const double s = a + b + d;
            EmitterParams p;
            p.p0 = a / s;
            p.p1 = b / s;
            p.p2 = d / s;
            p.M = p.Mprime = 1.0;
            const double phi = 2.0 * pi * uniform();
            auto closed = hom_coincidences(phi, p);
            c.max_dev = std::max(
                c.max_dev,
                std::abs(closed.zero - oracle_coincidences(phi, p, DegeneracyClass::zero)));
            c.max_dev = std::max(
                c.max_dev, std::abs(closed.side -
                                    oracle_coincidences(phi, p, DegeneracyClass::side_plus)));
            EmitterParams two_level = p;
            two_level.p0 = p.p0 / (p.p0 + p.p1);
            two_level.p1 = p.p1 / (p.p0 + p.p1);
            two_level.p2 = 0.0;
            c.max_dev = std::max(
                c.max_dev,
                std::abs(hom_coincidences(phi, two_level).baseline -
                         oracle_coincidences(phi, two_level, DegeneracyClass::nondegenerate)));
        }
        checks.push_back(c);
    }
    {
        Check c{"amzi_output_state_vs_pipeline", 0.0, 1e-12};
        for (double p1 = 0.1; p1 < 0.95; p1 += 0.1) {
            for (int k = 0; k <= 8; ++k) {
                EmitterParams p;
                p.p1 = p1;
                p.p0 = 1.0 - p1;
                AmziConfig amzi = ctx.cfg.amzi;
                amzi.phi = k * pi / 4.0;
                auto closed = amzi_output_state(p, amzi);
                auto pipeline = amzi_output_state_pipeline(p, amzi);
                for (std::size_t i = 0; i < closed.spec().dimension(); ++i)
                    c.max_dev = std::max(c.max_dev,
                                         std::abs(closed.amplitudes()[i] -
                                                  pipeline.amplitudes()[i]));
            }
        }
        checks.push_back(c);
    }
    {
        Check c{"loss_invariance_g1_g2", 0.0, 1e-10};
        fock::ModeSpec spec({fock::Mode::photon("a"), fock::Mode::photon("b")});
        const std::vector<std::string> la{"a"}, lb{"b"}, laa{"a", "a"};
        for (int i = 0; i < 25; ++i) {
            std::vector<fock::cplx> amp(spec.dimension());
            double norm = 0.0;
            for (auto& v : amp) {
                v = fock::cplx(uniform() - 0.5, uniform() - 0.5);
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
                c.max_dev = std::max(c.max_dev, std::abs(g2l - g2));
                c.max_dev = std::max(c.max_dev, std::abs(g1l - g1));
            }
        }
        checks.push_back(c);
    }
    {
        Check c{"filtered_g2_vs_entangled_oracle", 0.0, 1e-10};
        for (double p1 : {0.05, 0.2, 0.546, 0.8}) {
            for (auto clazz : {DegeneracyClass::zero, DegeneracyClass::side_plus,
                               DegeneracyClass::nondegenerate}) {
                c.max_dev = std::max(c.max_dev, std::abs(oracle_filtered_g2(clazz, p1) -
                                                         g2_filtered(clazz, p1)));
            }
        }
        checks.push_back(c);
    }

    json summary;
    summary["schema_version"] = "rfsim.oracle_check.v1";
    summary["trials"] = trials;
    summary["checks"] = json::array();
    bool all_pass = true;
    for (const auto& c : checks) {
        std::cout << (c.pass() ? "ok   " : "FAIL ") << c.name << "  max_dev=" << c.max_dev
                  << "  tol=" << c.tolerance << "\n";
        summary["checks"].push_back(
            {{"name", c.name}, {"max_dev", c.max_dev}, {"tolerance", c.tolerance},
             {"pass", c.pass()}});
        all_pass = all_pass && c.pass();
    }
    write_json_artifact(ctx, dir / "summary.json", summary);
    update_manifest(ctx, "oracle-check");
    return all_pass ? k_exit_ok : k_exit_numeric;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"resonance-fluorescence coherence model: spectra, correlations, "
                 "Monte Carlo and parameter fits"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::string format;
    std::uint64_t seed = 0;
    bool seed_set = false;
    app.add_option("--config", config_path, "JSON run configuration");
    app.add_option("--out", out_dir, "output directory (overrides config)");
    app.add_option("--format", format, "csv or json (overrides config)")
        ->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--seed", seed, "RNG seed (overrides config)")
        ->each([&seed_set](const std::string&) { seed_set = true; });

    auto* spectrum = app.add_subcommand("spectrum", "unfiltered, FPI and AMZI spectra");
    auto* curves = app.add_subcommand("curves", "visibility, filtered-g2 and HOM curves");
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo click streams");
    auto* fit = app.add_subcommand("fit", "maximum-likelihood / least-squares fits");
    auto* oracle = app.add_subcommand("oracle-check",
                                      "closed forms against the fock-engine oracle");

    std::string fit_input;
    std::string fit_kind = "auto";
    fit->add_option("--input", fit_input, "trace CSV to fit")->required();
    fit->add_option("--kind", fit_kind, "coincidences | visibility | auto")
        ->check(CLI::IsMember({"coincidences", "visibility", "auto"}));

    int oracle_trials = 200;
    oracle->add_option("--trials", oracle_trials, "random parameter draws");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : k_exit_config;
    }

    try {
        Context ctx;
        ctx.cfg = config_path.empty() ? RunConfig{} : load_run_config(config_path);
        if (!out_dir.empty()) ctx.cfg.out_dir = out_dir;
        if (!format.empty()) ctx.cfg.format = format;
        if (seed_set && ctx.cfg.sim) ctx.cfg.sim->seed = seed;
        ctx.cfg.validate();
        ctx.out_root = ctx.cfg.out_dir;
        fs::create_directories(ctx.out_root);
        ctx.config_hash = std::to_string(fnv1a64(run_config_canonical_json(ctx.cfg)));
        print_warnings(ctx.cfg.emitter.warnings());
        print_warnings(ctx.cfg.amzi.warnings(ctx.cfg.emitter));

        int rc = k_exit_ok;
        if (*spectrum) {
            log_line(ctx, "spectrum start");
            rc = cmd_spectrum(ctx);
            update_manifest(ctx, "spectrum");
            log_line(ctx, "spectrum done");
        } else if (*curves) {
            log_line(ctx, "curves start");
            rc = cmd_curves(ctx);
            update_manifest(ctx, "curves");
            log_line(ctx, "curves done");
        } else if (*simulate) {
            log_line(ctx, "simulate start");
            rc = cmd_simulate(ctx);
            log_line(ctx, "simulate done");
        } else if (*fit) {
            log_line(ctx, "fit start");
            rc = cmd_fit(ctx, fit_input, fit_kind);
            log_line(ctx, "fit done");
        } else if (*oracle) {
            log_line(ctx, "oracle-check start");
            rc = cmd_oracle_check(ctx, oracle_trials);
            log_line(ctx, "oracle-check done");
        }
        return rc;
    } catch (const config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return k_exit_config;
    } catch (const numeric_error& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return k_exit_numeric;
    } catch (const io_error& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return k_exit_io;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return k_exit_numeric;
    }
}

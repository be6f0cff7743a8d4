#include "rfsim/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace rfsim {

using nlohmann::json;

EmitterParams ParameterSet::to_params(const EmitterParams& base) const {
    const double sum = p0 + p1 + p2;
    if (!(sum > 0.0)) throw config_error("parameter set '" + label + "' has zero weight");
    EmitterParams out = base;
    out.p0 = p0 / sum;
    out.p1 = p1 / sum;
    out.p2 = p2 / sum;
    out.Mprime = mprime;
    out.validate();
    return out;
}

void RunConfig::validate() const {
    emitter.validate();
    amzi.validate();
    if (sim) sim->validate();
    if (!(spectrum.f_max > spectrum.f_min) || spectrum.points < 2)
        throw config_error("spectrum grid is empty or inverted");
    if (format != "csv" && format != "json")
        throw config_error("format must be 'csv' or 'json'");
    for (double nbar : sweep.nbar_grid)
        if (nbar < 0.0) throw config_error("sweep nbar values must be nonnegative");
}

namespace {

double get_or(const json& j, const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number()) throw config_error(std::string(key) + " must be a number");
    return j.at(key).get<double>();
}

EmitterParams emitter_from_json(const json& j) {
    EmitterParams base;  // defaults carry the reference device constants
    EmitterParams p;
    p.T1 = get_or(j, "T1", base.T1);
    p.T2 = get_or(j, "T2", base.T2);
    p.TL = get_or(j, "TL", base.TL);
    p.nu = get_or(j, "nu", base.nu);
    p.M = get_or(j, "M", base.M);
    p.Mprime = get_or(j, "Mprime", base.Mprime);
    p.eta_ab = get_or(j, "eta_ab", base.eta_ab);
    p.nbar = get_or(j, "nbar", 0.0);
    p.no_pure_dephasing = j.value("no_pure_dephasing", false);
    p.p2 = get_or(j, "p2", 0.0);
    if (j.contains("p1")) {
        p.p1 = j.at("p1").get<double>();
        p.p0 = get_or(j, "p0", 1.0 - p.p1 - p.p2);
    } else {
        // Populations follow the saturation law when not given explicitly.
        p.p1 = saturation_p1(p.nbar, p.eta_ab) * (1.0 - p.p2);
        p.p0 = 1.0 - p.p1 - p.p2;
    }
    p.validate();
    return p;
}

json emitter_to_json(const EmitterParams& p) {
    json j;
    j["p0"] = p.p0;
    j["p1"] = p.p1;
    j["p2"] = p.p2;
    j["nbar"] = p.nbar;
    j["eta_ab"] = p.eta_ab;
    j["T1"] = p.T1;
    j["T2"] = p.T2;
    j["TL"] = p.TL;
    j["nu"] = p.nu;
    j["M"] = p.M;
    j["Mprime"] = p.Mprime;
    j["no_pure_dephasing"] = p.no_pure_dephasing;
    return j;
}

AmziConfig amzi_from_json(const json& j) {
    AmziConfig a;
    a.tau = get_or(j, "tau", a.tau);
    a.phi = get_or(j, "phi", a.phi);
    const std::string conv = j.value("entrance_convention", "drop");
    if (conv == "drop") a.entrance = EntranceConvention::drop;
    else if (conv == "keep_3db") a.entrance = EntranceConvention::keep_3db;
    else throw config_error("entrance_convention must be 'drop' or 'keep_3db'");
    a.validate();
    return a;
}

json amzi_to_json(const AmziConfig& a) {
    json j;
    j["tau"] = a.tau;
    j["phi"] = a.phi;
    j["entrance_convention"] =
        a.entrance == EntranceConvention::drop ? "drop" : "keep_3db";
    return j;
}

}  // namespace

RunConfig parse_run_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw config_error(std::string("config is not valid JSON: ") + e.what());
    }
    RunConfig cfg;
    try {
        if (j.contains("emitter")) cfg.emitter = emitter_from_json(j.at("emitter"));
        if (j.contains("amzi")) cfg.amzi = amzi_from_json(j.at("amzi"));
        if (j.contains("spectrum")) {
            const auto& s = j.at("spectrum");
            cfg.spectrum.f_min = get_or(s, "f_min", cfg.spectrum.f_min);
            cfg.spectrum.f_max = get_or(s, "f_max", cfg.spectrum.f_max);
            cfg.spectrum.points =
                s.value("points", static_cast<std::uint64_t>(cfg.spectrum.points));
            cfg.spectrum.instrument_fwhm =
                get_or(s, "instrument_fwhm", cfg.spectrum.instrument_fwhm);
        }
        if (j.contains("sweep")) {
            const auto& s = j.at("sweep");
            if (s.contains("nbar_grid"))
                cfg.sweep.nbar_grid = s.at("nbar_grid").get<std::vector<double>>();
            if (s.contains("phi_grid"))
                cfg.sweep.phi_grid = s.at("phi_grid").get<std::vector<double>>();
            if (s.contains("parameter_sets")) {
                for (const auto& e : s.at("parameter_sets")) {
                    ParameterSet ps;
                    ps.label = e.value("label", "set" +
                                       std::to_string(cfg.sweep.parameter_sets.size()));
                    ps.p0 = e.at("p0").get<double>();
                    ps.p1 = e.at("p1").get<double>();
                    ps.p2 = get_or(e, "p2", 0.0);
                    ps.mprime = get_or(e, "Mprime", 1.0);
                    cfg.sweep.parameter_sets.push_back(ps);
                }
            }
        }
        if (j.contains("sim")) {
            const auto& s = j.at("sim");
            SimConfig sim;
            sim.params = cfg.emitter;
            sim.amzi = cfg.amzi;
            sim.slot_width = s.at("slot_width").get<double>();
            sim.duration = s.at("duration").get<double>();
            sim.seed = s.value("seed", std::uint64_t{1});
            sim.detector_efficiency = get_or(s, "detector_efficiency", 1.0);
            sim.dark_rate = get_or(s, "dark_rate", 0.0);
            sim.phi_drift_rate = get_or(s, "phi_drift_rate", 0.0);
            sim.validate();
            cfg.sim = sim;
        }
        if (j.contains("output")) {
            const auto& o = j.at("output");
            cfg.out_dir = o.value("dir", cfg.out_dir);
            cfg.format = o.value("format", cfg.format);
        }
    } catch (const json::exception& e) {
        throw config_error(std::string("bad config field: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw io_error("cannot open config '" + path + "'");
    std::stringstream buf;
    buf << is.rdbuf();
    return parse_run_config(buf.str());
}

std::string run_config_canonical_json(const RunConfig& cfg) {
    json j;
    j["schema_version"] = "rfsim.config.v1";
    j["emitter"] = emitter_to_json(cfg.emitter);
    j["amzi"] = amzi_to_json(cfg.amzi);
    j["spectrum"] = {{"f_min", cfg.spectrum.f_min},
                     {"f_max", cfg.spectrum.f_max},
                     {"points", cfg.spectrum.points},
                     {"instrument_fwhm", cfg.spectrum.instrument_fwhm}};
    json sweep;
    sweep["nbar_grid"] = cfg.sweep.nbar_grid;
    sweep["phi_grid"] = cfg.sweep.phi_grid;
    sweep["parameter_sets"] = json::array();
    for (const auto& ps : cfg.sweep.parameter_sets)
        sweep["parameter_sets"].push_back({{"label", ps.label},
                                           {"p0", ps.p0},
                                           {"p1", ps.p1},
                                           {"p2", ps.p2},
                                           {"Mprime", ps.mprime}});
    j["sweep"] = sweep;
    if (cfg.sim) {
        j["sim"] = {{"slot_width", cfg.sim->slot_width},
                    {"duration", cfg.sim->duration},
                    {"seed", cfg.sim->seed},
                    {"detector_efficiency", cfg.sim->detector_efficiency},
                    {"dark_rate", cfg.sim->dark_rate},
                    {"phi_drift_rate", cfg.sim->phi_drift_rate}};
    }
    // The output section is deliberately left out: the hash identifies the
    // generating parameters, not where the artifacts land.
    return j.dump();
}

std::string emitter_params_json(const EmitterParams& params) {
    return emitter_to_json(params).dump(2);
}

EmitterParams emitter_params_from_json(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw config_error(std::string("emitter document is not valid JSON: ") + e.what());
    }
    return emitter_from_json(j);
}

std::uint64_t fnv1a64(std::string_view text) {
    std::uint64_t hash = 0xcbf29ce484222325ull;
    for (unsigned char c : text) {
        hash ^= c;
        hash *= 0x100000001b3ull;
    }
    return hash;
}

}  // namespace rfsim

#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string cli_binary() {
    const char* env = std::getenv("RFSIM_CLI");
    REQUIRE_MESSAGE(env != nullptr, "RFSIM_CLI must point at the rfsim binary");
    return env;
}

std::string default_config() {
    const char* env = std::getenv("RFSIM_DEFAULT_CONFIG");
    REQUIRE_MESSAGE(env != nullptr, "RFSIM_DEFAULT_CONFIG must point at defaults.json");
    return env;
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("rfsim_cli_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    static int& counter() {
        static int c = 0;
        return c;
    }
    std::string str(const std::string& rel) const { return (path / rel).string(); }
};

int run(const std::string& args, const std::string& log = "/dev/null") {
    const std::string cmd = cli_binary() + " " + args + " >" + log + " 2>&1";
    const int rc = std::system(cmd.c_str());
    return (rc >= 0) ? ((rc >> 8) & 0xff) : -1;
}

json read_json(const std::string& path) {
    std::ifstream is(path);
    REQUIRE_MESSAGE(is.good(), path << " missing");
    json j;
    is >> j;
    return j;
}

std::string slurp(const std::string& path) {
    std::ifstream is(path);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

std::string make_mc_config(const TempDir& dir, double duration, int phis) {
    json j;
    j["emitter"] = {{"nbar", 0.62}, {"eta_ab", 0.97}, {"M", 1.0}, {"Mprime", 1.0}};
    j["amzi"] = {{"tau", 4.92e-9}, {"phi", 1.5707963267948966}};
    json grid = json::array();
    for (int i = 0; i < phis; ++i) grid.push_back(3.141592653589793 * i / (phis - 1));
    j["sweep"] = {{"phi_grid", grid}, {"nbar_grid", {0.62}}};
    j["sim"] = {{"slot_width", 7.028571428571428e-10},
                {"duration", duration},
                {"seed", 7}};
    const std::string path = dir.str("mc.json");
    std::ofstream os(path);
    os << j.dump(2);
    return path;
}

}  // namespace

TEST_CASE("spectrum command writes the published quantities") {
    TempDir dir;
    const int rc = run("--config " + default_config() + " --out " + dir.str("out") +
                       " spectrum");
    REQUIRE(rc == 0);
    auto summary = read_json(dir.str("out/spectrum/summary.json"));
    CHECK(summary.at("schema_version") == "rfsim.spectrum_summary.v1");
    const double bb = summary.at("broadband_fwhm_hz").get<double>();
    CHECK(std::abs(bb - 2.3e9) / 2.3e9 < 0.02);
    const double fringe = summary.at("fringe_period_hz").get<double>();
    CHECK(std::abs(fringe - 203.25e6) / 203.25e6 < 1e-3);
    CHECK(summary.at("carrier_density_port_d").get<double>() == 0.0);
    CHECK(fs::exists(dir.str("out/spectrum/unfiltered.csv")));
    CHECK(fs::exists(dir.str("out/spectrum/fpi_convolved.csv")));
    CHECK(fs::exists(dir.str("out/spectrum/amzi_filtered_d.csv")));
    CHECK(fs::exists(dir.str("out/manifest.json")));
}

TEST_CASE("curves command reproduces bunching values and crossover flags") {
    TempDir dir;
    const int rc = run("--config " + default_config() + " --out " + dir.str("out") +
                       " curves");
    REQUIRE(rc == 0);

    // The nbar = 0.62 row carries the expected bunching value 3.35.
    std::ifstream g2csv(dir.str("out/curves/filtered_g2_vs_nbar.csv"));
    std::string line;
    bool found = false;
    while (std::getline(g2csv, line)) {
        if (line.rfind("0.62,", 0) == 0) {
            std::istringstream ls(line);
            std::string cell;
            std::getline(ls, cell, ',');  // nbar
            std::getline(ls, cell, ',');  // p1
            CHECK(std::stod(cell) == doctest::Approx(0.546).epsilon(1e-3));
            std::getline(ls, cell, ',');  // g2_zero
            CHECK(std::stod(cell) == doctest::Approx(3.35).epsilon(3e-3));
            found = true;
        }
    }
    CHECK(found);

    auto summary = read_json(dir.str("out/curves/summary.json"));
    bool mid_crossover = false, weak_crossover = true;
    for (const auto& set : summary.at("parameter_sets")) {
        if (set.at("label") == "nbar_0.25")
            mid_crossover = set.at("side_baseline_crossover").get<bool>();
        if (set.at("label") == "nbar_0.0062")
            weak_crossover = set.at("side_baseline_crossover").get<bool>();
    }
    CHECK(mid_crossover);
    CHECK_FALSE(weak_crossover);

    // phi = pi/2 row of the HOM curve: baseline = p1^2/4.
    std::ifstream hom(dir.str("out/curves/hom_vs_phi_nbar_0.62.csv"));
    bool checked = false;
    while (std::getline(hom, line)) {
        if (line.rfind("1.571,", 0) == 0) {
            std::istringstream ls(line);
            std::string cell;
            std::getline(ls, cell, ',');
            std::getline(ls, cell, ',');
            const double p1 = 0.50 / 0.998;
            CHECK(std::stod(cell) == doctest::Approx(p1 * p1 / 4.0).epsilon(1e-5));
            checked = true;
        }
    }
    CHECK(checked);
}

TEST_CASE("reruns are byte-identical apart from the sidecar log") {
    TempDir dir;
    REQUIRE(run("--config " + default_config() + " --out " + dir.str("a") + " spectrum") == 0);
    REQUIRE(run("--config " + default_config() + " --out " + dir.str("b") + " spectrum") == 0);
    for (const auto* rel : {"spectrum/unfiltered.csv", "spectrum/fpi_convolved.csv",
                            "spectrum/amzi_filtered_c.csv", "spectrum/summary.json",
                            "manifest.json"}) {
        CHECK(slurp(dir.str(std::string("a/") + rel)) ==
              slurp(dir.str(std::string("b/") + rel)));
    }
}

TEST_CASE("simulate then fit recovers the configured excited population") {
    TempDir dir;
    const std::string cfg = make_mc_config(dir, 7.0e-4, 7);
    REQUIRE(run("--config " + cfg + " --out " + dir.str("out") + " simulate") == 0);
    REQUIRE(fs::exists(dir.str("out/simulate/clicks.bin")));
    REQUIRE(fs::exists(dir.str("out/simulate/coincidences.csv")));

    const int rc = run("--config " + cfg + " --out " + dir.str("out") + " fit --input " +
                       dir.str("out/simulate/coincidences.csv"));
    REQUIRE(rc == 0);
    auto fit = read_json(dir.str("out/fit/fit_result.json"));
    const double p1 = fit.at("parameters").at("p1").at("value").get<double>();
    const double sd = fit.at("parameters").at("p1").at("stderr").get<double>();
    const double truth = 0.5460323224986381;
    CHECK(std::abs(p1 - truth) <= 3.0 * sd);
    CHECK(fs::exists(dir.str("out/fit/model_curve.csv")));
}

TEST_CASE("fit reports malformed rows by number with the io exit code") {
    TempDir dir;
    {
        std::ofstream os(dir.str("bad.csv"));
        os << "phi_radians,class,value,error\n";
        os << "0.0,zero,0.1,0.01\n";
        os << "0.3,zero,oops,0.01\n";
    }
    const std::string log = dir.str("fit.log");
    const int rc = run("--config " + default_config() + " --out " + dir.str("out") +
                           " fit --input " + dir.str("bad.csv"),
                       log);
    CHECK(rc == 4);
    const auto text = slurp(log);
    CHECK(text.find("row 3") != std::string::npos);
}

TEST_CASE("fit on visibility data recovers the saturation slope") {
    TempDir dir;
    {
        std::ofstream os(dir.str("vis.csv"));
        os.precision(17);
        os << "nbar,visibility\n";
        for (double nbar = 1e-3; nbar < 20.0; nbar *= 2.0)
            os << nbar << "," << 0.946 / (1.0 + 1.94 * nbar) << "\n";
    }
    REQUIRE(run("--config " + default_config() + " --out " + dir.str("out") +
                " fit --input " + dir.str("vis.csv")) == 0);
    auto fit = read_json(dir.str("out/fit/fit_result.json"));
    CHECK(fit.at("model") == "visibility_saturation");
    CHECK(fit.at("parameters").at("x").at("value").get<double>() ==
          doctest::Approx(1.94).epsilon(1e-6));
    CHECK(fit.at("parameters").at("V0").at("value").get<double>() ==
          doctest::Approx(0.946).epsilon(1e-6));
}

TEST_CASE("simulate with no drive warns and skips histograms") {
    TempDir dir;
    json j;
    j["emitter"] = {{"p1", 0.0}, {"p0", 1.0}};
    j["amzi"] = {{"tau", 4.92e-9}, {"phi", 3.141592653589793}};
    j["sim"] = {{"slot_width", 7.028571428571428e-10}, {"duration", 1e-5}, {"seed", 3}};
    std::ofstream(dir.str("cfg.json")) << j.dump();
    const std::string log = dir.str("sim.log");
    const int rc = run("--config " + dir.str("cfg.json") + " --out " + dir.str("out") +
                           " simulate",
                       log);
    CHECK(rc == 0);
    CHECK(slurp(log).find("empty click stream") != std::string::npos);
    CHECK_FALSE(fs::exists(dir.str("out/simulate/histogram_auto_d.csv")));
    auto summary = read_json(dir.str("out/simulate/summary.json"));
    CHECK(summary.contains("warning"));
}

TEST_CASE("exit codes: config errors and oracle checks") {
    TempDir dir;
    std::ofstream(dir.str("broken.json")) << "{ not json";
    CHECK(run("--config " + dir.str("broken.json") + " --out " + dir.str("out") +
              " spectrum") == 2);
    CHECK(run("--config " + default_config() + " --out " + dir.str("out") +
              " curves --bogus-flag") == 2);
    CHECK(run("--config " + default_config() + " --out " + dir.str("out") +
              " oracle-check --trials 50") == 0);
    auto summary = read_json(dir.str("out/oracle-check/summary.json"));
    for (const auto& c : summary.at("checks")) CHECK(c.at("pass").get<bool>());
}

TEST_CASE("seed flag changes the simulated stream") {
    TempDir dir;
    json j;
    j["emitter"] = {{"nbar", 0.62}, {"eta_ab", 0.97}, {"M", 1.0}, {"Mprime", 1.0}};
    j["amzi"] = {{"tau", 4.92e-9}, {"phi", 0.5}};
    j["sim"] = {{"slot_width", 7.028571428571428e-10}, {"duration", 2e-5}, {"seed", 1}};
    std::ofstream(dir.str("cfg.json")) << j.dump();
    REQUIRE(run("--config " + dir.str("cfg.json") + " --out " + dir.str("a") +
                " simulate") == 0);
    REQUIRE(run("--config " + dir.str("cfg.json") + " --out " + dir.str("b") +
                " --seed 2 simulate") == 0);
    CHECK(slurp(dir.str("a/simulate/clicks.bin")) != slurp(dir.str("b/simulate/clicks.bin")));
}

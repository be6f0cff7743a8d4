#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rfsim/emitter.hpp"
#include "rfsim/interferometry.hpp"
#include "rfsim/simulate.hpp"

// One self-describing JSON document drives every CLI command; flags
// override fields.
namespace rfsim {

struct ParameterSet {
    std::string label;
    double p0 = 0.0, p1 = 0.0, p2 = 0.0;
    double mprime = 1.0;

    // Quoted fit triples are rounded and rarely sum to 1 exactly; pull
    // them back onto the simplex before building model parameters.
    EmitterParams to_params(const EmitterParams& base) const;
};

struct SweepConfig {
    std::vector<double> nbar_grid;
    std::vector<double> phi_grid;
    std::vector<ParameterSet> parameter_sets;
};

struct SpectrumGridConfig {
    double f_min = -6.0e9;
    double f_max = 6.0e9;
    std::size_t points = 4801;
    double instrument_fwhm = 20.0e6;  // scanning FPI resolution
};

struct RunConfig {
    EmitterParams emitter;
    AmziConfig amzi;
    std::optional<SimConfig> sim;
    SweepConfig sweep;
    SpectrumGridConfig spectrum;
    std::string out_dir = "out";
    std::string format = "csv";  // csv | json (json adds JSON exports)

    void validate() const;
};

RunConfig load_run_config(const std::string& path);
RunConfig parse_run_config(const std::string& json_text);
// Canonical dump used for the artifact manifest hash.
std::string run_config_canonical_json(const RunConfig& cfg);
std::uint64_t fnv1a64(std::string_view text);

// Standalone EmitterParams (de)serialization. Populations may be given
// directly or derived from nbar and eta_ab through the saturation law.
std::string emitter_params_json(const EmitterParams& params);
EmitterParams emitter_params_from_json(const std::string& json_text);

}  // namespace rfsim

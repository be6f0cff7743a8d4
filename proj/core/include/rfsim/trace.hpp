#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "rfsim/errors.hpp"

namespace rfsim {

// Lag-resolved coincidence data with counting statistics. Raw traces hold
// accumulated counts per lag; baseline-normalized traces hold g2-style
// values with propagated errors.
struct CorrelationTrace {
    enum class Kind { g1, g2, coincidence };
    enum class Normalization { raw_counts, baseline_normalized };

    Kind kind = Kind::coincidence;
    Normalization normalization = Normalization::raw_counts;
    double slot_width = 0.0;  // seconds per lag slot
    std::vector<std::int64_t> lag_slots;
    std::vector<double> value;
    std::vector<double> error;
    // Marks the bins used for the baseline estimate.
    std::vector<bool> baseline_bin;
    double baseline = 0.0;
    double baseline_error = 0.0;
    std::uint64_t total_slots = 0;

    double lag_seconds(std::size_t i) const {
        return static_cast<double>(lag_slots.at(i)) * slot_width;
    }
    std::size_t index_of_lag(std::int64_t lag) const;
    double value_at_lag(std::int64_t lag) const { return value.at(index_of_lag(lag)); }
    double error_at_lag(std::int64_t lag) const { return error.at(index_of_lag(lag)); }
};

void write_trace_csv(std::ostream& os, const CorrelationTrace& trace);
void write_trace_csv(const std::string& path, const CorrelationTrace& trace);
CorrelationTrace read_trace_csv(std::istream& is);
CorrelationTrace read_trace_csv(const std::string& path);
std::string trace_json(const CorrelationTrace& trace);

}  // namespace rfsim

#include "rfsim/trace.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace rfsim {

namespace {

const char* kind_name(CorrelationTrace::Kind k) {
    switch (k) {
        case CorrelationTrace::Kind::g1: return "g1";
        case CorrelationTrace::Kind::g2: return "g2";
        case CorrelationTrace::Kind::coincidence: return "coincidence";
    }
    return "coincidence";
}

CorrelationTrace::Kind kind_from(const std::string& s) {
    if (s == "g1") return CorrelationTrace::Kind::g1;
    if (s == "g2") return CorrelationTrace::Kind::g2;
    if (s == "coincidence") return CorrelationTrace::Kind::coincidence;
    throw io_error("unknown trace kind '" + s + "'");
}

}  // namespace

std::size_t CorrelationTrace::index_of_lag(std::int64_t lag) const {
    for (std::size_t i = 0; i < lag_slots.size(); ++i)
        if (lag_slots[i] == lag) return i;
    throw config_error("lag " + std::to_string(lag) + " not present in trace");
}

void write_trace_csv(std::ostream& os, const CorrelationTrace& trace) {
    os.precision(17);
    os << "# schema=rfsim.trace.v1 kind=" << kind_name(trace.kind)
       << " normalization="
       << (trace.normalization == CorrelationTrace::Normalization::raw_counts
               ? "raw_counts"
               : "baseline_normalized")
       << " slot_width=" << trace.slot_width << " baseline=" << trace.baseline
       << " baseline_error=" << trace.baseline_error
       << " total_slots=" << trace.total_slots << "\n";
    os << "lag_slots,lag_seconds,value,error,baseline_bin\n";
    for (std::size_t i = 0; i < trace.lag_slots.size(); ++i) {
        os << trace.lag_slots[i] << "," << trace.lag_seconds(i) << "," << trace.value[i]
           << "," << trace.error[i] << ","
           << (i < trace.baseline_bin.size() && trace.baseline_bin[i] ? 1 : 0) << "\n";
    }
}

void write_trace_csv(const std::string& path, const CorrelationTrace& trace) {
    std::ofstream os(path);
    if (!os) throw io_error("cannot open '" + path + "' for writing");
    write_trace_csv(os, trace);
}

CorrelationTrace read_trace_csv(std::istream& is) {
    CorrelationTrace trace;
    std::string line;
    if (!std::getline(is, line) || line.rfind("# schema=rfsim.trace.v1", 0) != 0)
        throw io_error("missing rfsim.trace.v1 schema header");
    {
        std::istringstream hs(line.substr(1));
        std::string tok;
        while (hs >> tok) {
            const auto eq = tok.find('=');
            if (eq == std::string::npos) continue;
            const std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
            if (key == "kind") trace.kind = kind_from(val);
            if (key == "normalization")
                trace.normalization = (val == "raw_counts")
                                          ? CorrelationTrace::Normalization::raw_counts
                                          : CorrelationTrace::Normalization::baseline_normalized;
            if (key == "slot_width") trace.slot_width = std::stod(val);
            if (key == "baseline") trace.baseline = std::stod(val);
            if (key == "baseline_error") trace.baseline_error = std::stod(val);
            if (key == "total_slots") trace.total_slots = std::stoull(val);
        }
    }
    if (!std::getline(is, line)) throw io_error("missing trace column header");
    std::size_t row = 2;
    while (std::getline(is, line)) {
        ++row;
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (cells.size() != 5)
            throw io_error("trace row " + std::to_string(row) + " has " +
                           std::to_string(cells.size()) + " columns, expected 5");
        try {
            trace.lag_slots.push_back(std::stoll(cells[0]));
            trace.value.push_back(std::stod(cells[2]));
            trace.error.push_back(std::stod(cells[3]));
            trace.baseline_bin.push_back(cells[4] == "1");
        } catch (const std::exception&) {
            throw io_error("trace row " + std::to_string(row) + " is malformed: " + line);
        }
    }
    return trace;
}

CorrelationTrace read_trace_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw io_error("cannot open '" + path + "'");
    return read_trace_csv(is);
}

std::string trace_json(const CorrelationTrace& trace) {
    nlohmann::json j;
    j["schema_version"] = "rfsim.trace.v1";
    j["kind"] = kind_name(trace.kind);
    j["normalization"] = trace.normalization == CorrelationTrace::Normalization::raw_counts
                             ? "raw_counts"
                             : "baseline_normalized";
    j["slot_width"] = trace.slot_width;
    j["baseline"] = trace.baseline;
    j["baseline_error"] = trace.baseline_error;
    j["total_slots"] = trace.total_slots;
    j["lag_slots"] = trace.lag_slots;
    j["value"] = trace.value;
    j["error"] = trace.error;
    return j.dump(2);
}

}  // namespace rfsim

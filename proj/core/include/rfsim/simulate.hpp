#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "rfsim/emitter.hpp"
#include "rfsim/interferometry.hpp"
#include "rfsim/trace.hpp"

// Monte Carlo click streams behind the closed-form model: per-slot photon
// states fed through the lossless AMZI network, measured sequentially so
// the +-tau correlations emerge from projection of the long-arm remnant.
namespace rfsim {

inline constexpr std::uint8_t k_port_c = 0;
inline constexpr std::uint8_t k_port_d = 1;

struct SimConfig {
    EmitterParams params;
    AmziConfig amzi;
    double slot_width = 0.0;  // s; >> T1 and divides tau exactly
    double duration = 0.0;    // s
    std::uint64_t seed = 1;
    double detector_efficiency = 1.0;
    double dark_rate = 0.0;       // Hz per port
    double phi_drift_rate = 0.0;  // rad/s, models the free-running fringe

    void validate() const;
    std::vector<std::string> warnings() const;
    std::uint64_t delay_slots() const;  // tau / slot_width
    std::uint64_t total_slots() const;
};

struct ClickRecord {
    std::uint8_t port = 0;       // k_port_c or k_port_d
    std::uint64_t slot = 0;
    std::uint8_t multiplicity = 1;  // <= 2; beyond-2 events are clamped
};

struct SimStats {
    std::uint64_t slots = 0;
    std::uint64_t photons_c = 0;  // detected photons incl. multiplicity
    std::uint64_t photons_d = 0;
    std::uint64_t clamped_records = 0;
};

using ClickSink = std::function<void(const ClickRecord&)>;

// Deterministic for a fixed config (including seed). Dispatches to a
// closed-form per-slot sampler at p2 = 0 and to the generic fock-engine
// path otherwise; both consume the identical random stream.
SimStats simulate_clicks(const SimConfig& cfg, const ClickSink& sink);
std::vector<ClickRecord> simulate_clicks(const SimConfig& cfg, SimStats* stats = nullptr);

// Always runs the fock-engine path; validates the fast path in tests.
SimStats simulate_clicks_reference(const SimConfig& cfg, const ClickSink& sink);

enum class Pairing { auto_port_d, cross_c_d };

// Streaming coincidence accumulator. Clicks must arrive in nondecreasing
// slot order. The zero-lag bin of the auto pairing accumulates n(n-1) so
// baseline normalization yields g2 directly.
class HistogramAccumulator {
public:
    HistogramAccumulator(Pairing pairing, std::uint64_t max_lag_slots,
                         std::uint64_t delay_slots, double slot_width);
    void add(const ClickRecord& click);
    void set_total_slots(std::uint64_t n) { total_slots_ = n; }
    CorrelationTrace finish() const;

private:
    struct Buffered {
        std::uint64_t slot;
        std::uint8_t port;
        std::uint8_t multiplicity;
    };
    Pairing pairing_;
    std::uint64_t max_lag_;
    std::uint64_t delay_;
    double slot_width_;
    std::uint64_t total_slots_ = 0;
    std::uint64_t last_slot_ = 0;
    bool any_ = false;
    std::vector<Buffered> window_;
    std::vector<double> counts_;  // indexed lag + max_lag (cross) or lag (auto)
    std::vector<double> sumsq_;   // accumulated squared increments
    double port_photons_[2] = {0.0, 0.0};
};

CorrelationTrace histogram(std::span<const ClickRecord> clicks, Pairing pairing,
                           std::uint64_t max_lag_slots, std::uint64_t delay_slots,
                           double slot_width, std::uint64_t total_slots);

// Divides a raw trace by its baseline estimate, propagating errors.
CorrelationTrace g2_from_trace(const CorrelationTrace& trace);

void write_clicks_binary(const std::string& path, std::span<const ClickRecord> clicks);
std::vector<ClickRecord> read_clicks_binary(const std::string& path);
void write_clicks_csv(const std::string& path, std::span<const ClickRecord> clicks);
std::vector<ClickRecord> read_clicks_csv(const std::string& path);

}  // namespace rfsim

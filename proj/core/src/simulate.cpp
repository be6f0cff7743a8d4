#include "rfsim/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <deque>
#include <fstream>
#include <random>
#include <sstream>

namespace rfsim {

using fock::cplx;

namespace {

struct Rng {
    std::mt19937_64 gen;
    explicit Rng(std::uint64_t seed) : gen(seed) {}
    double uniform() { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }
};

// CDF inversion over canonical-order outcome probabilities. Both sampler
// paths enumerate the same grid, so they consume identical uniforms.
std::size_t sample_outcome(std::span<const double> probs, double u) {
    double total = 0.0;
    for (double p : probs) total += p;
    const double target = u * total;
    double acc = 0.0;
    std::size_t last_nonzero = 0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        if (probs[i] <= 0.0) continue;
        acc += probs[i];
        last_nonzero = i;
        if (target < acc) return i;
    }
    return last_nonzero;
}

int poisson_draw(double lambda, Rng& rng) {
    if (lambda <= 0.0) return 0;
    const double u = rng.uniform();
    double p = std::exp(-lambda), acc = p;
    int k = 0;
    while (u >= acc && k < 64) {
        ++k;
        p *= lambda / k;
        acc += p;
    }
    return k;
}

// Detection draws run port c first, then port d, photons before darks.
int detect(int n_photons, double eta, double dark_lambda, Rng& rng) {
    int detected = 0;
    if (eta >= 1.0) {
        detected = n_photons;
    } else {
        for (int i = 0; i < n_photons; ++i)
            if (rng.uniform() < eta) ++detected;
    }
    detected += poisson_draw(dark_lambda, rng);
    return detected;
}

constexpr int k_truncation_p2_zero = 2;
constexpr int k_truncation_p2 = 4;

struct SlotEmitter {
    const SimConfig& cfg;
    const ClickSink& sink;
    SimStats stats;
    double dark_lambda;

    SlotEmitter(const SimConfig& c, const ClickSink& s)
        : cfg(c), sink(s), dark_lambda(c.dark_rate * c.slot_width) {}

    void emit(std::uint64_t slot, int n_c, int n_d, Rng& rng) {
        const int det_c = detect(n_c, cfg.detector_efficiency, dark_lambda, rng);
        const int det_d = detect(n_d, cfg.detector_efficiency, dark_lambda, rng);
        stats.photons_c += static_cast<std::uint64_t>(det_c);
        stats.photons_d += static_cast<std::uint64_t>(det_d);
        if (det_c > 0) {
            if (det_c > 2) ++stats.clamped_records;
            sink(ClickRecord{k_port_c, slot, static_cast<std::uint8_t>(std::min(det_c, 2))});
        }
        if (det_d > 0) {
            if (det_d > 2) ++stats.clamped_records;
            sink(ClickRecord{k_port_d, slot, static_cast<std::uint8_t>(std::min(det_d, 2))});
        }
    }
};

// Closed-form per-slot sampler for p2 = 0. The long-arm half of input
// slot s is a two-amplitude pure state consumed k slots later; a depth-k
// ring buffer carries the conditioned remnants. Outcomes are enumerated
// on the (n_d, n_c) grid of the engine path.
class FastSlotSampler {
public:
    FastSlotSampler(double p0, double p1, std::size_t delay_slots)
        : sp0_(std::sqrt(p0)), sp1h_(std::sqrt(p1 / 2.0)) {
        const double n = std::sqrt(p0 + p1 / 2.0);
        rstar0_ = sp0_ / n;
        rstar1_ = sp1h_ / n;
        // Switch-on: the long arm starts empty.
        queue_.assign(delay_slots, Entry{cplx{1.0, 0.0}, cplx{0.0, 0.0}, false});
    }

    static constexpr int k_grid = (k_truncation_p2_zero + 1) * (k_truncation_p2_zero + 1);

    // Samples (n_d, n_c) for one slot; consumes the remnant stored k slots
    // ago and enqueues the projected long arm of the fresh input.
    std::pair<int, int> step(double phi, Rng& rng) {
        Entry& slot = queue_[pos_];
        const bool reuse = slot.star && star_valid_ && phi == star_phi_;
        if (!reuse) {
            compute_amplitudes(slot, std::polar(1.0, phi));
            if (slot.star) {
                star_phi_ = phi;
                star_valid_ = true;
                std::copy(std::begin(probs_), std::end(probs_), std::begin(star_probs_));
                std::copy(std::begin(amp_), std::end(amp_), std::begin(star_amp_));
            }
        }
        const double* probs = reuse ? star_probs_ : probs_;
        const cplx* amp = reuse ? star_amp_ : amp_;
        const std::size_t outcome =
            sample_outcome(std::span<const double>(probs, k_grid), rng.uniform());
        const int n_d = static_cast<int>(outcome) / 3;
        const int n_c = static_cast<int>(outcome) % 3;
        slot = project(outcome, amp);
        pos_ = (pos_ + 1) % queue_.size();
        return {n_d, n_c};
    }

private:
    struct Entry {
        cplx r0, r1;
        bool star;
    };

    // Amplitude table A[(n_d,n_c)][n_long]:
    //   entrance  |phi> -> sqrt(p0)|00> + sqrt(p1/2)(e^{i phi}|1_S 0_L> + |0_S 1_L>)
    //   exit      |n_R n_S> -> Hadamard pair block on (d, c)
    void compute_amplitudes(const Entry& e, cplx eiphi) {
        constexpr double inv_sqrt2 = 0.70710678118654752440;
        for (auto& a : amp_) a = cplx{0.0, 0.0};
        const cplx short_amp = sp1h_ * eiphi;
        amp_[idx(0, 0, 0)] = e.r0 * sp0_;
        amp_[idx(0, 0, 1)] = e.r0 * sp1h_;
        amp_[idx(1, 0, 0)] = (e.r1 * sp0_ + e.r0 * short_amp) * inv_sqrt2;
        amp_[idx(0, 1, 0)] = (e.r1 * sp0_ - e.r0 * short_amp) * inv_sqrt2;
        amp_[idx(1, 0, 1)] = e.r1 * sp1h_ * inv_sqrt2;
        amp_[idx(0, 1, 1)] = e.r1 * sp1h_ * inv_sqrt2;
        amp_[idx(2, 0, 0)] = e.r1 * short_amp * inv_sqrt2;
        amp_[idx(0, 2, 0)] = -e.r1 * short_amp * inv_sqrt2;
        for (int o = 0; o < k_grid; ++o)
            probs_[o] = std::norm(amp_[2 * o]) + std::norm(amp_[2 * o + 1]);
    }

    static constexpr std::size_t idx(int n_d, int n_c, int n_long) {
        return static_cast<std::size_t>(2 * (3 * n_d + n_c) + n_long);
    }

    Entry project(std::size_t outcome, const cplx* amp) const {
        if (outcome == 0)  // (0,0) resets the long arm to the fixed point
            return Entry{cplx{rstar0_, 0.0}, cplx{rstar1_, 0.0}, true};
        cplx a0 = amp[2 * outcome], a1 = amp[2 * outcome + 1];
        const double n = std::sqrt(std::norm(a0) + std::norm(a1));
        if (n < 1e-300) return Entry{cplx{1.0, 0.0}, cplx{0.0, 0.0}, false};
        return Entry{a0 / n, a1 / n, false};
    }

    double sp0_, sp1h_;
    double rstar0_, rstar1_;
    std::vector<Entry> queue_;
    std::size_t pos_ = 0;
    bool star_valid_ = false;
    double star_phi_ = 0.0;
    cplx amp_[2 * k_grid];
    double probs_[k_grid] = {};
    cplx star_amp_[2 * k_grid];
    double star_probs_[k_grid] = {};
};

// Generic per-slot sampler through the fock engine; handles p2 > 0.
class EngineSlotSampler {
public:
    EngineSlotSampler(const EmitterParams& params, std::size_t delay_slots)
        : params_(params), trunc_(params.p2 > 0.0 ? k_truncation_p2 : k_truncation_p2_zero) {
        std::vector<cplx> vacuum(static_cast<std::size_t>(trunc_) + 1, cplx{0.0, 0.0});
        vacuum[0] = 1.0;
        queue_.assign(delay_slots, vacuum);
    }

    std::pair<int, int> step(double phi, Rng& rng) {
        std::vector<cplx>& remnant_ = queue_[pos_];
        fock::ModeSpec rspec({fock::Mode::photon("R", trunc_)});
        fock::ModeState r(rspec, remnant_);
        auto fresh = photon_pure_state(params_.p0, params_.p1, params_.p2, "I", trunc_);
        fock::ModeSpec aspec({fock::Mode::photon("A", trunc_)});
        auto joint = fock::tensor(r, fresh, fock::ModeState::vacuum(aspec));
        joint = fock::apply_beam_splitter(joint, "I", "A", 0.5);  // I = short, A = long
        joint = fock::apply_phase(joint, "I", phi);
        joint = fock::apply_beam_splitter(joint, "R", "I", 0.5);  // R -> d, I -> c

        const auto& spec = joint.spec();
        const int d = trunc_ + 1;
        const int grid = d * d;
        std::vector<double> probs(static_cast<std::size_t>(grid), 0.0);
        for (std::size_t i = 0; i < spec.dimension(); ++i) {
            const int nd = spec.occupation_of(i, 0);
            const int nc = spec.occupation_of(i, 1);
            probs[static_cast<std::size_t>(nd * d + nc)] += std::norm(joint.amplitudes()[i]);
        }
        const auto outcome = sample_outcome(probs, rng.uniform());
        const int n_d = static_cast<int>(outcome) / d;
        const int n_c = static_cast<int>(outcome) % d;

        std::vector<cplx> next(static_cast<std::size_t>(d), cplx{0.0, 0.0});
        std::vector<int> occ{n_d, n_c, 0};
        for (int nl = 0; nl < d; ++nl) {
            occ[2] = nl;
            next[static_cast<std::size_t>(nl)] = joint.amplitudes()[spec.flat_index(occ)];
        }
        double norm = 0.0;
        for (const auto& a : next) norm += std::norm(a);
        norm = std::sqrt(norm);
        if (norm < 1e-300) {
            std::fill(next.begin(), next.end(), cplx{0.0, 0.0});
            next[0] = 1.0;
        } else {
            for (auto& a : next) a /= norm;
        }
        remnant_ = std::move(next);
        pos_ = (pos_ + 1) % queue_.size();
        return {n_d, n_c};
    }

private:
    EmitterParams params_;
    int trunc_;
    std::vector<std::vector<cplx>> queue_;
    std::size_t pos_ = 0;
};

template <typename Sampler>
SimStats run_simulation(const SimConfig& cfg, const ClickSink& sink, Sampler& sampler) {
    cfg.validate();
    Rng rng(cfg.seed);
    SlotEmitter emitter(cfg, sink);
    const std::uint64_t warmup = cfg.delay_slots();
    const std::uint64_t n_slots = cfg.total_slots();

    for (std::uint64_t s = 0; s < warmup + n_slots; ++s) {
        const bool live = s >= warmup;
        const double t = live ? static_cast<double>(s - warmup) * cfg.slot_width : 0.0;
        const double phi = cfg.amzi.phi + cfg.phi_drift_rate * t;
        const auto [n_d, n_c] = sampler.step(phi, rng);
        if (live) emitter.emit(s - warmup, n_c, n_d, rng);
    }
    emitter.stats.slots = n_slots;
    return emitter.stats;
}

}  // namespace

void SimConfig::validate() const {
    params.validate();
    amzi.validate();
    if (!(slot_width > 0.0)) throw config_error("slot_width must be positive");
    if (!(duration > 0.0)) throw config_error("duration must be positive");
    const double ratio = amzi.tau / slot_width;
    const double k = std::round(ratio);
    if (k < 1.0 || std::abs(ratio - k) > 1e-9 * ratio)
        throw config_error("tau must be an integer multiple of slot_width");
    if (!(detector_efficiency >= 0.0 && detector_efficiency <= 1.0))
        throw config_error("detector_efficiency must lie in [0,1]");
    if (dark_rate < 0.0) throw config_error("dark_rate must be nonnegative");
}

std::vector<std::string> SimConfig::warnings() const {
    std::vector<std::string> out = params.warnings();
    auto amzi_warn = amzi.warnings(params);
    out.insert(out.end(), amzi_warn.begin(), amzi_warn.end());
    if (slot_width < 10.0 * params.T1) {
        std::ostringstream os;
        os << "slot_width = " << slot_width << " s is below 10*T1 = " << 10.0 * params.T1
           << " s; slots are no longer independent temporal modes";
        out.push_back(os.str());
    }
    return out;
}

std::uint64_t SimConfig::delay_slots() const {
    return static_cast<std::uint64_t>(std::llround(amzi.tau / slot_width));
}

std::uint64_t SimConfig::total_slots() const {
    return static_cast<std::uint64_t>(std::llround(duration / slot_width));
}

SimStats simulate_clicks(const SimConfig& cfg, const ClickSink& sink) {
    cfg.validate();
    if (cfg.params.p2 == 0.0) {
        FastSlotSampler sampler(cfg.params.p0, cfg.params.p1, cfg.delay_slots());
        return run_simulation(cfg, sink, sampler);
    }
    EngineSlotSampler sampler(cfg.params, cfg.delay_slots());
    return run_simulation(cfg, sink, sampler);
}

std::vector<ClickRecord> simulate_clicks(const SimConfig& cfg, SimStats* stats) {
    std::vector<ClickRecord> clicks;
    auto s = simulate_clicks(cfg, [&clicks](const ClickRecord& r) { clicks.push_back(r); });
    if (stats) *stats = s;
    return clicks;
}

SimStats simulate_clicks_reference(const SimConfig& cfg, const ClickSink& sink) {
    cfg.validate();
    EngineSlotSampler sampler(cfg.params, cfg.delay_slots());
    return run_simulation(cfg, sink, sampler);
}

HistogramAccumulator::HistogramAccumulator(Pairing pairing, std::uint64_t max_lag_slots,
                                           std::uint64_t delay_slots, double slot_width)
    : pairing_(pairing), max_lag_(max_lag_slots), delay_(delay_slots),
      slot_width_(slot_width) {
    if (max_lag_ == 0) throw config_error("max_lag must be positive");
    const std::size_t bins =
        pairing_ == Pairing::auto_port_d ? max_lag_ + 1 : 2 * max_lag_ + 1;
    counts_.assign(bins, 0.0);
    sumsq_.assign(bins, 0.0);
}

void HistogramAccumulator::add(const ClickRecord& click) {
    if (any_ && click.slot < last_slot_)
        throw config_error("click stream must be sorted by slot");
    any_ = true;
    last_slot_ = click.slot;

    while (!window_.empty() && window_.front().slot + max_lag_ < click.slot)
        window_.erase(window_.begin());

    const double m = click.multiplicity;
    port_photons_[click.port] += m;
    if (pairing_ == Pairing::auto_port_d) {
        if (click.port != k_port_d) return;
        // Zero lag counts normal-ordered pairs so g2(0) = counts/baseline.
        const double w0 = m * (m - 1.0);
        if (w0 > 0.0) {
            counts_[0] += w0;
            sumsq_[0] += w0 * w0;
        }
        for (const auto& b : window_) {
            if (b.port != k_port_d) continue;
            const std::uint64_t lag = click.slot - b.slot;
            if (lag == 0 || lag > max_lag_) continue;
            const double w = m * b.multiplicity;
            counts_[lag] += w;
            sumsq_[lag] += w * w;
        }
    } else {
        for (const auto& b : window_) {
            if (b.port == click.port) continue;
            const std::uint64_t gap = click.slot - b.slot;
            if (gap > max_lag_) continue;
            // lag = slot_d - slot_c
            const std::int64_t lag = (click.port == k_port_d)
                                         ? static_cast<std::int64_t>(gap)
                                         : -static_cast<std::int64_t>(gap);
            const double w = m * b.multiplicity;
            const std::size_t bin = static_cast<std::size_t>(lag + static_cast<std::int64_t>(max_lag_));
            counts_[bin] += w;
            sumsq_[bin] += w * w;
        }
    }
    window_.push_back(Buffered{click.slot, click.port, click.multiplicity});
}

CorrelationTrace HistogramAccumulator::finish() const {
    if (!any_) throw config_error("empty click stream");
    CorrelationTrace trace;
    trace.kind = CorrelationTrace::Kind::coincidence;
    trace.normalization = CorrelationTrace::Normalization::raw_counts;
    trace.slot_width = slot_width_;
    trace.total_slots = total_slots_;

    const std::int64_t lo =
        pairing_ == Pairing::auto_port_d ? 0 : -static_cast<std::int64_t>(max_lag_);
    const auto delay = static_cast<std::int64_t>(delay_);

    double base_sum = 0.0, base_sq = 0.0;
    std::size_t base_bins = 0;
    for (std::size_t i = 0; i < counts_.size(); ++i) {
        const std::int64_t lag = lo + static_cast<std::int64_t>(i);
        trace.lag_slots.push_back(lag);
        trace.value.push_back(counts_[i]);
        trace.error.push_back(std::sqrt(std::max(sumsq_[i], 1.0)));
        // Structure exists only at 0 and +-tau; keep a safety margin there
        // and around 2 tau when declaring baseline bins.
        const std::int64_t a = std::llabs(lag);
        const bool is_base = a >= 2 && std::llabs(a - delay) >= 2 &&
                             std::llabs(a - 2 * delay) >= 2;
        trace.baseline_bin.push_back(is_base);
        if (is_base) {
            base_sum += counts_[i];
            base_sq += sumsq_[i];
            ++base_bins;
        }
    }
    if (base_bins == 0)
        throw config_error("max_lag leaves no baseline bins; enlarge the histogram");
    trace.baseline = base_sum / static_cast<double>(base_bins);
    // Far-lag bins all share the same clicks, so the pair-Poisson term
    // alone understates the baseline error; the common-mode fluctuation
    // of the singles rates dominates once many bins are averaged.
    const double pair_rel2 = std::max(base_sq, 1.0) / std::pow(std::max(base_sum, 1.0), 2);
    double singles_rel2 = 0.0;
    if (pairing_ == Pairing::auto_port_d) {
        singles_rel2 = 4.0 / std::max(port_photons_[k_port_d], 1.0);
    } else {
        singles_rel2 = 1.0 / std::max(port_photons_[k_port_c], 1.0) +
                       1.0 / std::max(port_photons_[k_port_d], 1.0);
    }
    trace.baseline_error = trace.baseline * std::sqrt(pair_rel2 + singles_rel2);
    return trace;
}

CorrelationTrace histogram(std::span<const ClickRecord> clicks, Pairing pairing,
                           std::uint64_t max_lag_slots, std::uint64_t delay_slots,
                           double slot_width, std::uint64_t total_slots) {
    if (clicks.empty()) throw config_error("empty click stream");
    if (total_slots > 0 && max_lag_slots >= total_slots)
        throw config_error("max_lag exceeds the simulated duration");
    HistogramAccumulator acc(pairing, max_lag_slots, delay_slots, slot_width);
    acc.set_total_slots(total_slots);
    for (const auto& c : clicks) acc.add(c);
    return acc.finish();
}

CorrelationTrace g2_from_trace(const CorrelationTrace& trace) {
    if (trace.normalization != CorrelationTrace::Normalization::raw_counts)
        throw config_error("trace is already normalized");
    if (!(trace.baseline > 0.0)) throw numeric_error("zero baseline; cannot normalize");
    CorrelationTrace out = trace;
    out.kind = CorrelationTrace::Kind::g2;
    out.normalization = CorrelationTrace::Normalization::baseline_normalized;
    const double b = trace.baseline;
    const double rel_b = trace.baseline_error / b;
    for (std::size_t i = 0; i < trace.value.size(); ++i) {
        const double c = trace.value[i];
        out.value[i] = c / b;
        out.error[i] = std::sqrt(std::pow(trace.error[i] / b, 2) +
                                 std::pow(c * rel_b / b, 2));
    }
    out.baseline = 1.0;
    out.baseline_error = rel_b;
    return out;
}

void write_clicks_binary(const std::string& path, std::span<const ClickRecord> clicks) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw io_error("cannot open '" + path + "' for writing");
    for (const auto& c : clicks) {
        os.put(static_cast<char>(c.port));
        std::uint64_t slot = c.slot;  // little-endian u64
        for (int i = 0; i < 8; ++i) {
            os.put(static_cast<char>(slot & 0xff));
            slot >>= 8;
        }
        os.put(static_cast<char>(c.multiplicity));
    }
    if (!os) throw io_error("failed writing '" + path + "'");
}

std::vector<ClickRecord> read_clicks_binary(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw io_error("cannot open '" + path + "'");
    std::vector<ClickRecord> out;
    char buf[10];
    while (is.read(buf, 10)) {
        ClickRecord c;
        c.port = static_cast<std::uint8_t>(buf[0]);
        c.slot = 0;
        for (int i = 7; i >= 0; --i)
            c.slot = (c.slot << 8) | static_cast<std::uint8_t>(buf[1 + i]);
        c.multiplicity = static_cast<std::uint8_t>(buf[9]);
        out.push_back(c);
    }
    if (is.gcount() != 0) throw io_error("trailing bytes in '" + path + "'");
    return out;
}

void write_clicks_csv(const std::string& path, std::span<const ClickRecord> clicks) {
    std::ofstream os(path);
    if (!os) throw io_error("cannot open '" + path + "' for writing");
    os << "# schema=rfsim.clicks.v1\n";
    os << "port,slot,multiplicity\n";
    for (const auto& c : clicks)
        os << (c.port == k_port_c ? "c" : "d") << "," << c.slot << ","
           << static_cast<int>(c.multiplicity) << "\n";
}

std::vector<ClickRecord> read_clicks_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw io_error("cannot open '" + path + "'");
    std::string line;
    if (!std::getline(is, line) || line.rfind("# schema=rfsim.clicks.v1", 0) != 0)
        throw io_error("missing rfsim.clicks.v1 schema header");
    if (!std::getline(is, line)) throw io_error("missing clicks column header");
    std::vector<ClickRecord> out;
    std::size_t row = 2;
    while (std::getline(is, line)) {
        ++row;
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string port, slot, mult;
        if (!std::getline(ls, port, ',') || !std::getline(ls, slot, ',') ||
            !std::getline(ls, mult, ','))
            throw io_error("clicks row " + std::to_string(row) + " is malformed: " + line);
        ClickRecord c;
        if (port == "c") c.port = k_port_c;
        else if (port == "d") c.port = k_port_d;
        else throw io_error("clicks row " + std::to_string(row) + " has bad port '" + port + "'");
        try {
            c.slot = std::stoull(slot);
            c.multiplicity = static_cast<std::uint8_t>(std::stoi(mult));
        } catch (const std::exception&) {
            throw io_error("clicks row " + std::to_string(row) + " is malformed: " + line);
        }
        out.push_back(c);
    }
    return out;
}

}  // namespace rfsim

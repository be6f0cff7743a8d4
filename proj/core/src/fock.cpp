#include "rfsim/fock.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <utility>

namespace rfsim::fock {

namespace {

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

double binomial(int n, int k) {
    return factorial(n) / (factorial(k) * factorial(n - k));
}

// std::pow(complex, int) goes through exp/log and returns NaN at 0^0.
cplx ipow(cplx base, int exp) {
    cplx r{1.0, 0.0};
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

// Applies the annihilation operator of one mode to a raw amplitude vector.
// The result is unnormalized; callers own renormalization.
std::vector<cplx> lower(const ModeSpec& spec, std::span<const cplx> amp, int mode) {
    std::vector<cplx> out(spec.dimension(), cplx{0.0, 0.0});
    const std::size_t stride = spec.stride(mode);
    const int dim = spec.mode(mode).dim();
    for (std::size_t i = 0; i < amp.size(); ++i) {
        if (amp[i] == cplx{0.0, 0.0}) continue;
        const int n = static_cast<int>((i / stride) % static_cast<std::size_t>(dim));
        if (n == 0) continue;
        out[i - stride] += std::sqrt(static_cast<double>(n)) * amp[i];
    }
    return out;
}

std::vector<cplx> lower_product(const ModeSpec& spec, std::span<const cplx> amp,
                                std::span<const std::string> labels) {
    std::vector<cplx> v(amp.begin(), amp.end());
    for (const auto& label : labels) {
        const int m = spec.index_of(label);
        if (spec.mode(m).kind != ModeKind::photon)
            throw config_error("correlator: '" + label + "' is not a photon mode");
        v = lower(spec, v, m);
    }
    return v;
}

cplx inner(std::span<const cplx> a, std::span<const cplx> b) {
    cplx s{0.0, 0.0};
    for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

void check_unique_labels(const std::vector<Mode>& modes) {
    std::set<std::string_view> seen;
    for (const auto& m : modes) {
        if (!seen.insert(m.label).second)
            throw config_error("duplicate mode label '" + m.label + "'");
    }
}

}  // namespace

ModeSpec::ModeSpec(std::vector<Mode> modes, std::size_t dimension_cap)
    : modes_(std::move(modes)), cap_(dimension_cap) {
    check_unique_labels(modes_);
    for (auto& m : modes_) {
        if (m.kind == ModeKind::matter && m.n_max != 1)
            throw config_error("matter mode '" + m.label + "' must have dimension 2");
        if (m.kind == ModeKind::photon && m.n_max < 1)
            throw config_error("photon mode '" + m.label + "' needs n_max >= 1");
    }
    dim_ = 1;
    for (const auto& m : modes_) {
        dim_ *= static_cast<std::size_t>(m.dim());
        if (dim_ > cap_)
            throw config_error("Hilbert dimension exceeds cap of " + std::to_string(cap_));
    }
    strides_.assign(modes_.size(), 1);
    for (int i = static_cast<int>(modes_.size()) - 2; i >= 0; --i)
        strides_[static_cast<std::size_t>(i)] =
            strides_[static_cast<std::size_t>(i) + 1] *
            static_cast<std::size_t>(modes_[static_cast<std::size_t>(i) + 1].dim());
}

int ModeSpec::index_of(std::string_view label) const {
    for (std::size_t i = 0; i < modes_.size(); ++i)
        if (modes_[i].label == label) return static_cast<int>(i);
    throw config_error("unknown mode label '" + std::string(label) + "'");
}

std::size_t ModeSpec::flat_index(std::span<const int> occupation) const {
    if (occupation.size() != modes_.size())
        throw config_error("occupation size does not match mode count");
    std::size_t idx = 0;
    for (std::size_t i = 0; i < modes_.size(); ++i) {
        if (occupation[i] < 0 || occupation[i] >= modes_[i].dim())
            throw config_error("occupation out of range for mode '" + modes_[i].label + "'");
        idx += static_cast<std::size_t>(occupation[i]) * strides_[i];
    }
    return idx;
}

void ModeSpec::occupation_of(std::size_t index, std::span<int> occupation) const {
    for (std::size_t i = 0; i < modes_.size(); ++i)
        occupation[i] = static_cast<int>((index / strides_[i]) %
                                         static_cast<std::size_t>(modes_[i].dim()));
}

int ModeSpec::occupation_of(std::size_t index, int mode) const {
    const auto m = static_cast<std::size_t>(mode);
    return static_cast<int>((index / strides_[m]) %
                            static_cast<std::size_t>(modes_[m].dim()));
}

bool ModeSpec::operator==(const ModeSpec& other) const {
    if (modes_.size() != other.modes_.size()) return false;
    for (std::size_t i = 0; i < modes_.size(); ++i) {
        if (modes_[i].label != other.modes_[i].label) return false;
        if (modes_[i].kind != other.modes_[i].kind) return false;
        if (modes_[i].n_max != other.modes_[i].n_max) return false;
    }
    return true;
}

std::string ModeSpec::basis_string(std::size_t index) const {
    std::ostringstream os;
    os << "|";
    bool first = true;
    for (std::size_t i = 0; i < modes_.size(); ++i) {
        if (modes_[i].kind != ModeKind::photon) continue;
        if (!first) os << ",";
        os << occupation_of(index, static_cast<int>(i));
        first = false;
    }
    bool any_matter = false;
    for (const auto& m : modes_)
        if (m.kind == ModeKind::matter) any_matter = true;
    if (any_matter) {
        os << ";";
        first = true;
        for (std::size_t i = 0; i < modes_.size(); ++i) {
            if (modes_[i].kind != ModeKind::matter) continue;
            if (!first) os << ",";
            os << (occupation_of(index, static_cast<int>(i)) == 0 ? "g" : "e");
            first = false;
        }
    }
    os << ">";
    return os.str();
}

ModeState::ModeState(ModeSpec spec, std::vector<cplx> amplitudes)
    : spec_(std::move(spec)), amp_(std::move(amplitudes)) {
    if (amp_.size() != spec_.dimension())
        throw config_error("amplitude vector does not match spec dimension");
    const double n = norm();
    if (std::abs(n - 1.0) > k_norm_tol)
        throw numeric_error("state norm " + std::to_string(n) + " deviates from 1");
}

ModeState ModeState::vacuum(ModeSpec spec) {
    std::vector<cplx> amp(spec.dimension(), cplx{0.0, 0.0});
    amp[0] = 1.0;
    return ModeState(std::move(spec), std::move(amp));
}

ModeState ModeState::basis(ModeSpec spec, std::span<const int> occupation) {
    std::vector<cplx> amp(spec.dimension(), cplx{0.0, 0.0});
    amp[spec.flat_index(occupation)] = 1.0;
    return ModeState(std::move(spec), std::move(amp));
}

ModeState ModeState::basis(ModeSpec spec, std::initializer_list<int> occupation) {
    std::vector<int> occ(occupation);
    return basis(std::move(spec), std::span<const int>(occ));
}

cplx ModeState::amplitude(std::span<const int> occupation) const {
    return amp_[spec_.flat_index(occupation)];
}

cplx ModeState::amplitude(std::initializer_list<int> occupation) const {
    std::vector<int> occ(occupation);
    return amplitude(std::span<const int>(occ));
}

double ModeState::norm() const {
    double s = 0.0;
    for (const auto& a : amp_) s += std::norm(a);
    return std::sqrt(s);
}

DensityState::DensityState(ModeSpec spec, Eigen::MatrixXcd rho)
    : spec_(std::move(spec)), rho_(std::move(rho)) {
    const auto dim = static_cast<Eigen::Index>(spec_.dimension());
    if (rho_.rows() != dim || rho_.cols() != dim)
        throw config_error("density matrix does not match spec dimension");
    const double tr = rho_.trace().real();
    if (std::abs(tr - 1.0) > k_trace_tol || std::abs(rho_.trace().imag()) > k_trace_tol)
        throw numeric_error("density trace deviates from 1 by more than tolerance");
    if ((rho_ - rho_.adjoint()).cwiseAbs().maxCoeff() > k_herm_tol)
        throw numeric_error("density matrix is not Hermitian within tolerance");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho_, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < k_psd_tol)
        throw numeric_error("density matrix has a negative eigenvalue beyond tolerance");
}

DensityState DensityState::from_pure(const ModeState& psi) {
    const auto dim = static_cast<Eigen::Index>(psi.spec().dimension());
    Eigen::VectorXcd v(dim);
    for (Eigen::Index i = 0; i < dim; ++i) v(i) = psi.amplitudes()[static_cast<std::size_t>(i)];
    return DensityState(psi.spec(), v * v.adjoint());
}

double DensityState::purity() const { return (rho_ * rho_).trace().real(); }

ModeState tensor(std::span<const ModeState> states) {
    if (states.empty()) throw config_error("tensor of zero states");
    std::vector<Mode> modes;
    std::size_t cap = ModeSpec::default_dimension_cap;
    for (const auto& s : states) {
        cap = std::min(cap, s.spec().dimension_cap());
        for (const auto& m : s.spec().modes()) modes.push_back(m);
    }
    ModeSpec spec(std::move(modes), cap);  // checks label collisions and cap
    std::vector<cplx> amp{cplx{1.0, 0.0}};
    for (const auto& s : states) {
        std::vector<cplx> next(amp.size() * s.spec().dimension());
        std::size_t k = 0;
        for (const auto& a : amp)
            for (const auto& b : s.amplitudes()) next[k++] = a * b;
        amp = std::move(next);
    }
    return ModeState(std::move(spec), std::move(amp));
}

ModeState tensor(const ModeState& a, const ModeState& b) {
    const ModeState arr[] = {a, b};
    return tensor(std::span<const ModeState>(arr));
}

ModeState tensor(const ModeState& a, const ModeState& b, const ModeState& c) {
    const ModeState arr[] = {a, b, c};
    return tensor(std::span<const ModeState>(arr));
}

ModeState apply_beam_splitter(const ModeState& state, std::string_view mode_a,
                              std::string_view mode_b, double transmissivity,
                              double phase) {
    const ModeSpec& spec = state.spec();
    const int ia = spec.index_of(mode_a);
    const int ib = spec.index_of(mode_b);
    if (ia == ib) throw config_error("beam splitter needs two distinct modes");
    if (spec.mode(ia).kind != ModeKind::photon || spec.mode(ib).kind != ModeKind::photon)
        throw config_error("beam splitter modes must be photon modes");
    if (spec.mode(ia).n_max != spec.mode(ib).n_max)
        throw config_error("beam splitter modes must share one truncation");
    if (transmissivity < 0.0 || transmissivity > 1.0)
        throw config_error("transmissivity must lie in [0,1]");

    const int n_max = spec.mode(ia).n_max;
    const int d = n_max + 1;

    // Overflow scan: populated total excitation in the pair must fit.
    for (std::size_t i = 0; i < spec.dimension(); ++i) {
        if (std::abs(state.amplitudes()[i]) <= k_amp_zero_tol) continue;
        const int m = spec.occupation_of(i, ia);
        const int n = spec.occupation_of(i, ib);
        if (m + n > n_max)
            throw numeric_error("beam splitter would overflow truncation n_max=" +
                                std::to_string(n_max) + " (pair holds " +
                                std::to_string(m + n) + " photons)");
    }

    const double rt = std::sqrt(transmissivity);
    const double rr = std::sqrt(1.0 - transmissivity);
    const cplx ph = std::polar(1.0, phase);
    // a+ -> rt a+ + rr*ph b+ ; b+ -> rr*conj(ph) a+ - rt b+
    const cplx a_to_a = rt, a_to_b = rr * ph;
    const cplx b_to_a = rr * std::conj(ph), b_to_b = -rt;

    // Pair-block transition amplitudes U[(m',n') <- (m,n)] from the binomial
    // expansion of (a+)^m (b+)^n under the single-photon map above.
    std::vector<cplx> block(static_cast<std::size_t>(d * d * d * d), cplx{0.0, 0.0});
    auto bidx = [d](int mp, int np, int m, int n) {
        return static_cast<std::size_t>(((mp * d + np) * d + m) * d + n);
    };
    for (int m = 0; m <= n_max; ++m) {
        for (int n = 0; n <= n_max - m; ++n) {
            for (int j = 0; j <= m; ++j) {
                for (int k = 0; k <= n; ++k) {
                    const int mp = j + k;            // photons in output a
                    const int np = m + n - j - k;    // photons in output b
                    cplx coeff = binomial(m, j) * binomial(n, k);
                    coeff *= ipow(a_to_a, j) * ipow(a_to_b, m - j);
                    coeff *= ipow(b_to_a, k) * ipow(b_to_b, n - k);
                    coeff *= std::sqrt(factorial(mp) * factorial(np) /
                                       (factorial(m) * factorial(n)));
                    block[bidx(mp, np, m, n)] += coeff;
                }
            }
        }
    }

    const std::size_t sa = spec.stride(ia);
    const std::size_t sb = spec.stride(ib);
    std::vector<cplx> out(spec.dimension(), cplx{0.0, 0.0});
    for (std::size_t i = 0; i < spec.dimension(); ++i) {
        const cplx amp = state.amplitudes()[i];
        if (amp == cplx{0.0, 0.0}) continue;
        const int m = spec.occupation_of(i, ia);
        const int n = spec.occupation_of(i, ib);
        if (m + n > n_max) continue;  // below k_amp_zero_tol, scanned above
        const std::size_t base = i - static_cast<std::size_t>(m) * sa -
                                 static_cast<std::size_t>(n) * sb;
        const int total = m + n;
        for (int mp = 0; mp <= total; ++mp) {
            const int np = total - mp;
            const cplx c = block[bidx(mp, np, m, n)];
            if (c == cplx{0.0, 0.0}) continue;
            out[base + static_cast<std::size_t>(mp) * sa +
                static_cast<std::size_t>(np) * sb] += c * amp;
        }
    }
    return ModeState(spec, std::move(out));
}

ModeState apply_phase(const ModeState& state, std::string_view mode, double phi) {
    const ModeSpec& spec = state.spec();
    const int im = spec.index_of(mode);
    if (spec.mode(im).kind != ModeKind::photon)
        throw config_error("phase shifter needs a photon mode");
    std::vector<cplx> out(state.amplitudes().begin(), state.amplitudes().end());
    for (std::size_t i = 0; i < out.size(); ++i) {
        const int n = spec.occupation_of(i, im);
        if (n != 0) out[i] *= std::polar(1.0, phi * n);
    }
    return ModeState(spec, std::move(out));
}

namespace {

const std::string k_loss_ancilla = "__loss_ancilla__";

}  // namespace

DensityState apply_loss(const ModeState& state, std::string_view mode, double eta) {
    if (eta < 0.0 || eta > 1.0) throw config_error("loss efficiency must lie in [0,1]");
    const ModeSpec& spec = state.spec();
    const int im = spec.index_of(mode);
    if (spec.mode(im).kind != ModeKind::photon)
        throw config_error("loss channel needs a photon mode");

    ModeSpec anc_spec(std::vector<Mode>{Mode::photon(k_loss_ancilla, spec.mode(im).n_max)},
                      spec.dimension_cap());
    ModeState joint = tensor(state, ModeState::vacuum(anc_spec));
    joint = apply_beam_splitter(joint, mode, k_loss_ancilla, eta);

    std::vector<std::string> keep;
    for (const auto& m : spec.modes()) keep.push_back(m.label);
    return partial_trace(joint, keep);
}

DensityState apply_loss(const DensityState& state, std::string_view mode, double eta) {
    if (eta < 0.0 || eta > 1.0) throw config_error("loss efficiency must lie in [0,1]");
    const ModeSpec& spec = state.spec();
    const int im = spec.index_of(mode);
    if (spec.mode(im).kind != ModeKind::photon)
        throw config_error("loss channel needs a photon mode");

    std::vector<Mode> modes = spec.modes();
    modes.push_back(Mode::photon(k_loss_ancilla, spec.mode(im).n_max));
    ModeSpec joint_spec(std::move(modes), spec.dimension_cap());
    const auto dim = spec.dimension();
    const auto jdim = joint_spec.dimension();
    const auto anc_dim = static_cast<std::size_t>(spec.mode(im).n_max + 1);

    // rho (x) |0><0| on the ancilla; the ancilla is the fastest digit.
    Eigen::MatrixXcd joint = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(jdim),
                                                    static_cast<Eigen::Index>(jdim));
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j)
            joint(static_cast<Eigen::Index>(i * anc_dim),
                  static_cast<Eigen::Index>(j * anc_dim)) =
                state.matrix()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));

    // Build the splitter unitary column by column via the pure-state engine.
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(jdim),
                                                static_cast<Eigen::Index>(jdim));
    std::vector<int> occ(static_cast<std::size_t>(joint_spec.mode_count()));
    for (std::size_t col = 0; col < jdim; ++col) {
        joint_spec.occupation_of(col, occ);
        const int n_mode = occ[static_cast<std::size_t>(joint_spec.index_of(mode))];
        const int n_anc = occ[static_cast<std::size_t>(joint_spec.index_of(k_loss_ancilla))];
        if (n_mode + n_anc > spec.mode(im).n_max) continue;  // unreachable sector
        ModeState basis_state = ModeState::basis(joint_spec, occ);
        ModeState mapped = apply_beam_splitter(basis_state, mode, k_loss_ancilla, eta);
        for (std::size_t row = 0; row < jdim; ++row)
            u(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) =
                mapped.amplitudes()[row];
    }
    Eigen::MatrixXcd evolved = u * joint * u.adjoint();

    std::vector<std::string> keep;
    for (const auto& m : spec.modes()) keep.push_back(m.label);
    return partial_trace(DensityState(joint_spec, std::move(evolved)), keep);
}

cplx correlator(const ModeState& state, std::span<const std::string> creation,
                std::span<const std::string> annihilation) {
    std::vector<std::string> rev(creation.begin(), creation.end());
    std::reverse(rev.begin(), rev.end());
    const auto left = lower_product(state.spec(), state.amplitudes(), rev);
    const auto right = lower_product(state.spec(), state.amplitudes(), annihilation);
    return inner(left, right);
}

cplx correlator(const DensityState& state, std::span<const std::string> creation,
                std::span<const std::string> annihilation) {
    const ModeSpec& spec = state.spec();
    const auto dim = spec.dimension();

    // A product of annihilation operators maps each basis vector to a single
    // scaled basis vector; collect (target, scale) for both label lists.
    auto basis_map = [&](std::span<const std::string> labels) {
        std::vector<std::pair<std::size_t, double>> map(dim);
        std::vector<int> modes;
        for (const auto& l : labels) {
            const int m = spec.index_of(l);
            if (spec.mode(m).kind != ModeKind::photon)
                throw config_error("correlator: '" + l + "' is not a photon mode");
            modes.push_back(m);
        }
        for (std::size_t i = 0; i < dim; ++i) {
            std::size_t idx = i;
            double scale = 1.0;
            for (int m : modes) {
                const int n = spec.occupation_of(idx, m);
                if (n == 0) {
                    scale = 0.0;
                    break;
                }
                scale *= std::sqrt(static_cast<double>(n));
                idx -= spec.stride(m);
            }
            map[i] = {idx, scale};
        }
        return map;
    };

    const auto cmap = basis_map(creation);
    const auto amap = basis_map(annihilation);

    // Tr(rho a+_C a_D) with <i|a+_C a_D|j> = conj(c_i) a_j delta(tC_i, tD_j).
    cplx sum{0.0, 0.0};
    for (std::size_t i = 0; i < dim; ++i) {
        if (cmap[i].second == 0.0) continue;
        for (std::size_t j = 0; j < dim; ++j) {
            if (amap[j].second == 0.0) continue;
            if (cmap[i].first != amap[j].first) continue;
            sum += state.matrix()(static_cast<Eigen::Index>(j),
                                  static_cast<Eigen::Index>(i)) *
                   cmap[i].second * amap[j].second;
        }
    }
    return sum;
}

namespace {

struct TraceLayout {
    ModeSpec kept_spec;
    std::vector<std::size_t> kept_index;    // flat index contribution per kept combo
    std::vector<std::size_t> traced_index;  // per traced combo
};

TraceLayout trace_layout(const ModeSpec& spec, std::span<const std::string> keep) {
    if (keep.empty()) throw config_error("partial trace must keep at least one mode");
    std::vector<int> keep_modes;
    for (const auto& l : keep) keep_modes.push_back(spec.index_of(l));
    std::set<int> keep_set(keep_modes.begin(), keep_modes.end());
    if (keep_set.size() != keep_modes.size())
        throw config_error("partial trace keep-set has duplicates");

    std::vector<Mode> kept;
    for (int m : keep_modes) kept.push_back(spec.mode(m));
    TraceLayout out{ModeSpec(std::move(kept), spec.dimension_cap()), {}, {}};

    std::vector<int> traced_modes;
    for (int m = 0; m < spec.mode_count(); ++m)
        if (!keep_set.count(m)) traced_modes.push_back(m);

    const auto enumerate = [&](const std::vector<int>& modes) {
        std::vector<std::size_t> flat{0};
        for (int m : modes) {
            std::vector<std::size_t> next;
            next.reserve(flat.size() * static_cast<std::size_t>(spec.mode(m).dim()));
            for (std::size_t base : flat)
                for (int n = 0; n < spec.mode(m).dim(); ++n)
                    next.push_back(base + static_cast<std::size_t>(n) * spec.stride(m));
            flat = std::move(next);
        }
        return flat;
    };
    out.kept_index = enumerate(keep_modes);
    out.traced_index = enumerate(traced_modes);
    return out;
}

}  // namespace

DensityState partial_trace(const ModeState& state, std::span<const std::string> keep) {
    auto layout = trace_layout(state.spec(), keep);
    const auto kd = static_cast<Eigen::Index>(layout.kept_spec.dimension());
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(kd, kd);
    const auto amp = state.amplitudes();
    for (std::size_t e = 0; e < layout.traced_index.size(); ++e) {
        const std::size_t te = layout.traced_index[e];
        for (std::size_t a = 0; a < layout.kept_index.size(); ++a) {
            const cplx va = amp[layout.kept_index[a] + te];
            if (va == cplx{0.0, 0.0}) continue;
            for (std::size_t b = 0; b < layout.kept_index.size(); ++b) {
                const cplx vb = amp[layout.kept_index[b] + te];
                rho(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) +=
                    va * std::conj(vb);
            }
        }
    }
    return DensityState(layout.kept_spec, std::move(rho));
}

DensityState partial_trace(const DensityState& state, std::span<const std::string> keep) {
    auto layout = trace_layout(state.spec(), keep);
    const auto kd = static_cast<Eigen::Index>(layout.kept_spec.dimension());
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(kd, kd);
    for (std::size_t e = 0; e < layout.traced_index.size(); ++e) {
        const std::size_t te = layout.traced_index[e];
        for (std::size_t a = 0; a < layout.kept_index.size(); ++a)
            for (std::size_t b = 0; b < layout.kept_index.size(); ++b)
                rho(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) +=
                    state.matrix()(static_cast<Eigen::Index>(layout.kept_index[a] + te),
                                   static_cast<Eigen::Index>(layout.kept_index[b] + te));
    }
    return DensityState(layout.kept_spec, std::move(rho));
}

ModeState relabel(const ModeState& state, std::span<const std::string> from,
                  std::span<const std::string> to) {
    if (from.size() != to.size()) throw config_error("relabel lists differ in size");
    std::vector<Mode> modes = state.spec().modes();
    for (std::size_t i = 0; i < from.size(); ++i) {
        const int m = state.spec().index_of(from[i]);
        modes[static_cast<std::size_t>(m)].label = to[i];
    }
    ModeSpec spec(std::move(modes), state.spec().dimension_cap());
    return ModeState(std::move(spec),
                     std::vector<cplx>(state.amplitudes().begin(), state.amplitudes().end()));
}

ModeState permute_modes(const ModeState& state, std::span<const std::string> new_order) {
    const ModeSpec& spec = state.spec();
    if (static_cast<int>(new_order.size()) != spec.mode_count())
        throw config_error("permutation must list every mode");
    std::vector<int> order;
    for (const auto& l : new_order) order.push_back(spec.index_of(l));
    std::set<int> dedup(order.begin(), order.end());
    if (dedup.size() != order.size()) throw config_error("permutation repeats a mode");

    std::vector<Mode> modes;
    for (int m : order) modes.push_back(spec.mode(m));
    ModeSpec new_spec(std::move(modes), spec.dimension_cap());

    std::vector<cplx> amp(spec.dimension());
    std::vector<int> occ(static_cast<std::size_t>(spec.mode_count()));
    std::vector<int> new_occ(occ.size());
    for (std::size_t i = 0; i < spec.dimension(); ++i) {
        spec.occupation_of(i, occ);
        for (std::size_t k = 0; k < order.size(); ++k)
            new_occ[k] = occ[static_cast<std::size_t>(order[k])];
        amp[new_spec.flat_index(new_occ)] = state.amplitudes()[i];
    }
    return ModeState(std::move(new_spec), std::move(amp));
}

double quadratic_expectation(const ModeState& state, std::span<const LoweringTerm> terms) {
    std::vector<cplx> acc(state.spec().dimension(), cplx{0.0, 0.0});
    for (const auto& t : terms) {
        const auto v = lower_product(state.spec(), state.amplitudes(), t.labels);
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += t.coefficient * v[i];
    }
    double s = 0.0;
    for (const auto& a : acc) s += std::norm(a);
    return s;
}

std::string debug_json(const ModeState& state) {
    std::ostringstream os;
    os.precision(17);
    os << "[";
    bool first = true;
    for (std::size_t i = 0; i < state.spec().dimension(); ++i) {
        const cplx a = state.amplitudes()[i];
        if (std::abs(a) == 0.0) continue;
        if (!first) os << ",";
        os << "[\"" << state.spec().basis_string(i) << "\"," << a.real() << ","
           << a.imag() << "]";
        first = false;
    }
    os << "]";
    return os.str();
}

}  // namespace rfsim::fock

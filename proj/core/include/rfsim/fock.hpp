#pragma once

#include <complex>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "rfsim/errors.hpp"

// Exact state-vector engine for few-mode truncated Fock spaces with
// two-level matter ancillas. Dense mixed-radix storage; all values are
// immutable after construction and every operation returns a new value.
namespace rfsim::fock {

using cplx = std::complex<double>;

// Amplitudes smaller than this count as unpopulated when scanning for
// truncation overflow.
inline constexpr double k_amp_zero_tol = 1e-12;
inline constexpr double k_norm_tol = 1e-12;
inline constexpr double k_trace_tol = 1e-12;
inline constexpr double k_herm_tol = 1e-12;
inline constexpr double k_psd_tol = -1e-10;

enum class ModeKind : std::uint8_t { photon, matter };

struct Mode {
    std::string label;
    ModeKind kind = ModeKind::photon;
    int n_max = 2;  // matter modes always have n_max = 1 (basis {g,e})

    int dim() const { return n_max + 1; }

    static Mode photon(std::string label, int n_max = 2) {
        return Mode{std::move(label), ModeKind::photon, n_max};
    }
    static Mode matter(std::string label) {
        return Mode{std::move(label), ModeKind::matter, 1};
    }
};

// Ordered list of modes. The flat basis index is mixed-radix with the
// first declared mode varying slowest, so concatenating specs matches a
// plain Kronecker product of amplitude vectors.
class ModeSpec {
public:
    static constexpr std::size_t default_dimension_cap = 1'000'000;

    ModeSpec() = default;
    explicit ModeSpec(std::vector<Mode> modes,
                      std::size_t dimension_cap = default_dimension_cap);

    const std::vector<Mode>& modes() const { return modes_; }
    std::size_t dimension() const { return dim_; }
    std::size_t dimension_cap() const { return cap_; }
    int mode_count() const { return static_cast<int>(modes_.size()); }

    int index_of(std::string_view label) const;        // throws config_error
    const Mode& mode(int i) const { return modes_.at(static_cast<std::size_t>(i)); }
    std::size_t stride(int i) const { return strides_.at(static_cast<std::size_t>(i)); }

    std::size_t flat_index(std::span<const int> occupation) const;
    void occupation_of(std::size_t index, std::span<int> occupation) const;
    int occupation_of(std::size_t index, int mode) const;

    bool operator==(const ModeSpec& other) const;
    // e.g. "|1,0;g,e>" (photon counts, then matter letters, declared order)
    std::string basis_string(std::size_t index) const;

private:
    std::vector<Mode> modes_;
    std::vector<std::size_t> strides_;
    std::size_t dim_ = 1;
    std::size_t cap_ = default_dimension_cap;
};

class ModeState {
public:
    ModeState() = default;
    // Checks unit norm within k_norm_tol.
    ModeState(ModeSpec spec, std::vector<cplx> amplitudes);

    static ModeState vacuum(ModeSpec spec);
    static ModeState basis(ModeSpec spec, std::span<const int> occupation);
    static ModeState basis(ModeSpec spec, std::initializer_list<int> occupation);

    const ModeSpec& spec() const { return spec_; }
    std::span<const cplx> amplitudes() const { return amp_; }
    cplx amplitude(std::span<const int> occupation) const;
    cplx amplitude(std::initializer_list<int> occupation) const;
    double norm() const;

private:
    ModeSpec spec_;
    std::vector<cplx> amp_;
};

class DensityState {
public:
    DensityState() = default;
    // Checks trace 1, hermiticity, and positive semidefiniteness.
    DensityState(ModeSpec spec, Eigen::MatrixXcd rho);

    static DensityState from_pure(const ModeState& psi);

    const ModeSpec& spec() const { return spec_; }
    const Eigen::MatrixXcd& matrix() const { return rho_; }
    double purity() const;

private:
    ModeSpec spec_;
    Eigen::MatrixXcd rho_;
};

// Kronecker product in declared order; labels must stay unique and the
// combined dimension under the cap.
ModeState tensor(std::span<const ModeState> states);
ModeState tensor(const ModeState& a, const ModeState& b);
ModeState tensor(const ModeState& a, const ModeState& b, const ModeState& c);

// Two-mode linear-optical unitary on photon modes a,b of equal truncation:
//   a+ -> sqrt(T) a+ + sqrt(1-T) e^{+i phase} b+
//   b+ -> sqrt(1-T) e^{-i phase} a+ - sqrt(T) b+
// At T = 1/2, phase = 0 this is (a,b) -> ((a+b)/sqrt2, (a-b)/sqrt2).
// Throws numeric_error if a populated basis element would overflow the
// shared truncation (total photons in the pair > n_max).
ModeState apply_beam_splitter(const ModeState& state, std::string_view mode_a,
                              std::string_view mode_b, double transmissivity,
                              double phase = 0.0);

// |n> gains e^{i n phi}.
ModeState apply_phase(const ModeState& state, std::string_view mode, double phi);

// Beam-splitter of transmissivity eta against a fresh vacuum ancilla,
// ancilla traced out. Trace preserving.
DensityState apply_loss(const ModeState& state, std::string_view mode, double eta);
DensityState apply_loss(const DensityState& state, std::string_view mode, double eta);

// <a+_{c1}...a+_{ck} a_{d1}...a_{dl}> for photon-label multisets.
cplx correlator(const ModeState& state, std::span<const std::string> creation,
                std::span<const std::string> annihilation);
cplx correlator(const DensityState& state, std::span<const std::string> creation,
                std::span<const std::string> annihilation);

DensityState partial_trace(const ModeState& state, std::span<const std::string> keep);
DensityState partial_trace(const DensityState& state, std::span<const std::string> keep);

// Rename modes without touching amplitudes. `from` and `to` are parallel.
ModeState relabel(const ModeState& state, std::span<const std::string> from,
                  std::span<const std::string> to);

// Reorder modes; `new_order` lists current labels in their new positions.
ModeState permute_modes(const ModeState& state, std::span<const std::string> new_order);

// Expectation <(sum_i c_i A_i)+ (sum_j c_j A_j)> where each A_i is a
// product of annihilation operators given by a label list. This is the
// workhorse for the coincidence oracles.
struct LoweringTerm {
    cplx coefficient;
    std::vector<std::string> labels;
};
double quadratic_expectation(const ModeState& state, std::span<const LoweringTerm> terms);

// Debug dump: list of (basis-string, re, im), zero amplitudes skipped.
std::string debug_json(const ModeState& state);

}  // namespace rfsim::fock

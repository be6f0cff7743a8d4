#pragma once

#include <array>
#include <cmath>
#include <random>
#include <vector>

#include "rfsim/fock.hpp"

namespace rfsim::test {

struct TestRng {
    std::mt19937_64 gen;
    explicit TestRng(std::uint64_t seed) : gen(seed) {}
    double uniform() { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    double gaussian() {
        // Box-Muller keeps the draws identical across standard libraries.
        const double u1 = std::max(uniform(), 1e-300);
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }
    // Uniform draw on the probability simplex {p0,p1,p2}.
    std::array<double, 3> simplex3() {
        double a = -std::log(std::max(uniform(), 1e-300));
        double b = -std::log(std::max(uniform(), 1e-300));
        double c = -std::log(std::max(uniform(), 1e-300));
        const double s = a + b + c;
        return {a / s, b / s, c / s};
    }
};

inline fock::ModeState random_state(const fock::ModeSpec& spec, TestRng& rng) {
    std::vector<fock::cplx> amp(spec.dimension());
    double norm = 0.0;
    for (auto& a : amp) {
        a = fock::cplx{rng.gaussian(), rng.gaussian()};
        norm += std::norm(a);
    }
    norm = std::sqrt(norm);
    for (auto& a : amp) a /= norm;
    return fock::ModeState(spec, std::move(amp));
}

inline double max_amplitude_difference(const fock::ModeState& a, const fock::ModeState& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.spec().dimension(); ++i)
        m = std::max(m, std::abs(a.amplitudes()[i] - b.amplitudes()[i]));
    return m;
}

}  // namespace rfsim::test

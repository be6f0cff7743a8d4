#include "doctest.h"

#include <cmath>
#include <complex>
#include <vector>

#include "rfsim/emitter.hpp"
#include "rfsim/fock.hpp"
#include "test_util.hpp"

using namespace rfsim;
using fock::cplx;
using fock::Mode;
using fock::ModeSpec;
using fock::ModeState;
using rfsim::test::TestRng;

namespace {

ModeSpec one_photon_mode(const std::string& label, int n_max = 2) {
    return ModeSpec({Mode::photon(label, n_max)});
}

}  // namespace

TEST_CASE("tensor of basis states places the product amplitude") {
    auto a = ModeState::basis(one_photon_mode("a", 1), {1});
    auto b = ModeState::basis(one_photon_mode("b", 1), {0});
    auto ab = tensor(a, b);
    CHECK(std::abs(ab.amplitude({1, 0}) - cplx{1.0, 0.0}) < 1e-15);
    CHECK(std::abs(ab.amplitude({0, 0})) == 0.0);
}

TEST_CASE("tensor of two steady states reproduces the four matter sectors") {
    EmitterParams p;
    p.p0 = 0.5;
    p.p1 = 0.5;
    auto early = steady_state(p, "pE", "mE");
    auto late = steady_state(p, "pL", "mL");
    auto joint = tensor(early, late);
    // Photon-vacuum weights of the gg, ge, eg, ee matter sectors; the
    // joint mode order is (pE, mE, pL, mL).
    CHECK(std::norm(joint.amplitude({0, 0, 0, 0})) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(std::norm(joint.amplitude({0, 0, 0, 1})) == doctest::Approx(0.125).epsilon(1e-12));
    CHECK(std::norm(joint.amplitude({0, 1, 0, 0})) == doctest::Approx(0.125).epsilon(1e-12));
    CHECK(std::norm(joint.amplitude({0, 1, 0, 1})) == doctest::Approx(0.0625).epsilon(1e-12));
    CHECK(joint.norm() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("tensor norm stays 1 for three random factors") {
    TestRng rng(11);
    auto a = rfsim::test::random_state(one_photon_mode("a"), rng);
    auto b = rfsim::test::random_state(one_photon_mode("b", 1), rng);
    auto c = rfsim::test::random_state(ModeSpec({Mode::matter("m")}), rng);
    CHECK(tensor(a, b, c).norm() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("tensor rejects label collisions and cap violations") {
    auto a = ModeState::vacuum(one_photon_mode("a"));
    CHECK_THROWS_AS(tensor(a, a), config_error);
    CHECK_THROWS_AS(ModeSpec({Mode::photon("x", 100), Mode::photon("y", 100),
                              Mode::photon("z", 100)}),
                    config_error);
}

TEST_CASE("HOM coalescence at the 50:50 splitter") {
    ModeSpec spec({Mode::photon("a"), Mode::photon("b")});
    auto in = ModeState::basis(spec, {1, 1});
    auto out = apply_beam_splitter(in, "a", "b", 0.5);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(out.amplitude({1, 1})) < 1e-14);
    CHECK(std::abs(out.amplitude({2, 0}) - cplx{inv_sqrt2, 0.0}) < 1e-14);
    CHECK(std::abs(out.amplitude({0, 2}) + cplx{inv_sqrt2, 0.0}) < 1e-14);
}

TEST_CASE("identity splitter and single-photon splitting") {
    ModeSpec spec({Mode::photon("a"), Mode::photon("b")});
    auto in = ModeState::basis(spec, {1, 0});
    auto through = apply_beam_splitter(in, "a", "b", 1.0);
    CHECK(std::abs(through.amplitude({1, 0}) - cplx{1.0, 0.0}) < 1e-14);

    auto split = apply_beam_splitter(in, "a", "b", 0.5);
    CHECK(std::abs(split.amplitude({1, 0})) ==
          doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
    CHECK(std::abs(split.amplitude({0, 1})) ==
          doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("beam splitter detects truncation overflow") {
    ModeSpec spec({Mode::photon("a", 1), Mode::photon("b", 1)});
    auto in = ModeState::basis(spec, {1, 1});
    CHECK_THROWS_AS(apply_beam_splitter(in, "a", "b", 0.5), numeric_error);
    CHECK_THROWS_AS(apply_beam_splitter(in, "a", "nope", 0.5), config_error);
}

TEST_CASE("beam splitter unitarity and photon-number conservation, property") {
    TestRng rng(23);
    ModeSpec spec({Mode::photon("a"), Mode::photon("b"), Mode::matter("m")});
    const std::vector<std::string> la{"a"}, lb{"b"};
    for (int trial = 0; trial < 50; ++trial) {
        // Restrict to the subspace with <= 2 photons in the pair.
        std::vector<cplx> amp(spec.dimension(), cplx{0.0, 0.0});
        double norm = 0.0;
        for (std::size_t i = 0; i < spec.dimension(); ++i) {
            if (spec.occupation_of(i, 0) + spec.occupation_of(i, 1) > 2) continue;
            amp[i] = cplx{rng.gaussian(), rng.gaussian()};
            norm += std::norm(amp[i]);
        }
        norm = std::sqrt(norm);
        for (auto& a : amp) a /= norm;
        ModeState state(spec, std::move(amp));

        const double t = rng.uniform();
        const double phase = rng.uniform(0.0, 2.0 * M_PI);
        auto out = apply_beam_splitter(state, "a", "b", t, phase);
        CHECK(out.norm() == doctest::Approx(1.0).epsilon(1e-12));
        const double n_in = fock::correlator(state, la, la).real() +
                            fock::correlator(state, lb, lb).real();
        const double n_out = fock::correlator(out, la, la).real() +
                             fock::correlator(out, lb, lb).real();
        CHECK(n_out == doctest::Approx(n_in).epsilon(1e-12));

        auto phased = apply_phase(state, "a", rng.uniform(0.0, 2.0 * M_PI));
        CHECK(phased.norm() == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("phase shifter examples") {
    auto spec = one_photon_mode("a");
    auto one = ModeState::basis(spec, {1});
    auto minus = apply_phase(one, "a", M_PI);
    CHECK(std::abs(minus.amplitude({1}) + cplx{1.0, 0.0}) < 1e-14);

    auto two = ModeState::basis(spec, {2});
    auto rotated = apply_phase(two, "a", M_PI / 2.0);
    CHECK(std::abs(rotated.amplitude({2}) + cplx{1.0, 0.0}) < 1e-14);

    auto vac = ModeState::vacuum(spec);
    auto still = apply_phase(vac, "a", 1.234);
    CHECK(std::abs(still.amplitude({0}) - cplx{1.0, 0.0}) < 1e-15);
}

TEST_CASE("loss channel limits") {
    auto spec = one_photon_mode("a");
    auto one = ModeState::basis(spec, {1});

    auto kept = apply_loss(one, "a", 1.0);
    CHECK(std::abs(kept.matrix()(1, 1) - cplx{1.0, 0.0}) < 1e-12);

    auto gone = apply_loss(one, "a", 0.0);
    CHECK(std::abs(gone.matrix()(0, 0) - cplx{1.0, 0.0}) < 1e-12);
    CHECK_THROWS_AS(apply_loss(one, "a", 1.5), config_error);
}

TEST_CASE("g2 is invariant under loss") {
    TestRng rng(37);
    auto spec = one_photon_mode("a", 3);
    const std::vector<std::string> l1{"a"}, l2{"a", "a"};
    for (int trial = 0; trial < 20; ++trial) {
        auto state = rfsim::test::random_state(spec, rng);
        const double g2_before = fock::correlator(state, l2, l2).real() /
                                 std::pow(fock::correlator(state, l1, l1).real(), 2);
        auto lossy = apply_loss(state, "a", 0.3);
        const double g2_after = fock::correlator(lossy, l2, l2).real() /
                                std::pow(fock::correlator(lossy, l1, l1).real(), 2);
        CHECK(g2_after == doctest::Approx(g2_before).epsilon(1e-10));
    }
}

TEST_CASE("normalized g1 is invariant under loss on both modes") {
    TestRng rng(41);
    ModeSpec spec({Mode::photon("a"), Mode::photon("b")});
    const std::vector<std::string> la{"a"}, lb{"b"};
    for (int trial = 0; trial < 10; ++trial) {
        auto state = rfsim::test::random_state(spec, rng);
        auto g1 = [&](const auto& s) {
            const cplx num = fock::correlator(s, la, lb);
            const double den = std::sqrt(fock::correlator(s, la, la).real() *
                                         fock::correlator(s, lb, lb).real());
            return num / den;
        };
        const cplx before = g1(state);
        auto lossy = apply_loss(apply_loss(state, "a", 0.5), "b", 0.5);
        const cplx after = g1(lossy);
        CHECK(std::abs(before - after) < 1e-10);
    }
}

TEST_CASE("correlator examples") {
    auto spec = one_photon_mode("a");
    auto one = ModeState::basis(spec, {1});
    const std::vector<std::string> l1{"a"}, l2{"a", "a"};
    CHECK(fock::correlator(one, l1, l1).real() == doctest::Approx(1.0));

    auto two = ModeState::basis(spec, {2});
    CHECK(fock::correlator(two, l2, l2).real() == doctest::Approx(2.0));
}

TEST_CASE("two-time field correlator reproduces the coherence plateau") {
    EmitterParams p;
    p.p0 = 0.7;
    p.p1 = 0.3;
    auto early = steady_state(p, "pA", "mA");
    auto late = steady_state(p, "pB", "mB");
    auto joint = tensor(early, late);
    const std::vector<std::string> la{"pA"}, lb{"pB"};
    const cplx num = fock::correlator(joint, lb, la);  // <a+_{t+tau} a_t>
    const double flux = fock::correlator(joint, la, la).real();
    CHECK(flux == doctest::Approx(p.p1 / 2.0).epsilon(1e-12));
    CHECK(std::abs(num) / flux == doctest::Approx(p.p0).epsilon(1e-12));
}

TEST_CASE("density correlator matches the pure-state correlator") {
    TestRng rng(53);
    ModeSpec spec({Mode::photon("a"), Mode::photon("b", 1)});
    const std::vector<std::string> sets[] = {{"a"}, {"b"}, {"a", "b"}, {"a", "a"}};
    for (int trial = 0; trial < 10; ++trial) {
        auto state = rfsim::test::random_state(spec, rng);
        auto rho = fock::DensityState::from_pure(state);
        for (const auto& c : sets)
            for (const auto& d : sets) {
                const cplx pure = fock::correlator(state, c, d);
                const cplx dens = fock::correlator(rho, c, d);
                CHECK(std::abs(pure - dens) < 1e-12);
            }
    }
}

TEST_CASE("partial trace of the steady state gives the reduced photon density") {
    EmitterParams p;
    p.p0 = 0.5;
    p.p1 = 0.5;
    auto state = steady_state(p, "a", "m");
    const std::vector<std::string> keep{"a"};
    auto rho = fock::partial_trace(state, keep);
    CHECK(rho.matrix()(1, 1).real() == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(std::abs(rho.matrix()(1, 0)) == doctest::Approx(std::sqrt(0.125)).epsilon(1e-12));
}

TEST_CASE("partial trace of a product state is the factor") {
    TestRng rng(67);
    auto a = rfsim::test::random_state(one_photon_mode("a"), rng);
    auto b = rfsim::test::random_state(one_photon_mode("b"), rng);
    auto joint = tensor(a, b);
    const std::vector<std::string> keep{"a"};
    auto rho = fock::partial_trace(joint, keep);
    auto pure = fock::DensityState::from_pure(a);
    CHECK((rho.matrix() - pure.matrix()).cwiseAbs().maxCoeff() < 1e-13);
    CHECK(rho.purity() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("reduced state of a maximally entangled pair has purity 1/2") {
    ModeSpec spec({Mode::photon("a", 1), Mode::matter("m")});
    std::vector<cplx> amp(spec.dimension(), cplx{0.0, 0.0});
    const std::vector<int> zero_g{0, 0}, one_e{1, 1};
    amp[spec.flat_index(zero_g)] = 1.0 / std::sqrt(2.0);
    amp[spec.flat_index(one_e)] = 1.0 / std::sqrt(2.0);
    ModeState bell(spec, std::move(amp));
    const std::vector<std::string> keep{"a"};
    CHECK(fock::partial_trace(bell, keep).purity() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK_THROWS_AS(fock::partial_trace(bell, std::vector<std::string>{}), config_error);
}

TEST_CASE("kronecker associativity") {
    TestRng rng(71);
    auto x = rfsim::test::random_state(one_photon_mode("x", 1), rng);
    auto y = rfsim::test::random_state(one_photon_mode("y"), rng);
    auto z = rfsim::test::random_state(ModeSpec({Mode::matter("z")}), rng);
    auto left = tensor(tensor(x, y), z);
    auto right = tensor(x, tensor(y, z));
    CHECK(rfsim::test::max_amplitude_difference(left, right) < 1e-14);
}

TEST_CASE("permute_modes relocates amplitudes consistently") {
    TestRng rng(73);
    ModeSpec spec({Mode::photon("a", 1), Mode::photon("b", 2), Mode::matter("m")});
    auto state = rfsim::test::random_state(spec, rng);
    const std::vector<std::string> order{"m", "a", "b"};
    auto permuted = fock::permute_modes(state, order);
    const std::vector<int> occ{1, 2, 1};
    const std::vector<int> pocc{1, 1, 2};
    CHECK(std::abs(state.amplitude(occ) - permuted.amplitude(pocc)) < 1e-15);
    // Round trip back to the original order.
    const std::vector<std::string> back{"a", "b", "m"};
    auto restored = fock::permute_modes(permuted, back);
    CHECK(rfsim::test::max_amplitude_difference(state, restored) < 1e-15);
}

TEST_CASE("density invariants reject bad matrices") {
    auto spec = one_photon_mode("a", 1);
    Eigen::MatrixXcd bad_trace = Eigen::MatrixXcd::Identity(2, 2);
    CHECK_THROWS_AS(fock::DensityState(spec, bad_trace), numeric_error);

    Eigen::MatrixXcd non_herm(2, 2);
    non_herm << cplx{0.5, 0.0}, cplx{0.2, 0.1}, cplx{0.2, -0.3}, cplx{0.5, 0.0};
    CHECK_THROWS_AS(fock::DensityState(spec, non_herm), numeric_error);

    Eigen::MatrixXcd negative(2, 2);
    negative << cplx{1.2, 0.0}, cplx{0.0, 0.0}, cplx{0.0, 0.0}, cplx{-0.2, 0.0};
    CHECK_THROWS_AS(fock::DensityState(spec, negative), numeric_error);
}

TEST_CASE("debug dump lists populated basis elements") {
    EmitterParams p;
    p.p0 = 0.5;
    p.p1 = 0.5;
    auto state = steady_state(p, "a", "m");
    const auto dump = fock::debug_json(state);
    CHECK(dump.find("|0;g>") != std::string::npos);
    CHECK(dump.find("|1;g>") != std::string::npos);
    CHECK(dump.find("|2;") == std::string::npos);
}

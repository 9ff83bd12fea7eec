#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "barron/tikhonov.hpp"
#include "oracles.hpp"

using namespace barron;
using Half = std::vector<std::pair<Frequency, Complex>>;

namespace {

Frequency K(std::vector<int> k) { return Frequency(std::move(k)); }

struct Instance {
    SymbolDescriptor phi;
    SpectralFunction y;
    double lambda;
    double p;
};

Instance random_instance(std::uint64_t seed, int max_pairs) {
    StreamRng rng({seed, 77});
    const int pairs = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_pairs));
    const auto y = random_spectral_function(2, pairs, 4, rng);
    const double alpha = 0.5 + 2.0 * rng.uniform();
    const auto phi = (rng() & 1u) ? SymbolDescriptor::resolvent(alpha)
                                  : SymbolDescriptor::bracket_power(-1.0 - 2.0 * rng.uniform());
    const double lambda = std::exp(std::log(1e-3) + rng.uniform() * std::log(1e4));
    const double p = 0.5 + 3.0 * rng.uniform();
    return {phi, y, lambda, p};
}

oracle::ReducedTikhonov reduce(const Instance& in) { return {in.phi, in.y, in.lambda, in.p}; }

SpectralFunction from_t(const Instance& in, const std::vector<double>& t) {
    Half half;
    std::size_t i = 0;
    for (const auto& [k, c] : in.y.half_lattice()) half.emplace_back(k, t[i++] * c / in.phi(k));
    return SpectralFunction::from_half_lattice(in.y.dim(), half);
}

}  // namespace

TEST(Objective, ReducedFormMatchesNorms) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto in = random_instance(seed, 5);
        const auto red = reduce(in);
        StreamRng rng(seed);
        std::vector<double> t(red.mass.size());
        for (double& v : t) v = rng.uniform();
        EXPECT_NEAR(red(t), tikhonov_objective(in.phi, in.y, in.lambda, in.p, from_t(in, t)),
                    1e-12 * (1 + red(t)));
    }
}

TEST(Solver, NeverWorseThanBruteForce) {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const auto in = random_instance(seed, 6);
        const auto sol = solve_tikhonov(in.phi, in.y, in.lambda, in.p);
        const double j = tikhonov_objective(in.phi, in.y, in.lambda, in.p, sol.u_delta);
        EXPECT_NEAR(j, sol.objective, 1e-12 * (1 + j));
        EXPECT_LE(j, oracle::brute_force_tikhonov(reduce(in)) + 1e-6) << "seed " << seed;
    }
}

TEST(Solver, PerturbationsDoNotDecreaseObjective) {
    // Moves outside the phase-aligned family: rotate phases, add new atoms.
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto in = random_instance(seed, 6);
        const auto sol = solve_tikhonov(in.phi, in.y, in.lambda, in.p);
        const double j0 = tikhonov_objective(in.phi, in.y, in.lambda, in.p, sol.u_delta);
        StreamRng rng({seed, 3});
        for (int trial = 0; trial < 20; ++trial) {
            const auto dir = random_spectral_function(2, 3, 5, rng);
            for (double eps : {1e-3, 1e-2, 1e-1}) {
                const auto v = sol.u_delta + (eps / barron_norm(dir, 0.0)) * dir;
                EXPECT_GE(tikhonov_objective(in.phi, in.y, in.lambda, in.p, v), j0 * (1 - 1e-12));
            }
        }
    }
}

TEST(Solver, AtMostOneFractionalPair) {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto in = random_instance(seed, 6);
        const auto sol = solve_tikhonov(in.phi, in.y, in.lambda, in.p);
        int fractional = 0;
        for (const auto& [k, c] : sol.u_delta.half_lattice()) {
            const double t = std::abs(c * in.phi(k) / in.y.coefficient(k));
            EXPECT_LE(t, 1.0 + 1e-12);
            if (t < 1.0 - 1e-12) ++fractional;
        }
        EXPECT_LE(fractional, 1);
        if (fractional == 1) {
            EXPECT_TRUE(sol.fractional_index.has_value());
        }
    }
}

TEST(Solver, SingleFrequencyClosedForm) {
    // t = 1 - lambda w / (2 ||y||_{B^0} phi) whenever positive.
    const auto phi = SymbolDescriptor::resolvent(1.5);
    for (const auto& k : {K({0, 0}), K({2, -1}), K({0, 3})}) {
        for (double lambda : {1e-3, 0.05, 0.4}) {
            const Complex c = k.is_zero() ? Complex(0.9, 0.0) : Complex(0.3, -0.4);
            const auto y = SpectralFunction::from_half_lattice(2, Half{{k, c}});
            const double p = 2.0;
            const double w = std::pow(bracket(k), p);
            const double t = std::max(0.0, 1.0 - lambda * w / (2.0 * barron_norm(y, 0.0) * phi(k)));
            const auto sol = solve_tikhonov(phi, y, lambda, p);
            EXPECT_NEAR(std::abs(sol.u_delta.coefficient(k)), t * std::abs(c) / phi(k), 1e-9);
        }
    }
}

TEST(Solver, ZeroLambdaInvertsExactly) {
    const auto in = random_instance(5, 6);
    const auto sol = solve_tikhonov(in.phi, in.y, 0.0, in.p);
    EXPECT_NEAR(barron_norm(apply_symbol(in.phi, sol.u_delta) - in.y, 0.0), 0.0, 1e-13);
}

TEST(Solver, LargeLambdaGivesZero) {
    const auto in = random_instance(6, 6);
    EXPECT_TRUE(solve_tikhonov(in.phi, in.y, 1e12, in.p).u_delta.is_zero());
}

TEST(Solver, RejectsVanishingSymbol) {
    const auto y = SpectralFunction::from_half_lattice(2, Half{{K({100, 0}), Complex(1.0, 0.0)}});
    EXPECT_THROW(solve_tikhonov(SymbolDescriptor::bracket_power(-400.0), y, 0.1, 2.0), NonEllipticSymbol);
    EXPECT_THROW(solve_tikhonov(SymbolDescriptor::bracket_power(-2.0), y, -1.0, 2.0), std::invalid_argument);
}

TEST(MakeTruth, NormSupportAndDeterminism) {
    const auto u = make_truth(2.0, 7.0, 2, 32, 11, 20);
    EXPECT_NEAR(barron_norm(u, 2.0), 7.0, 1e-12 * 7.0);
    EXPECT_EQ(u.half_lattice().size(), 20u);
    for (const auto& [k, c] : u.atoms()) EXPECT_LE(k.norm_sq(), 32.0 * 32.0);
    EXPECT_EQ(u, make_truth(2.0, 7.0, 2, 32, 11, 20));
    EXPECT_TRUE(make_truth(2.0, 0.0, 2, 32, 11).is_zero());
    EXPECT_THROW(make_truth(2.0, 1.0, 2, 32, 11, 0), std::invalid_argument);
}

TEST(MakeTruth, SmallLatticeCapsModes) {
    // In d = 1 with K_max = 3 there are only three canonical nonzero modes.
    EXPECT_EQ(make_truth(1.0, 1.0, 1, 3, 2, 10).half_lattice().size(), 3u);
}

TEST(AddNoise, ExactLevelAndFreshSupport) {
    const auto y = make_truth(2.0, 1.0, 2, 16, 4, 8);
    for (double delta : {0.5, 1e-3}) {
        const auto nd = add_noise(y, delta, 9, 16);
        EXPECT_NEAR(barron_norm(nd.y_delta - y, 0.0), delta, 1e-12);
        std::size_t fresh = 0;
        for (const auto& [k, c] : nd.y_delta.half_lattice()) fresh += y.contains(k) ? 0 : 1;
        EXPECT_EQ(fresh, 3u);
    }
    EXPECT_EQ(add_noise(y, 0.0, 9).y_delta, y);
    EXPECT_THROW(add_noise(y, -1.0, 9), std::invalid_argument);
}

TEST(NeuronBudget, Values) {
    EXPECT_EQ(neuron_budget(0.25, 2.0, 2.0), 4u);
    EXPECT_EQ(neuron_budget(0.5, 2.0, 4.0), 3u);  // 2^{4/3} = 2.52
    EXPECT_EQ(neuron_budget(0.01, 4.0, 2.0), 22u);  // 100^{2/3} = 21.54
    EXPECT_THROW(neuron_budget(1.0, 2.0, 2.0), std::invalid_argument);
}

TEST(RateExperiment, SmallRun) {
    InverseProblemSpec spec;
    const std::vector<double> grid{0.25, 0.0625, 1.0 / 64, 1.0 / 256};
    const auto rep = rate_experiment(spec, grid, 10, 3, 1);
    EXPECT_EQ(rep.invariant_violations(), 0u);
    EXPECT_EQ(rep.bound_violations(), 0u);
    EXPECT_DOUBLE_EQ(rep.theory_slope, 0.5);
    EXPECT_NEAR(rep.fit.slope, 0.5, 0.15);
    EXPECT_EQ(rate_experiment(spec, grid, 10, 3, 4).samples_csv(), rep.samples_csv());
}

TEST(RateExperiment, Validation) {
    InverseProblemSpec spec;
    EXPECT_THROW(rate_experiment(spec, {0.25, 0.5, 0.1}, 10, 1), std::invalid_argument);
    EXPECT_THROW(rate_experiment(spec, {0.25, 0.1, 0.01}, 3, 1), std::invalid_argument);
    spec.cls = SmoothnessClass(2.0, 1.0, SpectralFunction::constant(2, 1.0));
    EXPECT_THROW(rate_experiment(spec, {0.25, 0.1, 0.01}, 10, 1), std::invalid_argument);
}

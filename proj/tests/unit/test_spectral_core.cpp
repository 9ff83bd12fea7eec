#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "barron/spectral_core.hpp"

using namespace barron;
using Half = std::vector<std::pair<Frequency, Complex>>;

namespace {

Frequency K(std::vector<int> k) { return Frequency(std::move(k)); }

// Direct point evaluation as a reference: sum over canonical atoms of
// 2 Re(c e^{i<k,x>}) (once for k = 0).
double direct_value(const Half& half, const std::vector<double>& x) {
    double v = 0.0;
    for (const auto& [k, c] : half) {
        double phase = 0.0;
        for (int i = 0; i < k.dim(); ++i) phase += k[i] * x[static_cast<std::size_t>(i)];
        const double re = (c * std::polar(1.0, phase)).real();
        v += k.is_zero() ? re : 2.0 * re;
    }
    return v;
}

}  // namespace

TEST(Frequency, CanonicalHalfLattice) {
    EXPECT_TRUE(K({0, 0}).is_canonical());
    EXPECT_TRUE(K({1, -3}).is_canonical());
    EXPECT_TRUE(K({0, 2}).is_canonical());
    EXPECT_FALSE(K({0, -2}).is_canonical());
    EXPECT_FALSE(K({-1, 5}).is_canonical());
    EXPECT_EQ(-K({1, -3}), K({-1, 3}));
    EXPECT_EQ(K({1, 2}) + K({3, -4}), K({4, -2}));
}

TEST(Frequency, RejectsHugeComponents) {
    EXPECT_THROW(Frequency(std::vector<int>{kFrequencyCutoff + 1}), std::out_of_range);
}

TEST(Bracket, MatchesDefinition) {
    EXPECT_DOUBLE_EQ(bracket(K({0, 0})), 1.0);
    EXPECT_DOUBLE_EQ(bracket(K({3, 4})), std::sqrt(26.0));
}

TEST(SpectralFunction, ConstantHasSingleAtomAndEqualNorms) {
    const auto u = SpectralFunction::constant(2, 1.0);
    EXPECT_EQ(u.size(), 1u);
    for (double s : {-2.0, -1.0, 0.0, 1.0, 2.0}) EXPECT_DOUBLE_EQ(barron_norm(u, s), 1.0);
}

TEST(SpectralFunction, CosineShell) {
    // cos(x1) = (e^{ix1} + e^{-ix1}) / 2
    const auto u = SpectralFunction::from_half_lattice(2, Half{{K({1, 0}), Complex(0.5, 0.0)}});
    EXPECT_EQ(u.size(), 2u);
    EXPECT_NEAR(barron_norm(u, 0.0), 1.0, 1e-15);
    EXPECT_NEAR(barron_norm(u, 2.0), 2.0, 1e-15);
    EXPECT_NEAR(evaluate(u, {0.0, 0.0}), 1.0, 1e-15);
    EXPECT_NEAR(evaluate(u, {std::numbers::pi, 0.3}), -1.0, 1e-15);
    EXPECT_NEAR(l2_norm(u), std::sqrt(0.5), 1e-15);
}

TEST(SpectralFunction, FromAtomsRejectsAsymmetry) {
    SpectralFunction::Atoms atoms{{K({1}), Complex(1.0, 0.0)}, {K({-1}), Complex(0.5, 0.0)}};
    EXPECT_THROW(SpectralFunction::from_atoms(1, atoms), SymmetryViolation);
    SpectralFunction::Atoms lonely{{K({2}), Complex(1.0, 0.0)}};
    EXPECT_THROW(SpectralFunction::from_atoms(1, lonely), SymmetryViolation);
}

TEST(SpectralFunction, FromAtomsAcceptsSymmetricMap) {
    SpectralFunction::Atoms atoms{{K({1}), Complex(1.0, 2.0)}, {K({-1}), Complex(1.0, -2.0)}, {K({0}), 3.0}};
    const auto u = SpectralFunction::from_atoms(1, atoms);
    EXPECT_EQ(u.size(), 3u);
    EXPECT_EQ(u.coefficient(K({-1})), Complex(1.0, -2.0));
}

TEST(SpectralFunction, ZeroFrequencyMustBeReal) {
    EXPECT_THROW(SpectralFunction::from_half_lattice(1, Half{{K({0}), Complex(1.0, 0.5)}}), SymmetryViolation);
}

TEST(SpectralFunction, ArithmeticPrunesCancellation) {
    StreamRng rng(1);
    const auto u = random_spectral_function(2, 5, 4, rng);
    EXPECT_TRUE((u - u).is_zero());
    EXPECT_EQ(2.0 * u, u + u);
}

TEST(SpectralFunction, EvaluateMatchesDirectSum) {
    const Half half{{K({0, 0}), 0.25}, {K({1, -2}), Complex(0.3, -0.1)}, {K({0, 3}), Complex(-0.2, 0.4)}};
    const auto u = SpectralFunction::from_half_lattice(2, half);
    for (const auto& x : {std::vector<double>{0.1, 0.2}, {-2.0, 1.5}, {3.0, -3.0}})
        EXPECT_NEAR(evaluate(u, x), direct_value(half, x), 1e-14);
}

TEST(SpectralFunction, EvaluateChecksDimension) {
    const auto u = SpectralFunction::constant(2, 1.0);
    EXPECT_THROW(evaluate(u, {0.1}), std::invalid_argument);
}

TEST(Norms, BracketPowerShiftsIndex) {
    StreamRng rng(2);
    for (int i = 0; i < 20; ++i) {
        const auto u = random_spectral_function(2, 6, 6, rng);
        for (double s : {-2.0, 0.0, 1.5})
            for (double r : {-1.0, 0.5, 2.0})
                EXPECT_NEAR(barron_norm(apply_bracket_power(u, r), s), barron_norm(u, s + r),
                            1e-12 * barron_norm(u, s + r));
    }
}

TEST(Norms, MonotoneInIndex) {
    StreamRng rng(3);
    const auto u = random_spectral_function(3, 8, 5, rng);
    double prev = 0.0;
    for (double s = -3.0; s <= 3.0; s += 0.5) {
        const double v = barron_norm(u, s);
        EXPECT_GE(v, prev);
        prev = v;
    }
}

TEST(Norms, L2BetweenB0AndParseval) {
    StreamRng rng(4);
    for (int i = 0; i < 50; ++i) {
        const auto u = random_spectral_function(2, 7, 6, rng);
        EXPECT_LE(l2_norm(u), barron_norm(u, 0.0) * (1 + 1e-14));
        // Parseval against a tensor trapezoid rule, exact for band-limited u.
        const int n = 16;
        double acc = 0.0;
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                const double v = evaluate(u, {-std::numbers::pi + 2 * std::numbers::pi * a / n,
                                              -std::numbers::pi + 2 * std::numbers::pi * b / n});
                acc += v * v;
            }
        EXPECT_NEAR(std::sqrt(acc / (n * n)), l2_norm(u), 1e-12 * l2_norm(u));
    }
}

TEST(Resolvent, SectorialBound) {
    StreamRng rng(5);
    for (int i = 0; i < 200; ++i) {
        const auto u = random_spectral_function(2, 5, 7, rng);
        const double t = std::exp(std::log(0.01) + rng.uniform() * std::log(1e4));
        const int n = 1 + static_cast<int>(rng() % 3);
        EXPECT_LE(barron_norm(apply_resolvent(u, t, n), 0.0), barron_norm(u, 0.0) / t);
    }
}

TEST(Resolvent, InvertsShiftedPower) {
    StreamRng rng(6);
    const auto u = random_spectral_function(2, 5, 5, rng);
    const auto v = apply_resolvent(u, 2.0, 2);
    const auto back = 2.0 * v + apply_bracket_power(v, 4.0);
    EXPECT_NEAR(barron_norm(back - u, 0.0), 0.0, 1e-13);
}

TEST(Resolvent, RejectsBadArguments) {
    const auto u = SpectralFunction::constant(1, 1.0);
    EXPECT_THROW(apply_resolvent(u, 0.0, 1), std::invalid_argument);
    EXPECT_THROW(apply_resolvent(u, 1.0, 0), std::invalid_argument);
}

TEST(Interpolation, GapAtMostOne) {
    StreamRng rng(7);
    const std::vector<InterpolationTriple> triples{{0, 1, 2}, {-2, 0, 2}, {-1, 0.5, 3}};
    for (int i = 0; i < 300; ++i) {
        const auto u = random_spectral_function(1 + static_cast<int>(i % 3), 6, 6, rng);
        for (const auto& tr : triples) EXPECT_LE(interpolation_gap(u, tr), 1.0 + 1e-12);
    }
}

TEST(Interpolation, SingleShellIsExtremal) {
    // All atoms on |k| = 5 share the weight, so Hoelder is an equality.
    const auto u = SpectralFunction::from_half_lattice(
        2, Half{{K({3, 4}), Complex(0.2, 0.1)}, {K({5, 0}), Complex(-0.3, 0.0)}, {K({4, -3}), Complex(0.0, 1.0)}});
    for (const InterpolationTriple tr : {InterpolationTriple{0, 1, 2}, {-2, 0, 2}, {-1, 0.5, 3}})
        EXPECT_NEAR(interpolation_gap(u, tr), 1.0, 1e-12);
}

TEST(Interpolation, TripleValidation) {
    EXPECT_THROW(InterpolationTriple(1, 1, 2), std::invalid_argument);
    EXPECT_THROW(InterpolationTriple(2, 1, 0), std::invalid_argument);
    EXPECT_DOUBLE_EQ(InterpolationTriple(-2, 0, 2).theta(), 0.5);
    EXPECT_THROW(interpolation_gap(SpectralFunction(2), InterpolationTriple(0, 1, 2)), std::invalid_argument);
}

TEST(Multiply, MatchesPointwiseProduct) {
    StreamRng rng(8);
    for (int i = 0; i < 20; ++i) {
        const auto u = random_spectral_function(2, 4, 3, rng);
        const auto v = random_spectral_function(2, 4, 3, rng);
        const auto w = multiply(u, v);
        for (const auto& x : {std::vector<double>{0.3, -1.1}, {2.5, 0.4}})
            EXPECT_NEAR(evaluate(w, x), evaluate(u, x) * evaluate(v, x), 1e-12);
        EXPECT_LE(barron_norm(w, 0.0), barron_norm(u, 0.0) * barron_norm(v, 0.0) * (1 + 1e-12));
    }
}

TEST(Multiply, EnforcesAtomBudget) {
    StreamRng rng(9);
    const auto u = random_spectral_function(2, 10, 5, rng);
    EXPECT_THROW(multiply(u, u, 10), AtomBudgetExceeded);
}

TEST(Serialization, RoundTripIsExact) {
    StreamRng rng(10);
    const auto u = random_spectral_function(3, 9, 4, rng);
    std::stringstream ss;
    write_spectral_function(ss, u);
    const auto v = read_spectral_function(ss);
    EXPECT_EQ(u, v);
}

TEST(Serialization, CommentsAndErrors) {
    std::istringstream ok("# sample\nd=1\n\n1 0.5 0\n0 2 0\n");
    const auto u = read_spectral_function(ok);
    EXPECT_NEAR(barron_norm(u, 0.0), 3.0, 1e-15);
    std::istringstream bad("1 0.5 0\n");
    EXPECT_THROW(read_spectral_function(bad), std::runtime_error);
}

TEST(RandomSpectralFunction, DeterministicAndWithinBox) {
    StreamRng a(11), b(11);
    const auto u = random_spectral_function(2, 6, 4, a);
    EXPECT_EQ(u, random_spectral_function(2, 6, 4, b));
    for (const auto& [k, c] : u.atoms()) {
        EXPECT_LE(std::abs(k[0]), 4);
        EXPECT_LE(std::abs(k[1]), 4);
    }
}

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <vector>

#include "barron/parallel.hpp"
#include "barron/quadrature.hpp"
#include "barron/rate_fit.hpp"
#include "barron/rng.hpp"

using namespace barron;

TEST(StreamRng, SameKeySameStream) {
    StreamRng a({7, 1, 2}), b({7, 1, 2}), c({7, 2, 1});
    bool differs = false;
    for (int i = 0; i < 100; ++i) {
        const auto x = a();
        EXPECT_EQ(x, b());
        differs |= x != c();
    }
    EXPECT_TRUE(differs);
}

TEST(StreamRng, UniformIsInUnitIntervalWithRightMean) {
    StreamRng rng(123);
    double sum = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        sum += u;
    }
    EXPECT_NEAR(sum / n, 0.5, 5.0 * std::sqrt(1.0 / 12.0 / n));
}

TEST(StreamRng, WorksWithStdDistributions) {
    StreamRng rng(5);
    std::normal_distribution<double> nd;
    double s = 0.0;
    for (int i = 0; i < 1000; ++i) s += nd(rng);
    EXPECT_TRUE(std::isfinite(s));
}

TEST(GaussLegendre, ExactForPolynomialsUpToDegree2nMinus1) {
    for (int n : {1, 2, 5, 12, 24}) {
        const GaussLegendreRule rule(n);
        for (int deg = 0; deg <= 2 * n - 1; ++deg) {
            const double exact = (1.0 - std::pow(-1.0, deg + 1)) / (deg + 1);
            const double got = rule.integrate([deg](double x) { return std::pow(x, deg); }, -1.0, 1.0);
            EXPECT_NEAR(got, exact, 1e-13) << "n=" << n << " deg=" << deg;
        }
    }
}

TEST(GaussLegendre, WeightsSumToTwo) {
    const GaussLegendreRule rule(40);
    double s = 0.0;
    for (double w : rule.weights) s += w;
    EXPECT_NEAR(s, 2.0, 1e-13);
}

TEST(GaussLegendre, CompositePanelsHandleKinks) {
    const GaussLegendreRule rule(8);
    const double v = integrate_panels(rule, [](double x) { return std::abs(x - 0.3); }, {-1.0, 0.3, 1.0}, 1);
    EXPECT_NEAR(v, 0.5 * 1.3 * 1.3 + 0.5 * 0.7 * 0.7, 1e-14);
}

TEST(Refine, ReportsConvergence) {
    auto est = refine(
        [](const QuadratureLevel& lvl) {
            const GaussLegendreRule rule(lvl.nodes);
            return integrate_panels(rule, [](double x) { return std::exp(x); }, {0.0, 1.0}, lvl.panels);
        },
        QuadratureLevel{8, 2, 1e-12});
    EXPECT_TRUE(est.converged);
    EXPECT_NEAR(est.value, std::numbers::e - 1.0, 1e-14);
}

TEST(FitRate, ExactPowerLaw) {
    std::vector<std::pair<double, double>> pts;
    for (int i = 0; i < 8; ++i) {
        const double x = std::pow(2.0, -i);
        pts.emplace_back(x, 3.0 * std::pow(x, 0.75));
    }
    const auto fit = fit_rate(pts);
    EXPECT_NEAR(fit.slope, 0.75, 1e-12);
    EXPECT_NEAR(std::exp(fit.intercept), 3.0, 1e-12);
    EXPECT_NEAR(fit.residual_rms, 0.0, 1e-12);
    EXPECT_EQ(fit.points, 8u);
}

TEST(FitRate, ConstantDataHasZeroSlope) {
    std::vector<std::pair<double, double>> pts{{1, 2}, {2, 2}, {4, 2}, {8, 2}};
    EXPECT_NEAR(fit_rate(pts).slope, 0.0, 1e-14);
}

TEST(FitRate, RejectsBadInput) {
    std::vector<std::pair<double, double>> two{{1, 1}, {2, 2}};
    EXPECT_THROW(fit_rate(two), std::invalid_argument);
    std::vector<std::pair<double, double>> neg{{1, 1}, {2, -2}, {3, 3}};
    EXPECT_THROW(fit_rate(neg), std::invalid_argument);
    std::vector<std::pair<double, double>> zero{{0, 1}, {2, 2}, {3, 3}};
    EXPECT_THROW(fit_rate(zero), std::invalid_argument);
}

// Calibration: 10% multiplicative noise on 8 points of a q = -0.5 power law.
TEST(FitRate, NoisyPowerLawCalibration) {
    int hits = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        StreamRng rng({seed, 99});
        std::normal_distribution<double> noise(0.0, 0.1);
        std::vector<std::pair<double, double>> pts;
        for (int i = 0; i < 8; ++i) {
            const double n = 16.0 * std::pow(2.0, i);
            pts.emplace_back(n, std::pow(n, -0.5) * (1.0 + noise(rng)));
        }
        hits += std::abs(fit_rate(pts).slope + 0.5) <= 0.1 ? 1 : 0;
    }
    EXPECT_GE(hits, 95);
}

TEST(ParallelFor, VisitsEveryIndexOnce) {
    for (unsigned workers : {1u, 2u, 4u, 7u}) {
        std::vector<int> hits(1000, 0);
        parallel_for(hits.size(), workers, [&](std::size_t i) { hits[i] += 1; });
        for (int h : hits) ASSERT_EQ(h, 1);
    }
}

TEST(ParallelFor, PropagatesExceptions) {
    EXPECT_THROW(parallel_for(100, 3,
                              [](std::size_t i) {
                                  if (i == 42) throw std::runtime_error("boom");
                              }),
                 std::runtime_error);
}

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "barron/radon.hpp"

using namespace barron;

namespace {

// Line integral by quadrature along x = zeta kappa + tau kappa_perp.
double line_oracle(const GaussianMixture& u, double zeta, double kappa) {
    const GaussLegendreRule rule(30);
    const double c = std::cos(kappa), s = std::sin(kappa);
    return integrate_panels(
        rule, [&](double tau) { return u(zeta * c - tau * s, zeta * s + tau * c); }, {-20.0, 20.0}, 40);
}

// int |u^| <xi>^s on a Cartesian tensor grid over [-L, L]^2.
double cartesian_barron(const GaussianMixture& u, double s) {
    const GaussLegendreRule rule(20);
    const double L = detail::fourier_cutoff(u) / std::sqrt(2.0) * 1.5;
    return integrate_panels(
        rule,
        [&](double a) {
            return integrate_panels(
                rule,
                [&](double b) {
                    return std::abs(fourier_transform(u, a, b)) * std::pow(1.0 + a * a + b * b, 0.5 * s);
                },
                {-L, L}, 40);
        },
        {-L, L}, 40);
}

const GaussianMixture kCentered({{1.0, {0.0, 0.0}, 1.0}});
const GaussianMixture kShifted({{1.0, {1.5, -0.5}, 1.0}});
const GaussianMixture kBlend({{1.0, {0.3, 0.0}, 0.7}, {0.8, {-0.4, 0.6}, 1.0}, {0.5, {0.0, -1.0}, 1.5}});

}  // namespace

TEST(GaussianMixture, RejectsBadWidths) {
    EXPECT_THROW(GaussianMixture({{1.0, {0.0, 0.0}, 0.0}}), std::invalid_argument);
}

TEST(RadonTransform, CenteredIsRotationInvariant) {
    for (double kappa : {0.0, 0.7, 2.0, 5.5})
        EXPECT_NEAR(radon_transform(kCentered, {0.4, kappa}), radon_transform(kCentered, {0.4, 0.0}), 1e-15);
}

TEST(RadonTransform, ShiftCovariance) {
    const double kappa = 1.1;
    const double proj = 1.5 * std::cos(kappa) - 0.5 * std::sin(kappa);
    EXPECT_NEAR(radon_transform(kShifted, {0.3, kappa}), radon_transform(kCentered, {0.3 - proj, kappa}), 1e-15);
}

TEST(RadonTransform, MatchesLineQuadrature) {
    for (double zeta : {-1.0, 0.0, 0.8})
        for (double kappa : {0.0, 1.0, 3.0})
            EXPECT_NEAR(radon_transform(kBlend, {zeta, kappa}), line_oracle(kBlend, zeta, kappa), 1e-8);
}

TEST(FourierTransform, MatchesDirectQuadratureAtAPoint) {
    // (2 pi)^{-2} int u(x) e^{-i<xi,x>} dx on a box.
    const GaussLegendreRule rule(20);
    const double xi1 = 0.7, xi2 = -0.4;
    const auto part = [&](bool imag) {
        return integrate_panels(
            rule,
            [&](double a) {
                return integrate_panels(
                    rule,
                    [&](double b) {
                        const double ph = xi1 * a + xi2 * b;
                        return kBlend(a, b) * (imag ? -std::sin(ph) : std::cos(ph));
                    },
                    {-12.0, 12.0}, 16);
            },
            {-12.0, 12.0}, 16);
    };
    const double scale = 1.0 / (4.0 * std::numbers::pi * std::numbers::pi);
    const auto f = fourier_transform(kBlend, xi1, xi2);
    EXPECT_NEAR(f.real(), part(false) * scale, 1e-10);
    EXPECT_NEAR(f.imag(), part(true) * scale, 1e-10);
}

TEST(ProjectionSlice, NumericTransformMatchesSlice) {
    for (double xi : {0.0, 0.5, 1.7, -2.3})
        for (double kappa : {0.2, 2.9}) {
            const auto lhs = sinogram_fourier_numeric(kBlend, xi, kappa);
            const auto rhs = kSliceConstant * fourier_transform(kBlend, xi * std::cos(kappa), xi * std::sin(kappa));
            EXPECT_LE(std::abs(lhs - rhs), 1e-6 * std::abs(rhs)) << xi << ' ' << kappa;
        }
}

TEST(SinogramNorm, ZeroAndShiftInvariance) {
    EXPECT_EQ(sinogram_norm(GaussianMixture(), 0.0, 1.0).value, 0.0);
    const double a = sinogram_norm(kCentered, 0.0, 1.0).value;
    const double b = sinogram_norm(kShifted, 0.0, 1.0).value;
    EXPECT_NEAR(a, b, 1e-10 * a);
}

TEST(SinogramNorm, SelfConvergence) {
    const auto est = sinogram_norm(kBlend, 0.0, 1.0);
    EXPECT_TRUE(est.converged);
    EXPECT_LT(est.relative_delta(), 1e-6);
}

TEST(SinogramNorm, CenteredClosedForm) {
    // |u^| = sigma^2/(2 pi) e^{-sigma^2 r^2 / 2}; with t = 0, s_sino = 0:
    // 2 pi * 2 pi * 2 int_0^inf sigma^2/(2 pi) e^{-r^2/2} dr = 2 pi sqrt(2 pi).
    EXPECT_NEAR(sinogram_norm(kCentered, 0.0, 0.0).value, 2.0 * std::numbers::pi * std::sqrt(2.0 * std::numbers::pi),
                1e-9);
}

TEST(BarronNormRadial, CenteredIsRadialIntegral) {
    // int_0^inf (1/(2 pi)) e^{-r^2/2} r dr times 2 pi = 1 for s = 0.
    EXPECT_NEAR(barron_norm_radial(kCentered, 0.0).value, 1.0, 1e-12);
}

TEST(BarronNormRadial, MonotoneInS) {
    for (const auto* u : {&kCentered, &kShifted, &kBlend})
        EXPECT_GE(barron_norm_radial(*u, 0.0).value, barron_norm_radial(*u, -1.0).value);
}

TEST(BarronNormRadial, MatchesCartesianQuadrature) {
    for (double s : {-1.0, 0.0}) {
        const double polar = barron_norm_radial(kBlend, s).value;
        EXPECT_NEAR(polar, cartesian_barron(kBlend, s), 1e-6 * polar);
    }
}

TEST(IdentityCheck, SingleMemberHasZeroSpread) {
    const auto rep = identity_check({kCentered});
    EXPECT_EQ(rep.cv, 0.0);
    EXPECT_TRUE(rep.passes());
}

TEST(IdentityCheck, DefaultFamilyRatioIsPinned) {
    const auto rep = identity_check(default_radon_family(), {24, 8, 1e-7}, 2);
    ASSERT_EQ(rep.members.size(), 6u);
    EXPECT_LT(rep.cv, 0.01);
    EXPECT_TRUE(rep.all_monotone());
    EXPECT_TRUE(rep.all_converged());
    for (const auto& m : rep.members) EXPECT_NEAR(m.ratio, kIdentityRatio, 1e-6 * kIdentityRatio);
}

TEST(IdentityCheck, RejectsEmptyFamily) {
    EXPECT_THROW(identity_check({}), std::invalid_argument);
}

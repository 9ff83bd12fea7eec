// Radon transform on R^2 for Gaussian mixtures and the sinogram-norm /
// Barron-norm identity.
//
// Conventions: u^(xi) = (2 pi)^{-2} int u(x) e^{-i<xi,x>} dx on R^2 and
// F_1 y(xi) = (2 pi)^{-1} int y(zeta) e^{-i xi zeta} dzeta on R. With these,
// projection-slice reads F_1 Ru(xi, kappa) = 2 pi u^(xi kappa).
//
// For s_sino = 0, t = 1 the sinogram integrand is 2 pi |u^(xi kappa)| |xi|/<xi>.
// Integrating xi over R and kappa over S^1 visits every point of R^2 twice
// (as (r, kappa) and (-r, -kappa)), so
//     ||Ru||_{sino(0, 1)} = 4 pi ||u||_{B^{-1}(R^2)}
// exactly; kIdentityRatio is that proportionality constant.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "barron/parallel.hpp"
#include "barron/quadrature.hpp"

namespace barron {

inline constexpr double kSliceConstant = 2.0 * std::numbers::pi;
inline constexpr double kIdentityRatio = 4.0 * std::numbers::pi;

struct GaussianTerm {
    double amplitude = 1.0;
    std::array<double, 2> center{0.0, 0.0};
    double sigma = 1.0;
};

/// u(x) = sum_j A_j exp(-|x - m_j|^2 / (2 sigma_j^2)).
class GaussianMixture {
public:
    GaussianMixture() = default;
    explicit GaussianMixture(std::vector<GaussianTerm> terms) : terms_(std::move(terms)) {
        for (const auto& t : terms_)
            if (!(t.sigma > 0.0) || !std::isfinite(t.sigma) || !std::isfinite(t.amplitude))
                throw std::invalid_argument("GaussianMixture: widths must be positive and finite");
    }

    [[nodiscard]] const std::vector<GaussianTerm>& terms() const { return terms_; }
    [[nodiscard]] bool empty() const { return terms_.empty(); }

    [[nodiscard]] double operator()(double x, double y) const {
        double v = 0.0;
        for (const auto& t : terms_) {
            const double dx = x - t.center[0], dy = y - t.center[1];
            v += t.amplitude * std::exp(-(dx * dx + dy * dy) / (2.0 * t.sigma * t.sigma));
        }
        return v;
    }

    /// Smallest width; sets how far out the Fourier tails reach.
    [[nodiscard]] double min_sigma() const {
        double s = std::numeric_limits<double>::infinity();
        for (const auto& t : terms_) s = std::min(s, t.sigma);
        return s;
    }

private:
    std::vector<GaussianTerm> terms_;
};

struct SinogramPoint {
    double zeta = 0.0;
    double kappa = 0.0;  // angle of the unit direction

    [[nodiscard]] std::array<double, 2> direction() const { return {std::cos(kappa), std::sin(kappa)}; }
};

/// Line integral of u over {x : <x, kappa> = zeta}.
inline double radon_transform(const GaussianMixture& u, const SinogramPoint& pt) {
    const auto k = pt.direction();
    double v = 0.0;
    for (const auto& t : u.terms()) {
        const double c = t.center[0] * k[0] + t.center[1] * k[1];
        const double z = pt.zeta - c;
        v += t.amplitude * std::sqrt(2.0 * std::numbers::pi) * t.sigma * std::exp(-z * z / (2.0 * t.sigma * t.sigma));
    }
    return v;
}

inline std::complex<double> fourier_transform(const GaussianMixture& u, double xi1, double xi2) {
    std::complex<double> v{0.0, 0.0};
    const double r2 = xi1 * xi1 + xi2 * xi2;
    for (const auto& t : u.terms()) {
        const double mag = t.amplitude * t.sigma * t.sigma / (2.0 * std::numbers::pi) *
                           std::exp(-0.5 * t.sigma * t.sigma * r2);
        v += std::polar(mag, -(xi1 * t.center[0] + xi2 * t.center[1]));
    }
    return v;
}

namespace detail {

/// Radius beyond which every term of |u^| has decayed by e^{-45}.
inline double fourier_cutoff(const GaussianMixture& u) { return std::sqrt(90.0) / u.min_sigma(); }

inline double bracket1(double r) { return std::sqrt(1.0 + r * r); }

}  // namespace detail

/// F_1 of the sinogram profile zeta -> Ru(zeta, kappa), by Gauss-Legendre on
/// a window covering every projected term. Used to check projection-slice.
inline std::complex<double> sinogram_fourier_numeric(const GaussianMixture& u, double xi, double kappa,
                                                     const QuadratureLevel& level = {24, 16, 1e-10}) {
    if (u.empty()) return {0.0, 0.0};
    const SinogramPoint dir{0.0, kappa};
    const auto k = dir.direction();
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& t : u.terms()) {
        const double c = t.center[0] * k[0] + t.center[1] * k[1];
        lo = std::min(lo, c - 10.0 * t.sigma);
        hi = std::max(hi, c + 10.0 * t.sigma);
    }
    const GaussLegendreRule rule(level.nodes);
    // Oscillation e^{-i xi zeta}: keep at least a few panels per period.
    const int panels = std::max(level.panels, static_cast<int>(std::ceil(std::abs(xi) * (hi - lo) / 2.0)));
    const auto part = [&](bool imag) {
        return integrate_panels(
            rule,
            [&](double z) {
                const double ru = radon_transform(u, {z, kappa});
                return imag ? -ru * std::sin(xi * z) : ru * std::cos(xi * z);
            },
            {lo, hi}, panels);
    };
    return std::complex<double>(part(false), part(true)) / (2.0 * std::numbers::pi);
}

/// int_{S^1} int_R |F_1 Ru(xi, kappa)| <xi>^{s_sino} (|xi|/<xi>)^t dxi dkappa,
/// with F_1 Ru taken from projection-slice. Where terms of a signed mixture
/// cancel, |u^| has kinks and panel doubling only gains a few digits; the
/// default tolerance of 1e-7 accounts for that.
inline QuadratureEstimate sinogram_norm(const GaussianMixture& u, double s_sino, double t,
                                        const QuadratureLevel& level = {24, 8, 1e-7}) {
    if (u.empty()) return {};
    const double rmax = detail::fourier_cutoff(u);
    return refine(
        [&](const QuadratureLevel& lvl) {
            const GaussLegendreRule rule(lvl.nodes);
            return integrate_panels(
                rule,
                [&](double kappa) {
                    const double c = std::cos(kappa), s = std::sin(kappa);
                    return integrate_panels(
                        rule,
                        [&](double xi) {
                            const double b = detail::bracket1(xi);
                            const double w = std::pow(b, s_sino) * std::pow(std::abs(xi) / b, t);
                            return kSliceConstant * std::abs(fourier_transform(u, xi * c, xi * s)) * w;
                        },
                        {-rmax, 0.0, rmax}, lvl.panels);
                },
                {0.0, 2.0 * std::numbers::pi}, lvl.panels);
        },
        level);
}

/// ||u||_{B^s(R^2)} = int |u^(xi)| <xi>^s dxi in polar coordinates.
inline QuadratureEstimate barron_norm_radial(const GaussianMixture& u, double s,
                                             const QuadratureLevel& level = {24, 8, 1e-7}) {
    if (u.empty()) return {};
    const double rmax = detail::fourier_cutoff(u);
    return refine(
        [&](const QuadratureLevel& lvl) {
            const GaussLegendreRule rule(lvl.nodes);
            return integrate_panels(
                rule,
                [&](double kappa) {
                    const double c = std::cos(kappa), sn = std::sin(kappa);
                    return integrate_panels(
                        rule,
                        [&](double r) {
                            return std::abs(fourier_transform(u, r * c, r * sn)) *
                                   std::pow(detail::bracket1(r), s) * r;
                        },
                        {0.0, rmax}, lvl.panels);
                },
                {0.0, 2.0 * std::numbers::pi}, lvl.panels);
        },
        level);
}

struct RadonMemberResult {
    std::size_t member_id = 0;
    double barron_norm = 0.0;     // s = -1
    double sinogram_norm = 0.0;   // s_sino = 0, t = 1
    double sinogram_t0 = 0.0;     // s_sino = 0, t = 0
    double ratio = 0.0;
    bool monotone = true;         // t = 1 norm <= t = 0 norm
    bool converged = true;
    bool skipped = false;
};

struct RadonIdentityReport {
    std::vector<RadonMemberResult> members;
    double mean_ratio = 0.0;
    double cv = 0.0;  // sample standard deviation / mean over non-skipped members

    [[nodiscard]] bool all_monotone() const {
        for (const auto& m : members)
            if (!m.skipped && !m.monotone) return false;
        return true;
    }
    [[nodiscard]] bool all_converged() const {
        for (const auto& m : members)
            if (!m.skipped && !m.converged) return false;
        return true;
    }
    [[nodiscard]] bool passes() const { return cv < 0.01 && all_monotone(); }

    /// member_id, barron_norm, sinogram_norm, ratio
    [[nodiscard]] std::string to_csv() const {
        std::ostringstream os;
        os << "member_id,barron_norm,sinogram_norm,ratio\n";
        char buf[128];
        for (const auto& m : members) {
            if (m.skipped) continue;
            std::snprintf(buf, sizeof buf, "%zu,%.12e,%.12e,%.12e\n", m.member_id, m.barron_norm, m.sinogram_norm,
                          m.ratio);
            os << buf;
        }
        return os.str();
    }
};

/// Ratio ||Ru||_{sino(0,1)} / ||u||_{B^{-1}} per member and its spread.
inline RadonIdentityReport identity_check(const std::vector<GaussianMixture>& family,
                                          const QuadratureLevel& level = {24, 8, 1e-7}, unsigned workers = 1) {
    if (family.empty()) throw std::invalid_argument("identity_check: family is empty");
    RadonIdentityReport rep;
    rep.members.resize(family.size());
    parallel_for(family.size(), workers, [&](std::size_t i) {
        RadonMemberResult m;
        m.member_id = i;
        const auto b = barron_norm_radial(family[i], -1.0, level);
        if (!(b.value > 1e-300)) {
            m.skipped = true;
            rep.members[i] = m;
            return;
        }
        const auto s1 = sinogram_norm(family[i], 0.0, 1.0, level);
        const auto s0 = sinogram_norm(family[i], 0.0, 0.0, level);
        m.barron_norm = b.value;
        m.sinogram_norm = s1.value;
        m.sinogram_t0 = s0.value;
        m.ratio = s1.value / b.value;
        m.monotone = s1.value <= s0.value;
        m.converged = b.converged && s1.converged && s0.converged;
        rep.members[i] = m;
    });
    std::vector<double> ratios;
    for (const auto& m : rep.members)
        if (!m.skipped) ratios.push_back(m.ratio);
    if (ratios.empty()) throw std::invalid_argument("identity_check: every member has vanishing norm");
    double mean = 0.0;
    for (double r : ratios) mean += r;
    mean /= static_cast<double>(ratios.size());
    double var = 0.0;
    for (double r : ratios) var += (r - mean) * (r - mean);
    rep.mean_ratio = mean;
    rep.cv = ratios.size() > 1 ? std::sqrt(var / static_cast<double>(ratios.size() - 1)) / mean : 0.0;
    return rep;
}

/// Six mixtures: centered, shifted, narrow, two equal-width bumps, a signed
/// two-width pair and a three-term blend.
inline std::vector<GaussianMixture> default_radon_family() {
    return {
        GaussianMixture({{1.0, {0.0, 0.0}, 1.0}}),
        GaussianMixture({{1.0, {1.5, -0.5}, 1.0}}),
        GaussianMixture({{2.0, {0.0, 0.7}, 0.5}}),
        GaussianMixture({{1.0, {-1.0, 0.0}, 0.8}, {0.6, {1.0, 0.0}, 0.8}}),
        GaussianMixture({{1.0, {0.0, 0.0}, 1.2}, {-0.5, {0.5, 0.5}, 0.6}}),
        GaussianMixture({{1.0, {0.3, 0.0}, 0.7}, {0.8, {-0.4, 0.6}, 1.0}, {0.5, {0.0, -1.0}, 1.5}}),
    };
}

}  // namespace barron

// Gauss-Legendre rules and composite panel integration.
#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace barron {

/// Nodes and weights of an n-point Gauss-Legendre rule on [-1, 1].
struct GaussLegendreRule {
    std::vector<double> nodes;
    std::vector<double> weights;

    explicit GaussLegendreRule(int n) {
        if (n < 1) throw std::invalid_argument("GaussLegendreRule: n must be >= 1");
        nodes.resize(n);
        weights.resize(n);
        const auto un = static_cast<unsigned>(n);
        for (int i = 0; i < (n + 1) / 2; ++i) {
            // Tricomi initial guess, then Newton on P_n.
            double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
            double dp = 0.0;
            for (int it = 0; it < 100; ++it) {
                const double p = std::legendre(un, x);
                const double pm = n > 1 ? std::legendre(un - 1, x) : 1.0;
                dp = n * (x * p - pm) / (x * x - 1.0);
                const double dx = p / dp;
                x -= dx;
                if (std::abs(dx) < 1e-16) break;
            }
            {
                const double p = std::legendre(un, x);
                const double pm = n > 1 ? std::legendre(un - 1, x) : 1.0;
                dp = n * (x * p - pm) / (x * x - 1.0);
            }
            const double w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if (n % 2 == 1) nodes[n / 2] = 0.0;
    }

    /// Integral of f over [a, b].
    template <class F>
    [[nodiscard]] double integrate(F&& f, double a, double b) const {
        const double half = 0.5 * (b - a);
        const double mid = 0.5 * (a + b);
        double sum = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i) sum += weights[i] * f(mid + half * nodes[i]);
        return half * sum;
    }
};

/// Composite rule over the intervals delimited by sorted `breaks`, each split
/// into `panels` equal sub-panels.
template <class F>
double integrate_panels(const GaussLegendreRule& rule, F&& f, const std::vector<double>& breaks,
                        int panels) {
    double total = 0.0;
    for (std::size_t j = 0; j + 1 < breaks.size(); ++j) {
        const double a = breaks[j];
        const double b = breaks[j + 1];
        if (!(b > a)) continue;
        const double h = (b - a) / panels;
        for (int p = 0; p < panels; ++p) total += rule.integrate(f, a + p * h, a + (p + 1) * h);
    }
    return total;
}

/// Quadrature value together with the change observed under refinement.
struct QuadratureEstimate {
    double value = 0.0;
    double refinement_delta = 0.0;  // |fine - coarse|
    bool converged = true;

    [[nodiscard]] double relative_delta() const {
        return value == 0.0 ? refinement_delta : refinement_delta / std::abs(value);
    }
};

/// Resolution knobs shared by the parameter-space and Fourier-side integrators.
struct QuadratureLevel {
    int nodes = 24;       // Gauss-Legendre nodes per panel
    int panels = 8;       // panels per smooth interval
    double tolerance = 1e-8;  // relative refinement tolerance

    [[nodiscard]] QuadratureLevel doubled() const { return {nodes, 2 * panels, tolerance}; }
};

/// Evaluates `rule_at(level)` at `level` and at the doubled level; reports the
/// fine value and whether the relative change stayed under the tolerance.
template <class F>
QuadratureEstimate refine(F&& rule_at, const QuadratureLevel& level) {
    const double coarse = rule_at(level);
    const double fine = rule_at(level.doubled());
    QuadratureEstimate est;
    est.value = fine;
    est.refinement_delta = std::abs(fine - coarse);
    // Absolute floor so that integrals which vanish by symmetry still pass.
    est.converged = est.refinement_delta <= level.tolerance * std::abs(fine) ||
                    est.refinement_delta <= 1e-14;
    return est;
}

}  // namespace barron

// Log-log least squares for convergence-rate experiments.
#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace barron {

struct FitResult {
    double slope = 0.0;
    double intercept = 0.0;     // in log space: log(value) ~ intercept + slope*log(level)
    double residual_rms = 0.0;  // RMS of log-space residuals
    std::size_t points = 0;
};

/// Least-squares fit of log(value) against log(level). Needs at least three
/// strictly positive pairs.
inline FitResult fit_rate(std::span<const std::pair<double, double>> pairs) {
    if (pairs.size() < 3) throw std::invalid_argument("fit_rate: at least 3 points required");
    const auto n = static_cast<double>(pairs.size());
    double sx = 0.0, sy = 0.0;
    std::vector<double> lx, ly;
    lx.reserve(pairs.size());
    ly.reserve(pairs.size());
    for (const auto& [level, value] : pairs) {
        if (!(level > 0.0) || !(value > 0.0) || !std::isfinite(level) || !std::isfinite(value))
            throw std::invalid_argument("fit_rate: levels and values must be positive and finite");
        lx.push_back(std::log(level));
        ly.push_back(std::log(value));
        sx += lx.back();
        sy += ly.back();
    }
    const double mx = sx / n;
    const double my = sy / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("fit_rate: levels must not all coincide");

    FitResult fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.points = pairs.size();
    double ss = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        const double r = ly[i] - (fit.intercept + fit.slope * lx[i]);
        ss += r * r;
    }
    fit.residual_rms = std::sqrt(ss / n);
    return fit;
}

inline FitResult fit_rate(const std::vector<std::pair<double, double>>& pairs) {
    return fit_rate(std::span<const std::pair<double, double>>(pairs));
}

}  // namespace barron

// Two-layer RePU networks built by importance-sampled Monte Carlo over the
// neuron parameter space G = {-1, 1} x [0, T] x R^d.
//
// Domain: Omega = [-1, 1]^d with T = sup_{x in Omega} |x| = sqrt(d).
// Kernel: g(x, theta) = (z <w, x> - t |w|)_+^s for theta = (z, t, w).
// Target: (T_g rho)(x) = int_G g(x, theta) rho(theta) dtheta.
// Sampler: dmu = |theta|^s |rho| / ||rho||_{H^s_1} with |theta| = |w| + t + 1.
// Network: u_n(x) = ||rho|| / n * sum_i g(x, theta_i) / |theta_i|^s * sgn rho(theta_i).
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numbers>
#include <numeric>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "barron/parallel.hpp"
#include "barron/quadrature.hpp"
#include "barron/rate_fit.hpp"
#include "barron/rng.hpp"

namespace barron {

/// Rectified power unit max(0, tau)^s.
inline double repu(int s, double tau) {
    if (s < 1) throw std::invalid_argument("repu: order must be >= 1");
    if (tau <= 0.0) return 0.0;
    double r = tau;
    for (int i = 1; i < s; ++i) r *= tau;
    return r;
}

namespace detail {

inline double euclidean_norm(std::span<const double> v) {
    double s = 0.0;
    for (double c : v) s += c * c;
    return std::sqrt(s);
}

inline double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double ipow(double x, int n) {
    double r = 1.0;
    for (int i = 0; i < n; ++i) r *= x;
    return r;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Neuron parameters and kernels
// ---------------------------------------------------------------------------

/// theta = (w, b, beta) for the neuron beta * sigma(<x, w> + b).
struct GenericNeuron {
    std::vector<double> omega;
    double b = 0.0;
    double beta = 1.0;

    [[nodiscard]] double norm() const { return detail::euclidean_norm(omega) + std::abs(b) + std::abs(beta); }
};

/// theta = (z, t, w) in G.
struct RepuNeuron {
    int z = 1;
    double t = 0.0;
    std::vector<double> omega;

    /// |w|_2 + t + 1, which never exceeds |w|_2 + T + 1.
    [[nodiscard]] double norm() const { return detail::euclidean_norm(omega) + t + 1.0; }
};

inline double kernel_eval(const GenericNeuron& theta, std::span<const double> x, int s) {
    if (x.size() != theta.omega.size()) throw std::invalid_argument("kernel_eval: dimension mismatch");
    return theta.beta * repu(s, detail::dot(theta.omega, x) + theta.b);
}

inline double kernel_eval(const RepuNeuron& theta, std::span<const double> x, int s) {
    if (x.size() != theta.omega.size()) throw std::invalid_argument("kernel_eval: dimension mismatch");
    return repu(s, theta.z * detail::dot(theta.omega, x) - theta.t * detail::euclidean_norm(theta.omega));
}

// ---------------------------------------------------------------------------
// Densities on G
// ---------------------------------------------------------------------------

enum class SignPattern { Positive, ZOdd };

/// rho(z, t, w) = sgn(z, t, w) * (1/2) * (1/T) 1_{[0,T]}(t) * N_trunc(w),
/// where N_trunc is the N(0, sigma^2 I) density restricted to the ball
/// |w| <= cutoff * sigma and renormalized. Supported for d in {1, 2}.
struct DensityDescriptor {
    int d = 2;
    double sigma = 1.0;
    double cutoff = 3.0;
    SignPattern sign = SignPattern::Positive;

    void validate() const {
        if (d != 1 && d != 2) throw std::invalid_argument("DensityDescriptor: only d = 1 or d = 2 supported");
        if (!(sigma > 0.0) || !(cutoff > 0.0)) throw std::invalid_argument("DensityDescriptor: bad profile");
    }
    [[nodiscard]] double t_max() const { return std::sqrt(static_cast<double>(d)); }
    [[nodiscard]] double omega_radius() const { return cutoff * sigma; }
    /// Mass of the untruncated Gaussian inside the ball, times its normalizer.
    [[nodiscard]] double omega_normalizer() const {
        const double rc = omega_radius();
        if (d == 1) return sigma * std::sqrt(2.0 * std::numbers::pi) * std::erf(rc / (sigma * std::numbers::sqrt2));
        return 2.0 * std::numbers::pi * sigma * sigma * (1.0 - std::exp(-rc * rc / (2.0 * sigma * sigma)));
    }
    /// Truncated Gaussian profile at radius r = |w|.
    [[nodiscard]] double omega_profile(double r) const {
        if (r > omega_radius()) return 0.0;
        return std::exp(-r * r / (2.0 * sigma * sigma)) / omega_normalizer();
    }
    [[nodiscard]] double abs_density(const RepuNeuron& theta) const {
        if (theta.t < 0.0 || theta.t > t_max()) return 0.0;
        return 0.5 / t_max() * omega_profile(detail::euclidean_norm(theta.omega));
    }
    [[nodiscard]] double sign_of(const RepuNeuron& theta) const {
        return sign == SignPattern::Positive ? 1.0 : static_cast<double>(theta.z);
    }
    [[nodiscard]] double sign_of_z(int z) const { return sign == SignPattern::Positive ? 1.0 : z; }
};

namespace detail {

/// int_0^T (A - t B)_+^s dt / T for B >= 0, in a form free of cancellation.
inline double averaged_kernel_over_t(double A, double B, double T, int s) {
    if (A <= 0.0) return 0.0;
    if (B <= 0.0) return ipow(A, s);
    const double tstar = std::min(T, A / B);
    const double y = std::max(0.0, A - tstar * B);
    // (A^{s+1} - y^{s+1}) / ((s+1) B T) with A - y = tstar * B
    double sum = 0.0;
    for (int j = 0; j <= s; ++j) sum += ipow(A, j) * ipow(y, s - j);
    return tstar * sum / ((s + 1) * T);
}

/// int_0^T (r + t + 1)^s dt / T.
inline double averaged_norm_power_over_t(double r, double T, double s) {
    const double hi = r + T + 1.0;
    const double lo = r + 1.0;
    if (std::abs(s + 1.0) < 1e-14) return std::log(hi / lo) / T;
    return (std::pow(hi, s + 1.0) - std::pow(lo, s + 1.0)) / ((s + 1.0) * T);
}

/// int over the truncation ball of N_trunc(w) f(w) dw. The angular (d = 2)
/// or signed (d = 1) coordinate is split at `kinks` so each piece is smooth.
template <class F>
double integrate_omega(const DensityDescriptor& rho, F&& f, const QuadratureLevel& level,
                       std::vector<double> kinks) {
    const GaussLegendreRule rule(level.nodes);
    const double rc = rho.omega_radius();
    if (rho.d == 1) {
        std::vector<double> breaks{-rc, 0.0, rc};
        for (double k : kinks)
            if (k > -rc && k < rc) breaks.push_back(k);
        std::sort(breaks.begin(), breaks.end());
        return integrate_panels(
            rule, [&](double w) { return rho.omega_profile(std::abs(w)) * f(std::vector<double>{w}); },
            breaks, level.panels);
    }
    std::vector<double> breaks{0.0, 2.0 * std::numbers::pi};
    for (double k : kinks) {
        double a = std::fmod(k, 2.0 * std::numbers::pi);
        if (a < 0.0) a += 2.0 * std::numbers::pi;
        breaks.push_back(a);
    }
    std::sort(breaks.begin(), breaks.end());
    const std::vector<double> radial{0.0, rc};
    std::vector<double> w(2);
    return integrate_panels(
        rule,
        [&](double phi) {
            const double c = std::cos(phi), s = std::sin(phi);
            return integrate_panels(
                rule,
                [&](double r) {
                    w[0] = r * c;
                    w[1] = r * s;
                    return rho.omega_profile(r) * f(w) * r;
                },
                radial, level.panels);
        },
        breaks, level.panels);
}

}  // namespace detail

/// ||rho||_{H^s_1(G)} = int_G |theta|^s |rho(theta)| dtheta. The t-integral
/// is exact; the w-integral uses Gauss-Legendre and is checked by doubling
/// the panel count.
inline QuadratureEstimate hs1_norm(const DensityDescriptor& rho, double s, const QuadratureLevel& level = {24, 1, 1e-10}) {
    rho.validate();
    const double T = rho.t_max();
    return refine(
        [&](const QuadratureLevel& lvl) {
            // Both z-branches carry weight 1/2 and the same |theta|.
            return detail::integrate_omega(
                rho,
                [&](const std::vector<double>& w) {
                    return detail::averaged_norm_power_over_t(detail::euclidean_norm(w), T, s);
                },
                lvl, {});
        },
        level);
}

/// (T_g rho)(x) by the same quadrature as hs1_norm.
inline QuadratureEstimate oracle_integral(const DensityDescriptor& rho, int s, std::span<const double> x,
                                          const QuadratureLevel& level = {24, 1, 1e-10}) {
    rho.validate();
    if (static_cast<int>(x.size()) != rho.d) throw std::invalid_argument("oracle_integral: dimension mismatch");
    const double T = rho.t_max();
    std::vector<double> kinks;
    if (rho.d == 2) {
        const double rx = std::hypot(x[0], x[1]);
        if (rx > 0.0) {
            const double phx = std::atan2(x[1], x[0]);
            kinks = {phx + 0.5 * std::numbers::pi, phx - 0.5 * std::numbers::pi};
            if (rx > T) {
                const double off = std::acos(T / rx);
                for (double base : {phx, phx + std::numbers::pi}) {
                    kinks.push_back(base + off);
                    kinks.push_back(base - off);
                }
            }
        }
    }
    const std::vector<double> xv(x.begin(), x.end());
    return refine(
        [&](const QuadratureLevel& lvl) {
            return detail::integrate_omega(
                rho,
                [&](const std::vector<double>& w) {
                    const double wx = detail::dot(w, xv);
                    const double wn = detail::euclidean_norm(w);
                    double v = 0.0;
                    for (int z : {1, -1})
                        v += 0.5 * rho.sign_of_z(z) * detail::averaged_kernel_over_t(z * wx, wn, T, s);
                    return v;
                },
                lvl, kinks);
        },
        level);
}

// ---------------------------------------------------------------------------
// Sampling
// ---------------------------------------------------------------------------

class EnvelopeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Proposal from |rho| (exact, factorized).
inline RepuNeuron sample_abs_density(const DensityDescriptor& rho, StreamRng& rng) {
    RepuNeuron theta;
    theta.z = (rng() & 1u) ? 1 : -1;
    theta.t = rho.t_max() * rng.uniform();
    const double sigma = rho.sigma;
    const double rc = rho.omega_radius();
    if (rho.d == 1) {
        for (;;) {
            const double u1 = 1.0 - rng.uniform();
            const double u2 = rng.uniform();
            const double w = sigma * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
            if (std::abs(w) <= rc) {
                theta.omega = {w};
                break;
            }
        }
    } else {
        const double mass = 1.0 - std::exp(-rc * rc / (2.0 * sigma * sigma));
        const double r = sigma * std::sqrt(-2.0 * std::log1p(-rng.uniform() * mass));
        const double phi = 2.0 * std::numbers::pi * rng.uniform();
        theta.omega = {r * std::cos(phi), r * std::sin(phi)};
    }
    return theta;
}

/// n independent draws from mu, each by rejection against |rho| with the
/// envelope (cutoff*sigma + T + 1)^s. Draw i uses the stream (seed, i).
inline std::vector<RepuNeuron> sample_mu(const DensityDescriptor& rho, double s, std::size_t n, std::uint64_t seed) {
    rho.validate();
    std::vector<RepuNeuron> draws;
    draws.reserve(n);
    const double envelope = std::pow(rho.omega_radius() + rho.t_max() + 1.0, s);
    for (std::size_t i = 0; i < n; ++i) {
        StreamRng rng({seed, 0x33ULL, i});
        std::size_t proposals = 0;
        for (;;) {
            auto theta = sample_abs_density(rho, rng);
            ++proposals;
            if (rng.uniform() * envelope < std::pow(theta.norm(), s)) {
                draws.push_back(std::move(theta));
                break;
            }
            if (proposals >= 10000)
                throw EnvelopeError("sample_mu: acceptance rate below 1e-3; envelope misconfigured");
        }
    }
    return draws;
}

// ---------------------------------------------------------------------------
// Networks
// ---------------------------------------------------------------------------

/// g_n(x) = sum_i a_i sigma_s(<w_i, x> + b_i) + a_0 with RePU activation.
class TwoLayerNetwork {
public:
    TwoLayerNetwork(int d, int order) : d_(d), order_(order) {
        if (d < 1 || order < 1) throw std::invalid_argument("TwoLayerNetwork: bad shape");
    }

    void add_neuron(double a, std::span<const double> w, double b) {
        if (static_cast<int>(w.size()) != d_) throw std::invalid_argument("TwoLayerNetwork: dimension mismatch");
        outer_.push_back(a);
        inner_.insert(inner_.end(), w.begin(), w.end());
        bias_.push_back(b);
    }
    void set_output_bias(double a0) { a0_ = a0; }

    [[nodiscard]] int dim() const { return d_; }
    [[nodiscard]] int order() const { return order_; }
    [[nodiscard]] std::size_t size() const { return outer_.size(); }
    [[nodiscard]] double outer_weight(std::size_t i) const { return outer_[i]; }
    [[nodiscard]] std::span<const double> inner_weight(std::size_t i) const {
        return {inner_.data() + i * static_cast<std::size_t>(d_), static_cast<std::size_t>(d_)};
    }
    [[nodiscard]] double bias(std::size_t i) const { return bias_[i]; }
    [[nodiscard]] double output_bias() const { return a0_; }

    [[nodiscard]] double evaluate(std::span<const double> x) const {
        if (static_cast<int>(x.size()) != d_) throw std::invalid_argument("TwoLayerNetwork: dimension mismatch");
        double sum = 0.0;
        for (std::size_t i = 0; i < outer_.size(); ++i) {
            const double pre = detail::dot(inner_weight(i), x) + bias_[i];
            if (pre > 0.0) sum += outer_[i] * detail::ipow(pre, order_);
        }
        return sum + a0_;
    }

private:
    int d_;
    int order_;
    std::vector<double> outer_;
    std::vector<double> inner_;
    std::vector<double> bias_;
    double a0_ = 0.0;
};

struct MonteCarloNetwork {
    TwoLayerNetwork network;
    std::size_t excluded = 0;  // draws with |theta| = 0
};

/// Materializes u_n as a network: neuron i has inner weight z_i w_i, bias
/// -t_i |w_i| and outer weight (||rho|| / n) sgn rho(theta_i) / |theta_i|^s.
inline MonteCarloNetwork build_mc_network(const DensityDescriptor& rho, int s, std::span<const RepuNeuron> draws,
                                          double hs1) {
    if (draws.empty()) throw std::invalid_argument("build_mc_network: no draws");
    MonteCarloNetwork out{TwoLayerNetwork(rho.d, s), 0};
    const double scale = hs1 / static_cast<double>(draws.size());
    std::vector<double> w(static_cast<std::size_t>(rho.d));
    for (const auto& theta : draws) {
        const double nrm = theta.norm();
        if (nrm == 0.0) {
            ++out.excluded;
            continue;
        }
        for (int j = 0; j < rho.d; ++j) w[static_cast<std::size_t>(j)] = theta.z * theta.omega[static_cast<std::size_t>(j)];
        const double a = scale * rho.sign_of(theta) / std::pow(nrm, s);
        out.network.add_neuron(a, w, -theta.t * detail::euclidean_norm(theta.omega));
    }
    return out;
}

inline MonteCarloNetwork build_mc_network(const DensityDescriptor& rho, int s, const std::vector<RepuNeuron>& draws,
                                          double hs1) {
    return build_mc_network(rho, s, std::span<const RepuNeuron>(draws), hs1);
}

// ---------------------------------------------------------------------------
// Grid L2 on Omega and the MISE experiment
// ---------------------------------------------------------------------------

/// Tensor trapezoid grid on [-1, 1]^d.
struct OmegaGrid {
    int d = 2;
    int points_per_axis = 33;
    std::vector<double> coords;   // flattened points
    std::vector<double> weights;

    OmegaGrid(int d_, int points) : d(d_), points_per_axis(points) {
        if (d < 1 || points < 2) throw std::invalid_argument("OmegaGrid: bad shape");
        const double h = 2.0 / (points - 1);
        std::size_t total = 1;
        for (int i = 0; i < d; ++i) total *= static_cast<std::size_t>(points);
        coords.reserve(total * static_cast<std::size_t>(d));
        weights.reserve(total);
        std::vector<int> idx(static_cast<std::size_t>(d), 0);
        for (std::size_t p = 0; p < total; ++p) {
            double w = 1.0;
            for (int j = 0; j < d; ++j) {
                const int i = idx[static_cast<std::size_t>(j)];
                coords.push_back(-1.0 + h * i);
                w *= (i == 0 || i == points - 1) ? 0.5 * h : h;
            }
            weights.push_back(w);
            for (int j = 0; j < d; ++j) {
                if (++idx[static_cast<std::size_t>(j)] < points) break;
                idx[static_cast<std::size_t>(j)] = 0;
            }
        }
    }
    [[nodiscard]] std::size_t size() const { return weights.size(); }
    [[nodiscard]] std::span<const double> point(std::size_t i) const {
        return {coords.data() + i * static_cast<std::size_t>(d), static_cast<std::size_t>(d)};
    }
    [[nodiscard]] double volume() const { return std::pow(2.0, d); }

    /// Grid L2(Omega) norm of the values.
    [[nodiscard]] double l2(std::span<const double> values) const {
        double s = 0.0;
        for (std::size_t i = 0; i < weights.size(); ++i) s += weights[i] * values[i] * values[i];
        return std::sqrt(s);
    }
};

/// Growth constant C_s = (1 + T)^s: sup_{x in Omega} |g(x, theta)| <= C_s |theta|^s.
inline double growth_constant(const DensityDescriptor& rho, int s) { return std::pow(1.0 + rho.t_max(), s); }

struct MiseConfig {
    std::vector<std::size_t> n_grid;
    std::size_t reps = 30;
    int grid_points = 33;
    std::uint64_t seed = 0;
    unsigned workers = 1;
};

struct MiseRow {
    std::size_t n = 0;
    double rms_error = 0.0;
    double stderr_rms = 0.0;
    double bound = 0.0;
    double mse = 0.0;
};

struct MiseReport {
    std::vector<MiseRow> rows;
    FitResult fit;
    double hs1 = 0.0;
    double growth = 0.0;
    double omega_volume = 0.0;
    double target_l2 = 0.0;

    [[nodiscard]] bool all_below_bound() const {
        return std::all_of(rows.begin(), rows.end(), [](const MiseRow& r) { return r.rms_error <= r.bound; });
    }

    /// CSV with columns n, rms_error, stderr, bound.
    [[nodiscard]] std::string to_csv() const {
        std::ostringstream os;
        os << "n,rms_error,stderr,bound\n";
        char buf[128];
        for (const auto& r : rows) {
            std::snprintf(buf, sizeof buf, "%zu,%.12e,%.12e,%.12e\n", r.n, r.rms_error, r.stderr_rms, r.bound);
            os << buf;
        }
        return os.str();
    }
};

/// For each n, `reps` independent networks are compared with the quadrature
/// target on a tensor trapezoid grid; reports the root mean squared L2 error,
/// its standard error, the Monte Carlo bound C_s ||rho|| sqrt(|Omega| / n)
/// and the log-log slope of rms error against n.
inline MiseReport mise_experiment(const DensityDescriptor& rho, int s, const MiseConfig& cfg) {
    rho.validate();
    if (cfg.reps < 10) throw std::invalid_argument("mise_experiment: reps must be >= 10");
    if (cfg.n_grid.empty() || !std::is_sorted(cfg.n_grid.begin(), cfg.n_grid.end()) ||
        std::adjacent_find(cfg.n_grid.begin(), cfg.n_grid.end()) != cfg.n_grid.end() || cfg.n_grid.front() == 0)
        throw std::invalid_argument("mise_experiment: n_grid must be strictly ascending and positive");
    if (cfg.grid_points < 33) throw std::invalid_argument("mise_experiment: need >= 33 grid points per axis");

    MiseReport rep;
    const auto norm = hs1_norm(rho, s);
    if (!norm.converged) throw std::runtime_error("mise_experiment: hs1_norm quadrature did not converge");
    rep.hs1 = norm.value;
    rep.growth = growth_constant(rho, s);

    const OmegaGrid grid(rho.d, cfg.grid_points);
    rep.omega_volume = grid.volume();
    std::vector<double> target(grid.size());
    parallel_for(grid.size(), cfg.workers, [&](std::size_t i) {
        const auto v = oracle_integral(rho, s, grid.point(i));
        if (!v.converged) throw std::runtime_error("mise_experiment: oracle quadrature did not converge");
        target[i] = v.value;
    });
    rep.target_l2 = grid.l2(target);

    const std::size_t levels = cfg.n_grid.size();
    std::vector<double> sq_err(levels * cfg.reps);
    parallel_for(levels * cfg.reps, cfg.workers, [&](std::size_t job) {
        const std::size_t j = job / cfg.reps;
        const std::size_t r = job % cfg.reps;
        const auto draws = sample_mu(rho, s, cfg.n_grid[j], derive_key({cfg.seed, j, r}));
        const auto net = build_mc_network(rho, s, draws, rep.hs1);
        std::vector<double> diff(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) diff[i] = net.network.evaluate(grid.point(i)) - target[i];
        const double e = grid.l2(diff);
        sq_err[job] = e * e;
    });

    std::vector<std::pair<double, double>> pairs;
    for (std::size_t j = 0; j < levels; ++j) {
        const auto first = sq_err.begin() + static_cast<std::ptrdiff_t>(j * cfg.reps);
        const auto last = first + static_cast<std::ptrdiff_t>(cfg.reps);
        const double reps = static_cast<double>(cfg.reps);
        const double mse = std::accumulate(first, last, 0.0) / reps;
        double var = 0.0;
        for (auto it = first; it != last; ++it) var += (*it - mse) * (*it - mse);
        var /= (reps - 1.0);
        MiseRow row;
        row.n = cfg.n_grid[j];
        row.mse = mse;
        row.rms_error = std::sqrt(mse);
        row.stderr_rms = std::sqrt(var / reps) / (2.0 * row.rms_error);
        row.bound = rep.growth * rep.hs1 * std::sqrt(rep.omega_volume / static_cast<double>(row.n));
        rep.rows.push_back(row);
        pairs.emplace_back(static_cast<double>(row.n), row.rms_error);
    }
    rep.fit = fit_rate(pairs);
    return rep;
}

}  // namespace barron

// Barron-penalized Tikhonov regularization for multiplier forward maps,
//     J_lambda(u) = ||F u - y||_Y^2 + lambda ||u||_{B^p},   Y = B^0,
// with an exact minimizer and the delta^{p/(a+p)} rate experiment.
//
// Exact minimization. Write m_k = mult_k |y_k| (mult = 2 for a pair +-k,
// 1 for k = 0) and rho_k = <k>^p / phi(k). Aligning the phase of c_k with
// y_k and setting c_k = t_k y_k / phi(k), t_k in [0, 1], is optimal, and
//     J = (sum_k (1 - t_k) m_k)^2 + lambda sum_k t_k rho_k m_k.
// In the recovered masses x_k = t_k m_k this is a convex quadratic of the
// residual r = sum m_k - sum x_k plus a linear term. The KKT conditions are
//     2 r >= lambda rho_k  if t_k = 1,   2 r = lambda rho_k  if 0 < t_k < 1,
//     2 r <= lambda rho_k  if t_k = 0,
// which the greedy pass below satisfies: visit frequencies by ascending
// rho_k and recover mass while 2 r > lambda rho_k. At most one pair ends
// fractional. Frequencies outside supp(y) only increase both terms.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "barron/parallel.hpp"
#include "barron/pdo_ops.hpp"
#include "barron/rate_fit.hpp"
#include "barron/rng.hpp"
#include "barron/spectral_core.hpp"

namespace barron {

// ---------------------------------------------------------------------------
// Truth and noise
// ---------------------------------------------------------------------------

namespace detail {

inline double standard_normal(StreamRng& rng) {
    const double u1 = 1.0 - rng.uniform();
    const double u2 = rng.uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

/// Number of canonical nonzero lattice points with |k| <= radius.
inline std::size_t canonical_points_in_ball(int d, double radius) {
    std::size_t n = 0;
    for_each_in_ball(d, radius, [&n](const Frequency& k) { n += (!k.is_zero() && k.is_canonical()) ? 1 : 0; });
    return n;
}

}  // namespace detail

/// Random u with ||u||_{B^p} = R exactly. `modes` canonical frequencies are
/// placed with |k| log-uniform in [1, K_max] and uniform direction, so the
/// B^p mass is spread evenly over frequency scales; each mode gets a random
/// share of the mass and a random phase.
inline SpectralFunction make_truth(double p, double R, int d, int K_max, std::uint64_t seed, int modes = 32) {
    if (d < 1 || K_max < 1) throw std::invalid_argument("make_truth: need d >= 1 and K_max >= 1");
    if (modes < 1) throw std::invalid_argument("make_truth: empty support requested");
    if (R < 0.0) throw std::invalid_argument("make_truth: R must be nonnegative");
    if (R == 0.0) return SpectralFunction(d);
    const auto available = detail::canonical_points_in_ball(d, K_max);
    const auto target = std::min<std::size_t>(static_cast<std::size_t>(modes), available);

    StreamRng rng({seed, 0x44ULL});
    std::set<Frequency> chosen;
    std::size_t guard = 0;
    while (chosen.size() < target && guard++ < 1000000) {
        const double radius = std::exp(rng.uniform() * std::log(static_cast<double>(K_max)));
        std::vector<double> dir(static_cast<std::size_t>(d));
        double nrm = 0.0;
        for (double& c : dir) {
            c = detail::standard_normal(rng);
            nrm += c * c;
        }
        nrm = std::sqrt(nrm);
        std::vector<int> comps(static_cast<std::size_t>(d));
        for (int i = 0; i < d; ++i)
            comps[static_cast<std::size_t>(i)] = static_cast<int>(std::lround(radius * dir[static_cast<std::size_t>(i)] / nrm));
        Frequency k(std::move(comps));
        if (k.is_zero() || k.norm_sq() > static_cast<double>(K_max) * K_max) continue;
        if (!k.is_canonical()) k = -k;
        chosen.insert(k);
    }
    std::vector<double> share;
    double total = 0.0;
    for (std::size_t i = 0; i < chosen.size(); ++i) {
        share.push_back(0.5 + rng.uniform());
        total += share.back();
    }
    std::vector<std::pair<Frequency, Complex>> half;
    std::size_t i = 0;
    for (const auto& k : chosen) {
        // pair mass 2 |c| <k>^p equals R * share / total
        const double modulus = R * share[i++] / total / (2.0 * std::pow(bracket(k), p));
        half.emplace_back(k, std::polar(modulus, 2.0 * std::numbers::pi * rng.uniform()));
    }
    auto u = SpectralFunction::from_half_lattice(d, half);
    // Rescale away rounding so the norm is R to the last bits.
    return (R / barron_norm(u, p)) * u;
}

struct NoisyData {
    SpectralFunction y_delta;
    double delta = 0.0;
    std::optional<SpectralFunction> true_y;
};

/// y + eta with ||eta||_{B^0} = delta. eta lives on supp(y) plus up to
/// `fresh` new canonical frequencies drawn uniformly from |k| <= fresh_radius.
inline NoisyData add_noise(const SpectralFunction& y, double delta, std::uint64_t seed, int fresh_radius = 16,
                           int fresh = 3) {
    if (delta < 0.0) throw std::invalid_argument("add_noise: delta must be nonnegative");
    NoisyData out{y, delta, y};
    if (delta == 0.0) return out;
    const int d = y.dim();
    StreamRng rng({seed, 0x55ULL});

    std::vector<Frequency> where;
    for (const auto& [k, c] : y.half_lattice()) where.push_back(k);
    const auto available = detail::canonical_points_in_ball(d, fresh_radius);
    std::set<Frequency> extra;
    std::size_t guard = 0;
    while (static_cast<int>(extra.size()) < fresh && guard++ < 100000) {
        std::vector<int> comps(static_cast<std::size_t>(d));
        for (int& c : comps)
            c = static_cast<int>(rng() % (2 * static_cast<std::uint64_t>(fresh_radius) + 1)) - fresh_radius;
        Frequency k(std::move(comps));
        if (k.is_zero() || k.norm_sq() > static_cast<double>(fresh_radius) * fresh_radius) continue;
        if (!k.is_canonical()) k = -k;
        if (y.contains(k)) continue;
        extra.insert(k);
        if (extra.size() + y.half_lattice().size() >= available + 1) break;
    }
    where.insert(where.end(), extra.begin(), extra.end());
    if (where.empty()) where.push_back(Frequency::zero(d));

    std::vector<double> share(where.size());
    double total = 0.0;
    for (double& s : share) {
        s = 1.0 - rng.uniform();
        total += s;
    }
    std::vector<std::pair<Frequency, Complex>> half;
    for (std::size_t i = 0; i < where.size(); ++i) {
        const double mass = delta * share[i] / total;
        const Frequency& k = where[i];
        if (k.is_zero())
            half.emplace_back(k, Complex((rng() & 1u) ? mass : -mass, 0.0));
        else
            half.emplace_back(k, std::polar(0.5 * mass, 2.0 * std::numbers::pi * rng.uniform()));
    }
    const auto eta = SpectralFunction::from_half_lattice(d, half);
    out.y_delta = y + eta;
    return out;
}

// ---------------------------------------------------------------------------
// Solver
// ---------------------------------------------------------------------------

inline double tikhonov_objective(const SymbolDescriptor& phi, const SpectralFunction& y, double lambda, double p,
                                 const SpectralFunction& u) {
    const double residual = barron_norm(apply_symbol(phi, u) - y, 0.0);
    return residual * residual + lambda * barron_norm(u, p);
}

struct TikhonovSolution {
    SpectralFunction u_delta;
    double objective = 0.0;       // value tracked by the greedy pass
    double residual = 0.0;        // ||F u - y||_{B^0}
    std::vector<Frequency> active_set;
    std::optional<Frequency> fractional_index;  // canonical representative
};

class NonEllipticSymbol : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Exact global minimizer of J_lambda over all spectral functions.
inline TikhonovSolution solve_tikhonov(const SymbolDescriptor& phi, const SpectralFunction& y_delta, double lambda,
                                       double p) {
    if (!(lambda >= 0.0)) throw std::invalid_argument("solve_tikhonov: lambda must be >= 0");
    struct Item {
        Frequency k;
        Complex y;
        double mass;
        double phi;
        double ratio;
    };
    std::vector<Item> items;
    double residual = 0.0;
    for (const auto& [k, c] : y_delta.half_lattice()) {
        const double ph = phi(k);
        if (!(ph > 0.0) || !std::isfinite(ph))
            throw NonEllipticSymbol("solve_tikhonov: symbol vanishes or is not finite on supp(y)");
        const double mass = (k.is_zero() ? 1.0 : 2.0) * std::abs(c);
        items.push_back({k, c, mass, ph, std::pow(bracket(k), p) / ph});
        residual += mass;
    }
    std::stable_sort(items.begin(), items.end(), [](const Item& a, const Item& b) { return a.ratio < b.ratio; });

    TikhonovSolution sol{SpectralFunction(y_delta.dim()), 0.0, 0.0, {}, std::nullopt};
    std::vector<std::pair<Frequency, Complex>> half;
    double penalty = 0.0;
    for (const auto& it : items) {
        const double threshold = 0.5 * lambda * it.ratio;
        if (residual <= threshold) break;
        const double take = std::min(it.mass, residual - threshold);
        const double t = take / it.mass;
        residual -= take;
        penalty += take * it.ratio;
        half.emplace_back(it.k, t * it.y / it.phi);
        if (t < 1.0) {
            sol.fractional_index = it.k;
            break;
        }
    }
    sol.u_delta = SpectralFunction::from_half_lattice(y_delta.dim(), half);
    for (const auto& [k, c] : sol.u_delta.atoms()) sol.active_set.push_back(k);
    sol.residual = residual;
    sol.objective = residual * residual + lambda * penalty;
    return sol;
}

/// ceil((1/delta)^{2p/(a+p)}), the neuron count balancing both error terms.
inline std::size_t neuron_budget(double delta, double a, double p) {
    if (!(delta > 0.0) || !(delta < 1.0)) throw std::invalid_argument("neuron_budget: need 0 < delta < 1");
    if (!(a > 0.0) || !(p > 0.0)) throw std::invalid_argument("neuron_budget: need a, p > 0");
    const double n = std::exp(2.0 * p / (a + p) * -std::log(delta));
    // Absorb last-bit error so exact integers are not bumped up.
    return static_cast<std::size_t>(std::ceil(n * (1.0 - 1e-12)));
}

// ---------------------------------------------------------------------------
// Rate experiment
// ---------------------------------------------------------------------------

struct InverseProblemSpec {
    SymbolDescriptor phi = SymbolDescriptor::bracket_power(-2.0);
    double a = 2.0;
    SmoothnessClass cls = SmoothnessClass(2.0, 1e4, 2);
    int d = 2;
    int K_max = 64;
    int modes = 32;

    [[nodiscard]] double p() const { return cls.p; }
    [[nodiscard]] double R() const { return cls.R; }

    void validate() const {
        if (!(a > 0.0)) throw std::invalid_argument("InverseProblemSpec: a must be positive");
        if (d < 1 || K_max < 1) throw std::invalid_argument("InverseProblemSpec: bad lattice");
        if (cls.reference.dim() != d || !cls.reference.is_zero())
            throw std::invalid_argument("InverseProblemSpec: the penalty is centered at zero; reference must be 0");
        const auto e = ellipticity_bounds(phi, a, K_max, d);
        if (!(e.c > 0.0) || !std::isfinite(e.C))
            throw std::invalid_argument("InverseProblemSpec: symbol is not elliptic on the lattice ball");
    }
};

struct TikhonovSample {
    double delta = 0.0;
    std::size_t rep = 0;
    double error = 0.0;    // ||u_dag - u_delta||_{L^2}
    double bound = 0.0;    // 1.01 c^{-p/(p+a)} (2(R+1))^{a/(p+a)} ((sqrt(1+R)+1) delta)^{p/(p+a)}
    double lambda = 0.0;
    bool objective_ok = true;  // J(u_delta) <= J(u_dag)
    bool residual_ok = true;   // ||F u_delta - y_delta|| <= sqrt(1+R) delta
    bool norm_ok = true;       // ||u_delta||_{B^p} <= 1 + R
    bool support_ok = true;    // supp(u_delta) within supp(y_delta)
};

struct TikhonovRateReport {
    double theory_slope = 0.0;
    FitResult fit;
    std::vector<TikhonovSample> samples;
    std::vector<std::pair<double, double>> median_errors;  // (delta, median error)
    std::size_t inversions = 0;  // median error increasing as delta decreases

    [[nodiscard]] std::size_t bound_violations() const {
        return static_cast<std::size_t>(std::count_if(samples.begin(), samples.end(),
                                                      [](const TikhonovSample& s) { return s.error > s.bound; }));
    }
    [[nodiscard]] std::size_t invariant_violations() const {
        return static_cast<std::size_t>(std::count_if(samples.begin(), samples.end(), [](const TikhonovSample& s) {
            return !(s.objective_ok && s.residual_ok && s.norm_ok && s.support_ok);
        }));
    }

    /// delta, rep, error, bound, lambda
    [[nodiscard]] std::string samples_csv() const {
        std::ostringstream os;
        os << "delta,rep,error,bound,lambda\n";
        char buf[160];
        for (const auto& s : samples) {
            std::snprintf(buf, sizeof buf, "%.12e,%zu,%.12e,%.12e,%.12e\n", s.delta, s.rep, s.error, s.bound,
                          s.lambda);
            os << buf;
        }
        return os.str();
    }
    /// delta, median_error, theory_slope, fitted_slope
    [[nodiscard]] std::string summary_csv() const {
        std::ostringstream os;
        os << "delta,median_error,theory_slope,fitted_slope\n";
        char buf[160];
        for (const auto& [delta, med] : median_errors) {
            std::snprintf(buf, sizeof buf, "%.12e,%.12e,%.12e,%.12e\n", delta, med, theory_slope, fit.slope);
            os << buf;
        }
        return os.str();
    }
};

/// For every (delta, rep): fresh truth in M(R) and fresh noise of level delta,
/// solve with lambda = delta^2, record the L2 error. Fits the slope of the
/// per-delta median error against delta on log-log axes.
inline TikhonovRateReport rate_experiment(const InverseProblemSpec& spec, const std::vector<double>& delta_grid,
                                          std::size_t reps, std::uint64_t seed, unsigned workers = 1) {
    spec.validate();
    if (reps < 10) throw std::invalid_argument("rate_experiment: reps must be >= 10");
    if (delta_grid.size() < 3) throw std::invalid_argument("rate_experiment: need at least 3 noise levels");
    for (std::size_t i = 0; i < delta_grid.size(); ++i) {
        if (!(delta_grid[i] > 0.0 && delta_grid[i] < 1.0))
            throw std::invalid_argument("rate_experiment: noise levels must lie in (0, 1)");
        if (i > 0 && !(delta_grid[i] < delta_grid[i - 1]))
            throw std::invalid_argument("rate_experiment: noise levels must be strictly decreasing");
    }
    const double p = spec.p();
    const double a = spec.a;
    const double R = spec.R();

    TikhonovRateReport rep;
    rep.theory_slope = p / (a + p);
    rep.samples.resize(delta_grid.size() * reps);
    parallel_for(rep.samples.size(), workers, [&](std::size_t job) {
        const std::size_t i = job / reps;
        const std::size_t r = job % reps;
        const double delta = delta_grid[i];
        const double lambda = delta * delta;
        try {
            const auto truth = make_truth(p, R, spec.d, spec.K_max, derive_key({seed, i, r, 1}), spec.modes);
            const auto y = apply_symbol(spec.phi, truth);
            const auto data = add_noise(y, delta, derive_key({seed, i, r, 2}), spec.K_max);
            const auto sol = solve_tikhonov(spec.phi, data.y_delta, lambda, p);

            TikhonovSample s;
            s.delta = delta;
            s.rep = r;
            s.lambda = lambda;
            s.error = l2_norm(truth - sol.u_delta);
            std::vector<Frequency> supp;
            for (const auto& [k, c] : data.y_delta.atoms()) supp.push_back(k);
            const double c_low = ellipticity_bounds_on(spec.phi, a, supp).c;
            s.bound = 1.01 * std::pow(c_low, -p / (p + a)) *
                      modulus_bound(R + 1.0, a, p, (std::sqrt(1.0 + R) + 1.0) * delta);
            const double j_sol = tikhonov_objective(spec.phi, data.y_delta, lambda, p, sol.u_delta);
            const double j_true = tikhonov_objective(spec.phi, data.y_delta, lambda, p, truth);
            s.objective_ok = j_sol <= j_true * (1.0 + 1e-12);
            s.residual_ok = sol.residual <= std::sqrt(1.0 + R) * delta * (1.0 + 1e-12);
            s.norm_ok = barron_norm(sol.u_delta, p) <= (1.0 + R) * (1.0 + 1e-12);
            s.support_ok = std::all_of(sol.u_delta.atoms().begin(), sol.u_delta.atoms().end(),
                                       [&](const auto& kc) { return data.y_delta.contains(kc.first); });
            rep.samples[job] = s;
        } catch (const std::exception& e) {
            std::ostringstream os;
            os << "rate_experiment: solve failed at delta=" << delta << " rep=" << r << " seed=" << seed << ": "
               << e.what();
            throw std::runtime_error(os.str());
        }
    });

    for (std::size_t i = 0; i < delta_grid.size(); ++i) {
        std::vector<double> errs;
        for (std::size_t r = 0; r < reps; ++r) errs.push_back(rep.samples[i * reps + r].error);
        std::sort(errs.begin(), errs.end());
        const std::size_t m = errs.size();
        const double med = m % 2 ? errs[m / 2] : 0.5 * (errs[m / 2 - 1] + errs[m / 2]);
        rep.median_errors.emplace_back(delta_grid[i], med);
        if (i > 0 && med > rep.median_errors[i - 1].second) ++rep.inversions;
    }
    rep.fit = fit_rate(rep.median_errors);
    return rep;
}

}  // namespace barron

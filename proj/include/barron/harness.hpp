// Configuration-driven experiment runner.
//
// Config files are flat `key = value` text; '#' starts a comment. `kind`
// selects the experiment and `seed` is mandatory. Every run writes its CSV
// tables plus `summary.kv` into the output directory; the summary ends with
// `status=PASS` or `status=FAIL`.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "barron/nn_approx.hpp"
#include "barron/pdo_ops.hpp"
#include "barron/radon.hpp"
#include "barron/spectral_core.hpp"
#include "barron/tikhonov.hpp"

namespace barron {

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

inline const std::vector<std::string>& experiment_kinds() {
    static const std::vector<std::string> kinds{"norms", "interp", "link", "stability",
                                                "schroedinger", "mc-rate", "tikhonov-rate", "radon-identity"};
    return kinds;
}

/// Parsed key/value configuration. Getters validate ranges and record which
/// keys were read so that misspelled keys are reported instead of ignored.
class ExperimentConfig {
public:
    static ExperimentConfig parse(std::istream& is, std::filesystem::path base_dir = ".") {
        ExperimentConfig cfg;
        cfg.base_dir_ = std::move(base_dir);
        std::string line;
        int lineno = 0;
        while (std::getline(is, line)) {
            ++lineno;
            if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
            const auto text = trim(line);
            if (text.empty()) continue;
            const auto eq = text.find('=');
            if (eq == std::string::npos)
                throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
            const auto key = trim(text.substr(0, eq));
            const auto value = trim(text.substr(eq + 1));
            if (key.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
            if (!cfg.values_.emplace(key, value).second)
                throw ConfigError("config line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
        }
        const auto kind = cfg.get_string("kind");
        if (std::find(experiment_kinds().begin(), experiment_kinds().end(), kind) == experiment_kinds().end())
            throw ConfigError("unknown experiment kind '" + kind + "'");
        (void)cfg.seed();  // mandatory
        return cfg;
    }

    static ExperimentConfig load(const std::filesystem::path& path) {
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot open config " + path.string());
        return parse(in, path.has_parent_path() ? path.parent_path() : std::filesystem::path("."));
    }

    [[nodiscard]] std::string kind() const { return values_.at("kind"); }
    [[nodiscard]] const std::filesystem::path& base_dir() const { return base_dir_; }

    [[nodiscard]] std::uint64_t seed() const {
        const auto text = get_string("seed");
        std::size_t pos = 0;
        unsigned long long v = 0;
        try {
            if (!text.empty() && text[0] == '-') throw std::invalid_argument("negative");
            v = std::stoull(text, &pos);
        } catch (const std::exception&) {
            throw ConfigError("seed must be a nonnegative integer");
        }
        if (pos != text.size()) throw ConfigError("seed must be a nonnegative integer");
        return v;
    }
    void set(const std::string& key, const std::string& value) { values_[key] = value; }

    [[nodiscard]] bool has(const std::string& key) const { return values_.count(key) != 0; }

    [[nodiscard]] std::string get_string(const std::string& key) const {
        used_.insert(key);
        const auto it = values_.find(key);
        if (it == values_.end()) throw ConfigError("missing required key '" + key + "'");
        return it->second;
    }
    [[nodiscard]] std::string get_string(const std::string& key, const std::string& fallback) const {
        return has(key) ? get_string(key) : fallback;
    }

    [[nodiscard]] double get_double(const std::string& key, double fallback, double lo, double hi) const {
        if (!has(key)) return fallback;
        const double v = to_double(key, get_string(key));
        if (!(v >= lo && v <= hi)) throw ConfigError(range_message(key, lo, hi));
        return v;
    }
    [[nodiscard]] long get_int(const std::string& key, long fallback, long lo, long hi) const {
        if (!has(key)) return fallback;
        const double v = to_double(key, get_string(key));
        if (v != std::floor(v)) throw ConfigError("key '" + key + "' must be an integer");
        if (!(v >= lo && v <= hi)) throw ConfigError(range_message(key, lo, hi));
        return static_cast<long>(v);
    }
    [[nodiscard]] std::vector<double> get_list(const std::string& key, std::vector<double> fallback, double lo,
                                               double hi) const {
        if (!has(key)) return fallback;
        std::vector<double> out;
        std::stringstream ss(get_string(key));
        std::string item;
        while (std::getline(ss, item, ',')) {
            const double v = to_double(key, trim(item));
            if (!(v >= lo && v <= hi)) throw ConfigError(range_message(key, lo, hi));
            out.push_back(v);
        }
        if (out.empty()) throw ConfigError("key '" + key + "' must list at least one value");
        return out;
    }

    /// Keys present in the file that no getter asked for.
    [[nodiscard]] std::vector<std::string> unused_keys() const {
        std::vector<std::string> out;
        for (const auto& [k, v] : values_)
            if (!used_.count(k)) out.push_back(k);
        return out;
    }

private:
    static std::string trim(const std::string& s) {
        const auto b = s.find_first_not_of(" \t\r\n");
        if (b == std::string::npos) return {};
        const auto e = s.find_last_not_of(" \t\r\n");
        return s.substr(b, e - b + 1);
    }
    static double to_double(const std::string& key, const std::string& text) {
        std::size_t pos = 0;
        double v = 0.0;
        try {
            v = std::stod(text, &pos);
        } catch (const std::exception&) {
            throw ConfigError("key '" + key + "' is not a number: '" + text + "'");
        }
        if (pos != text.size() || !std::isfinite(v))
            throw ConfigError("key '" + key + "' is not a number: '" + text + "'");
        return v;
    }
    template <class T>
    static std::string range_message(const std::string& key, T lo, T hi) {
        std::ostringstream os;
        os << "key '" << key << "' must lie in [" << lo << ", " << hi << "]";
        return os.str();
    }

    std::map<std::string, std::string> values_;
    mutable std::set<std::string> used_;
    std::filesystem::path base_dir_ = ".";
};

/// Ordered key=value pairs written to summary.kv.
class Summary {
public:
    void add(const std::string& key, const std::string& value) { entries_.emplace_back(key, value); }
    void add(const std::string& key, double value) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", value);
        add(key, std::string(buf));
    }
    void add(const std::string& key, std::size_t value) { add(key, std::to_string(value)); }
    void add(const std::string& key, bool value) { add(key, std::string(value ? "true" : "false")); }
    [[nodiscard]] std::string str() const {
        std::string out;
        for (const auto& [k, v] : entries_) out += k + "=" + v + "\n";
        return out;
    }
    [[nodiscard]] const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

private:
    std::vector<std::pair<std::string, std::string>> entries_;
};

struct RunResult {
    bool pass = false;
    Summary summary;
    std::vector<std::pair<std::string, std::string>> tables;  // file name, contents
};

namespace detail {

inline std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12e", v);
    return buf;
}

inline RandomFunctionOptions function_options(const ExperimentConfig& cfg, int modes, int radius) {
    RandomFunctionOptions opt;
    opt.d = static_cast<int>(cfg.get_int("d", 2, 1, 4));
    opt.modes = static_cast<int>(cfg.get_int("modes", modes, 1, 1000));
    opt.radius = static_cast<int>(cfg.get_int("radius", radius, 1, 1000));
    return opt;
}

inline SymbolDescriptor symbol(const ExperimentConfig& cfg, const std::string& fallback) {
    try {
        return SymbolDescriptor::parse(cfg.get_string("symbol", fallback));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("symbol: ") + e.what());
    }
}

/// All canonical lattice points with |k|^2 = radius_sq; empty if none.
inline std::vector<Frequency> lattice_shell(int d, int radius_sq) {
    std::vector<Frequency> out;
    for_each_in_ball(d, std::sqrt(static_cast<double>(radius_sq)) + 0.5, [&](const Frequency& k) {
        if (static_cast<int>(k.norm_sq()) == radius_sq && k.is_canonical()) out.push_back(k);
    });
    return out;
}

inline RunResult run_norms(const ExperimentConfig& cfg) {
    RunResult res;
    const auto path = cfg.base_dir() / cfg.get_string("function");
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open function file " + path.string());
    const auto u = read_spectral_function(in);
    const auto s_list = cfg.get_list("s_list", {-2, -1, 0, 1, 2}, -50, 50);
    std::string csv = "s,barron_norm\n";
    for (double s : s_list) csv += fmt(s) + "," + fmt(barron_norm(u, s)) + "\n";
    res.tables.emplace_back("norms.csv", csv);
    res.summary.add("atoms", u.size());
    res.summary.add("l2_norm", l2_norm(u));
    res.pass = true;
    return res;
}

inline RunResult run_interp(const ExperimentConfig& cfg, unsigned workers) {
    RunResult res;
    const auto seed = cfg.seed();
    const auto trials = static_cast<std::size_t>(cfg.get_int("trials", 1000, 1, 10000000));
    const int modes = static_cast<int>(cfg.get_int("modes", 6, 1, 1000));
    const int radius = static_cast<int>(cfg.get_int("radius", 6, 1, 1000));
    const auto raw = cfg.get_list("triples", {0, 1, 2, -2, 0, 2, -1, 0.5, 3}, -50, 50);
    if (raw.size() % 3 != 0) throw ConfigError("triples must list r,s,t groups");
    std::vector<InterpolationTriple> triples;
    for (std::size_t i = 0; i < raw.size(); i += 3) {
        if (!(raw[i] < raw[i + 1] && raw[i + 1] < raw[i + 2])) throw ConfigError("triples need r < s < t");
        triples.emplace_back(raw[i], raw[i + 1], raw[i + 2]);
    }
    const auto resolvent_trials = static_cast<std::size_t>(cfg.get_int("resolvent_trials", 500, 0, 10000000));

    // Random functions in d = 1, 2, 3: Hoelder bound gap <= 1.
    std::vector<std::vector<double>> gaps(trials);
    parallel_for(trials, workers, [&](std::size_t i) {
        StreamRng rng({seed, 0x101ULL, i});
        const auto u = random_spectral_function(1 + static_cast<int>(i % 3), modes, radius, rng);
        for (const auto& tr : triples) gaps[i].push_back(interpolation_gap(u, tr));
    });
    // Single-shell functions: equality.
    const std::vector<int> shells{1, 2, 5, 25, 50};
    std::vector<std::vector<double>> shell_gaps(shells.size());
    for (std::size_t j = 0; j < shells.size(); ++j) {
        StreamRng rng({seed, 0x102ULL, j});
        std::vector<std::pair<Frequency, Complex>> half;
        for (const auto& k : lattice_shell(2, shells[j])) half.emplace_back(k, Complex(rng.uniform() - 0.5, rng.uniform()));
        const auto u = SpectralFunction::from_half_lattice(2, half);
        for (const auto& tr : triples) shell_gaps[j].push_back(interpolation_gap(u, tr));
    }
    std::string csv = "triple_id,r,s,t,max_gap,min_gap,max_shell_deviation\n";
    double worst = 0.0, worst_shell = 0.0;
    for (std::size_t t = 0; t < triples.size(); ++t) {
        double mx = 0.0, mn = 2.0, dev = 0.0;
        for (const auto& g : gaps) {
            mx = std::max(mx, g[t]);
            mn = std::min(mn, g[t]);
        }
        for (const auto& g : shell_gaps) dev = std::max(dev, std::abs(g[t] - 1.0));
        worst = std::max(worst, mx);
        worst_shell = std::max(worst_shell, dev);
        csv += std::to_string(t) + "," + fmt(triples[t].r()) + "," + fmt(triples[t].s()) + "," +
               fmt(triples[t].t()) + "," + fmt(mx) + "," + fmt(mn) + "," + fmt(dev) + "\n";
    }
    res.tables.emplace_back("interp.csv", csv);

    // Sectoriality of the resolvent: ||(t + L^n)^{-1} u||_{B^0} <= ||u||_{B^0} / t.
    std::vector<double> excess(resolvent_trials);
    parallel_for(resolvent_trials, workers, [&](std::size_t i) {
        StreamRng rng({seed, 0x103ULL, i});
        const auto u = random_spectral_function(2, modes, radius, rng);
        const double t = std::exp(std::log(0.01) + rng.uniform() * std::log(1e4));
        const int n = 1 + static_cast<int>(rng() % 3);
        excess[i] = barron_norm(apply_resolvent(u, t, n), 0.0) * t / barron_norm(u, 0.0);
    });
    const auto violations =
        static_cast<std::size_t>(std::count_if(excess.begin(), excess.end(), [](double e) { return e > 1.0; }));
    const double max_excess = excess.empty() ? 0.0 : *std::max_element(excess.begin(), excess.end());

    res.summary.add("trials", trials);
    res.summary.add("max_gap", worst);
    res.summary.add("max_shell_deviation", worst_shell);
    res.summary.add("resolvent_trials", resolvent_trials);
    res.summary.add("resolvent_max_scaled_norm", max_excess);
    res.summary.add("resolvent_violations", violations);
    res.pass = worst <= 1.0 + 1e-12 && worst_shell <= 1e-12 && violations == 0;
    return res;
}

inline RunResult run_link(const ExperimentConfig& cfg) {
    RunResult res;
    const auto phi = symbol(cfg, "bracket(-2)");
    const double a = cfg.get_double("a", 2.0, 1e-6, 50.0);
    const auto trials = static_cast<std::size_t>(cfg.get_int("trials", 500, 1, 10000000));
    const auto opt = function_options(cfg, 6, 8);
    const auto rep = link_constants(phi, a, trials, cfg.seed(), opt);
    res.tables.emplace_back("link.csv", "symbol,a,m,M,scan_c,scan_C\n" + phi.to_string() + "," + fmt(a) + "," +
                                            fmt(rep.m) + "," + fmt(rep.M) + "," + fmt(rep.scan_c) + "," +
                                            fmt(rep.scan_C) + "\n");
    res.summary.add("symbol", phi.to_string());
    res.summary.add("m", rep.m);
    res.summary.add("M", rep.M);
    res.summary.add("scan_c", rep.scan_c);
    res.summary.add("scan_C", rep.scan_C);
    res.summary.add("pairs", rep.num_pairs);
    res.summary.add("within_scan", rep.within_scan);
    res.pass = rep.within_scan && rep.num_pairs > 0;
    return res;
}

inline RunResult run_stability(const ExperimentConfig& cfg) {
    RunResult res;
    const auto phi = symbol(cfg, "bracket(-2)");
    const double a = cfg.get_double("a", 2.0, 1e-6, 50.0);
    const double p = cfg.get_double("p", 2.0, 1e-6, 50.0);
    const double R = cfg.get_double("R", 1.0, 1e-12, 1e12);
    const auto trials = static_cast<std::size_t>(cfg.get_int("trials", 500, 1, 10000000));
    const auto opt = function_options(cfg, 6, 8);
    const auto rep = conditional_stability_check(phi, a, SmoothnessClass(p, R, opt.d), trials, cfg.seed(), opt);
    res.tables.emplace_back("stability.csv", "pairs,max_ratio,bound,lower_link\n" + std::to_string(rep.pairs) +
                                                 "," + fmt(rep.max_ratio) + "," + fmt(rep.bound) + "," +
                                                 fmt(rep.lower_link) + "\n");
    res.summary.add("symbol", phi.to_string());
    res.summary.add("max_ratio", rep.max_ratio);
    res.summary.add("bound", rep.bound);
    res.summary.add("pairs", rep.pairs);
    res.pass = rep.holds() && rep.pairs > 0;
    return res;
}

inline RunResult run_schroedinger(const ExperimentConfig& cfg, unsigned workers) {
    RunResult res;
    const auto seed = cfg.seed();
    const double alpha = cfg.get_double("alpha", 1.0, 1e-6, 1e6);
    const double q = cfg.get_double("q", 0.3, 0.0, 0.999);
    const double tol = cfg.get_double("tol", 1e-10, 1e-15, 1.0);
    const auto trials = static_cast<std::size_t>(cfg.get_int("trials", 20, 1, 100000));
    const int d = static_cast<int>(cfg.get_int("d", 1, 1, 3));
    const int w_modes = static_cast<int>(cfg.get_int("potential_modes", 5, 1, 100));
    const int w_radius = static_cast<int>(cfg.get_int("potential_radius", 3, 1, 100));
    const int modes = static_cast<int>(cfg.get_int("modes", 8, 1, 100));
    const int radius = static_cast<int>(cfg.get_int("radius", 6, 1, 100));

    struct Row {
        int terms = 0;
        double tail = 0.0, residual = 0.0;
    };
    std::vector<Row> rows(trials);
    parallel_for(trials, workers, [&](std::size_t i) {
        StreamRng rng({seed, 0x201ULL, i});
        auto W = random_spectral_function(d, w_modes, w_radius, rng);
        W = (q * alpha / barron_norm(W, 0.0)) * W;
        const auto u = random_spectral_function(d, modes, radius, rng);
        const auto sol = schroedinger_forward(alpha, W, u, tol);
        // Residual of (alpha - Laplacian + W) v = u.
        const auto lhs = alpha * sol.solution + (apply_bracket_power(sol.solution, 2.0) - sol.solution) +
                         multiply(W, sol.solution);
        rows[i] = {sol.terms, sol.tail_bound, barron_norm(lhs - u, 0.0)};
    });
    std::string csv = "trial,terms,tail_bound,residual\n";
    double worst = 0.0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        csv += std::to_string(i) + "," + std::to_string(rows[i].terms) + "," + fmt(rows[i].tail) + "," +
               fmt(rows[i].residual) + "\n";
        worst = std::max(worst, rows[i].residual);
    }
    res.tables.emplace_back("schroedinger.csv", csv);
    res.summary.add("contraction", q);
    res.summary.add("max_residual", worst);
    // The residual equals W times the first discarded term.
    res.pass = worst <= 10.0 * tol * std::max(1.0, alpha);
    return res;
}

inline RunResult run_mc_rate(const ExperimentConfig& cfg, unsigned workers) {
    RunResult res;
    DensityDescriptor rho;
    rho.d = static_cast<int>(cfg.get_int("d", 2, 1, 2));
    rho.sigma = cfg.get_double("sigma", 1.0, 1e-3, 1e3);
    rho.cutoff = cfg.get_double("cutoff", 3.0, 0.1, 50.0);
    const auto sign = cfg.get_string("sign", "positive");
    if (sign == "positive")
        rho.sign = SignPattern::Positive;
    else if (sign == "zodd")
        rho.sign = SignPattern::ZOdd;
    else
        throw ConfigError("sign must be 'positive' or 'zodd'");
    const int s = static_cast<int>(cfg.get_int("order", 2, 1, 8));
    MiseConfig mc;
    for (double n : cfg.get_list("n_grid", {16, 32, 64, 128, 256, 512, 1024, 2048, 4096}, 1, 1e7)) {
        if (n != std::floor(n)) throw ConfigError("n_grid entries must be integers");
        mc.n_grid.push_back(static_cast<std::size_t>(n));
    }
    mc.reps = static_cast<std::size_t>(cfg.get_int("reps", 30, 10, 100000));
    mc.grid_points = static_cast<int>(cfg.get_int("grid_points", 33, 33, 1025));
    mc.seed = cfg.seed();
    mc.workers = workers;
    const double lo = cfg.get_double("slope_min", -0.65, -10, 10);
    const double hi = cfg.get_double("slope_max", -0.35, -10, 10);
    const auto rep = mise_experiment(rho, s, mc);
    res.tables.emplace_back("mc_rate.csv", rep.to_csv());
    res.summary.add("hs1_norm", rep.hs1);
    res.summary.add("growth_constant", rep.growth);
    res.summary.add("theory_slope", -0.5);
    res.summary.add("fitted_slope", rep.fit.slope);
    res.summary.add("all_below_bound", rep.all_below_bound());
    res.pass = rep.fit.slope >= lo && rep.fit.slope <= hi && rep.all_below_bound();
    return res;
}

inline RunResult run_tikhonov_rate(const ExperimentConfig& cfg, unsigned workers) {
    RunResult res;
    InverseProblemSpec spec;
    spec.a = cfg.get_double("a", 2.0, 1e-6, 50.0);
    spec.phi = symbol(cfg, "bracket(" + fmt(-spec.a) + ")");
    spec.d = static_cast<int>(cfg.get_int("d", 2, 1, 3));
    const double p = cfg.get_double("p", 2.0, 1e-6, 50.0);
    const double R = cfg.get_double("R", 1e4, 1e-12, 1e12);
    spec.cls = SmoothnessClass(p, R, spec.d);
    spec.K_max = static_cast<int>(cfg.get_int("K_max", 64, 1, 4096));
    spec.modes = static_cast<int>(cfg.get_int("modes", 32, 1, 100000));
    std::vector<double> grid;
    for (int e = 2; e <= 9; ++e) grid.push_back(std::ldexp(1.0, -e));
    grid = cfg.get_list("delta_grid", grid, 1e-300, 0.999999);
    const auto reps = static_cast<std::size_t>(cfg.get_int("reps", 20, 10, 100000));
    const double slope_tol = cfg.get_double("slope_tolerance", 0.1, 0.0, 10.0);
    const auto rep = rate_experiment(spec, grid, reps, cfg.seed(), workers);
    res.tables.emplace_back("tikhonov_samples.csv", rep.samples_csv());
    res.tables.emplace_back("tikhonov_summary.csv", rep.summary_csv());
    res.summary.add("symbol", spec.phi.to_string());
    res.summary.add("theory_slope", rep.theory_slope);
    res.summary.add("fitted_slope", rep.fit.slope);
    res.summary.add("bound_violations", rep.bound_violations());
    res.summary.add("invariant_violations", rep.invariant_violations());
    res.summary.add("monotonicity_inversions", rep.inversions);
    res.pass = std::abs(rep.fit.slope - rep.theory_slope) <= slope_tol && rep.bound_violations() == 0 &&
               rep.invariant_violations() == 0;
    return res;
}

inline RunResult run_radon_identity(const ExperimentConfig& cfg, unsigned workers) {
    RunResult res;
    const auto family = cfg.get_string("family", "default");
    if (family != "default") throw ConfigError("family must be 'default'");
    QuadratureLevel level;
    level.nodes = static_cast<int>(cfg.get_int("quad_nodes", 24, 4, 200));
    level.panels = static_cast<int>(cfg.get_int("quad_panels", 8, 1, 1000));
    level.tolerance = cfg.get_double("quad_tolerance", 1e-7, 1e-15, 1e-1);
    (void)cfg.seed();
    const auto rep = identity_check(default_radon_family(), level, workers);
    res.tables.emplace_back("radon_identity.csv", rep.to_csv());
    res.summary.add("mean_ratio", rep.mean_ratio);
    res.summary.add("reference_ratio", kIdentityRatio);
    res.summary.add("cv", rep.cv);
    res.summary.add("monotone", rep.all_monotone());
    res.summary.add("converged", rep.all_converged());
    res.pass = rep.passes();
    return res;
}

}  // namespace detail

/// Runs the experiment; does not touch the file system beyond reading inputs.
inline RunResult run_experiment(const ExperimentConfig& cfg, unsigned workers = 1) {
    const auto kind = cfg.kind();
    RunResult res;
    if (kind == "norms")
        res = detail::run_norms(cfg);
    else if (kind == "interp")
        res = detail::run_interp(cfg, workers);
    else if (kind == "link")
        res = detail::run_link(cfg);
    else if (kind == "stability")
        res = detail::run_stability(cfg);
    else if (kind == "schroedinger")
        res = detail::run_schroedinger(cfg, workers);
    else if (kind == "mc-rate")
        res = detail::run_mc_rate(cfg, workers);
    else if (kind == "tikhonov-rate")
        res = detail::run_tikhonov_rate(cfg, workers);
    else
        res = detail::run_radon_identity(cfg, workers);
    if (const auto extra = cfg.unused_keys(); !extra.empty()) {
        std::string msg = "unknown key(s) for kind " + kind + ":";
        for (const auto& k : extra) msg += " " + k;
        throw ConfigError(msg);
    }
    Summary full;
    full.add("kind", kind);
    full.add("seed", std::to_string(cfg.seed()));
    for (const auto& [k, v] : res.summary.entries()) full.add(k, v);
    full.add("status", std::string(res.pass ? "PASS" : "FAIL"));
    res.summary = full;
    return res;
}

/// Writes every table and summary.kv into `out_dir` (created if needed).
inline void write_artifacts(const RunResult& res, const std::filesystem::path& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory " + out_dir.string() + ": " + ec.message());
    auto put = [&](const std::string& name, const std::string& text) {
        std::ofstream f(out_dir / name, std::ios::binary);
        f << text;
        if (!f) throw std::runtime_error("cannot write " + (out_dir / name).string());
    };
    for (const auto& [name, text] : res.tables) put(name, text);
    put("summary.kv", res.summary.str());
}

}  // namespace barron

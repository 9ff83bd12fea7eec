// Forward operators given by x-independent Fourier multipliers, link-condition
// certification, conditional stability and the Schroedinger forward map.
#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "barron/rng.hpp"
#include "barron/spectral_core.hpp"

namespace barron {

// ---------------------------------------------------------------------------
// Symbols
// ---------------------------------------------------------------------------

/// Positive multiplier phi(k). BracketPower(s) is <k>^s, Resolvent(alpha) is
/// 1/(alpha + |k|^2) and Product multiplies its parts.
class SymbolDescriptor {
public:
    struct BracketPower {
        double s;
    };
    struct Resolvent {
        double alpha;
    };
    struct Product {
        std::vector<SymbolDescriptor> parts;
    };

    static SymbolDescriptor bracket_power(double s) { return SymbolDescriptor(BracketPower{s}); }
    static SymbolDescriptor resolvent(double alpha) {
        if (!(alpha > 0.0)) throw std::invalid_argument("SymbolDescriptor: resolvent needs alpha > 0");
        return SymbolDescriptor(Resolvent{alpha});
    }
    static SymbolDescriptor product(std::vector<SymbolDescriptor> parts) {
        return SymbolDescriptor(Product{std::move(parts)});
    }

    [[nodiscard]] double operator()(const Frequency& k) const {
        return std::visit(
            [&k](const auto& v) -> double {
                using V = std::decay_t<decltype(v)>;
                if constexpr (std::is_same_v<V, BracketPower>) {
                    return std::pow(1.0 + k.norm_sq(), 0.5 * v.s);
                } else if constexpr (std::is_same_v<V, Resolvent>) {
                    return 1.0 / (v.alpha + k.norm_sq());
                } else {
                    double p = 1.0;
                    for (const auto& part : v.parts) p *= part(k);
                    return p;
                }
            },
            variant_);
    }

    [[nodiscard]] const auto& variant() const { return variant_; }

    /// Text form: bracket(<s>), resolvent(<alpha>), product(<sym>,<sym>,...).
    [[nodiscard]] std::string to_string() const {
        std::ostringstream os;
        os.precision(17);
        std::visit(
            [&os](const auto& v) {
                using V = std::decay_t<decltype(v)>;
                if constexpr (std::is_same_v<V, BracketPower>) {
                    os << "bracket(" << v.s << ')';
                } else if constexpr (std::is_same_v<V, Resolvent>) {
                    os << "resolvent(" << v.alpha << ')';
                } else {
                    os << "product(";
                    for (std::size_t i = 0; i < v.parts.size(); ++i)
                        os << (i ? "," : "") << v.parts[i].to_string();
                    os << ')';
                }
            },
            variant_);
        return os.str();
    }

    static SymbolDescriptor parse(const std::string& text) {
        std::size_t pos = 0;
        SymbolDescriptor sym = parse_at(text, pos);
        skip_space(text, pos);
        if (pos != text.size()) throw std::invalid_argument("SymbolDescriptor: trailing input in '" + text + "'");
        return sym;
    }

private:
    template <class V>
    explicit SymbolDescriptor(V v) : variant_(std::move(v)) {}

    static void skip_space(const std::string& t, std::size_t& pos) {
        while (pos < t.size() && std::isspace(static_cast<unsigned char>(t[pos]))) ++pos;
    }
    static void expect(const std::string& t, std::size_t& pos, char c) {
        skip_space(t, pos);
        if (pos >= t.size() || t[pos] != c)
            throw std::invalid_argument(std::string("SymbolDescriptor: expected '") + c + "' in '" + t + "'");
        ++pos;
    }
    static double parse_number(const std::string& t, std::size_t& pos) {
        skip_space(t, pos);
        std::size_t used = 0;
        const double v = std::stod(t.substr(pos), &used);
        pos += used;
        return v;
    }
    static SymbolDescriptor parse_at(const std::string& t, std::size_t& pos) {
        skip_space(t, pos);
        std::size_t start = pos;
        while (pos < t.size() && std::isalpha(static_cast<unsigned char>(t[pos]))) ++pos;
        const std::string name = t.substr(start, pos - start);
        expect(t, pos, '(');
        if (name == "bracket") {
            const double s = parse_number(t, pos);
            expect(t, pos, ')');
            return bracket_power(s);
        }
        if (name == "resolvent") {
            const double alpha = parse_number(t, pos);
            expect(t, pos, ')');
            return resolvent(alpha);
        }
        if (name == "product") {
            std::vector<SymbolDescriptor> parts;
            parts.push_back(parse_at(t, pos));
            skip_space(t, pos);
            while (pos < t.size() && t[pos] == ',') {
                ++pos;
                parts.push_back(parse_at(t, pos));
                skip_space(t, pos);
            }
            expect(t, pos, ')');
            return product(std::move(parts));
        }
        throw std::invalid_argument("SymbolDescriptor: unknown symbol '" + name + "'");
    }

    std::variant<BracketPower, Resolvent, Product> variant_;
};

/// F u: coefficient at k multiplied by phi(k).
inline SpectralFunction apply_symbol(const SymbolDescriptor& phi, const SpectralFunction& u) {
    return u.map_coefficients([&phi](const Frequency& k) { return phi(k); });
}

// ---------------------------------------------------------------------------
// Ellipticity and link constants
// ---------------------------------------------------------------------------

struct EllipticityBounds {
    double c = std::numeric_limits<double>::infinity();   // inf phi(k) <k>^a
    double C = 0.0;                                       // sup phi(k) <k>^a
    std::size_t points = 0;

    void include(double value) {
        c = std::min(c, value);
        C = std::max(C, value);
        ++points;
    }
};

/// inf / sup of phi(k) <k>^a over the given frequencies.
template <class Range>
EllipticityBounds ellipticity_bounds_on(const SymbolDescriptor& phi, double a, const Range& frequencies) {
    EllipticityBounds b;
    for (const Frequency& k : frequencies) b.include(phi(k) * std::pow(bracket(k), a));
    return b;
}

/// Calls f(k) for every lattice point of dimension d with |k| <= radius.
template <class F>
void for_each_in_ball(int d, double radius, F&& f) {
    const int r = static_cast<int>(std::floor(radius));
    std::vector<int> k(static_cast<std::size_t>(d), -r);
    const double r2 = radius * radius;
    for (;;) {
        double n2 = 0.0;
        for (int c : k) n2 += static_cast<double>(c) * c;
        if (n2 <= r2) f(Frequency(k));
        int i = 0;
        while (i < d && k[static_cast<std::size_t>(i)] == r) k[static_cast<std::size_t>(i++)] = -r;
        if (i == d) break;
        ++k[static_cast<std::size_t>(i)];
    }
}

/// Exhaustive scan of phi(k) <k>^a over the lattice ball |k| <= radius.
inline EllipticityBounds ellipticity_bounds(const SymbolDescriptor& phi, double a, double radius, int d = 2) {
    if (radius < 1.0) throw std::invalid_argument("ellipticity_bounds: radius must be >= 1");
    if (d < 1) throw std::invalid_argument("ellipticity_bounds: dimension must be >= 1");
    EllipticityBounds b;
    for_each_in_ball(d, radius, [&](const Frequency& k) { b.include(phi(k) * std::pow(bracket(k), a)); });
    return b;
}

/// Shape of the random test functions used by the randomized harnesses.
struct RandomFunctionOptions {
    int d = 2;
    int modes = 6;   // canonical atoms per function
    int radius = 8;  // box |k_i| <= radius
};

struct LinkReport {
    double a = 0.0;
    double m = std::numeric_limits<double>::infinity();
    double M = 0.0;
    std::size_t num_pairs = 0;
    std::size_t skipped = 0;
    std::size_t argmin_pair = 0;
    std::size_t argmax_pair = 0;
    // Exhaustive scan over the union of all sampled supports.
    double scan_c = 0.0;
    double scan_C = 0.0;
    bool within_scan = true;

    [[nodiscard]] std::string to_kv() const {
        std::ostringstream os;
        os.precision(17);
        os << "a=" << a << "\nm=" << m << "\nM=" << M << "\nnum_pairs=" << num_pairs
           << "\nskipped=" << skipped << "\nworst_pair_min=" << argmin_pair
           << "\nworst_pair_max=" << argmax_pair << "\nscan_c=" << scan_c << "\nscan_C=" << scan_C
           << "\nwithin_scan=" << (within_scan ? "true" : "false") << '\n';
        return os.str();
    }
};

/// Randomized estimate of the link constants m, M: the extreme values of
/// ||F u1 - F u2||_{B^0} / ||u1 - u2||_{B^{-a}} over `trials` random pairs.
inline LinkReport link_constants(const SymbolDescriptor& phi, double a, std::size_t trials,
                                 std::uint64_t seed, const RandomFunctionOptions& opt = {}) {
    if (trials < 1) throw std::invalid_argument("link_constants: trials must be >= 1");
    LinkReport rep;
    rep.a = a;
    std::set<Frequency> support;
    for (std::size_t i = 0; i < trials; ++i) {
        StreamRng rng({seed, 0x11ULL, i});
        const auto u1 = random_spectral_function(opt.d, opt.modes, opt.radius, rng);
        const auto u2 = random_spectral_function(opt.d, opt.modes, opt.radius, rng);
        const auto diff = u1 - u2;
        if (diff.is_zero()) {
            ++rep.skipped;
            continue;
        }
        const double num = barron_norm(apply_symbol(phi, u1) - apply_symbol(phi, u2), 0.0);
        const double ratio = num / barron_norm(diff, -a);
        if (ratio < rep.m) {
            rep.m = ratio;
            rep.argmin_pair = i;
        }
        if (ratio > rep.M) {
            rep.M = ratio;
            rep.argmax_pair = i;
        }
        ++rep.num_pairs;
        for (const auto& [k, c] : diff.atoms()) support.insert(k);
    }
    const auto scan = ellipticity_bounds_on(phi, a, support);
    rep.scan_c = scan.c;
    rep.scan_C = scan.C;
    const double slack = 1e-12;
    rep.within_scan = rep.num_pairs == 0 ||
                      (rep.m >= scan.c * (1.0 - slack) && rep.M <= scan.C * (1.0 + slack));
    return rep;
}

// ---------------------------------------------------------------------------
// Conditional stability
// ---------------------------------------------------------------------------

/// Smoothness ball M(R) = { z : ||z - u*||_{B^p} <= R }.
struct SmoothnessClass {
    double p = 2.0;
    double R = 1.0;
    SpectralFunction reference = SpectralFunction(2);

    SmoothnessClass(double p_, double R_, SpectralFunction ref) : p(p_), R(R_), reference(std::move(ref)) {
        if (!(p > 0.0) || !(R > 0.0)) throw std::invalid_argument("SmoothnessClass: need p > 0, R > 0");
    }
    SmoothnessClass(double p_, double R_, int d) : SmoothnessClass(p_, R_, SpectralFunction(d)) {}

    [[nodiscard]] bool contains(const SpectralFunction& z, double rel_slack = 1e-12) const {
        return barron_norm(z - reference, p) <= R * (1.0 + rel_slack);
    }

    /// Random member: a random function rescaled to ||z - u*||_{B^p} = R * U, U ~ (0, 1].
    [[nodiscard]] SpectralFunction sample(const RandomFunctionOptions& opt, StreamRng& rng) const {
        const auto z = random_spectral_function(opt.d, opt.modes, opt.radius, rng);
        const double radius = R * (1.0 - rng.uniform());
        return reference + (radius / barron_norm(z, p)) * z;
    }
};

/// (2R)^{a/(p+a)} delta^{p/(p+a)}.
inline double modulus_bound(double R, double a, double p, double delta) {
    if (!(R > 0.0) || !(a > 0.0) || !(p > 0.0) || !(delta > 0.0))
        throw std::invalid_argument("modulus_bound: all arguments must be positive");
    return std::pow(2.0 * R, a / (p + a)) * std::pow(delta, p / (p + a));
}

struct StabilityReport {
    double max_ratio = 0.0;
    double bound = 0.0;        // m^{-p/(p+a)} (2R)^{a/(p+a)}
    double lower_link = 0.0;   // m from the exhaustive scan
    std::size_t pairs = 0;
    std::size_t skipped = 0;

    [[nodiscard]] bool holds(double rel_slack = 1e-9) const { return max_ratio <= bound * (1.0 + rel_slack); }

    [[nodiscard]] std::string to_kv() const {
        std::ostringstream os;
        os.precision(17);
        os << "max_ratio=" << max_ratio << "\nbound=" << bound << "\nlower_link=" << lower_link
           << "\npairs=" << pairs << "\nskipped=" << skipped << "\nholds=" << (holds() ? "true" : "false")
           << '\n';
        return os.str();
    }
};

/// Largest observed ||u1 - u2||_{L^2} / ||F u1 - F u2||_{B^0}^{p/(p+a)} over
/// random pairs in M(R), alongside the bound implied by the lower link
/// constant and the unit interpolation constant.
inline StabilityReport conditional_stability_check(const SymbolDescriptor& phi, double a,
                                                   const SmoothnessClass& cls, std::size_t trials,
                                                   std::uint64_t seed, const RandomFunctionOptions& opt = {}) {
    if (!(a > 0.0)) throw std::invalid_argument("conditional_stability_check: a must be positive");
    StabilityReport rep;
    const double p = cls.p;
    const double radius = opt.radius * std::sqrt(static_cast<double>(opt.d)) + 1.0;
    rep.lower_link = ellipticity_bounds(phi, a, radius, opt.d).c;
    rep.bound = std::pow(rep.lower_link, -p / (p + a)) * std::pow(2.0 * cls.R, a / (p + a));
    for (std::size_t i = 0; i < trials; ++i) {
        StreamRng rng({seed, 0x22ULL, i});
        const auto u1 = cls.sample(opt, rng);
        const auto u2 = cls.sample(opt, rng);
        const auto diff = u1 - u2;
        const double data = barron_norm(apply_symbol(phi, u1) - apply_symbol(phi, u2), 0.0);
        if (diff.is_zero() || data == 0.0) {
            ++rep.skipped;
            continue;
        }
        rep.max_ratio = std::max(rep.max_ratio, l2_norm(diff) / std::pow(data, p / (p + a)));
        ++rep.pairs;
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Schroedinger forward map
// ---------------------------------------------------------------------------

class ContractionViolation : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// T_{alpha,W} y = (alpha - Laplacian)^{-1} (W y).
inline SpectralFunction schroedinger_apply_T(double alpha, const SpectralFunction& W, const SpectralFunction& y,
                                             std::size_t atom_budget = kDefaultAtomBudget) {
    if (!(alpha > 0.0)) throw std::invalid_argument("schroedinger_apply_T: alpha must be positive");
    return apply_symbol(SymbolDescriptor::resolvent(alpha), multiply(W, y, atom_budget));
}

struct NeumannSolution {
    SpectralFunction solution;
    double contraction = 0.0;  // q = ||W||_{B^0} / alpha
    int terms = 0;
    double tail_bound = 0.0;   // a-posteriori bound on the B^0 truncation error
};

/// F u = (I + T_{alpha,W})^{-1} (alpha - Laplacian)^{-1} u by a truncated
/// Neumann series. Requires q = ||W||_{B^0} / alpha < 1; stops after the
/// first term whose B^0 norm drops below tol (1 - q), which bounds the
/// discarded tail by tol * q.
inline NeumannSolution schroedinger_forward(double alpha, const SpectralFunction& W, const SpectralFunction& u,
                                            double tol, std::size_t atom_budget = kDefaultAtomBudget) {
    if (!(alpha > 0.0)) throw std::invalid_argument("schroedinger_forward: alpha must be positive");
    if (!(tol > 0.0)) throw std::invalid_argument("schroedinger_forward: tol must be positive");
    if (W.dim() != u.dim()) throw std::invalid_argument("schroedinger_forward: dimension mismatch");
    const double q = barron_norm(W, 0.0) / alpha;
    if (!(q < 1.0)) throw ContractionViolation("schroedinger_forward: ||W||_{B^0} / alpha must be < 1");

    NeumannSolution out{apply_symbol(SymbolDescriptor::resolvent(alpha), u), q, 1, 0.0};
    SpectralFunction term = out.solution;
    constexpr int kMaxTerms = 100000;
    for (;;) {
        const double size = barron_norm(term, 0.0);
        if (size < tol * (1.0 - q)) {
            out.tail_bound = q < 1.0 ? size * q / (1.0 - q) : 0.0;
            break;
        }
        if (out.terms >= kMaxTerms) throw std::runtime_error("schroedinger_forward: series did not terminate");
        term = -1.0 * schroedinger_apply_T(alpha, W, term, atom_budget);
        out.solution = out.solution + term;
        ++out.terms;
    }
    return out;
}

}  // namespace barron

// Spectral representation of real trigonometric polynomials on the d-torus
// [-pi, pi]^d (normalized measure) and the Barron scale generated by
// L = I - Laplacian.
//
// A function is a finite Hermitian-symmetric map k -> c_k, so that
//     u(x) = sum_k c_k exp(i <k, x>)
// is real. In this model
//     ||u||_{B^s}   = sum_k |c_k| <k>^s,        <k> = (1 + |k|^2)^{1/2}
//     L^{s/2} u     has coefficients <k>^s c_k
//     ||u||_{L^2}   = (sum_k |c_k|^2)^{1/2}     (Parseval)
// and every norm of the scale is an exact finite sum.
#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <map>
#include <numbers>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "barron/rng.hpp"

namespace barron {

using Complex = std::complex<double>;

/// Coefficients with modulus below this are dropped after arithmetic.
inline constexpr double kPruneThreshold = 1e-15;
/// Largest admissible |k_i| of any lattice frequency.
inline constexpr int kFrequencyCutoff = 1 << 20;
/// Default bound on |supp u| * |supp v| for products.
inline constexpr std::size_t kDefaultAtomBudget = std::size_t{1} << 22;
/// Relative imaginary residue tolerated by evaluate().
inline constexpr double kImaginaryTolerance = 1e-10;

class AtomBudgetExceeded : public std::length_error {
public:
    using std::length_error::length_error;
};

class SymmetryViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// ---------------------------------------------------------------------------
// Frequency
// ---------------------------------------------------------------------------

class Frequency {
public:
    Frequency() = default;
    explicit Frequency(std::vector<int> components) : k_(std::move(components)) {
        if (k_.empty()) throw std::invalid_argument("Frequency: dimension must be >= 1");
        for (int c : k_)
            if (c > kFrequencyCutoff || c < -kFrequencyCutoff)
                throw std::out_of_range("Frequency: component exceeds cutoff");
    }
    Frequency(std::initializer_list<int> components)
        : Frequency(std::vector<int>(components)) {}

    static Frequency zero(int d) { return Frequency(std::vector<int>(static_cast<std::size_t>(d), 0)); }

    [[nodiscard]] int dim() const { return static_cast<int>(k_.size()); }
    [[nodiscard]] int operator[](int i) const { return k_[static_cast<std::size_t>(i)]; }
    [[nodiscard]] std::span<const int> components() const { return k_; }

    [[nodiscard]] double norm_sq() const {
        double s = 0.0;
        for (int c : k_) s += static_cast<double>(c) * c;
        return s;
    }
    [[nodiscard]] bool is_zero() const {
        return std::all_of(k_.begin(), k_.end(), [](int c) { return c == 0; });
    }
    /// Zero or lexicographically positive (first nonzero component > 0).
    [[nodiscard]] bool is_canonical() const {
        for (int c : k_)
            if (c != 0) return c > 0;
        return true;
    }
    [[nodiscard]] double dot(std::span<const double> x) const {
        double s = 0.0;
        for (std::size_t i = 0; i < k_.size(); ++i) s += k_[i] * x[i];
        return s;
    }

    Frequency operator-() const {
        Frequency r = *this;
        for (int& c : r.k_) c = -c;
        return r;
    }
    friend Frequency operator+(const Frequency& a, const Frequency& b) {
        if (a.dim() != b.dim()) throw std::invalid_argument("Frequency: dimension mismatch");
        Frequency r = a;
        for (std::size_t i = 0; i < r.k_.size(); ++i) r.k_[i] += b.k_[i];
        for (int c : r.k_)
            if (c > kFrequencyCutoff || c < -kFrequencyCutoff)
                throw std::out_of_range("Frequency: component exceeds cutoff");
        return r;
    }
    friend Frequency operator-(const Frequency& a, const Frequency& b) { return a + (-b); }

    friend auto operator<=>(const Frequency&, const Frequency&) = default;
    friend bool operator==(const Frequency&, const Frequency&) = default;

    friend std::ostream& operator<<(std::ostream& os, const Frequency& k) {
        os << '(';
        for (std::size_t i = 0; i < k.k_.size(); ++i) os << (i ? "," : "") << k.k_[i];
        return os << ')';
    }

private:
    std::vector<int> k_;
};

/// Japanese bracket <k> = sqrt(1 + |k|^2).
inline double bracket(const Frequency& k) { return std::sqrt(1.0 + k.norm_sq()); }

// ---------------------------------------------------------------------------
// SpectralFunction
// ---------------------------------------------------------------------------

class SpectralFunction {
public:
    using Atoms = std::map<Frequency, Complex>;

    /// The zero function in dimension d.
    explicit SpectralFunction(int d = 1) : d_(d) {
        if (d < 1) throw std::invalid_argument("SpectralFunction: dimension must be >= 1");
    }

    /// Builds from a full atom map. The map must already be Hermitian
    /// symmetric: |c_{-k} - conj(c_k)| <= 1e-12 max(1, |c_k|), or at most
    /// `absolute_tolerance` when one is given. The stored value is symmetrized.
    static SpectralFunction from_atoms(int d, const Atoms& atoms, double absolute_tolerance = -1.0) {
        SpectralFunction u(d);
        for (const auto& [k, c] : atoms) {
            if (k.dim() != d) throw std::invalid_argument("SpectralFunction: dimension mismatch");
            const auto mirror = atoms.find(-k);
            const Complex cm = mirror == atoms.end() ? Complex{} : mirror->second;
            const double tol = absolute_tolerance >= 0.0
                                   ? absolute_tolerance
                                   : 1e-12 * std::max({1.0, std::abs(c), std::abs(cm)});
            if (std::abs(cm - std::conj(c)) > tol)
                throw SymmetryViolation("SpectralFunction: atoms are not Hermitian symmetric");
        }
        for (const auto& [k, c] : atoms) {
            const auto mirror = atoms.find(-k);
            if (!k.is_canonical() && mirror != atoms.end()) continue;
            const Complex cm = mirror == atoms.end() ? Complex{} : mirror->second;
            if (k.is_zero())
                u.put(k, Complex(c.real(), 0.0));
            else if (k.is_canonical())
                u.put_pair(k, 0.5 * (c + std::conj(cm)));
            else
                u.put_pair(-k, 0.5 * std::conj(c));
        }
        return u;
    }

    /// Builds from canonical half-lattice atoms; each k != 0 implies the
    /// mirror atom conj(c) at -k. The k = 0 coefficient must be real.
    static SpectralFunction from_half_lattice(int d, std::span<const std::pair<Frequency, Complex>> half) {
        SpectralFunction u(d);
        for (const auto& [k, c] : half) {
            if (k.dim() != d) throw std::invalid_argument("SpectralFunction: dimension mismatch");
            if (!k.is_canonical())
                throw std::invalid_argument("SpectralFunction: half-lattice atom is not canonical");
            if (k.is_zero()) {
                if (std::abs(c.imag()) > 1e-12 * std::max(1.0, std::abs(c)))
                    throw SymmetryViolation("SpectralFunction: zero-frequency coefficient must be real");
                u.put(k, u.coefficient(k) + Complex(c.real(), 0.0));
            } else {
                u.put_pair(k, u.coefficient(k) + c);
            }
        }
        return u;
    }
    static SpectralFunction from_half_lattice(int d, const std::vector<std::pair<Frequency, Complex>>& half) {
        return from_half_lattice(d, std::span<const std::pair<Frequency, Complex>>(half));
    }

    static SpectralFunction constant(int d, double value) {
        std::vector<std::pair<Frequency, Complex>> half{{Frequency::zero(d), Complex(value, 0.0)}};
        return from_half_lattice(d, half);
    }

    [[nodiscard]] int dim() const { return d_; }
    [[nodiscard]] const Atoms& atoms() const { return atoms_; }
    [[nodiscard]] std::size_t size() const { return atoms_.size(); }
    [[nodiscard]] bool is_zero() const { return atoms_.empty(); }
    [[nodiscard]] Complex coefficient(const Frequency& k) const {
        const auto it = atoms_.find(k);
        return it == atoms_.end() ? Complex{} : it->second;
    }
    [[nodiscard]] bool contains(const Frequency& k) const { return atoms_.count(k) != 0; }

    /// Canonical half of the support (k = 0 or lexicographically positive).
    [[nodiscard]] std::vector<std::pair<Frequency, Complex>> half_lattice() const {
        std::vector<std::pair<Frequency, Complex>> out;
        for (const auto& [k, c] : atoms_)
            if (k.is_canonical()) out.emplace_back(k, c);
        return out;
    }

    /// New function with every coefficient multiplied by a real factor
    /// depending on k; the factor must be even in k to preserve symmetry.
    template <class Multiplier>
    [[nodiscard]] SpectralFunction map_coefficients(Multiplier&& factor) const {
        SpectralFunction r(d_);
        for (const auto& [k, c] : atoms_) {
            if (!k.is_canonical()) continue;
            const double f = factor(k);
            if (k.is_zero())
                r.put(k, c * f);
            else
                r.put_pair(k, c * f);
        }
        return r;
    }

    friend SpectralFunction operator+(const SpectralFunction& u, const SpectralFunction& v) {
        return combine(u, v, 1.0);
    }
    friend SpectralFunction operator-(const SpectralFunction& u, const SpectralFunction& v) {
        return combine(u, v, -1.0);
    }
    friend SpectralFunction operator*(double a, const SpectralFunction& u) {
        return u.map_coefficients([a](const Frequency&) { return a; });
    }

    friend bool operator==(const SpectralFunction& u, const SpectralFunction& v) {
        return u.d_ == v.d_ && u.atoms_ == v.atoms_;
    }

private:
    static SpectralFunction combine(const SpectralFunction& u, const SpectralFunction& v, double sign) {
        if (u.d_ != v.d_) throw std::invalid_argument("SpectralFunction: dimension mismatch");
        SpectralFunction r = u;
        for (const auto& [k, c] : v.atoms_) {
            if (!k.is_canonical()) continue;
            const Complex sum = r.coefficient(k) + sign * c;
            if (k.is_zero())
                r.put(k, sum);
            else
                r.put_pair(k, sum);
        }
        return r;
    }

    void put(const Frequency& k, Complex c) {
        if (std::abs(c) < kPruneThreshold)
            atoms_.erase(k);
        else
            atoms_[k] = c;
    }
    void put_pair(const Frequency& k, Complex c) {
        put(k, c);
        put(-k, std::conj(c));
    }

    int d_;
    Atoms atoms_;
};

// ---------------------------------------------------------------------------
// Norms and multipliers
// ---------------------------------------------------------------------------

/// ||u||_{B^s} = sum_k |c_k| <k>^s. Any real s is admissible.
inline double barron_norm(const SpectralFunction& u, double s) {
    double sum = 0.0;
    for (const auto& [k, c] : u.atoms()) sum += std::abs(c) * std::pow(bracket(k), s);
    return sum;
}

/// L^{s/2} u: coefficient at k scaled by <k>^s.
inline SpectralFunction apply_bracket_power(const SpectralFunction& u, double s) {
    return u.map_coefficients([s](const Frequency& k) { return std::pow(bracket(k), s); });
}

/// (t I + L^n)^{-1} u: coefficient at k divided by t + <k>^{2n}.
inline SpectralFunction apply_resolvent(const SpectralFunction& u, double t, int n) {
    if (!(t > 0.0)) throw std::invalid_argument("apply_resolvent: t must be positive");
    if (n < 1) throw std::invalid_argument("apply_resolvent: n must be >= 1");
    return u.map_coefficients([t, n](const Frequency& k) {
        return 1.0 / (t + std::pow(1.0 + k.norm_sq(), n));
    });
}

/// Point value u(x). Throws SymmetryViolation if the imaginary part exceeds
/// kImaginaryTolerance relative to max(1, ||u||_{B^0}).
inline double evaluate(const SpectralFunction& u, std::span<const double> x) {
    if (static_cast<int>(x.size()) != u.dim())
        throw std::invalid_argument("evaluate: point dimension does not match function");
    Complex sum{};
    for (const auto& [k, c] : u.atoms()) sum += c * std::polar(1.0, k.dot(x));
    if (std::abs(sum.imag()) > kImaginaryTolerance * std::max(1.0, barron_norm(u, 0.0)))
        throw SymmetryViolation("evaluate: imaginary residue above tolerance");
    return sum.real();
}
inline double evaluate(const SpectralFunction& u, const std::vector<double>& x) {
    return evaluate(u, std::span<const double>(x));
}

/// L^2 norm under the normalized torus measure (Parseval).
inline double l2_norm(const SpectralFunction& u) {
    double sum = 0.0;
    for (const auto& [k, c] : u.atoms()) sum += std::norm(c);
    return std::sqrt(sum);
}

/// Pointwise product, computed exactly as a discrete convolution.
inline SpectralFunction multiply(const SpectralFunction& u, const SpectralFunction& v,
                                 std::size_t atom_budget = kDefaultAtomBudget) {
    if (u.dim() != v.dim()) throw std::invalid_argument("multiply: dimension mismatch");
    if (u.size() != 0 && v.size() > atom_budget / u.size())
        throw AtomBudgetExceeded("multiply: support product exceeds atom budget");
    SpectralFunction::Atoms acc;
    for (const auto& [k, a] : u.atoms())
        for (const auto& [l, b] : v.atoms()) acc[k + l] += a * b;
    // The convolution of two symmetric maps is symmetric up to rounding of
    // order eps * ||u||_{B^0} ||v||_{B^0}.
    const double tol = 1e-12 * std::max(1.0, barron_norm(u, 0.0) * barron_norm(v, 0.0));
    return SpectralFunction::from_atoms(u.dim(), acc, tol);
}

// ---------------------------------------------------------------------------
// Interpolation
// ---------------------------------------------------------------------------

/// Smoothness triple r < s < t with theta = (t - s) / (t - r).
class InterpolationTriple {
public:
    InterpolationTriple(double r, double s, double t) : r_(r), s_(s), t_(t) {
        if (!(r < s && s < t)) throw std::invalid_argument("InterpolationTriple: need r < s < t");
    }
    [[nodiscard]] double r() const { return r_; }
    [[nodiscard]] double s() const { return s_; }
    [[nodiscard]] double t() const { return t_; }
    [[nodiscard]] double theta() const { return (t_ - s_) / (t_ - r_); }

private:
    double r_, s_, t_;
};

/// ||u||_{B^s} / (||u||_{B^r}^theta ||u||_{B^t}^{1-theta}); lies in (0, 1]
/// on this representation by Hoelder's inequality.
inline double interpolation_gap(const SpectralFunction& u, const InterpolationTriple& trip) {
    if (u.is_zero()) throw std::invalid_argument("interpolation_gap: zero function");
    const double theta = trip.theta();
    // Work in logs so that large |s| does not overflow.
    const double log_s = std::log(barron_norm(u, trip.s()));
    const double log_r = std::log(barron_norm(u, trip.r()));
    const double log_t = std::log(barron_norm(u, trip.t()));
    return std::exp(log_s - theta * log_r - (1.0 - theta) * log_t);
}

// ---------------------------------------------------------------------------
// Random generation
// ---------------------------------------------------------------------------

/// Random real trigonometric polynomial with `modes` distinct canonical
/// frequencies drawn from the box |k_i| <= radius (k = 0 allowed) and
/// complex Gaussian coefficients.
inline SpectralFunction random_spectral_function(int d, int modes, int radius, StreamRng& rng) {
    if (modes < 1 || radius < 0) throw std::invalid_argument("random_spectral_function: bad sizes");
    const double box = std::pow(2.0 * radius + 1.0, d);
    const int available = static_cast<int>(std::min(box, 1e9));
    const int target = std::min(modes, (available + 1) / 2);
    std::map<Frequency, Complex> chosen;
    auto gauss = [&rng] {
        const double u1 = 1.0 - rng.uniform();
        const double u2 = rng.uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    };
    int guard = 0;
    while (static_cast<int>(chosen.size()) < target && guard++ < 100000) {
        std::vector<int> comps(static_cast<std::size_t>(d));
        for (int& c : comps) c = static_cast<int>(rng() % (2 * static_cast<std::uint64_t>(radius) + 1)) - radius;
        Frequency k(std::move(comps));
        if (!k.is_canonical()) k = -k;
        if (chosen.count(k)) continue;
        chosen[k] = k.is_zero() ? Complex(gauss(), 0.0) : Complex(gauss(), gauss());
    }
    std::vector<std::pair<Frequency, Complex>> half(chosen.begin(), chosen.end());
    return SpectralFunction::from_half_lattice(d, half);
}

// ---------------------------------------------------------------------------
// Text serialization
// ---------------------------------------------------------------------------
//
//   d=<d>
//   k_1 ... k_d re im        (one line per canonical half-lattice atom)
//
// Blank lines and lines starting with '#' are ignored.

inline void write_spectral_function(std::ostream& os, const SpectralFunction& u) {
    os << "d=" << u.dim() << '\n';
    char buf[64];
    for (const auto& [k, c] : u.half_lattice()) {
        for (int i = 0; i < k.dim(); ++i) os << k[i] << ' ';
        std::snprintf(buf, sizeof buf, "%.17g %.17g", c.real(), c.imag());
        os << buf << '\n';
    }
}

inline SpectralFunction read_spectral_function(std::istream& is) {
    std::string line;
    int d = 0;
    std::vector<std::pair<Frequency, Complex>> half;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        if (d == 0) {
            if (line.compare(first, 2, "d=") != 0)
                throw std::runtime_error("read_spectral_function: missing 'd=' header");
            d = std::stoi(line.substr(first + 2));
            if (d < 1) throw std::runtime_error("read_spectral_function: dimension must be >= 1");
            continue;
        }
        std::istringstream fields(line);
        std::vector<int> k(static_cast<std::size_t>(d));
        double re = 0.0, im = 0.0;
        for (int& c : k) fields >> c;
        fields >> re >> im;
        std::string extra;
        if (!fields || (fields >> extra))
            throw std::runtime_error("read_spectral_function: malformed atom on line " +
                                     std::to_string(lineno));
        half.emplace_back(Frequency(std::move(k)), Complex(re, im));
    }
    if (d == 0) throw std::runtime_error("read_spectral_function: empty input");
    return SpectralFunction::from_half_lattice(d, half);
}

}  // namespace barron

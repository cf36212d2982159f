#pragma once

// Bracket-series (A-hypergeometric) root series of a_0 + a_1 z + ... + a_n z^n
// attached to a pair i1 < i2, computed one coefficient at a time, and its
// comparison with the closed root-series formula at beta = d.
//
// a_{i1} and a_{i2} stay formal: a coefficient is c * a_{i1}^p * a_{i2}^q with
// c in Q[xi]/(xi^d + 1).

#include "rootseries/combinatorics.hpp"
#include "rootseries/root_series.hpp"
#include "rootseries/scalar.hpp"

#include <complex>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace rootseries {

struct GkzConfig {
    int n = 2;
    int i1 = 0;
    int i2 = 2;

    GkzConfig(int n_, int i1_, int i2_) : n(n_), i1(i1_), i2(i2_) {
        if (n < 2 || i1 < 0 || i1 >= i2 || i2 > n) {
            throw std::invalid_argument("GkzConfig: need n >= 2 and 0 <= i1 < i2 <= n");
        }
    }

    int d() const { return i2 - i1; }

    /// {0..n} \ {i1, i2}, increasing.
    std::vector<int> free_indices() const {
        std::vector<int> out;
        for (int i = 0; i <= n; ++i) {
            if (i != i1 && i != i2) {
                out.push_back(i);
            }
        }
        return out;
    }

    int free_count() const { return n - 1; }
};

/// Integer vector v with sum_i i v_i = 0 and sum_i v_i = 0.
struct LatticeVector {
    std::vector<long> v;

    bool in_kernel() const {
        long weighted = 0;
        long total = 0;
        for (std::size_t i = 0; i < v.size(); ++i) {
            weighted += static_cast<long>(i) * v[i];
            total += v[i];
        }
        return weighted == 0 && total == 0;
    }

    friend bool operator==(const LatticeVector&, const LatticeVector&) = default;
};

/// Solves the kernel equations for v_{i1}, v_{i2} given the free entries
/// (ordered as cfg.free_indices()); nullopt when either is not an integer.
inline std::optional<LatticeVector> lattice_complete(std::span<const long> free, const GkzConfig& cfg) {
    const auto idx = cfg.free_indices();
    if (free.size() != idx.size()) {
        throw std::invalid_argument("lattice_complete: expected one entry per free index");
    }
    const long d = cfg.d();
    long s2 = 0;
    long s1 = 0;
    LatticeVector out{std::vector<long>(static_cast<std::size_t>(cfg.n) + 1, 0)};
    for (std::size_t q = 0; q < idx.size(); ++q) {
        const long i = idx[q];
        s2 += (i - cfg.i1) * free[q];
        s1 += (cfg.i2 - i) * free[q];
        out.v[static_cast<std::size_t>(i)] = free[q];
    }
    if (s2 % d != 0 || s1 % d != 0) {
        return std::nullopt;
    }
    out.v[static_cast<std::size_t>(cfg.i2)] = -s2 / d;
    out.v[static_cast<std::size_t>(cfg.i1)] = -s1 / d;
    return out;
}

/// The hypergeometric weight attached to exponent u shifted by v.
inline Rational gamma_uv(const Rational& u, long v) {
    if (v == 0) {
        return Rational(1);
    }
    if (v < 0) {
        return falling_factorial(u, -v);
    }
    if (u.is_integer() && u.sign() < 0 && u >= Rational(-v)) {
        return Rational(0);
    }
    Rational den(1);
    for (long i = 1; i <= v; ++i) {
        den *= u + Rational(i);
    }
    return Rational(1) / den;
}

/// One bracket series of the root series with its prefactor.
///
/// label 1: xi [a_{i1}^{1/d} a_{i2}^{-1/d}]
/// label k in 2..d: (xi^k / d) [a_{i1}^{(k-d)/d} a_{i1+k-1} a_{i2}^{-k/d}]
/// label 0 (only when i1 >= 1): (1/d) [a_{i1-1} a_{i1}^{-1}]
struct BracketTerm {
    int label = 1;
    std::vector<Rational> u;
    XiElement prefactor{1};
};

inline std::vector<BracketTerm> bracket_terms(const GkzConfig& cfg) {
    const int d = cfg.d();
    const auto width = static_cast<std::size_t>(cfg.n) + 1;
    const auto at = [](int i) { return static_cast<std::size_t>(i); };
    const Rational inv_d(BigInt(1), BigInt(d));
    std::vector<BracketTerm> out;

    BracketTerm first{1, std::vector<Rational>(width), XiElement::generator(d)};
    first.u[at(cfg.i1)] = inv_d;
    first.u[at(cfg.i2)] = -inv_d;
    out.push_back(std::move(first));

    for (int k = 2; k <= d; ++k) {
        BracketTerm t{k, std::vector<Rational>(width), inv_d * XiElement::power(d, k)};
        t.u[at(cfg.i1)] = Rational(BigInt(k - d), BigInt(d));
        t.u[at(cfg.i1 + k - 1)] = Rational(1);
        t.u[at(cfg.i2)] = Rational(BigInt(-k), BigInt(d));
        out.push_back(std::move(t));
    }

    if (cfg.i1 >= 1) {
        BracketTerm last{0, std::vector<Rational>(width), XiElement::constant(d, inv_d)};
        last.u[at(cfg.i1 - 1)] = Rational(1);
        last.u[at(cfg.i1)] = Rational(-1);
        out.push_back(std::move(last));
    }
    return out;
}

/// Coefficient of prod* a_i^{n_i}: coeff * a_{i1}^{p} * a_{i2}^{q}.
struct XCoefficient {
    std::vector<int> n_free;
    XiElement coeff{1};
    Rational p;
    Rational q;

    /// Exponents are compared only when the coefficient is nonzero.
    friend bool operator==(const XCoefficient& x, const XCoefficient& y) {
        if (x.n_free != y.n_free || !(x.coeff == y.coeff)) {
            return false;
        }
        return x.coeff.is_zero() || (x.p == y.p && x.q == y.q);
    }
};

/// sum* (i - i1) n_i.
inline long weighted_degree(std::span<const int> n_free, const GkzConfig& cfg) {
    const auto idx = cfg.free_indices();
    if (n_free.size() != idx.size()) {
        throw std::invalid_argument("expected one exponent per free variable");
    }
    long C = 0;
    for (std::size_t q = 0; q < idx.size(); ++q) {
        if (n_free[q] < 0) {
            throw std::invalid_argument("free exponents must be non-negative");
        }
        C += static_cast<long>(idx[q] - cfg.i1) * n_free[q];
    }
    return C;
}

namespace detail {

inline long floor_mod(long a, long m) { return ((a % m) + m) % m; }

struct BracketContribution {
    int label = 0;
    XiElement value{1};
    Rational p;
    Rational q;
};

/// The term's lattice vector in bracket t (v_i = n_i - u_i on free slots),
/// or nullopt if it does not lie in the lattice.
inline std::optional<BracketContribution> bracket_contribution(const BracketTerm& t, std::span<const int> n_free,
                                                               const GkzConfig& cfg) {
    const auto idx = cfg.free_indices();
    std::vector<long> v_free(idx.size());
    for (std::size_t q = 0; q < idx.size(); ++q) {
        v_free[q] = n_free[q] - t.u[static_cast<std::size_t>(idx[q])].to_long();
    }
    const auto lv = lattice_complete(v_free, cfg);
    if (!lv) {
        return std::nullopt;
    }
    Rational weight(1);
    for (std::size_t i = 0; i < lv->v.size() && !weight.is_zero(); ++i) {
        weight *= gamma_uv(t.u[i], lv->v[i]);
    }
    const auto i1 = static_cast<std::size_t>(cfg.i1);
    const auto i2 = static_cast<std::size_t>(cfg.i2);
    return BracketContribution{t.label, weight * t.prefactor, t.u[i1] + Rational(lv->v[i1]),
                               t.u[i2] + Rational(lv->v[i2])};
}

} // namespace detail

/// Coefficient of prod* a_i^{n_i} summed over the brackets whose lattice can
/// reach it. Throws logic_error if the number of reaching brackets differs
/// from 1 (2 when C = -1 mod d and i1 > 0), or if two of them are both nonzero.
inline XCoefficient x_series_coeff(std::span<const int> n_free, const GkzConfig& cfg) {
    const long C = weighted_degree(n_free, cfg);
    const int d = cfg.d();
    std::vector<detail::BracketContribution> hits;
    for (const auto& t : bracket_terms(cfg)) {
        if (auto c = detail::bracket_contribution(t, n_free, cfg)) {
            hits.push_back(std::move(*c));
        }
    }
    const std::size_t expected = (detail::floor_mod(C, d) == d - 1 && cfg.i1 > 0) ? 2 : 1;
    if (hits.size() != expected) {
        throw std::logic_error("x_series_coeff: term reached by " + std::to_string(hits.size()) +
                               " bracket series, expected " + std::to_string(expected));
    }
    int nonzero = 0;
    for (const auto& h : hits) {
        nonzero += h.value.is_zero() ? 0 : 1;
    }
    if (nonzero > 1) {
        throw std::logic_error("x_series_coeff: two bracket series both contribute to one term");
    }
    XCoefficient out{std::vector<int>(n_free.begin(), n_free.end()), XiElement(d), hits.front().p, hits.front().q};
    for (const auto& h : hits) {
        if (!(h.p == out.p && h.q == out.q)) {
            throw std::logic_error("x_series_coeff: contributions disagree on a_{i1}, a_{i2} exponents");
        }
        out.coeff = out.coeff + h.value;
    }
    return out;
}

/// Closed coefficient: (xi^k / d) (-1)^M ((C+1)/d - 1)_{S-1} / prod* n_i!
/// times a_{i1}^{(C+1)/d - S} a_{i2}^{-(C+1)/d}, with C + 1 = k + M d, 0 <= k < d, S = sum* n_i.
inline XCoefficient recovery_formula_coeff(std::span<const int> n_free, const GkzConfig& cfg) {
    const long C = weighted_degree(n_free, cfg);
    const long d = cfg.d();
    long total = 0;
    BigInt fact = 1;
    for (int x : n_free) {
        total += x;
        fact *= factorial(x);
    }
    if (total == 0) {
        throw std::invalid_argument("recovery_formula_coeff: exponents must not all be zero");
    }
    const long k = detail::floor_mod(C + 1, d);
    const long M = (C + 1 - k) / d;
    const Rational shift(BigInt(C + 1), BigInt(d));
    Rational scalar = falling_factorial(shift - Rational(1), total - 1) / (Rational(d) * Rational(fact));
    if (M % 2 != 0) {
        scalar = -scalar;
    }
    return {std::vector<int>(n_free.begin(), n_free.end()), scalar * XiElement::power(static_cast<int>(d), k),
            shift - Rational(total), -shift};
}

/// Spec of the normalized problem for the pair: beta = d, gamma = (i - i1) over free i.
/// b is set to 1; its formal value a_{i2}/a_{i1} is restored in main_substituted_coeff.
inline ProblemSpec<Rational> recovery_spec(const GkzConfig& cfg) {
    std::vector<Rational> gammas;
    for (int i : cfg.free_indices()) {
        gammas.emplace_back(i - cfg.i1);
    }
    return {Rational(1), Rational(cfg.d()), std::move(gammas)};
}

/// Taylor coefficient of the closed root-series formula after substituting
/// alpha = xi a_{i1}^{1/d} a_{i2}^{-1/d}, b = a_{i2}/a_{i1} and a_i -> a_i/a_{i1}.
///
/// With b = 1 the closed formula leaves out a factor b^{-S}; together with the
/// a_{i1}^{-S} from rescaling it contributes a_{i2}^{-S}.
inline XCoefficient main_substituted_coeff(std::span<const int> n_free, const GkzConfig& cfg) {
    const MultiIndex n(std::vector<int>(n_free.begin(), n_free.end()));
    const auto spec = recovery_spec(cfg);
    const auto m = coeff_closed(n, spec);
    if (!m.alpha_exp.is_integer()) {
        throw std::logic_error("main_substituted_coeff: alpha exponent not integral");
    }
    const int d = cfg.d();
    const long e = m.alpha_exp.to_long();
    const Rational scalar = m.coeff / Rational(n.factorial_product());
    const Rational p = Rational(BigInt(e), BigInt(d));
    return {std::vector<int>(n_free.begin(), n_free.end()), scalar * XiElement::power(d, e), p,
            -Rational(n.order()) - p};
}

inline bool recovery_vs_main(std::span<const int> n_free, const GkzConfig& cfg) {
    return recovery_formula_coeff(n_free, cfg) == main_substituted_coeff(n_free, cfg);
}

/// Every free-exponent vector of total degree in [min_degree, max_degree].
inline std::vector<std::vector<int>> free_terms(const GkzConfig& cfg, int max_degree, int min_degree = 0) {
    std::vector<std::vector<int>> out;
    for (const auto& m : multi_indices(cfg.free_count(), max_degree, min_degree)) {
        out.push_back(m.entries());
    }
    return out;
}

/// Numeric value of the series truncated at total degree D, with xi the
/// (2j+1)-th d-th root of -1 and principal powers of a_{i1}, a_{i2}.
inline ComplexF x_series_numeric(const GkzConfig& cfg, int j, std::span<const ComplexF> a, int D) {
    if (static_cast<int>(a.size()) != cfg.n + 1) {
        throw std::invalid_argument("x_series_numeric: need n + 1 coefficients");
    }
    const ComplexF xi = XiElement::numeric_root(cfg.d(), j);
    const ComplexF log1 = std::log(a[static_cast<std::size_t>(cfg.i1)]);
    const ComplexF log2 = std::log(a[static_cast<std::size_t>(cfg.i2)]);
    const auto idx = cfg.free_indices();
    ComplexF sum(0.0, 0.0);
    for (const auto& n_free : free_terms(cfg, D)) {
        const XCoefficient c = x_series_coeff(n_free, cfg);
        ComplexF term = c.coeff.evaluate(xi) * std::exp(c.p.to_double() * log1 + c.q.to_double() * log2);
        for (std::size_t q = 0; q < idx.size(); ++q) {
            term *= std::pow(a[static_cast<std::size_t>(idx[q])], n_free[q]);
        }
        sum += term;
    }
    return sum;
}

/// Scans every bracket and every free lattice shift in [-box, box]^{n-1};
/// returns how many lattice vectors put a negative exponent on a free
/// variable while carrying a nonzero weight (expected: none).
struct SupportScan {
    long lattice_vectors = 0;
    long negative_exponent = 0;
    long violations = 0;
};

inline SupportScan scan_bracket_support(const GkzConfig& cfg, int box) {
    SupportScan scan;
    const auto idx = cfg.free_indices();
    for (const auto& t : bracket_terms(cfg)) {
        std::vector<long> v(idx.size(), -box);
        while (true) {
            if (auto lv = lattice_complete(v, cfg)) {
                ++scan.lattice_vectors;
                bool negative = false;
                for (int i : idx) {
                    const Rational e = t.u[static_cast<std::size_t>(i)] + Rational(lv->v[static_cast<std::size_t>(i)]);
                    negative = negative || e.sign() < 0;
                }
                if (negative) {
                    ++scan.negative_exponent;
                    Rational w(1);
                    for (std::size_t i = 0; i < lv->v.size(); ++i) {
                        w *= gamma_uv(t.u[i], lv->v[i]);
                    }
                    scan.violations += w.is_zero() ? 0 : 1;
                }
            }
            std::size_t q = 0;
            while (q < v.size() && v[q] == box) {
                v[q] = -box;
                ++q;
            }
            if (q == v.size()) {
                break;
            }
            ++v[q];
        }
    }
    return scan;
}

} // namespace rootseries

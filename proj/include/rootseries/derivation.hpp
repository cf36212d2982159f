#pragma once

// Commutative rings with a derivation, two concrete instances over Q, and the
// subset / set-partition derivation identities evaluated inside any instance.
//
// Nothing here assumes a multiplicative identity: products are always taken
// over nonempty families, zeros come from zero_like(), and integer multiples
// n*f are built by repeated addition (times()).

#include "rootseries/combinatorics.hpp"
#include "rootseries/scalar.hpp"

#include <algorithm>
#include <bit>
#include <concepts>
#include <cstdint>
#include <map>
#include <numeric>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace rootseries {

template <class R>
concept DifferentialRing = std::equality_comparable<R> && requires(const R& a, const R& b) {
    { a + b } -> std::convertible_to<R>;
    { -a } -> std::convertible_to<R>;
    { a * b } -> std::convertible_to<R>;
    { derive(a) } -> std::convertible_to<R>;
    { zero_like(a) } -> std::convertible_to<R>;
};

template <DifferentialRing R>
R derive_n(R f, long n) {
    if (n < 0) {
        throw std::domain_error("derive_n: negative order");
    }
    for (long i = 0; i < n; ++i) {
        f = derive(f);
    }
    return f;
}

/// n * f = f + ... + f (double-and-add; negative n negates).
template <DifferentialRing R>
R times(const BigInt& n, const R& f) {
    BigInt k = abs(n);
    R acc = zero_like(f);
    R base = f;
    while (k > 0) {
        if (mpz_odd_p(k.get_mpz_t())) {
            acc = acc + base;
        }
        k >>= 1;
        if (k > 0) {
            base = base + base;
        }
    }
    return n < 0 ? R(-acc) : acc;
}

template <DifferentialRing R>
bool check_leibniz(const R& f, const R& g) {
    return derive(f * g) == derive(f) * g + f * derive(g);
}

// ---------------------------------------------------------------------------
// Instance: Q[t] with d/dt.

using PolyT = UniPoly;

inline PolyT derive(const PolyT& p) { return p.derivative(); }
inline PolyT zero_like(const PolyT&) { return {}; }

// ---------------------------------------------------------------------------
// Instance: power series in t known through a finite order.

/// Truncated power series over Q with tracked precision.
///
/// Coefficients of t^0..t^precision are exact. Sums and products keep the
/// smaller precision; differentiation lowers it by one, since d/dt does not
/// preserve the ideal (t^{K+1}). Equality compares through the common
/// precision, which makes this a derivation on the known prefix.
class TruncSeriesT {
public:
    TruncSeriesT(std::vector<Rational> coeffs, int precision) : precision_(precision) {
        if (precision < 0) {
            throw std::domain_error("TruncSeriesT: precision exhausted");
        }
        coeffs.resize(static_cast<std::size_t>(precision) + 1);
        coeffs_ = std::move(coeffs);
    }

    static TruncSeriesT from_poly(const UniPoly& p, int precision) { return {p.coeffs(), precision}; }

    /// -ln(1 - t) = sum_{k>=1} t^k / k
    static TruncSeriesT neg_log_one_minus(int precision) {
        std::vector<Rational> c(static_cast<std::size_t>(precision) + 1);
        for (int k = 1; k <= precision; ++k) {
            c[static_cast<std::size_t>(k)] = Rational(BigInt(1), BigInt(k));
        }
        return {std::move(c), precision};
    }

    /// 1 / (1 - t)
    static TruncSeriesT geometric(int precision) {
        return {std::vector<Rational>(static_cast<std::size_t>(precision) + 1, Rational(1)), precision};
    }

    static TruncSeriesT one(int precision) { return {std::vector<Rational>{1}, precision}; }

    int precision() const { return precision_; }
    const std::vector<Rational>& coeffs() const { return coeffs_; }
    Rational coefficient(int i) const {
        if (i < 0 || i > precision_) {
            throw std::out_of_range("TruncSeriesT: coefficient beyond known precision");
        }
        return coeffs_[static_cast<std::size_t>(i)];
    }

    TruncSeriesT pow(int n) const {
        if (n < 0) {
            throw std::domain_error("TruncSeriesT::pow: negative exponent");
        }
        TruncSeriesT r = one(precision_);
        for (int i = 0; i < n; ++i) {
            r = r * *this;
        }
        return r;
    }

    TruncSeriesT operator-() const {
        TruncSeriesT r(*this);
        for (auto& c : r.coeffs_) {
            c = -c;
        }
        return r;
    }

    friend TruncSeriesT operator+(const TruncSeriesT& a, const TruncSeriesT& b) {
        const int p = std::min(a.precision_, b.precision_);
        std::vector<Rational> c(static_cast<std::size_t>(p) + 1);
        for (std::size_t i = 0; i < c.size(); ++i) {
            c[i] = a.coeffs_[i] + b.coeffs_[i];
        }
        return {std::move(c), p};
    }

    friend TruncSeriesT operator*(const TruncSeriesT& a, const TruncSeriesT& b) {
        const int p = std::min(a.precision_, b.precision_);
        std::vector<Rational> c(static_cast<std::size_t>(p) + 1);
        for (std::size_t i = 0; i < c.size(); ++i) {
            if (a.coeffs_[i].is_zero()) {
                continue;
            }
            for (std::size_t j = 0; i + j < c.size(); ++j) {
                c[i + j] += a.coeffs_[i] * b.coeffs_[j];
            }
        }
        return {std::move(c), p};
    }

    friend bool operator==(const TruncSeriesT& a, const TruncSeriesT& b) {
        const int p = std::min(a.precision_, b.precision_);
        for (int i = 0; i <= p; ++i) {
            if (a.coeffs_[static_cast<std::size_t>(i)] != b.coeffs_[static_cast<std::size_t>(i)]) {
                return false;
            }
        }
        return true;
    }

    friend TruncSeriesT derive(const TruncSeriesT& f) {
        std::vector<Rational> c(static_cast<std::size_t>(std::max(f.precision_, 1)));
        for (int i = 1; i <= f.precision_; ++i) {
            c[static_cast<std::size_t>(i - 1)] = f.coeffs_[static_cast<std::size_t>(i)] * Rational(i);
        }
        return {std::move(c), f.precision_ - 1};
    }

    friend TruncSeriesT zero_like(const TruncSeriesT& f) { return {{}, f.precision_}; }

private:
    std::vector<Rational> coeffs_;
    int precision_;
};

// ---------------------------------------------------------------------------
// Subset identity: sum over w of d^{|w^c|-1}(dfA prod_{w^c} f) d^{|w|}(fB prod_w f).

namespace detail {

/// first * prod_{i in mask} fs[i]; never needs a unit element.
template <DifferentialRing R>
R product_with(const R& first, std::span<const R> fs, std::uint64_t mask) {
    R p = first;
    for (std::size_t i = 0; i < fs.size(); ++i) {
        if (mask & (std::uint64_t{1} << i)) {
            p = p * fs[i];
        }
    }
    return p;
}

} // namespace detail

template <DifferentialRing R>
R deriv_set_lhs(const R& fA, const R& fB, std::span<const R> fs) {
    const std::size_t M = fs.size();
    if (M >= 63) {
        throw std::invalid_argument("deriv_set_lhs: too many factors");
    }
    const std::uint64_t full = (std::uint64_t{1} << M) - 1;
    const R dfA = derive(fA);
    R total = zero_like(fA);
    for (std::uint64_t w = 0; w <= full; ++w) {
        const std::uint64_t wc = full & ~w;
        const long size_w = std::popcount(w);
        const long size_wc = static_cast<long>(M) - size_w;
        // With w^c empty the left factor is d^{-1}(dfA), read as fA itself.
        R left = size_wc == 0 ? fA : derive_n(detail::product_with(dfA, fs, wc), size_wc - 1);
        R right = derive_n(detail::product_with(fB, fs, w), size_w);
        total = total + left * right;
    }
    return total;
}

template <DifferentialRing R>
R deriv_set_rhs(const R& fA, const R& fB, std::span<const R> fs) {
    return derive_n(detail::product_with(fA * fB, fs, (std::uint64_t{1} << fs.size()) - 1),
                    static_cast<long>(fs.size()));
}

// ---------------------------------------------------------------------------
// tau-sequence identity.

using TauSequence = std::vector<int>;
using USequence = std::vector<int>;

/// T(m, k): strictly increasing k-tuples in [1, m].
inline std::vector<TauSequence> tau_sequences(int m, int k) { return increasing_sequences(m, k); }

/// F(j, f, u): sum over tau in T(N-j, k) and s in S(N, N-j) of the products of
/// binomial-weighted reduced derivatives of the block products.
///
/// Blocks s_i with i outside tau (i in [1, N-j]) contribute d^{|s_i|-1}; block
/// s_{tau(q)} contributes C(|s|-1, u_q) d^{|s|-1-u_q}, and a negative order
/// kills the whole term.
template <DifferentialRing R>
R big_F(int j, std::span<const R> fs, std::span<const int> u) {
    const int N = static_cast<int>(fs.size());
    const int k = static_cast<int>(u.size());
    if (N < 1 || N >= 63 || j < 0 || j >= N || k > N - j) {
        throw std::invalid_argument("big_F: need 0 <= j < N and |u| <= N - j");
    }
    for (int x : u) {
        if (x < 0) {
            throw std::invalid_argument("big_F: negative entry in u");
        }
    }
    const int blocks = N - j;
    const auto partitions = set_partitions(N, blocks);
    const auto taus = tau_sequences(blocks, k);

    // d^order(prod_{h in block} f_h), shared across partitions and taus.
    std::map<std::pair<std::uint64_t, int>, R> block_cache;
    auto block_value = [&](const std::vector<int>& block, int order) -> const R& {
        std::uint64_t mask = 0;
        for (int h : block) {
            mask |= std::uint64_t{1} << (h - 1);
        }
        const auto key = std::make_pair(mask, order);
        auto it = block_cache.find(key);
        if (it == block_cache.end()) {
            R p = fs[static_cast<std::size_t>(block.front() - 1)];
            for (std::size_t i = 1; i < block.size(); ++i) {
                p = p * fs[static_cast<std::size_t>(block[i] - 1)];
            }
            it = block_cache.emplace(key, derive_n(std::move(p), order)).first;
        }
        return it->second;
    };

    R total = zero_like(fs[0]);
    std::vector<int> u_of_block(static_cast<std::size_t>(blocks));
    for (const auto& tau : taus) {
        std::fill(u_of_block.begin(), u_of_block.end(), -1);
        for (int q = 0; q < k; ++q) {
            u_of_block[static_cast<std::size_t>(tau[static_cast<std::size_t>(q)] - 1)] =
                u[static_cast<std::size_t>(q)];
        }
        for (const auto& s : partitions) {
            BigInt weight = 1;
            bool vanishes = false;
            for (int i = 0; i < blocks && !vanishes; ++i) {
                const int uq = u_of_block[static_cast<std::size_t>(i)];
                if (uq < 0) {
                    continue;
                }
                const int len = static_cast<int>(s.parts[static_cast<std::size_t>(i)].size());
                if (len - 1 - uq < 0) {
                    vanishes = true;
                } else {
                    weight *= binomial(len - 1, uq);
                }
            }
            if (vanishes) {
                continue;
            }
            std::optional<R> term;
            for (int i = 0; i < blocks; ++i) {
                const auto& block = s.parts[static_cast<std::size_t>(i)];
                const int uq = u_of_block[static_cast<std::size_t>(i)];
                const int order = static_cast<int>(block.size()) - 1 - (uq < 0 ? 0 : uq);
                const R& v = block_value(block, order);
                term = term ? R(*term * v) : v;
            }
            total = total + (weight == 1 ? *term : times(weight, *term));
        }
    }
    return total;
}

/// C(j, N, u) = (N-1)! (N-j+sum u) / ((N-j-k)! (j-sum u)! prod u_i! prod_i (k-i+1+sum_{g>=i} u_g)).
inline Rational big_C(int j, int N, std::span<const int> u) {
    const int k = static_cast<int>(u.size());
    const int usum = std::accumulate(u.begin(), u.end(), 0);
    if (j - usum < 0 || N - j - k < 0 || N < 1) {
        throw std::invalid_argument("big_C: requires j - sum(u) >= 0 and N - j - k >= 0");
    }
    BigInt den = factorial(N - j - k) * factorial(j - usum);
    int tail = 0;
    for (int i = k; i >= 1; --i) {
        tail += u[static_cast<std::size_t>(i - 1)];
        den *= factorial(u[static_cast<std::size_t>(i - 1)]);
        den *= BigInt(k - i + 1 + tail);
    }
    return Rational(factorial(N - 1) * BigInt(N - j + usum), den);
}

/// F(j, f, u) == C(j, N, u) d^{j - sum u}(prod f), compared as
/// den(C) * F == num(C) * d^{...}(prod f) so no rational scaling is needed.
template <DifferentialRing R>
bool check_s_tau(int j, std::span<const R> fs, std::span<const int> u) {
    const int N = static_cast<int>(fs.size());
    const Rational C = big_C(j, N, u);
    const int usum = std::accumulate(u.begin(), u.end(), 0);
    const R lhs = big_F(j, fs, u);
    R prod = fs[0];
    for (std::size_t i = 1; i < fs.size(); ++i) {
        prod = prod * fs[i];
    }
    const R rhs = derive_n(prod, j - usum);
    return times(C.denominator(), lhs) == times(C.numerator(), rhs);
}

// ---------------------------------------------------------------------------
// The two sides of the u-independence identity used inside the tau proof,
// evaluated at rational points with X, u_i, n_i as free indeterminates.

namespace detail {

inline Rational y_product(const SetPartition& sigma, const std::vector<int>& tau1,
                          std::span<const Rational> u, std::span<const Rational> n) {
    Rational prod(1);
    std::vector<int> u_of_block(sigma.parts.size(), -1);
    for (std::size_t q = 0; q < tau1.size(); ++q) {
        u_of_block[static_cast<std::size_t>(tau1[q] - 1)] = static_cast<int>(q);
    }
    for (std::size_t i = 0; i < sigma.parts.size(); ++i) {
        const auto& block = sigma.parts[i];
        Rational degsum;
        for (int x : block) {
            degsum += n[static_cast<std::size_t>(x - 1)];
        }
        if (u_of_block[i] >= 0) {
            degsum += u[static_cast<std::size_t>(u_of_block[i])];
        }
        prod *= falling_factorial(degsum, static_cast<long>(block.size()) - 1);
    }
    return prod;
}

} // namespace detail

/// U(m, u) = prod_{i=1}^{m} (X - i + 1 - sum_{g<i} u_g).
inline Rational u_falling(int m, const Rational& X, std::span<const Rational> u) {
    Rational prod(1);
    Rational partial;
    for (int i = 1; i <= m; ++i) {
        prod *= X - Rational(i - 1) - partial;
        if (i - 1 < static_cast<int>(u.size())) {
            partial += u[static_cast<std::size_t>(i - 1)];
        }
    }
    return prod;
}

/// sum_{v=l-a}^{l} U(v-l+a, u) sum_{sigma in S(l,v)} sum_{tau1 in T(v, v-l+a)} Y(sigma, tau1, n, u).
/// Requires |u| >= a and |n| = l.
inline Rational u_independent_with_u(int l, int a, const Rational& X, std::span<const Rational> u,
                                     std::span<const Rational> n) {
    if (l < 1 || a < 0 || a > l || static_cast<int>(u.size()) < a || static_cast<int>(n.size()) != l) {
        throw std::invalid_argument("u_independent_with_u: bad sizes");
    }
    Rational total;
    for (int v = l - a; v <= l; ++v) {
        const int h = v - l + a;
        Rational inner;
        for (const auto& sigma : set_partitions(l, v)) {
            for (const auto& tau1 : tau_sequences(v, h)) {
                inner += detail::y_product(sigma, tau1, u, n);
            }
        }
        total += u_falling(h, X, u) * inner;
    }
    return total;
}

/// sum_{v=l-a}^{l} (l-1)! v / ((l-a)! (l-v)! (v-l+a)!) (X)_{v-l+a} (sum n)_{l-v}.
inline Rational u_independent_without_u(int l, int a, const Rational& X, std::span<const Rational> n) {
    if (l < 1 || a < 0 || a > l || static_cast<int>(n.size()) != l) {
        throw std::invalid_argument("u_independent_without_u: bad sizes");
    }
    const Rational nsum = std::accumulate(n.begin(), n.end(), Rational());
    Rational total;
    for (int v = l - a; v <= l; ++v) {
        const Rational c(factorial(l - 1) * BigInt(v), factorial(l - a) * factorial(l - v) * factorial(v - l + a));
        total += c * falling_factorial(X, v - l + a) * falling_factorial(nsum, l - v);
    }
    return total;
}

/// C(l-1, a) (X + sum n)_a + X C(l-1, a-1) (X - 1 + sum n)_{a-1}.
inline Rational u_independent_closed(int l, int a, const Rational& X, std::span<const Rational> n) {
    const Rational nsum = std::accumulate(n.begin(), n.end(), Rational());
    Rational r = Rational(binomial(l - 1, a)) * falling_factorial(X + nsum, a);
    if (a >= 1) {
        r += X * Rational(binomial(l - 1, a - 1)) * falling_factorial(X - Rational(1) + nsum, a - 1);
    }
    return r;
}

} // namespace rootseries

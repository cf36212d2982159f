#pragma once

// Executable versions of the Stirling / set-partition / falling-factorial
// identities. Polynomial identities are certified by exact evaluation at
// random rational points (more points than the degree bound).

#include "rootseries/combinatorics.hpp"
#include "rootseries/derivation.hpp"
#include "rootseries/random.hpp"
#include "rootseries/scalar.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace rootseries {

/// Result of one identity family: how many instances ran and the first miss.
struct IdentityOutcome {
    std::string name;
    long cases = 0;
    long failures = 0;
    std::string first_failure;

    explicit IdentityOutcome(std::string identity) : name(std::move(identity)) {}

    bool pass() const { return failures == 0 && cases > 0; }

    void record(bool ok, const std::string& where) {
        ++cases;
        if (!ok) {
            if (failures == 0) {
                first_failure = where;
            }
            ++failures;
        }
    }
};

struct IdentitySides {
    Rational lhs;
    Rational rhs;
    bool holds() const { return lhs == rhs; }
};

namespace detail {

inline Rational sum_over(std::span<const Rational> xs, const std::vector<int>& one_based) {
    Rational s;
    for (int i : one_based) {
        s += xs[static_cast<std::size_t>(i - 1)];
    }
    return s;
}

inline std::string describe(std::span<const Rational> xs) {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < xs.size(); ++i) {
        os << (i ? "," : "") << xs[i];
    }
    os << ')';
    return os.str();
}

} // namespace detail

/// Alternating binomial sum over ((r+1) nu - 1 + sum x)_{N-1} against
/// nu^{k-1} sum_{s in S(N,k)} prod_i (nu - 1 + sum_{m in s_i} x_m)_{|s_i|-1}.
inline IdentitySides nu_identity_sides(int N, int k, const Rational& nu, std::span<const Rational> xs) {
    if (k < 1 || k > N || static_cast<int>(xs.size()) != N) {
        throw std::invalid_argument("identity_check_nu: need 1 <= k <= N = |xs|");
    }
    const Rational xsum = std::accumulate(xs.begin(), xs.end(), Rational());
    Rational lhs;
    for (int r = 0; r <= k - 1; ++r) {
        const Rational term = Rational(binomial(k - 1, r)) *
                              falling_factorial(Rational(r + 1) * nu - Rational(1) + xsum, N - 1);
        lhs += ((k - 1 - r) % 2 == 0) ? term : -term;
    }
    lhs /= Rational(factorial(k - 1));

    Rational rhs;
    for_each_set_partition(N, k, [&](const SetPartition& s) {
        Rational prod(1);
        for (const auto& part : s.parts) {
            prod *= falling_factorial(nu - Rational(1) + detail::sum_over(xs, part),
                                      static_cast<long>(part.size()) - 1);
        }
        rhs += prod;
    });
    rhs *= nu.pow(k - 1);
    return {lhs, rhs};
}

inline bool identity_check_nu(int N, int k, const Rational& nu, std::span<const Rational> xs) {
    return nu_identity_sides(N, k, nu, xs).holds();
}

/// C(N-1, j) (sum x)_j against sum_{s in S(N, N-j)} prod_i (sum_{m in s_i} x_m)_{|s_i|-1}.
/// The left side is what the s-tau identity gives for k = 0, f_i = t^{x_i} at t = 1.
inline IdentitySides nu_one_identity_sides(int N, int j, std::span<const Rational> xs) {
    if (j < 0 || j > N - 1 || static_cast<int>(xs.size()) != N) {
        throw std::invalid_argument("nu=1 identity: need 0 <= j <= N-1 = |xs|-1");
    }
    const Rational xsum = std::accumulate(xs.begin(), xs.end(), Rational());
    IdentitySides out;
    out.lhs = Rational(binomial(N - 1, j)) * falling_factorial(xsum, j);
    for_each_set_partition(N, N - j, [&](const SetPartition& s) {
        Rational prod(1);
        for (const auto& part : s.parts) {
            prod *= falling_factorial(detail::sum_over(xs, part), static_cast<long>(part.size()) - 1);
        }
        out.rhs += prod;
    });
    return out;
}

/// Subset sum of products of shifted Stirling numbers against
/// C(a+b, a) [M, a+b]_{sum x}; the w^c-empty term uses [-1, a-1] = 0.
inline IdentitySides stirling_set_sides(int M, int a, int b, std::span<const Rational> xs) {
    if (M < 0 || a < 1 || b < 0 || static_cast<int>(xs.size()) != M || M >= 63) {
        throw std::invalid_argument("identity_check_stirling_set: need M >= 0, a >= 1, b >= 0, |xs| = M");
    }
    IdentitySides out;
    const std::uint64_t full = (std::uint64_t{1} << M) - 1;
    for (std::uint64_t w = 0; w <= full; ++w) {
        Rational in_w, in_wc;
        int size_w = 0;
        for (int i = 0; i < M; ++i) {
            if (w & (std::uint64_t{1} << i)) {
                in_w += xs[static_cast<std::size_t>(i)];
                ++size_w;
            } else {
                in_wc += xs[static_cast<std::size_t>(i)];
            }
        }
        const int size_wc = M - size_w;
        out.lhs += stirling_shifted(size_wc - 1, a - 1).evaluate(in_wc) *
                   stirling_shifted(size_w, b).evaluate(in_w);
    }
    const Rational xsum = std::accumulate(xs.begin(), xs.end(), Rational());
    out.rhs = Rational(binomial(a + b, a)) * stirling_shifted(M, a + b).evaluate(xsum);
    return out;
}

inline bool identity_check_stirling_set(int M, int a, int b, std::span<const Rational> xs) {
    return stirling_set_sides(M, a, b, xs).holds();
}

// ---------------------------------------------------------------------------
// Individual identity families.

/// (1/a!) sum_r (-1)^{a-r} C(a,r) (r+1)^n = {n+1, a+1}.
inline IdentityOutcome check_stirling_2_a_n(const StirlingTables& tables, int bound = 12) {
    IdentityOutcome out{"stirling_2_a_n"};
    for (int a = 0; a <= bound; ++a) {
        for (int n = 0; n <= bound; ++n) {
            BigInt s = 0;
            for (int r = 0; r <= a; ++r) {
                BigInt p;
                mpz_ui_pow_ui(p.get_mpz_t(), static_cast<unsigned long>(r + 1), static_cast<unsigned long>(n));
                const BigInt term = binomial(a, r) * p;
                s += ((a - r) % 2 == 0) ? term : BigInt(-term);
            }
            const Rational lhs = Rational(s) / Rational(factorial(a));
            out.record(lhs == Rational(tables.second(n + 1, a + 1)),
                       "a=" + std::to_string(a) + " n=" + std::to_string(n));
        }
    }
    return out;
}

/// [N r]_{X+Y} = sum_{i=0}^{N-r} X^i C(r+i, i) [N, r+i]_Y, as polynomials in X with Y fixed.
inline IdentityOutcome check_stirling_x_y(RationalSampler& rng, int n_max = 10, int y_points = 5) {
    IdentityOutcome out{"stirling_x_y"};
    std::vector<Rational> ys;
    for (int i = 0; i < y_points; ++i) {
        ys.push_back(rng.any());
    }
    const UniPoly X = UniPoly::variable();
    for (int N = 0; N <= n_max; ++N) {
        for (int r = 0; r <= N; ++r) {
            for (const auto& y : ys) {
                const UniPoly lhs = stirling_shifted(N, r).compose(X + UniPoly(y));
                UniPoly rhs;
                for (int i = 0; i <= N - r; ++i) {
                    rhs = rhs + UniPoly::monomial(Rational(binomial(r + i, i)) *
                                                      stirling_shifted(N, r + i).evaluate(y),
                                                  static_cast<std::size_t>(i));
                }
                out.record(lhs == rhs, "N=" + std::to_string(N) + " r=" + std::to_string(r) + " Y=" + y.to_string());
            }
        }
    }
    return out;
}

/// (-ln(1-t))^n / n! = sum_k [k n] t^k / k! through t^order.
inline IdentityOutcome check_stirling_gf(const StirlingTables& tables, int order = 12) {
    IdentityOutcome out{"stirling_gf"};
    const auto L = TruncSeriesT::neg_log_one_minus(order);
    TruncSeriesT power = TruncSeriesT::one(order);
    for (int n = 0; n <= order; ++n) {
        if (n > 0) {
            power = power * L;
        }
        for (int k = 0; k <= order; ++k) {
            const Rational lhs = power.coefficient(k) / Rational(factorial(n));
            const Rational rhs = Rational(tables.first(k, n)) / Rational(factorial(k));
            out.record(lhs == rhs, "n=" + std::to_string(n) + " k=" + std::to_string(k));
        }
    }
    return out;
}

/// sum_{i=r}^{k} {i r} C(k, i) = {k+1, r+1}, taken literally as displayed.
inline IdentityOutcome check_stirling_2_sum(const StirlingTables& tables, int k_max = 15) {
    IdentityOutcome out{"stirling_2_sum"};
    for (int k = 0; k <= k_max; ++k) {
        for (int r = 0; r <= k; ++r) {
            BigInt lhs = 0;
            for (int i = r; i <= k; ++i) {
                lhs += tables.second(i, r) * binomial(k, i);
            }
            out.record(lhs == tables.second(k + 1, r + 1), "k=" + std::to_string(k) + " r=" + std::to_string(r));
        }
    }
    return out;
}

/// (a+b)_n = sum_i C(n,i) (a)_i (b)_{n-i}, and the binomial (Vandermonde) form.
inline IdentityOutcome check_fall_identity(RationalSampler& rng, int trials = 100, int n_max = 8) {
    IdentityOutcome out{"fall_identity"};
    for (int t = 0; t < trials; ++t) {
        const Rational a = rng.any();
        const Rational b = rng.any();
        const int n = t % (n_max + 1);
        Rational rhs, rhs_binom;
        for (int i = 0; i <= n; ++i) {
            rhs += Rational(binomial(n, i)) * falling_factorial(a, i) * falling_factorial(b, n - i);
            rhs_binom += binomial(a, i) * binomial(b, n - i);
        }
        const bool ok = falling_factorial(a + b, n) == rhs && binomial(a + b, n) == rhs_binom;
        out.record(ok, "a=" + a.to_string() + " b=" + b.to_string() + " n=" + std::to_string(n));
    }
    return out;
}

/// sum_{r=0}^{i} (-1)^{i-r} C(i,r) C(b+r, n) = C(b, n-i).
inline IdentityOutcome check_newton_coeff(RationalSampler& rng, int trials = 100, int bound = 8) {
    IdentityOutcome out{"newton_coeff"};
    for (int t = 0; t < trials; ++t) {
        const Rational b = rng.any();
        const int i = static_cast<int>(rng.integer(0, bound));
        const int n = static_cast<int>(rng.integer(0, bound));
        Rational lhs;
        for (int r = 0; r <= i; ++r) {
            const Rational term = Rational(binomial(i, r)) * binomial(b + Rational(r), n);
            lhs += ((i - r) % 2 == 0) ? term : -term;
        }
        out.record(lhs == binomial(b, n - i),
                   "b=" + b.to_string() + " i=" + std::to_string(i) + " n=" + std::to_string(n));
    }
    return out;
}

/// newton_reconstruct(F(1..m+1), x) == F(x) for random F of degree <= max_degree.
inline IdentityOutcome check_newton_series(RationalSampler& rng, int trials = 50, int max_degree = 6) {
    IdentityOutcome out{"newton_series"};
    for (int t = 0; t < trials; ++t) {
        const int m = static_cast<int>(rng.integer(0, max_degree));
        const UniPoly F = rng.polynomial(m);
        std::vector<Rational> samples;
        for (int r = 1; r <= m + 1; ++r) {
            samples.push_back(F.evaluate(Rational(r)));
        }
        const Rational x = rng.any();
        out.record(newton_reconstruct(samples, x) == F.evaluate(x),
                   "deg=" + std::to_string(m) + " x=" + x.to_string());
    }
    return out;
}

/// [N r]_0 = (-1)^{N-r} [N+1, r+1] and [N r]_1 = (-1)^{N-r} [N r].
inline IdentityOutcome check_stirling_specializations(const StirlingTables& tables, int n_max = 12) {
    IdentityOutcome out{"stirling_shifted_specializations"};
    for (int N = 0; N <= n_max; ++N) {
        for (int r = 0; r <= N; ++r) {
            const UniPoly p = stirling_shifted(N, r);
            const int sign = ((N - r) % 2 == 0) ? 1 : -1;
            const bool at0 = p.evaluate(0) == Rational(sign) * Rational(tables.first(N + 1, r + 1));
            const bool at1 = p.evaluate(1) == Rational(sign) * Rational(tables.first(N, r));
            out.record(at0 && at1, "N=" + std::to_string(N) + " r=" + std::to_string(r));
        }
    }
    return out;
}

/// |S(N, k)| = {N k} for every N <= n_max and k.
inline IdentityOutcome check_partition_counts(const StirlingTables& tables, int n_max = 9) {
    IdentityOutcome out{"set_partition_counts"};
    for (int N = 1; N <= n_max; ++N) {
        for (int k = 1; k <= N + 1; ++k) {
            long count = 0;
            for_each_set_partition(N, k, [&](const SetPartition&) { ++count; });
            out.record(BigInt(count) == tables.second(N, k), "N=" + std::to_string(N) + " k=" + std::to_string(k));
        }
    }
    return out;
}

/// Random rational instances of the nu identity, N <= n_max.
inline IdentityOutcome check_nu_random(RationalSampler& rng, int trials = 200, int n_max = 6) {
    IdentityOutcome out{"nu_identity"};
    for (int t = 0; t < trials; ++t) {
        const int N = static_cast<int>(rng.integer(1, n_max));
        const int k = static_cast<int>(rng.integer(1, N));
        const Rational nu = rng.nonzero();
        const auto xs = rng.nonzero_vector(static_cast<std::size_t>(N));
        out.record(identity_check_nu(N, k, nu, xs), "N=" + std::to_string(N) + " k=" + std::to_string(k) +
                                                        " nu=" + nu.to_string() + " x=" + detail::describe(xs));
    }
    return out;
}

/// Random rational instances of the nu = 1 identity, N <= n_max, 0 <= j <= N-1.
inline IdentityOutcome check_nu_one_random(RationalSampler& rng, int trials = 200, int n_max = 7) {
    IdentityOutcome out{"nu_one_identity"};
    for (int t = 0; t < trials; ++t) {
        const int N = static_cast<int>(rng.integer(1, n_max));
        const int j = static_cast<int>(rng.integer(0, N - 1));
        const auto xs = rng.nonzero_vector(static_cast<std::size_t>(N));
        const auto sides = nu_one_identity_sides(N, j, xs);
        const auto general = nu_identity_sides(N, N - j, Rational(1), xs);
        out.record(sides.holds() && sides.lhs == general.lhs && sides.rhs == general.rhs,
                   "N=" + std::to_string(N) + " j=" + std::to_string(j) + " x=" + detail::describe(xs));
    }
    return out;
}

/// Random instances of the subset identity for shifted Stirling numbers, M <= m_max.
inline IdentityOutcome check_stirling_set_random(RationalSampler& rng, int trials = 100, int m_max = 6) {
    IdentityOutcome out{"stirling_set_identity"};
    for (int t = 0; t < trials; ++t) {
        const int M = static_cast<int>(rng.integer(0, m_max));
        const int a = static_cast<int>(rng.integer(1, M + 1));
        const int b = static_cast<int>(rng.integer(0, M));
        const auto xs = rng.nonzero_vector(static_cast<std::size_t>(M));
        out.record(identity_check_stirling_set(M, a, b, xs), "M=" + std::to_string(M) + " a=" + std::to_string(a) +
                                                                 " b=" + std::to_string(b) +
                                                                 " x=" + detail::describe(xs));
    }
    return out;
}

/// Subset identity in Q[t] for M <= m_max random polynomials of degree <= degree.
inline IdentityOutcome check_deriv_set_poly(RationalSampler& rng, int trials = 50, int m_max = 6, int degree = 4) {
    IdentityOutcome out{"deriv_set_poly"};
    for (int t = 0; t < trials; ++t) {
        const int M = t % (m_max + 1);
        auto draw = [&] { return rng.polynomial(static_cast<int>(rng.integer(0, degree))); };
        const PolyT fA = draw();
        const PolyT fB = draw();
        std::vector<PolyT> fs;
        for (int i = 0; i < M; ++i) {
            fs.push_back(draw());
        }
        out.record(deriv_set_lhs<PolyT>(fA, fB, fs) == deriv_set_rhs<PolyT>(fA, fB, fs),
                   "trial=" + std::to_string(t) + " M=" + std::to_string(M));
    }
    return out;
}

/// Subset identity on power series known through t^order, M <= m_max.
/// Even trials use rational multiples of powers of -ln(1-t), odd trials
/// series with random coefficients.
inline IdentityOutcome check_deriv_set_series(RationalSampler& rng, int trials = 20, int m_max = 6, int order = 12) {
    IdentityOutcome out{"deriv_set_series"};
    const TruncSeriesT L = TruncSeriesT::neg_log_one_minus(order);
    for (int t = 0; t < trials; ++t) {
        const int M = t % (m_max + 1);
        auto draw = [&] {
            if (t % 2 == 0) {
                const TruncSeriesT scale({rng.nonzero()}, order);
                return scale * L.pow(static_cast<int>(rng.integer(1, 3)));
            }
            std::vector<Rational> c;
            for (int i = 0; i <= order; ++i) {
                c.push_back(rng.any());
            }
            return TruncSeriesT(std::move(c), order);
        };
        const TruncSeriesT fA = draw();
        const TruncSeriesT fB = draw();
        std::vector<TruncSeriesT> fs;
        for (int i = 0; i < M; ++i) {
            fs.push_back(draw());
        }
        out.record(deriv_set_lhs<TruncSeriesT>(fA, fB, fs) == deriv_set_rhs<TruncSeriesT>(fA, fB, fs),
                   "trial=" + std::to_string(t) + " M=" + std::to_string(M));
    }
    return out;
}

/// Every u of length k with entries in [0, u_max] and sum <= budget.
inline std::vector<USequence> bounded_u_sequences(int k, int u_max, int budget) {
    std::vector<USequence> out;
    USequence u(static_cast<std::size_t>(k), 0);
    auto rec = [&](auto&& self, int pos, int left) -> void {
        if (pos == k) {
            out.push_back(u);
            return;
        }
        for (int x = 0; x <= std::min(u_max, left); ++x) {
            u[static_cast<std::size_t>(pos)] = x;
            self(self, pos + 1, left - x);
        }
    };
    rec(rec, 0, budget);
    return out;
}

/// Exhaustive s-tau check with f_i = t^{n_i}, and symmetry of F under
/// adjacent transpositions of f, on N <= n_max, u_i <= u_max, n_i <= exp_max.
/// F is computed once per exponent tuple, so symmetry is a table lookup.
inline std::pair<IdentityOutcome, IdentityOutcome> check_s_tau_grid(int n_max = 5, int u_max = 3, int exp_max = 3) {
    IdentityOutcome stau{"s_tau"};
    IdentityOutcome sym{"f_symmetry"};
    for (int N = 1; N <= n_max; ++N) {
        // All exponent tuples in [0, exp_max]^N, as base-(exp_max+1) digits.
        long tuples = 1;
        for (int i = 0; i < N; ++i) {
            tuples *= exp_max + 1;
        }
        auto decode = [&](long code) {
            std::vector<int> e(static_cast<std::size_t>(N));
            for (int i = 0; i < N; ++i) {
                e[static_cast<std::size_t>(i)] = static_cast<int>(code % (exp_max + 1));
                code /= exp_max + 1;
            }
            return e;
        };
        auto encode = [&](const std::vector<int>& e) {
            long code = 0;
            for (int i = N - 1; i >= 0; --i) {
                code = code * (exp_max + 1) + e[static_cast<std::size_t>(i)];
            }
            return code;
        };
        for (int j = 0; j < N; ++j) {
            for (int k = 0; k <= N - j; ++k) {
                for (const auto& u : bounded_u_sequences(k, u_max, j)) {
                    const Rational C = big_C(j, N, u);
                    const int usum = std::accumulate(u.begin(), u.end(), 0);
                    std::vector<PolyT> values(static_cast<std::size_t>(tuples));
                    for (long code = 0; code < tuples; ++code) {
                        const auto e = decode(code);
                        std::vector<PolyT> fs;
                        int total = 0;
                        for (int x : e) {
                            fs.push_back(UniPoly::monomial(Rational(1), static_cast<std::size_t>(x)));
                            total += x;
                        }
                        values[static_cast<std::size_t>(code)] = big_F<PolyT>(j, fs, u);
                        const PolyT rhs =
                            derive_n(UniPoly::monomial(Rational(1), static_cast<std::size_t>(total)), j - usum);
                        std::ostringstream where;
                        where << "N=" << N << " j=" << j << " u=(";
                        for (std::size_t q = 0; q < u.size(); ++q) {
                            where << (q ? "," : "") << u[q];
                        }
                        where << ") code=" << code;
                        stau.record(values[static_cast<std::size_t>(code)] == UniPoly(C) * rhs, where.str());
                    }
                    for (long code = 0; code < tuples; ++code) {
                        for (int r = 0; r + 1 < N; ++r) {
                            auto e = decode(code);
                            std::swap(e[static_cast<std::size_t>(r)], e[static_cast<std::size_t>(r + 1)]);
                            sym.record(
                                values[static_cast<std::size_t>(code)] == values[static_cast<std::size_t>(encode(e))],
                                "N=" + std::to_string(N) + " j=" + std::to_string(j) + " code=" + std::to_string(code) +
                                    " swap=" + std::to_string(r + 1));
                        }
                    }
                }
            }
        }
    }
    return {stau, sym};
}

/// The three forms of the u-independence identity at random rational X, u, n.
inline IdentityOutcome check_u_independence(RationalSampler& rng, int trials = 60, int l_max = 5) {
    IdentityOutcome out{"u_independence"};
    for (int t = 0; t < trials; ++t) {
        const int l = static_cast<int>(rng.integer(1, l_max));
        const int a = static_cast<int>(rng.integer(0, l));
        const Rational X = rng.any();
        const auto u = rng.nonzero_vector(static_cast<std::size_t>(a));
        const auto n = rng.nonzero_vector(static_cast<std::size_t>(l));
        const Rational with_u = u_independent_with_u(l, a, X, u, n);
        const Rational without_u = u_independent_without_u(l, a, X, n);
        const Rational closed = u_independent_closed(l, a, X, n);
        out.record(with_u == without_u && without_u == closed,
                   "l=" + std::to_string(l) + " a=" + std::to_string(a) + " X=" + X.to_string());
    }
    return out;
}

/// The Stirling / falling-factorial / Newton-series family, one outcome per identity.
inline std::vector<IdentityOutcome> identity_suite_stirling(std::uint64_t seed) {
    RationalSampler rng(seed);
    const StirlingTables tables(32);
    std::vector<IdentityOutcome> out;
    out.push_back(check_stirling_2_a_n(tables));
    out.push_back(check_stirling_x_y(rng));
    out.push_back(check_stirling_gf(tables));
    out.push_back(check_stirling_2_sum(tables));
    out.push_back(check_fall_identity(rng));
    out.push_back(check_newton_coeff(rng));
    out.push_back(check_newton_series(rng));
    out.push_back(check_stirling_specializations(tables));
    out.push_back(check_partition_counts(tables));
    return out;
}

} // namespace rootseries

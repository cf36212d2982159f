#pragma once

// Taylor coefficients of the zero phi(a) of
//     f(z) = 1 + b z^beta + sum_i a_i z^{gamma_i}
// near a = 0, where phi(0) = alpha is a zero of g(z) = 1 + b z^beta.
//
// Exact mode keeps alpha as a formal symbol: every coefficient is c * alpha^e.
// Numeric mode substitutes a concrete branch of alpha on the log surface.

#include "rootseries/combinatorics.hpp"
#include "rootseries/scalar.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <concepts>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace rootseries {

template <class S>
concept RootScalar = std::same_as<S, Rational> || std::same_as<S, ComplexF>;

namespace detail {

inline bool scalar_is_zero(const Rational& x) { return x.is_zero(); }
inline bool scalar_is_zero(const ComplexF& x) { return x == ComplexF(0.0, 0.0); }

inline bool scalar_close(const Rational& x, const Rational& y) { return x == y; }
inline bool scalar_close(const ComplexF& x, const ComplexF& y, double tol = 1e-12) {
    return std::abs(x - y) <= tol * std::max(1.0, std::max(std::abs(x), std::abs(y)));
}

template <RootScalar S>
S from_bigint(const BigInt& v) {
    if constexpr (std::same_as<S, Rational>) {
        return Rational(v);
    } else {
        return ComplexF(v.get_d(), 0.0);
    }
}

template <RootScalar S>
S ipow(const S& x, long e) {
    S r(1);
    for (long i = 0; i < e; ++i) {
        r = r * x;
    }
    return r;
}

} // namespace detail

/// b, beta and gamma_1..gamma_d of f, plus the branch index m selecting alpha.
template <RootScalar S>
struct ProblemSpec {
    S b;
    S beta;
    std::vector<S> gammas;
    int branch_m = 0;

    ProblemSpec(S b_, S beta_, std::vector<S> gammas_, int m = 0)
        : b(std::move(b_)), beta(std::move(beta_)), gammas(std::move(gammas_)), branch_m(m) {
        if (detail::scalar_is_zero(b)) {
            throw std::invalid_argument("ProblemSpec: b must be nonzero");
        }
        if (detail::scalar_is_zero(beta)) {
            throw std::invalid_argument("ProblemSpec: beta must be nonzero");
        }
        if (gammas.empty()) {
            throw std::invalid_argument("ProblemSpec: need at least one perturbation exponent");
        }
    }

    int d() const { return static_cast<int>(gammas.size()); }
};

inline ProblemSpec<ComplexF> to_numeric(const ProblemSpec<Rational>& spec) {
    std::vector<ComplexF> g;
    for (const auto& x : spec.gammas) {
        g.push_back(to_complex(x));
    }
    return {to_complex(spec.b), to_complex(spec.beta), std::move(g), spec.branch_m};
}
inline const ProblemSpec<ComplexF>& to_numeric(const ProblemSpec<ComplexF>& spec) { return spec; }

/// coeff * alpha^alpha_exp with alpha formal.
///
/// Sums are only defined between terms with the same exponent; a mismatch
/// means the caller broke homogeneity and is reported as a logic_error.
template <RootScalar S>
struct AlphaMonomial {
    S coeff;
    S alpha_exp;

    bool is_zero() const { return detail::scalar_is_zero(coeff); }

    AlphaMonomial operator-() const { return {S(0) - coeff, alpha_exp}; }

    friend AlphaMonomial operator*(const AlphaMonomial& x, const AlphaMonomial& y) {
        return {x.coeff * y.coeff, x.alpha_exp + y.alpha_exp};
    }

    friend AlphaMonomial operator/(const AlphaMonomial& x, const AlphaMonomial& y) {
        if (y.is_zero()) {
            throw std::domain_error("AlphaMonomial: division by zero");
        }
        return {x.coeff / y.coeff, x.alpha_exp - y.alpha_exp};
    }

    friend AlphaMonomial operator+(const AlphaMonomial& x, const AlphaMonomial& y) {
        if (!detail::scalar_close(x.alpha_exp, y.alpha_exp)) {
            throw std::logic_error("AlphaMonomial: adding terms with different alpha exponents");
        }
        return {x.coeff + y.coeff, x.alpha_exp};
    }

    friend bool operator==(const AlphaMonomial&, const AlphaMonomial&) = default;
};

/// Coefficient equality with exact comparison for Rational, 1e-12 relative otherwise.
template <RootScalar S>
bool monomials_agree(const AlphaMonomial<S>& x, const AlphaMonomial<S>& y) {
    return detail::scalar_close(x.coeff, y.coeff) && detail::scalar_close(x.alpha_exp, y.alpha_exp);
}

template <RootScalar S>
S weighted_gamma_sum(const MultiIndex& n, const ProblemSpec<S>& spec) {
    if (n.size() != spec.d()) {
        throw std::invalid_argument("multi-index length does not match the number of exponents");
    }
    S s(0);
    for (int i = 0; i < n.size(); ++i) {
        s = s + S(n[static_cast<std::size_t>(i)]) * spec.gammas[static_cast<std::size_t>(i)];
    }
    return s;
}

/// prod_{i=1}^{N-1} (-1 + i beta - sum n_j gamma_j).
template <RootScalar S>
S closed_product(const MultiIndex& n, const ProblemSpec<S>& spec) {
    const S g = weighted_gamma_sum(n, spec);
    S p(1);
    for (int i = 1; i <= n.order() - 1; ++i) {
        p = p * (S(-1) + S(i) * spec.beta - g);
    }
    return p;
}

/// (-beta)^{N-1} (1/beta - 1 + sum gamma / beta)_{N-1}.
template <RootScalar S>
S multiset_product(const MultiIndex& n, const ProblemSpec<S>& spec) {
    const S g = weighted_gamma_sum(n, spec);
    const long N = n.order();
    const S x = S(1) / spec.beta - S(1) + g / spec.beta;
    return detail::ipow(S(0) - spec.beta, N - 1) * falling_factorial(x, N - 1);
}

template <RootScalar S>
void require_positive_order(const MultiIndex& n, const char* who) {
    if (n.order() < 1) {
        throw std::domain_error(std::string(who) + ": order 0 is phi(0) = alpha, not a derivative");
    }
}

/// Raw partial d_n phi at a = 0 from the closed factorization:
/// -alpha^{1 + sum n_i(gamma_i - 1)} / g'(alpha)^N * prod, with g'(alpha) = b beta alpha^{beta-1}.
template <RootScalar S>
AlphaMonomial<S> coeff_closed(const MultiIndex& n, const ProblemSpec<S>& spec) {
    require_positive_order<S>(n, "coeff_closed");
    const long N = n.order();
    const S g = weighted_gamma_sum(n, spec);
    const S coeff = (S(0) - closed_product(n, spec)) / detail::ipow(spec.b * spec.beta, N);
    const S exponent = S(1) + g - S(N) * spec.beta;
    return {coeff, exponent};
}

/// true iff the two displayed product forms agree (exactly for Rational).
template <RootScalar S>
bool formula_forms_agree(const MultiIndex& n, const ProblemSpec<S>& spec) {
    require_positive_order<S>(n, "formula_forms_agree");
    if (detail::scalar_is_zero(spec.beta)) {
        throw std::domain_error("formula_forms_agree: beta = 0");
    }
    return detail::scalar_close(closed_product(n, spec), multiset_product(n, spec));
}

/// Memo for the recursion, keyed by multiplicity vector. Not thread-safe;
/// the recursion always runs on one thread.
template <RootScalar S>
using RecursionMemo = std::map<MultiIndex, AlphaMonomial<S>>;

/// d(phi, I) from the equations obtained by applying d_I to f(phi(a), a) = 0
/// and solving for the single term g'(alpha) d(phi, I).
template <RootScalar S>
AlphaMonomial<S> coeff_recursive(const OrderedMultiset& I, const ProblemSpec<S>& spec, RecursionMemo<S>& memo) {
    if (I.d() != spec.d()) {
        throw std::invalid_argument("coeff_recursive: multiset alphabet does not match the spec");
    }
    const MultiIndex key = I.multiplicities();
    if (auto it = memo.find(key); it != memo.end()) {
        return it->second;
    }
    const int N = I.size();
    const AlphaMonomial<S> g_prime{spec.b * spec.beta, spec.beta - S(1)};
    auto gamma_of = [&](int letter) { return spec.gammas[static_cast<std::size_t>(letter - 1)]; };

    auto block_product = [&](const std::vector<OrderedMultiset>& blocks) {
        AlphaMonomial<S> p = coeff_recursive(blocks.front(), spec, memo);
        for (std::size_t i = 1; i < blocks.size(); ++i) {
            p = p * coeff_recursive(blocks[i], spec, memo);
        }
        return p;
    };

    std::optional<AlphaMonomial<S>> rhs;
    auto accumulate = [&](const AlphaMonomial<S>& t) { rhs = rhs ? *rhs + t : t; };

    if (N == 1) {
        // Only a_{I(1)} phi^{gamma} is hit, leaving phi(0)^gamma = alpha^gamma.
        accumulate({S(1), gamma_of(I(1))});
    } else {
        // a_h phi^{gamma_h} terms: one derivative lands on a_h, the rest on phi^{gamma_h}.
        for (int h = 1; h <= N; ++h) {
            const OrderedMultiset rest = remove_index(I, h);
            const S gamma = gamma_of(I(h));
            for (int k = 1; k <= N - 1; ++k) {
                const AlphaMonomial<S> outer{falling_factorial(gamma, k), gamma - S(k)};
                for (const auto& blocks : multiset_partitions(rest, k)) {
                    accumulate(outer * block_product(blocks));
                }
            }
        }
        // g(phi) terms with k >= 2 blocks; k = 1 is the unknown itself.
        for (int k = 2; k <= N; ++k) {
            const AlphaMonomial<S> outer{spec.b * falling_factorial(spec.beta, k), spec.beta - S(k)};
            for (const auto& blocks : multiset_partitions(I, k)) {
                accumulate(outer * block_product(blocks));
            }
        }
    }
    const AlphaMonomial<S> value = (-*rhs) / g_prime;
    memo.emplace(key, value);
    return value;
}

template <RootScalar S>
AlphaMonomial<S> coeff_recursive(const MultiIndex& n, const ProblemSpec<S>& spec, RecursionMemo<S>& memo) {
    require_positive_order<S>(n, "coeff_recursive");
    return coeff_recursive(OrderedMultiset::from_multi_index(n), spec, memo);
}

// ---------------------------------------------------------------------------
// Numeric branch of alpha.

/// A point of the log surface: alpha = r e^{i theta}, sheet n, theta in (-pi, pi].
struct AlphaBranch {
    double r = 1.0;
    double theta = 0.0;
    long n = 0;
    ComplexF value;

    /// ln r + i theta + 2 pi i n.
    ComplexF log() const { return {std::log(r), theta + 2.0 * std::numbers::pi * static_cast<double>(n)}; }

    /// z^e = exp(e * log z) on this sheet.
    ComplexF power(ComplexF e) const { return std::exp(e * log()); }
};

namespace detail {

inline bool finite(ComplexF z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

inline AlphaBranch branch_from_log(ComplexF w) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    AlphaBranch br;
    br.r = std::exp(w.real());
    br.n = static_cast<long>(std::ceil((w.imag() - std::numbers::pi) / two_pi));
    br.theta = w.imag() - two_pi * static_cast<double>(br.n);
    if (br.theta <= -std::numbers::pi) {
        br.theta += two_pi;
        --br.n;
    }
    br.value = std::polar(br.r, br.theta);
    return br;
}

} // namespace detail

/// Zero of g(z) = 1 + b z^beta for branch index m, refined by Newton in the
/// log coordinate w (z = e^w), where g becomes 1 + b e^{beta w}.
template <RootScalar S>
AlphaBranch alpha_branch(const ProblemSpec<S>& spec_in) {
    const auto& spec = to_numeric(spec_in);
    const ComplexF b = spec.b;
    const ComplexF beta = spec.beta;
    const double r0 = std::abs(b);
    const double theta0 = std::arg(b);
    const double b1 = beta.real();
    const double b2 = beta.imag();
    const double norm = b1 * b1 + b2 * b2;
    const double A = (2.0 * spec.branch_m + 1.0) * std::numbers::pi - theta0;
    const double log_r = (b2 * A - b1 * std::log(r0)) / norm;
    const double theta_full = (b1 * A + b2 * std::log(r0)) / norm;
    ComplexF w(log_r, theta_full);
    if (!detail::finite(w)) {
        throw std::runtime_error("alpha_branch: non-finite starting point");
    }
    for (int iter = 0; iter < 50; ++iter) {
        const ComplexF e = b * std::exp(beta * w);
        const ComplexF G = 1.0 + e;
        const ComplexF dG = beta * e;
        if (!detail::finite(G) || !detail::finite(dG) || dG == ComplexF(0.0, 0.0)) {
            throw std::runtime_error("alpha_branch: non-finite Newton step");
        }
        const ComplexF step = G / dG;
        w -= step;
        if (std::abs(step) <= 1e-17 * std::max(1.0, std::abs(w))) {
            break;
        }
    }
    const ComplexF e = b * std::exp(beta * w);
    if (!detail::finite(w) || std::abs(1.0 + e) > 1e-14 * std::max(1.0, std::abs(e))) {
        throw std::runtime_error("alpha_branch: Newton refinement did not converge");
    }
    return detail::branch_from_log(w);
}

template <RootScalar S>
ComplexF evaluate(const AlphaMonomial<S>& m, const AlphaBranch& br) {
    return to_complex(m.coeff) * br.power(to_complex(m.alpha_exp));
}

// ---------------------------------------------------------------------------
// Series tables.

template <RootScalar S>
struct SeriesTable {
    int d = 1;
    int max_order = 0;
    /// true: Taylor coefficients d_n phi / prod n_i!; false: raw partials.
    bool normalized = true;
    std::map<MultiIndex, AlphaMonomial<S>> entries;
};

/// All multi-indices with total order <= K; the zero index maps to alpha itself.
/// Entries are independent, so threads > 1 splits them across workers with
/// identical results.
template <RootScalar S>
SeriesTable<S> taylor_table(const ProblemSpec<S>& spec, int K, bool normalized, unsigned threads = 1) {
    if (K < 0) {
        throw std::invalid_argument("taylor_table: K must be non-negative");
    }
    const auto indices = multi_indices(spec.d(), K);
    std::vector<std::optional<AlphaMonomial<S>>> values(indices.size());
    auto work = [&](std::size_t start, std::size_t stride) {
        for (std::size_t i = start; i < indices.size(); i += stride) {
            const MultiIndex& n = indices[i];
            if (n.order() == 0) {
                values[i] = AlphaMonomial<S>{S(1), S(1)};
                continue;
            }
            auto m = coeff_closed(n, spec);
            if (normalized) {
                m.coeff = m.coeff / detail::from_bigint<S>(n.factorial_product());
            }
            values[i] = std::move(m);
        }
    };
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(indices.size())));
    if (threads == 1) {
        work(0, 1);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back(work, t, threads);
        }
    }
    SeriesTable<S> table{spec.d(), K, normalized, {}};
    for (std::size_t i = 0; i < indices.size(); ++i) {
        table.entries.emplace(indices[i], std::move(*values[i]));
    }
    return table;
}


// ---------------------------------------------------------------------------
// Numeric verification against f itself.

/// Sum of normalized table entries times a^n, evaluated on the branch.
template <RootScalar S>
ComplexF evaluate_series(const SeriesTable<S>& table, const AlphaBranch& br, std::span<const ComplexF> a) {
    if (!table.normalized) {
        throw std::invalid_argument("evaluate_series: needs Taylor (normalized) coefficients");
    }
    if (static_cast<int>(a.size()) != table.d) {
        throw std::invalid_argument("evaluate_series: point has wrong dimension");
    }
    ComplexF sum(0.0, 0.0);
    for (const auto& [n, m] : table.entries) {
        ComplexF mono = evaluate(m, br);
        for (int i = 0; i < n.size(); ++i) {
            mono *= std::pow(a[static_cast<std::size_t>(i)], n[static_cast<std::size_t>(i)]);
        }
        sum += mono;
    }
    return sum;
}

/// f at the point of the log surface with coordinate w: 1 + b e^{beta w} + sum a_i e^{gamma_i w}.
inline ComplexF f_at_log(const ProblemSpec<ComplexF>& spec, std::span<const ComplexF> a, ComplexF w) {
    ComplexF v = 1.0 + spec.b * std::exp(spec.beta * w);
    for (std::size_t i = 0; i < a.size(); ++i) {
        v += a[i] * std::exp(spec.gammas[i] * w);
    }
    return v;
}

/// Log coordinate of a value z near alpha, on alpha's sheet.
inline ComplexF log_near(const AlphaBranch& br, ComplexF z) { return br.log() + std::log(z / br.value); }

/// Zero of f(., a) continued from alpha by Newton in the log coordinate.
template <RootScalar S>
ComplexF track_root(const ProblemSpec<S>& spec_in, const AlphaBranch& br, std::span<const ComplexF> a) {
    const auto& spec = to_numeric(spec_in);
    if (static_cast<int>(a.size()) != spec.d()) {
        throw std::invalid_argument("track_root: point has wrong dimension");
    }
    ComplexF w = br.log();
    for (int iter = 0; iter < 100; ++iter) {
        ComplexF F = f_at_log(spec, a, w);
        ComplexF dF = spec.beta * spec.b * std::exp(spec.beta * w);
        for (std::size_t i = 0; i < a.size(); ++i) {
            dF += a[i] * spec.gammas[i] * std::exp(spec.gammas[i] * w);
        }
        const ComplexF step = F / dF;
        if (!detail::finite(step)) {
            throw std::runtime_error("track_root: non-finite Newton step");
        }
        w -= step;
        if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(w))) {
            return std::exp(w);
        }
    }
    if (std::abs(f_at_log(spec, a, w)) > 1e-12) {
        throw std::runtime_error("track_root: Newton did not converge");
    }
    return std::exp(w);
}

struct ResidualReport {
    int K = 0;
    std::vector<double> scales;
    std::vector<double> residuals;
    /// Least-squares slope of log residual against log scale over the points
    /// above the noise floor; NaN when fewer than two such points exist.
    double slope = std::numeric_limits<double>::quiet_NaN();
    int fitted_points = 0;
    double noise_floor = 1e-13;
    double slope_tolerance = 0.2;
    bool pass = false;
};

namespace detail {

/// |f(phi_K(s a))| with phi_K read off a normalized table.
inline double residual_at(const ProblemSpec<ComplexF>& spec, const AlphaBranch& br,
                          const SeriesTable<ComplexF>& table, std::span<const ComplexF> a_point, double s) {
    std::vector<ComplexF> a(a_point.begin(), a_point.end());
    for (auto& x : a) {
        x *= s;
    }
    const ComplexF phi = evaluate_series(table, br, a);
    return std::abs(f_at_log(spec, a, log_near(br, phi)));
}

} // namespace detail

/// Evaluates the order-K truncation at s * a_point for each scale s and checks
/// that |f| decays like s^{K+1}. With fewer than two residuals above the
/// noise floor no slope is fitted, and the check passes only if every
/// residual is below the floor.
template <RootScalar S>
ResidualReport residual_check(const ProblemSpec<S>& spec, int K, std::span<const ComplexF> a_point,
                              std::span<const double> scales, double noise_floor = 1e-13,
                              double slope_tolerance = 0.2) {
    const auto& num = to_numeric(spec);
    if (static_cast<int>(a_point.size()) != num.d()) {
        throw std::invalid_argument("residual_check: point has wrong dimension");
    }
    const AlphaBranch br = alpha_branch(num);
    const auto table = taylor_table(num, K, true);
    ResidualReport rep;
    rep.K = K;
    rep.noise_floor = noise_floor;
    rep.slope_tolerance = slope_tolerance;
    std::vector<double> xs, ys;
    for (double s : scales) {
        const double res = detail::residual_at(num, br, table, a_point, s);
        rep.scales.push_back(s);
        rep.residuals.push_back(res);
        if (res > noise_floor && s > 0.0) {
            xs.push_back(std::log(s));
            ys.push_back(std::log(res));
        }
    }
    rep.fitted_points = static_cast<int>(xs.size());
    if (xs.size() >= 2) {
        const double n = static_cast<double>(xs.size());
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            sx += xs[i];
            sy += ys[i];
            sxx += xs[i] * xs[i];
            sxy += xs[i] * ys[i];
        }
        rep.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        rep.pass = rep.slope >= K + 1 - slope_tolerance;
    } else {
        rep.pass = xs.empty();
    }
    return rep;
}

/// Rescales a_point by powers of two until the order-K residual at the
/// smallest scale lies in [lo, hi], so every scale sits above the noise floor
/// while truncation error still dominates. Returns the last point tried if
/// max_steps runs out; a zero point is returned unchanged.
template <RootScalar S>
std::vector<ComplexF> calibrate_point(const ProblemSpec<S>& spec, int K, std::span<const ComplexF> a_point,
                                      std::span<const double> scales, double lo = 1e-11, double hi = 1e-6,
                                      int max_steps = 40) {
    const auto& num = to_numeric(spec);
    if (static_cast<int>(a_point.size()) != num.d()) {
        throw std::invalid_argument("calibrate_point: point has wrong dimension");
    }
    std::vector<ComplexF> a(a_point.begin(), a_point.end());
    if (scales.empty() || std::all_of(a.begin(), a.end(), [](ComplexF x) { return x == ComplexF(0.0, 0.0); })) {
        return a;
    }
    const double smallest = *std::min_element(scales.begin(), scales.end());
    const AlphaBranch br = alpha_branch(num);
    const auto table = taylor_table(num, K, true);
    for (int step = 0; step < max_steps; ++step) {
        const double res = detail::residual_at(num, br, table, a, smallest);
        const double factor = res < lo ? 2.0 : (res > hi || !std::isfinite(res) ? 0.5 : 1.0);
        if (factor == 1.0) {
            break;
        }
        for (auto& x : a) {
            x *= factor;
        }
    }
    return a;
}

/// Central finite-difference estimate of the raw partial d_n phi at 0, for
/// total order 1 or 2, from Newton-tracked roots at step h.
template <RootScalar S>
ComplexF finite_difference_partial(const ProblemSpec<S>& spec, const AlphaBranch& br, const MultiIndex& n,
                                   double h = 1e-5) {
    const int d = n.size();
    auto phi_at = [&](std::initializer_list<std::pair<int, double>> shifts) {
        std::vector<ComplexF> a(static_cast<std::size_t>(d), ComplexF(0.0, 0.0));
        for (auto [i, v] : shifts) {
            a[static_cast<std::size_t>(i)] += v;
        }
        return track_root(spec, br, a);
    };
    std::vector<int> hit;
    for (int i = 0; i < d; ++i) {
        for (int c = 0; c < n[static_cast<std::size_t>(i)]; ++c) {
            hit.push_back(i);
        }
    }
    if (hit.size() == 1) {
        const int i = hit[0];
        return (phi_at({{i, h}}) - phi_at({{i, -h}})) / (2.0 * h);
    }
    if (hit.size() == 2 && hit[0] == hit[1]) {
        const int i = hit[0];
        return (phi_at({{i, h}}) - 2.0 * phi_at({}) + phi_at({{i, -h}})) / (h * h);
    }
    if (hit.size() == 2) {
        const int i = hit[0];
        const int j = hit[1];
        return (phi_at({{i, h}, {j, h}}) - phi_at({{i, h}, {j, -h}}) - phi_at({{i, -h}, {j, h}}) +
                phi_at({{i, -h}, {j, -h}})) /
               (4.0 * h * h);
    }
    throw std::invalid_argument("finite_difference_partial: total order must be 1 or 2");
}

/// Zero of 1 + a z + z^2 continuing i from a = 0: (-a + i sqrt(4 - a^2)) / 2.
inline ComplexF quadratic_root(ComplexF a) {
    return (-a + ComplexF(0.0, 1.0) * std::sqrt(4.0 - a * a)) / 2.0;
}

} // namespace rootseries

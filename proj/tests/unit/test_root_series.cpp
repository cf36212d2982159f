#include "rootseries/cli.hpp"
#include "rootseries/root_series.hpp"
#include "support/oracles.hpp"

#include <catch_amalgamated.hpp>

#include <numbers>

using namespace rootseries;

namespace {

const ComplexF I(0.0, 1.0);

ProblemSpec<Rational> quadratic() { return {Rational(1), Rational(2), {Rational(1)}}; }

bool near(ComplexF x, ComplexF y, double tol) { return std::abs(x - y) <= tol; }

} // namespace

TEST_CASE("quadratic spec: closed coefficients against the explicit root") {
    const auto spec = quadratic();
    const auto br = alpha_branch(spec);
    const auto expected = oracle::quadratic_root_derivatives();
    for (int n = 1; n <= 4; ++n) {
        const ComplexF raw = evaluate(coeff_closed(MultiIndex({n}), spec), br);
        INFO("order " << n);
        CHECK(near(raw, expected[static_cast<std::size_t>(n)], 1e-12));
    }
    const auto first = coeff_closed(MultiIndex({1}), spec);
    CHECK(first.coeff == Rational(-1, 2));
    CHECK(first.alpha_exp == Rational(0));
    const auto second = coeff_closed(MultiIndex({2}), spec);
    CHECK(second.coeff == Rational(1, 4));
    CHECK(second.alpha_exp == Rational(-1));
    CHECK_THROWS(coeff_closed(MultiIndex({0}), spec));
}

TEST_CASE("alpha branch examples") {
    const auto a0 = alpha_branch(ProblemSpec<Rational>{Rational(1), Rational(2), {Rational(1)}, 0});
    CHECK(near(a0.value, I, 1e-14));
    CHECK(a0.theta == Catch::Approx(std::numbers::pi / 2));

    const auto a1 = alpha_branch(ProblemSpec<Rational>{Rational(1), Rational(2), {Rational(1)}, 1});
    CHECK(near(a1.value, -I, 1e-14));
    CHECK(a1.theta == Catch::Approx(-std::numbers::pi / 2));
    CHECK(a1.n == 1);

    const auto a2 = alpha_branch(ProblemSpec<Rational>{Rational(-1), Rational(1), {Rational(1)}, 0});
    CHECK(near(a2.value, 1.0, 1e-14));

    RationalSampler rng(41);
    for (int t = 0; t < 50; ++t) {
        const auto spec = cli::random_numeric_spec(rng, 2);
        const auto br = alpha_branch(spec);
        const ComplexF e = spec.b * br.power(spec.beta);
        REQUIRE(std::abs(1.0 + e) <= 1e-12 * std::max(1.0, std::abs(e)));
        REQUIRE(br.theta > -std::numbers::pi);
        REQUIRE(br.theta <= std::numbers::pi);
    }
}

TEST_CASE("spec validation") {
    CHECK_THROWS(ProblemSpec<Rational>{Rational(0), Rational(2), {Rational(1)}});
    CHECK_THROWS(ProblemSpec<Rational>{Rational(1), Rational(0), {Rational(1)}});
    CHECK_THROWS(ProblemSpec<Rational>{Rational(1), Rational(2), {}});
}

TEST_CASE("taylor tables") {
    const auto spec = quadratic();
    const auto t0 = taylor_table(spec, 0, true);
    REQUIRE(t0.entries.size() == 1);
    const auto& base = t0.entries.begin()->second;
    CHECK(base.coeff == Rational(1));
    CHECK(base.alpha_exp == Rational(1));

    const auto t2 = taylor_table(spec, 2, false);
    CHECK(t2.entries.at(MultiIndex({1})).coeff == Rational(-1, 2));
    CHECK(t2.entries.at(MultiIndex({2})).coeff == Rational(1, 4));
    const auto t2n = taylor_table(spec, 2, true);
    CHECK(t2n.entries.at(MultiIndex({2})).coeff == Rational(1, 8));

    const ProblemSpec<Rational> two{Rational(2), Rational(3), {Rational(1), Rational(-1, 2)}};
    const auto t3 = taylor_table(two, 3, true);
    CHECK(std::count_if(t3.entries.begin(), t3.entries.end(), [](const auto& e) { return e.first.order() > 0; }) == 9);

    CHECK_THROWS(taylor_table(spec, -1, true));
}

TEST_CASE("every entry carries the homogeneous alpha exponent") {
    RationalSampler rng(42);
    for (int d = 1; d <= 3; ++d) {
        const auto spec = cli::detail::random_exact_spec(rng, d);
        for (const auto& [n, m] : taylor_table(spec, 4, true).entries) {
            if (n.order() == 0) {
                continue;
            }
            REQUIRE(m.alpha_exp == Rational(1) + weighted_gamma_sum(n, spec) - Rational(n.order()) * spec.beta);
        }
    }
}

TEST_CASE("parallel table equals serial") {
    RationalSampler rng(43);
    const auto spec = cli::detail::random_exact_spec(rng, 3);
    const auto serial = taylor_table(spec, 5, true, 1);
    const auto parallel = taylor_table(spec, 5, true, 4);
    CHECK(serial.entries == parallel.entries);
}

TEST_CASE("formula forms agree") {
    const auto spec = quadratic();
    CHECK(closed_product(MultiIndex({1}), spec) == Rational(1));
    CHECK(multiset_product(MultiIndex({1}), spec) == Rational(1));
    // N = 2, beta = 2, gamma sum 1: single factor -1 + 2 - 2 = -1.
    CHECK(closed_product(MultiIndex({2}), spec) == Rational(-1));
    CHECK(multiset_product(MultiIndex({2}), spec) == Rational(-1));

    RationalSampler rng(44);
    for (int t = 0; t < 100; ++t) {
        const int d = static_cast<int>(rng.integer(1, 3));
        const auto s = cli::detail::random_exact_spec(rng, d);
        for (const auto& n : multi_indices(d, 6, 1)) {
            REQUIRE(formula_forms_agree(n, s));
        }
    }
}

TEST_CASE("a vanishing product factor gives an exact zero") {
    // beta = 1, gamma = 1/2, n = (4): factors -1 + i - 2 for i = 1..3, the last is 0.
    const ProblemSpec<Rational> spec{Rational(1), Rational(1), {Rational(1, 2)}};
    CHECK(coeff_closed(MultiIndex({4}), spec).is_zero());
    RecursionMemo<Rational> memo;
    CHECK(coeff_recursive(MultiIndex({4}), spec, memo).is_zero());
}

TEST_CASE("recursion matches the closed form") {
    const auto spec = quadratic();
    RecursionMemo<Rational> memo;
    CHECK(coeff_recursive(OrderedMultiset({1}, 1), spec, memo) == coeff_closed(MultiIndex({1}), spec));
    CHECK(coeff_recursive(OrderedMultiset({1, 1}, 1), spec, memo) == coeff_closed(MultiIndex({2}), spec));

    const ProblemSpec<Rational> two{Rational(3, 2), Rational(-5, 3), {Rational(2), Rational(1, 7)}};
    RecursionMemo<Rational> memo2;
    CHECK(coeff_recursive(OrderedMultiset({1, 2}, 2), two, memo2) ==
          coeff_recursive(OrderedMultiset({2, 1}, 2), two, memo2));

    RationalSampler rng(45);
    for (int d = 1; d <= 3; ++d) {
        for (int s = 0; s < 4; ++s) {
            const auto spec_r = cli::detail::random_exact_spec(rng, d);
            RecursionMemo<Rational> m;
            for (const auto& n : multi_indices(d, 5, 1)) {
                REQUIRE(coeff_closed(n, spec_r) == coeff_recursive(n, spec_r, m));
            }
        }
    }
}

TEST_CASE("numeric recursion agrees with the closed form") {
    RationalSampler rng(46);
    const auto spec = cli::random_numeric_spec(rng, 2);
    RecursionMemo<ComplexF> memo;
    for (const auto& n : multi_indices(2, 4, 1)) {
        const auto closed = coeff_closed(n, spec);
        const auto rec = coeff_recursive(n, spec, memo);
        REQUIRE(monomials_agree(closed, rec));
    }
}

TEST_CASE("monomial sums require matching exponents") {
    const AlphaMonomial<Rational> x{Rational(1), Rational(2)};
    const AlphaMonomial<Rational> y{Rational(3), Rational(1)};
    CHECK_THROWS_AS(x + y, std::logic_error);
    CHECK((x + x).coeff == Rational(2));
    CHECK((x * y).alpha_exp == Rational(3));
}

TEST_CASE("residuals vanish at the origin") {
    const auto spec = quadratic();
    const std::vector<ComplexF> zero{0.0};
    const std::vector<double> scales{1.0, 0.5, 0.25};
    const auto rep = residual_check(spec, 3, zero, scales);
    for (double r : rep.residuals) {
        CHECK(r <= 1e-13);
    }
    CHECK(rep.pass);
}

TEST_CASE("calibration leaves a zero point alone and moves a tiny one out of the noise") {
    const auto spec = quadratic();
    const std::vector<double> scales{1.0, 0.5, 0.25};
    const std::vector<ComplexF> zero{0.0};
    CHECK(calibrate_point(spec, 2, zero, scales) == zero);
    const std::vector<ComplexF> tiny{1e-6};
    const auto pt = calibrate_point(spec, 2, tiny, scales);
    CHECK(std::abs(pt[0]) > 1e-6);
    CHECK(residual_check(spec, 2, pt, scales).fitted_points == 3);
}

TEST_CASE("quadratic truncation matches the explicit root") {
    const auto spec = quadratic();
    const auto br = alpha_branch(spec);
    const auto table = taylor_table(spec, 4, true);
    for (double a : {1e-3, -1e-3}) {
        const std::vector<ComplexF> pt{a};
        CHECK(near(evaluate_series(table, br, pt), quadratic_root(a), 1e-12));
    }
}

TEST_CASE("residual slopes follow the truncation order") {
    RationalSampler rng(47);
    const std::vector<double> scales{1.0, 0.5, 0.25};
    for (int t = 0; t < 6; ++t) {
        const int d = 1 + t % 3;
        const auto spec = cli::random_numeric_spec(rng, d);
        const auto a = cli::random_point(rng, d);
        for (int K = 2; K <= 4; ++K) {
            const auto pt = calibrate_point(spec, K, a, scales);
            const auto rep = residual_check(spec, K, pt, scales);
            INFO("d=" << d << " K=" << K << " slope=" << rep.slope);
            CHECK(rep.fitted_points == 3);
            CHECK(std::abs(rep.slope - (K + 1)) < 0.2);
        }
    }
    // d = 2, beta = 3.
    const ProblemSpec<ComplexF> spec{ComplexF(0.7, 0.4), ComplexF(3.0, 0.0), {ComplexF(1.3, 0.0), ComplexF(-0.6, 0.2)}};
    const std::vector<ComplexF> a{ComplexF(6e-3, 3e-3), ComplexF(-4e-3, 7e-3)};
    const auto rep = residual_check(spec, 3, calibrate_point(spec, 3, a, scales), scales);
    INFO("slope=" << rep.slope);
    CHECK(rep.fitted_points >= 2);
    CHECK(std::abs(rep.slope - 4.0) < 0.2);
}

TEST_CASE("finite differences reproduce low-order partials") {
    const auto spec = quadratic();
    const auto br = alpha_branch(spec);
    CHECK(near(finite_difference_partial(spec, br, MultiIndex({1})), -0.5, 1e-6));
    CHECK(near(finite_difference_partial(spec, br, MultiIndex({2})), -0.25 * I, 1e-4));

    RationalSampler rng(48);
    for (int t = 0; t < 5; ++t) {
        const auto s = cli::random_numeric_spec(rng, 2);
        const auto b = alpha_branch(s);
        const auto table = taylor_table(s, 2, false);
        for (const auto& [n, m] : table.entries) {
            if (n.order() == 0) {
                continue;
            }
            const ComplexF exact = evaluate(m, b);
            const ComplexF fd = finite_difference_partial(s, b, n);
            INFO("n=(" << n[0] << "," << n[1] << ") exact=" << exact << " fd=" << fd);
            REQUIRE(std::abs(exact - fd) <= 1e-4 * std::max(1.0, std::abs(exact)));
        }
    }
    CHECK_THROWS(finite_difference_partial(spec, br, MultiIndex({3})));
}

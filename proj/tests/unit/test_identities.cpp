#include "rootseries/identities.hpp"

#include <catch_amalgamated.hpp>

using namespace rootseries;

TEST_CASE("nu identity: k = 1 collapses to a single falling factorial") {
    const std::vector<Rational> xs{Rational(1, 2), Rational(-3), Rational(2, 7)};
    const Rational nu(5, 3);
    const auto sides = nu_identity_sides(3, 1, nu, xs);
    const Rational expected = falling_factorial(nu - Rational(1) + Rational(1, 2) - Rational(3) + Rational(2, 7), 2);
    CHECK(sides.lhs == expected);
    CHECK(sides.rhs == expected);
}

TEST_CASE("nu identity: N = 2, k = 2, nu = 1, x = (1, 1)") {
    const std::vector<Rational> xs{1, 1};
    const auto sides = nu_identity_sides(2, 2, Rational(1), xs);
    CHECK(sides.lhs == Rational(1));
    CHECK(sides.rhs == Rational(1));
    CHECK_THROWS(nu_identity_sides(2, 3, Rational(1), xs));
}

TEST_CASE("nu identity at random rational points") {
    RationalSampler rng(17);
    const auto out = check_nu_random(rng, 200, 6);
    INFO(out.first_failure);
    CHECK(out.pass());
    CHECK(out.cases == 200);
}

TEST_CASE("nu = 1 identity: small cases by hand") {
    const std::vector<Rational> xs{Rational(2, 3), Rational(5)};
    // j = 0: both sides are 1; the all-singletons partition contributes (x)_0 terms.
    auto s0 = nu_one_identity_sides(2, 0, xs);
    CHECK(s0.lhs == Rational(1));
    CHECK(s0.rhs == Rational(1));
    // j = 1: one block {1, 2}, both sides x1 + x2.
    auto s1 = nu_one_identity_sides(2, 1, xs);
    CHECK(s1.lhs == Rational(17, 3));
    CHECK(s1.rhs == Rational(17, 3));
}

TEST_CASE("nu = 1 identity is the k = 0 s-tau identity at t = 1") {
    // f_i = t^{x_i} with non-negative integer x_i; evaluate both s-tau sides at t = 1.
    const std::vector<int> exps{2, 0, 3, 1};
    const int N = static_cast<int>(exps.size());
    std::vector<PolyT> fs;
    std::vector<Rational> xs;
    for (int e : exps) {
        fs.push_back(UniPoly::monomial(Rational(1), static_cast<std::size_t>(e)));
        xs.emplace_back(e);
    }
    for (int j = 0; j < N; ++j) {
        const auto sides = nu_one_identity_sides(N, j, xs);
        const std::vector<int> no_u;
        CHECK(big_F<PolyT>(j, fs, no_u).evaluate(Rational(1)) == sides.rhs);
        CHECK(big_C(j, N, no_u) * derive_n(UniPoly::monomial(Rational(1), 6), j).evaluate(Rational(1)) == sides.lhs);
    }
}

TEST_CASE("nu = 1 identity at random rational points") {
    RationalSampler rng(18);
    const auto out = check_nu_one_random(rng, 200, 7);
    INFO(out.first_failure);
    CHECK(out.pass());
}

TEST_CASE("Stirling subset identity: boundary cases") {
    CHECK(identity_check_stirling_set(0, 1, 0, std::vector<Rational>{}));
    CHECK(identity_check_stirling_set(0, 2, 3, std::vector<Rational>{}));
    const std::vector<Rational> one{1};
    const auto sides = stirling_set_sides(1, 1, 0, one);
    CHECK(sides.lhs == Rational(1));
    CHECK(sides.rhs == Rational(1));
    CHECK_THROWS(stirling_set_sides(1, 0, 0, one));
}

TEST_CASE("Stirling subset identity at random rational points") {
    RationalSampler rng(19);
    const auto out = check_stirling_set_random(rng, 100, 6);
    INFO(out.first_failure);
    CHECK(out.pass());
}

TEST_CASE("Stirling suite") {
    const StirlingTables tables(32);
    // a = 1, n = 2: (1/1!)(-1 * 1 + 2^2) = 3 = {3 2}.
    CHECK(tables.second(3, 2) == 3);
    // r = 0 column: sum_i {i 0} C(k, i) = 1 = {k+1, 1}.
    for (int k = 0; k <= 15; ++k) {
        CHECK(tables.second(k + 1, 1) == 1);
    }
    for (const auto& o : identity_suite_stirling(7)) {
        INFO(o.name << ": " << o.first_failure);
        CHECK(o.pass());
    }
}

TEST_CASE("identity outcomes record the first failure") {
    IdentityOutcome o{"demo"};
    CHECK_FALSE(o.pass());
    o.record(true, "a");
    o.record(false, "b");
    o.record(false, "c");
    CHECK(o.failures == 2);
    CHECK(o.first_failure == "b");
    CHECK_FALSE(o.pass());
}

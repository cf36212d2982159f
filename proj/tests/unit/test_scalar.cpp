#include "rootseries/random.hpp"
#include "rootseries/scalar.hpp"

#include <catch_amalgamated.hpp>

using namespace rootseries;

namespace {

XiElement random_xi(RationalSampler& rng, int d) {
    std::vector<Rational> c;
    for (int i = 0; i < d; ++i) {
        c.push_back(rng.any());
    }
    return XiElement(std::move(c));
}

} // namespace

TEST_CASE("rational arithmetic stays in lowest terms") {
    CHECK(rational_arith(Rational(1, 2), Rational(1, 3), ArithOp::add) == Rational(5, 6));
    const Rational x = Rational::parse("-7/9");
    CHECK(rational_arith(x, Rational(1), ArithOp::mul) == x);
    const auto diff = rational_arith(Rational(7, 6), Rational(7, 6), ArithOp::sub);
    REQUIRE(diff);
    CHECK(diff->to_string() == "0/1");
    CHECK(Rational(BigInt(6), BigInt(-4)).to_string() == "-3/2");
    CHECK(Rational(BigInt(-6), BigInt(-4)).denominator() == 2);
}

TEST_CASE("division by zero is an error value, not a crash") {
    CHECK_FALSE(rational_arith(Rational(1), Rational(0), ArithOp::div).has_value());
    CHECK_THROWS_AS(Rational(1) / Rational(0), std::domain_error);
    CHECK_THROWS(Rational(BigInt(1), BigInt(0)));
}

TEST_CASE("rational parsing") {
    CHECK(Rational::parse("3/6") == Rational(1, 2));
    CHECK(Rational::parse("-4") == Rational(-4));
    CHECK_THROWS_AS(Rational::parse("1/0"), std::invalid_argument);
    CHECK_THROWS_AS(Rational::parse("abc"), std::invalid_argument);
    CHECK_THROWS_AS(Rational::parse(""), std::invalid_argument);
}

TEST_CASE("xi quotient ring: defining relation and small products") {
    const XiElement xi2 = XiElement::generator(2);
    CHECK(xi_mul(xi2, xi2, 2) == XiElement::constant(2, Rational(-1)));

    const XiElement one_plus_xi3(std::vector<Rational>{1, 1, 0});
    CHECK(xi_mul(one_plus_xi3, XiElement::constant(3, Rational(1)), 3) == one_plus_xi3);

    const XiElement p(std::vector<Rational>{1, 1});
    const XiElement m(std::vector<Rational>{1, -1});
    CHECK(xi_mul(p, m, 2) == XiElement::constant(2, Rational(2)));

    CHECK_THROWS_AS(xi_mul(xi2, XiElement::generator(3), 2), std::invalid_argument);
    CHECK_THROWS(xi2 * XiElement::generator(3));
}

TEST_CASE("xi powers reduce with xi^d = -1 in both directions") {
    for (int d = 1; d <= 5; ++d) {
        const XiElement xi = XiElement::generator(d);
        XiElement acc = XiElement::constant(d, Rational(1));
        for (int e = 0; e <= 3 * d; ++e) {
            CHECK(XiElement::power(d, e) == acc);
            CHECK(XiElement::power(d, -e) * acc == XiElement::constant(d, Rational(1)));
            acc = acc * xi;
        }
    }
}

TEST_CASE("xi quotient ring is a commutative ring") {
    RationalSampler rng(101);
    for (int d = 1; d <= 4; ++d) {
        for (int t = 0; t < 100; ++t) {
            const XiElement a = random_xi(rng, d);
            const XiElement b = random_xi(rng, d);
            const XiElement c = random_xi(rng, d);
            CHECK((a * b) * c == a * (b * c));
            CHECK(a * (b + c) == a * b + a * c);
            CHECK(a * b == b * a);
            CHECK(a + b == b + a);
        }
    }
}

TEST_CASE("evaluation at each root of -1 is a ring homomorphism") {
    RationalSampler rng(202);
    for (int d = 1; d <= 4; ++d) {
        for (int j = 0; j < d; ++j) {
            const ComplexF root = XiElement::numeric_root(d, j);
            CHECK(std::abs(std::pow(root, d) + 1.0) < 1e-12);
            for (int t = 0; t < 25; ++t) {
                const XiElement a = random_xi(rng, d);
                const XiElement b = random_xi(rng, d);
                const ComplexF ea = a.evaluate(root);
                const ComplexF eb = b.evaluate(root);
                CHECK(std::abs((a * b).evaluate(root) - ea * eb) <= 1e-12 * std::max(1.0, std::abs(ea * eb)));
                CHECK(std::abs((a + b).evaluate(root) - (ea + eb)) <= 1e-12 * std::max(1.0, std::abs(ea + eb)));
            }
        }
    }
}

TEST_CASE("falling factorial examples") {
    CHECK(falling_factorial(Rational(3, 7), 0) == Rational(1));
    CHECK(falling_factorial(Rational(5), 3) == Rational(60));
    CHECK(falling_factorial(Rational(1, 2), 2) == Rational(-1, 4));
    const UniPoly X = UniPoly::variable();
    CHECK(falling_factorial(X, 3) == UniPoly(std::vector<Rational>{0, 2, -3, 1}));
}

TEST_CASE("falling factorial splits: (x)_{m+n} = (x)_m (x-m)_n") {
    RationalSampler rng(303);
    for (int t = 0; t < 20; ++t) {
        const Rational x = rng.any();
        for (int m = 0; m <= 10; ++m) {
            for (int n = 0; n <= 10; ++n) {
                REQUIRE(falling_factorial(x, m + n) == falling_factorial(x, m) * falling_factorial(x - Rational(m), n));
            }
        }
    }
}

TEST_CASE("factorial and integer binomial") {
    CHECK(factorial(0) == 1);
    CHECK(factorial(20) == BigInt("2432902008176640000"));
    CHECK(binomial(10, 3) == 120);
    CHECK(binomial(4, 5) == 0);
    CHECK(binomial(4, -1) == 0);
    CHECK(binomial(Rational(1, 2), 2) == Rational(-1, 8));
}

TEST_CASE("univariate polynomials") {
    const UniPoly p(std::vector<Rational>{1, 2, 3});
    CHECK(p.degree() == 2);
    CHECK(p.evaluate(Rational(2)) == Rational(17));
    CHECK(p.derivative() == UniPoly(std::vector<Rational>{2, 6}));
    CHECK(p.compose(UniPoly::variable() + UniPoly(1)).evaluate(Rational(1)) == p.evaluate(Rational(2)));
    CHECK((p - p).is_zero());
    CHECK((p - p).degree() == -1);
    CHECK(UniPoly(std::vector<Rational>{1, 0, 0}).degree() == 0);
}

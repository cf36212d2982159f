#include "rootseries/combinatorics.hpp"
#include "rootseries/random.hpp"
#include "support/oracles.hpp"

#include <catch_amalgamated.hpp>

#include <set>

using namespace rootseries;

namespace {

std::set<std::vector<std::vector<int>>> as_set(const std::vector<SetPartition>& ps) {
    std::set<std::vector<std::vector<int>>> out;
    for (const auto& p : ps) {
        out.insert(p.parts);
    }
    return out;
}

} // namespace

TEST_CASE("multi-index validation and graded order") {
    CHECK_THROWS(MultiIndex(std::vector<int>{}));
    CHECK_THROWS(MultiIndex(std::vector<int>{1, -1}));
    const MultiIndex n({2, 0, 1});
    CHECK(n.order() == 3);
    CHECK(n.factorial_product() == 2);
    CHECK(MultiIndex({0, 1}) < MultiIndex({2, 0}));
    CHECK(MultiIndex({2, 0}) < MultiIndex({1, 1}));

    const auto all = multi_indices(2, 3);
    CHECK(all.size() == 10);
    CHECK(std::is_sorted(all.begin(), all.end()));
    CHECK(multi_indices(2, 3, 1).size() == 9);
    CHECK(multi_indices(3, 6, 1).size() == 83);
}

TEST_CASE("set partitions of 3 into 2 blocks") {
    const auto ps = set_partitions(3, 2);
    const std::set<std::vector<std::vector<int>>> expected{{{1}, {2, 3}}, {{1, 2}, {3}}, {{1, 3}, {2}}};
    CHECK(ps.size() == 3);
    CHECK(as_set(ps) == expected);
    CHECK(set_partitions(4, 2).size() == 7);
    const auto singletons = set_partitions(5, 5);
    REQUIRE(singletons.size() == 1);
    CHECK(singletons[0].parts == std::vector<std::vector<int>>{{1}, {2}, {3}, {4}, {5}});
    CHECK(set_partitions(2, 3).empty());
}

TEST_CASE("set partitions are canonical and match brute force") {
    for (int N = 1; N <= 7; ++N) {
        for (int k = 1; k <= N; ++k) {
            const auto ps = set_partitions(N, k);
            for (const auto& p : ps) {
                REQUIRE(p.size() == k);
                for (std::size_t i = 0; i < p.parts.size(); ++i) {
                    REQUIRE(std::is_sorted(p.parts[i].begin(), p.parts[i].end()));
                    if (i > 0) {
                        REQUIRE(p.parts[i - 1].front() < p.parts[i].front());
                    }
                }
            }
            REQUIRE(as_set(ps).size() == ps.size());
            REQUIRE(as_set(ps) == oracle::brute_force_partitions(N, k));
        }
    }
}

TEST_CASE("partition counts equal second-kind Stirling numbers") {
    const StirlingTables tables(32);
    for (int N = 1; N <= 9; ++N) {
        for (int k = 1; k <= N; ++k) {
            REQUIRE(BigInt(static_cast<long>(set_partitions(N, k).size())) == tables.second(N, k));
        }
    }
}

TEST_CASE("Stirling tables against independent closed forms") {
    const StirlingTables tables(32);
    for (int n = 0; n <= 20; ++n) {
        const auto rising = oracle::rising_factorial_coefficients(n);
        for (int k = 0; k <= n; ++k) {
            REQUIRE(tables.first(n, k) == rising[static_cast<std::size_t>(k)]);
            REQUIRE(tables.second(n, k) == oracle::second_kind_by_surjections(n, k));
        }
    }
    // Second-kind values past 64 bits.
    CHECK(tables.second(32, 16) > BigInt("18446744073709551615"));
    CHECK_THROWS_AS(tables.first(33, 1), std::out_of_range);
}

TEST_CASE("multiset partitions mirror set partitions") {
    const OrderedMultiset I11({1, 1}, 1);
    const auto a = multiset_partitions(I11, 2);
    REQUIRE(a.size() == 1);
    CHECK(a[0][0].entries() == std::vector<int>{1});
    CHECK(a[0][1].entries() == std::vector<int>{1});

    const OrderedMultiset I12({1, 2}, 2);
    const auto b = multiset_partitions(I12, 1);
    REQUIRE(b.size() == 1);
    CHECK(b[0][0] == I12);

    CHECK(multiset_partitions(OrderedMultiset({1, 1, 2}, 2), 2).size() == 3);
    CHECK_THROWS(multiset_partitions(I12, 3));
    CHECK_THROWS(multiset_partitions(I12, 0));
}

TEST_CASE("remove_index") {
    CHECK(remove_index(OrderedMultiset({3, 1, 2}, 3), 2).entries() == std::vector<int>{3, 2});
    CHECK(remove_index(OrderedMultiset({1, 1}, 1), 1).entries() == std::vector<int>{1});
    CHECK(remove_index(OrderedMultiset({2, 2, 2}, 2), 3).entries() == std::vector<int>{2, 2});
    CHECK_THROWS(remove_index(OrderedMultiset({1}, 1), 1));
    CHECK_THROWS(remove_index(OrderedMultiset({1, 2}, 2), 3));
}

TEST_CASE("ordered multisets and multiplicities") {
    CHECK_THROWS(OrderedMultiset({0}, 2));
    CHECK_THROWS(OrderedMultiset({3}, 2));
    const OrderedMultiset I({2, 1, 2}, 3);
    CHECK(I(1) == 2);
    CHECK(I.multiplicities() == MultiIndex({1, 2, 0}));
    CHECK(OrderedMultiset::from_multi_index(MultiIndex({1, 2, 0})).entries() == std::vector<int>{1, 2, 2});
}

TEST_CASE("compositions and increasing sequences") {
    const auto cs = compositions(3, 2);
    CHECK(cs.size() == 4);
    for (const auto& c : cs) {
        CHECK(c.total() == 3);
    }
    CHECK(compositions(0, 0).size() == 1);
    CHECK(compositions(2, 0).empty());
    CHECK(increasing_sequences(4, 2).size() == 6);
    CHECK(increasing_sequences(3, 0).size() == 1);
    CHECK(increasing_sequences(2, 3).empty());
}

TEST_CASE("shifted Stirling polynomials") {
    CHECK(stirling_shifted(-1, 0).is_zero());
    CHECK(stirling_shifted(1, 0) == UniPoly(std::vector<Rational>{-1, 1}));
    CHECK(stirling_shifted(2, 2) == UniPoly(1));
    // Coefficient of Y^r in (Y + X - 1)_N, checked by expanding at sample X.
    RationalSampler rng(404);
    for (int N = 0; N <= 8; ++N) {
        const Rational x = rng.any();
        const UniPoly Y = UniPoly::variable();
        const UniPoly expanded = falling_factorial(Y + UniPoly(x - Rational(1)), N);
        for (int r = 0; r <= N + 1; ++r) {
            REQUIRE(stirling_shifted(N, r).evaluate(x) == expanded.coefficient(r));
        }
    }
}

TEST_CASE("Newton series reconstruction") {
    const std::vector<Rational> constant{Rational(7, 3), Rational(7, 3), Rational(7, 3)};
    CHECK(newton_reconstruct(constant, Rational(-5)) == Rational(7, 3));
    const std::vector<Rational> identity{1, 2};
    CHECK(newton_reconstruct(identity, Rational(5)) == Rational(5));
    const std::vector<Rational> square{1, 4, 9};
    CHECK(newton_reconstruct(square, Rational(1, 2)) == Rational(1, 4));
}

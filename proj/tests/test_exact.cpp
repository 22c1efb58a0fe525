#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <thread>
#include <vector>

#include "hcount/errors.hpp"
#include "hcount/exact.hpp"

using namespace hcount;

namespace {

// P(n, k) partitions of n into exactly k parts via p(n,k) = p(n-1,k-1) + p(n-k,k),
// a different recurrence from the one the library uses.
std::vector<std::vector<std::uint64_t>> exactly_k_parts(std::size_t max_n) {
    std::vector<std::vector<std::uint64_t>> t(max_n + 1, std::vector<std::uint64_t>(max_n + 1, 0));
    t[0][0] = 1;
    for (std::size_t n = 1; n <= max_n; ++n) {
        for (std::size_t k = 1; k <= n; ++k) t[n][k] = t[n - 1][k - 1] + t[n - k][k];
    }
    return t;
}

// Coefficients of prod_{i=min_part}^{N} (1 - x^i)^{-1} up to degree N.
std::vector<mpz_class> product_series(std::size_t max_n, std::size_t min_part) {
    std::vector<mpz_class> c(max_n + 1, 0);
    c[0] = 1;
    for (std::size_t i = min_part; i <= max_n; ++i) {
        // multiplying by 1/(1 - x^i) is a running sum with stride i
        for (std::size_t d = i; d <= max_n; ++d) c[d] += c[d - i];
    }
    return c;
}

std::uint64_t brute_derangements(int n) {
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::uint64_t count = 0;
    do {
        bool fixed = false;
        for (int i = 0; i < n; ++i) fixed = fixed || perm[i] == i;
        if (!fixed) ++count;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return count;
}

}  // namespace

TEST_CASE("pentagonal bounds") {
    CHECK(pentagonal_bounds(0) == PentagonalBounds{0, 0});
    CHECK(pentagonal_bounds(1) == PentagonalBounds{0, 1});
    CHECK(pentagonal_bounds(100) == PentagonalBounds{8, 8});  // (3*64+8)/2 = 100
    for (Index n = 0; n <= 3000; ++n) {
        Index k1 = 0, k2 = 0;
        while ((k1 + 1) * (3 * (k1 + 1) + 1) / 2 <= n) ++k1;
        while ((k2 + 1) * (3 * (k2 + 1) - 1) / 2 <= n) ++k2;
        REQUIRE(pentagonal_bounds(n) == PentagonalBounds{k1, k2});
    }
}

TEST_CASE("small exact values") {
    CHECK(p_exact(0) == BigCount(1));
    CHECK(p_exact(1) == BigCount(1));
    CHECK(p_exact(10) == BigCount(42));
    CHECK(h_exact_recursion(1) == BigCount(0));
    CHECK(h_exact_recursion(2) == BigCount(1));
    CHECK(h_exact_recursion(10) == BigCount(12));
    CHECK(h_exact_difference(0) == BigCount(1));
    CHECK(h_exact_difference(6) == BigCount(4));
    CHECK(h_exact_difference(12) == BigCount(21));
    CHECK(h_exact_sum_pq(2) == BigCount(1));
    CHECK(h_exact_sum_pq(8) == BigCount(7));
    CHECK(h_exact_sum_pq(13) == BigCount(24));
    const std::uint64_t h20[] = {1, 0, 1, 1, 2, 2, 4, 4, 7, 8, 12, 14, 21, 24, 34, 41, 55, 66, 88, 105, 137};
    for (Index n = 0; n <= 20; ++n) CHECK(h_exact_recursion(n) == BigCount(h20[n]));
}

TEST_CASE("large exact values") {
    CHECK(p_exact(100) == BigCount(190569292));
    CHECK(h_exact_recursion(100) == BigCount(21339417));
    CHECK(p_exact(1000).to_string() == "24061467864032622473692149727991");
    CHECK(h_exact_recursion(1000).to_string() == "933624404877723008811705095741");
    CHECK(h_exact_sum_pq(1000).to_string() == "933624404877723008811705095741");
}

TEST_CASE("P_q and H_q") {
    CHECK(pq_exact(1, 7) == BigCount(1));
    CHECK(pq_exact(7, 7) == BigCount(1));
    CHECK(pq_exact(2, 5) == BigCount(2));
    CHECK(hq_exact(1, 9) == BigCount(1));
    CHECK(hq_exact(5, 9) == BigCount(0));
    CHECK(hq_exact(2, 7) == BigCount(2));
    const auto ref = exactly_k_parts(120);
    for (Index n = 1; n <= 120; ++n) {
        for (Index q = 1; q <= n; ++q) REQUIRE(pq_exact(q, n) == BigCount(ref[n][q]));
    }
    // H_q(n) counts partitions of n into q parts all >= 2
    for (Index n = 2; n <= 60; ++n) {
        BigCount total = 0;
        for (Index q = 1; q <= n; ++q) total += hq_exact(q, n);
        REQUIRE(total == h_exact_recursion(n));
    }
}

TEST_CASE("QTable against a second recurrence and its running sums") {
    const QTable t(80);
    const auto ref = exactly_k_parts(80);
    for (Index n = 1; n <= 80; ++n) {
        std::uint64_t running = 0;
        for (Index q = 1; q <= n; ++q) {
            running += ref[n][q];
            REQUIRE(t.at(q, n) == BigCount(ref[n][q]));
            REQUIRE(t.at_most(q, n) == BigCount(running));
        }
    }
    CHECK_THROWS_AS(t.at(0, 5), DomainError);
    CHECK_THROWS_AS(t.at(6, 5), DomainError);
    CHECK_THROWS_AS(t.at(1, 81), DomainError);
    CHECK_THROWS_AS(t.at_most(6, 5), DomainError);
}

TEST_CASE("three exact methods agree") {
    const std::vector<BigCount> sweep = h_series_sum_pq(3000);
    const PartitionTable table(3000);
    for (Index n = 0; n <= 3000; ++n) {
        REQUIRE(table.h(n) == table.p(n) - (n > 0 ? table.p(n - 1) : BigCount(0)));
        REQUIRE(sweep[n] == table.h(n));
    }
    for (Index n : {0, 1, 2, 57, 999, 3000}) {
        CHECK(h_exact_recursion(n) == table.h(n));
        CHECK(h_exact_difference(n) == table.h(n));
    }
    // single-point QTable path against the sweep
    for (Index n : {2, 3, 150, 300}) CHECK(h_exact_sum_pq(n) == sweep[n]);
    BigCount via_table = 0;
    for (Index q = 1; 2 * q <= 300; ++q) via_table += pq_exact(q, 300 - q);
    CHECK(via_table == sweep[300]);
}

TEST_CASE("enumeration oracle") {
    CHECK(oracle_count(0, 2) == BigCount(1));
    CHECK(oracle_count(5, 2) == BigCount(2));
    CHECK(oracle_count(20, 2) == BigCount(137));
    CHECK(oracle_count(1, 2) == BigCount(0));
    CHECK(oracle_count(10, 1) == BigCount(42));
    for (Index n = 0; n <= 60; ++n) {
        REQUIRE(oracle_count(n, 1) == p_exact(n));
        REQUIRE(oracle_count(n, 2) == h_exact_recursion(n));
    }
    CHECK(oracle_count(90, 2) == h_exact_recursion(90));
    CHECK_THROWS_AS(oracle_count(91, 2), DomainError);
    CHECK(oracle_count(100, 2, 100) == BigCount(21339417));
    CHECK_THROWS_AS(oracle_count(5, 0), DomainError);
}

TEST_CASE("generating function product") {
    const auto h = product_series(200, 2);
    const auto p = product_series(200, 1);
    const PartitionTable table(200);
    for (Index n = 0; n <= 200; ++n) {
        REQUIRE(BigCount(h[n]) == table.h(n));
        REQUIRE(BigCount(p[n]) == table.p(n));
    }
}

TEST_CASE("derangements") {
    CHECK(derangement_count(1) == BigCount(0));
    CHECK(derangement_count(2) == BigCount(1));
    CHECK(derangement_count(5) == BigCount(44));
    for (int n = 1; n <= 9; ++n) CHECK(derangement_count(n) == BigCount(brute_derangements(n)));
    // n! sum (-1)^i / i! in exact rationals
    for (unsigned n = 1; n <= 60; ++n) {
        mpq_class sum = 0;
        mpz_class fact = 1;
        for (unsigned i = 0; i <= n; ++i) {
            if (i > 0) fact *= i;
            mpq_class term(1, 1);
            term /= mpq_class(fact);
            sum += (i % 2 == 0) ? term : -term;
        }
        mpq_class total = sum * mpq_class(fact);
        total.canonicalize();
        REQUIRE(total.get_den() == 1);
        REQUIRE(derangement_count(n) == BigCount(total.get_num()));
    }
    CHECK_THROWS_AS(derangement_count(0), DomainError);
}

TEST_CASE("error paths") {
    const PartitionTable table(10);
    CHECK_THROWS_AS(table.p(11), DomainError);
    CHECK_THROWS_AS(table.h(11), DomainError);
    CHECK_THROWS_AS(pq_exact(0, 5), DomainError);
    CHECK_THROWS_AS(pq_exact(6, 5), DomainError);
    CHECK_THROWS_AS(hq_exact(0, 5), DomainError);
    CHECK_THROWS_AS(hq_exact(1, 1), DomainError);
    CHECK_THROWS_AS(h_exact_sum_pq(1), DomainError);
}

TEST_CASE("memoized queries are safe from several threads") {
    std::vector<std::thread> threads;
    std::vector<BigCount> out(8);
    for (int i = 0; i < 8; ++i) {
        threads.emplace_back([i, &out] {
            const Index n = 400 + 50 * static_cast<Index>(i);
            out[i] = h_exact_recursion(n) + p_exact(n) + pq_exact(3, n / 4);
        });
    }
    for (auto& t : threads) t.join();
    const PartitionTable table(800);
    const auto ref = exactly_k_parts(200);
    for (int i = 0; i < 8; ++i) {
        const Index n = 400 + 50 * static_cast<Index>(i);
        CHECK(out[i] == table.h(n) + table.p(n) + BigCount(ref[n / 4][3]));
    }
}

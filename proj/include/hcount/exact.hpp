#pragma once

// Exact counts of partitions of n (p), partitions with every part >= 2 (h,
// the number of conjugacy classes of derangements of order n), partitions
// into exactly q parts (P_q, H_q) and derangements (D_n).

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "hcount/bigcount.hpp"

namespace hcount {

using Index = std::size_t;

struct PentagonalBounds {
    Index k1 = 0;  // largest k with (3k^2 + k)/2 <= n
    Index k2 = 0;  // largest k with (3k^2 - k)/2 <= n
    friend bool operator==(const PentagonalBounds&, const PentagonalBounds&) = default;
};

PentagonalBounds pentagonal_bounds(Index n);

/// Sequence a(0), a(1), ... satisfying Euler's pentagonal recurrence
///   a(n) = sum_k (-1)^(k-1) [a(n - (3k^2-k)/2) + a(n - (3k^2+k)/2)],
/// a(negative) = 0, from a fixed set of seed values. Seeds {1} give p(n);
/// seeds {1, 0} give h(n). Filled iteratively, so no recursion depth.
class PentagonalSequence {
public:
    explicit PentagonalSequence(std::vector<BigCount> seeds);

    void extend_to(Index max_n);
    Index size() const { return values_.size(); }
    const BigCount& operator[](Index n) const { return values_[n]; }
    std::span<const BigCount> values() const { return values_; }

private:
    std::vector<BigCount> values_;
};

/// p(0..max_n) and h(0..max_n), each filled by its own pentagonal recurrence.
/// Immutable after construction; concurrent reads are safe.
class PartitionTable {
public:
    explicit PartitionTable(Index max_n);

    Index max_n() const { return max_n_; }
    const BigCount& p(Index n) const;
    const BigCount& h(Index n) const;

private:
    Index max_n_;
    PentagonalSequence p_;
    PentagonalSequence h_;
};

/// Triangular table of P_q(n), 1 <= q <= n <= max_n, built row by row with
/// P_q(n) = sum_{j=1}^{min(q, n-q)} P_j(n-q), P_n(n) = 1.
///
/// Rows are kept as running sums S(n, t) = P_1(n) + ... + P_t(n) (partitions
/// of n into at most t parts), which turns the inner sum into one lookup.
class QTable {
public:
    explicit QTable(Index max_n);

    Index max_n() const { return max_n_; }
    /// P_q(n); DomainError unless 1 <= q <= n <= max_n.
    BigCount at(Index q, Index n) const;
    /// P_1(n) + ... + P_t(n) for t <= n.
    const BigCount& at_most(Index t, Index n) const;

private:
    const BigCount& cell(Index n, Index t) const { return cells_[n * (n + 1) / 2 + t]; }

    Index max_n_;
    std::vector<BigCount> cells_;  // row n holds S(n, 0..n)
};

// Memoized single-value queries. Backing tables are grown on demand under a
// lock and never shrink.
BigCount p_exact(Index n);
BigCount h_exact_recursion(Index n);
/// p(n) - p(n-1) with p(-1) = 0.
BigCount h_exact_difference(Index n);
/// P_q(n) for 1 <= q <= n; DomainError otherwise.
BigCount pq_exact(Index q, Index n);
/// H_q(n) = P_q(n-q) for q <= floor(n/2), else 0. Requires q >= 1, n >= 2.
BigCount hq_exact(Index q, Index n);
/// sum_{q=1}^{floor(n/2)} P_q(n-q). Requires n >= 2.
BigCount h_exact_sum_pq(Index n);

/// h(0..max_n) from the P_q decomposition using O(max_n) memory: sweeps q
/// upward, keeping P_q(.) and S_{q-1}(.) = P_1(.) + ... + P_{q-1}(.).
/// Entries 0 and 1 are the conventions h(0) = 1, h(1) = 0.
std::vector<BigCount> h_series_sum_pq(Index max_n);

inline constexpr Index kDefaultOracleBound = 90;

/// Partitions of n with every part >= min_part, by exhaustive enumeration of
/// non-decreasing part sequences. Shares nothing with the recurrences above.
/// DomainError if min_part == 0 or n > bound.
BigCount oracle_count(Index n, Index min_part, Index bound = kDefaultOracleBound);

/// D_n = (n-1)(D_{n-1} + D_{n-2}), D_1 = 0, D_2 = 1. Requires n >= 1.
BigCount derangement_count(Index n);

}  // namespace hcount

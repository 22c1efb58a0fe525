#include "hcount/exact.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <string>

#include "hcount/errors.hpp"

namespace hcount {

namespace {

std::uint64_t isqrt(std::uint64_t x) {
    auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(x)));
    while (r > 0 && r * r > x) --r;
    while ((r + 1) * (r + 1) <= x) ++r;
    return r;
}

std::uint64_t generalized_pentagonal(std::uint64_t k, bool plus) {
    return plus ? k * (3 * k + 1) / 2 : k * (3 * k - 1) / 2;
}

}  // namespace

PentagonalBounds pentagonal_bounds(Index n) {
    const std::uint64_t root = isqrt(24 * static_cast<std::uint64_t>(n) + 1);
    std::uint64_t k1 = (root - 1) / 6;
    std::uint64_t k2 = (root + 1) / 6;
    // exact integer check of the defining inequalities
    while (k1 > 0 && generalized_pentagonal(k1, true) > n) --k1;
    while (generalized_pentagonal(k1 + 1, true) <= n) ++k1;
    while (k2 > 0 && generalized_pentagonal(k2, false) > n) --k2;
    while (generalized_pentagonal(k2 + 1, false) <= n) ++k2;
    return {static_cast<Index>(k1), static_cast<Index>(k2)};
}

PentagonalSequence::PentagonalSequence(std::vector<BigCount> seeds) : values_(std::move(seeds)) {}

void PentagonalSequence::extend_to(Index max_n) {
    if (values_.size() > max_n) return;
    values_.reserve(max_n + 1);
    mpz_class plus, minus;
    for (Index n = values_.size(); n <= max_n; ++n) {
        plus = 0;
        minus = 0;
        for (Index k = 1;; ++k) {
            const Index g_minus = k * (3 * k - 1) / 2;
            if (g_minus > n) break;
            mpz_class& acc = (k % 2 == 1) ? plus : minus;
            acc += values_[n - g_minus].raw();
            const Index g_plus = k * (3 * k + 1) / 2;
            if (g_plus <= n) acc += values_[n - g_plus].raw();
        }
        plus -= minus;
        values_.emplace_back(std::move(plus));
        plus = mpz_class();
    }
}

PartitionTable::PartitionTable(Index max_n)
    : max_n_(max_n), p_({BigCount(1)}), h_({BigCount(1), BigCount(0)}) {
    p_.extend_to(max_n);
    h_.extend_to(max_n);
}

const BigCount& PartitionTable::p(Index n) const {
    if (n > max_n_) throw DomainError("PartitionTable::p: n=" + std::to_string(n) + " beyond table bound");
    return p_[n];
}

const BigCount& PartitionTable::h(Index n) const {
    if (n > max_n_) throw DomainError("PartitionTable::h: n=" + std::to_string(n) + " beyond table bound");
    return h_[n];
}

QTable::QTable(Index max_n) : max_n_(max_n) {
    cells_.resize((max_n + 1) * (max_n + 2) / 2);
    cells_[0] = BigCount(1);  // S(0, 0): the empty partition
    for (Index n = 1; n <= max_n; ++n) {
        const Index row = n * (n + 1) / 2;
        // S(n, 0) = 0 stays default
        for (Index t = 1; t <= n; ++t) {
            const Index rest = n - t;
            const BigCount& pt = cell(rest, std::min(t, rest));  // P_t(n)
            cells_[row + t] = cells_[row + t - 1] + pt;
        }
    }
}

BigCount QTable::at(Index q, Index n) const {
    if (q < 1 || q > n || n > max_n_) {
        throw DomainError("P_q(n) needs 1 <= q <= n <= " + std::to_string(max_n_) + ", got q=" +
                          std::to_string(q) + " n=" + std::to_string(n));
    }
    return cell(n, q) - cell(n, q - 1);
}

const BigCount& QTable::at_most(Index t, Index n) const {
    if (t > n || n > max_n_) throw DomainError("S(n, t) needs t <= n <= table bound");
    return cell(n, t);
}

namespace {

struct Memo {
    std::mutex mu;
    PentagonalSequence p{{BigCount(1)}};
    PentagonalSequence h{{BigCount(1), BigCount(0)}};
    std::unique_ptr<QTable> q;
};

Memo& memo() {
    static Memo m;
    return m;
}

}  // namespace

BigCount p_exact(Index n) {
    Memo& m = memo();
    std::lock_guard lock(m.mu);
    m.p.extend_to(n);
    return m.p[n];
}

BigCount h_exact_recursion(Index n) {
    Memo& m = memo();
    std::lock_guard lock(m.mu);
    m.h.extend_to(n);
    return m.h[n];
}

BigCount h_exact_difference(Index n) {
    Memo& m = memo();
    std::lock_guard lock(m.mu);
    m.p.extend_to(n);
    if (n == 0) return m.p[0];
    return m.p[n] - m.p[n - 1];
}

BigCount pq_exact(Index q, Index n) {
    if (q < 1 || q > n) {
        throw DomainError("pq_exact: needs 1 <= q <= n, got q=" + std::to_string(q) + " n=" + std::to_string(n));
    }
    Memo& m = memo();
    std::lock_guard lock(m.mu);
    if (!m.q || m.q->max_n() < n) {
        const Index grown = std::max<Index>(n, m.q ? 2 * m.q->max_n() : 64);
        m.q = std::make_unique<QTable>(grown);
    }
    return m.q->at(q, n);
}

BigCount hq_exact(Index q, Index n) {
    if (q < 1 || n < 2) {
        throw DomainError("hq_exact: needs q >= 1 and n >= 2, got q=" + std::to_string(q) + " n=" +
                          std::to_string(n));
    }
    if (q > n / 2) return BigCount(0);
    return pq_exact(q, n - q);
}

std::vector<BigCount> h_series_sum_pq(Index max_n) {
    std::vector<BigCount> h(max_n + 1);
    h[0] = BigCount(1);
    if (max_n == 0) return h;
    // s[m] = P_1(m) + ... + P_{q-1}(m); pq[m] = P_q(m) for the current q.
    std::vector<mpz_class> s(max_n + 1), pq(max_n + 1);
    s[0] = 1;  // S_0(0): the empty partition
    for (Index q = 1; 2 * q <= max_n; ++q) {
        for (Index m = 0; m < q; ++m) pq[m] = 0;
        for (Index m = q; m + q <= max_n; ++m) {
            // P_q(m) = S_{q-1}(m-q) + P_q(m-q)
            mpz_add(pq[m].get_mpz_t(), s[m - q].get_mpz_t(), pq[m - q].get_mpz_t());
            h[m + q].raw() += pq[m];
        }
        for (Index m = q; m + q <= max_n; ++m) s[m] += pq[m];
    }
    return h;
}

BigCount h_exact_sum_pq(Index n) {
    if (n < 2) throw DomainError("h_exact_sum_pq: needs n >= 2, got " + std::to_string(n));
    return h_series_sum_pq(n)[n];
}

namespace {

// Counts non-decreasing part sequences summing to `remaining` whose parts are
// all >= smallest. Each call enumerates the next part k explicitly; the final
// part is whatever remains.
std::uint64_t enumerate_partitions(Index remaining, Index smallest) {
    std::uint64_t count = 1;  // close the sequence with a single part `remaining`
    for (Index k = smallest; 2 * k <= remaining; ++k) {
        count += enumerate_partitions(remaining - k, k);
    }
    return count;
}

}  // namespace

BigCount oracle_count(Index n, Index min_part, Index bound) {
    if (min_part < 1) throw DomainError("oracle_count: min_part must be >= 1");
    if (n > bound) {
        throw DomainError("oracle_count: n=" + std::to_string(n) + " exceeds enumeration bound " +
                          std::to_string(bound));
    }
    if (n == 0) return BigCount(1);
    if (n < min_part) return BigCount(0);
    return BigCount(enumerate_partitions(n, min_part));
}

BigCount derangement_count(Index n) {
    if (n < 1) throw DomainError("derangement_count: needs n >= 1");
    if (n == 1) return BigCount(0);
    mpz_class prev2 = 0, prev1 = 1;  // D_1, D_2
    for (Index m = 3; m <= n; ++m) {
        mpz_class next = (prev1 + prev2) * static_cast<unsigned long>(m - 1);
        prev2 = std::move(prev1);
        prev1 = std::move(next);
    }
    return BigCount(prev1);
}

}  // namespace hcount

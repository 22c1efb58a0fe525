#pragma once

// Closed-form estimates of h(n) (and a few p(n) helpers) built on the
// Ingham-Meinardus asymptotic h(n) ~ pi exp(pi sqrt(2n/3)) / (12 sqrt(2 n^3)).

#include <array>
#include <optional>
#include <span>
#include <string_view>

#include "hcount/bigcount.hpp"
#include "hcount/exact.hpp"

namespace hcount {

using Real = long double;

enum class FormulaId {
    HR,
    IG,
    IG_ROUND,
    IGA,
    IGA_ROUND,
    IG1,
    IG1_ROUND,
    IG2,
    IG2_ROUND,
    IG0,
    IG0_ROUND,
    F7A,
    F7B,
    H1,
    RH0,
    RH2,
    AULUCK_PQ,
    INGHAM_GENERAL,
    IG2_LINEAR,  // I_g2 with the rejected linear C'_5(n); comparison only
};

std::string_view formula_name(FormulaId id);
std::optional<FormulaId> parse_formula(std::string_view name);
std::span<const FormulaId> all_formulas();

/// True for the floor(x + 1/2) variants and the integer-valued formulas.
bool is_rounded(FormulaId id);
/// Formula estimating p(n) rather than h(n).
bool estimates_p(FormulaId id);

struct ConstantEntry {
    std::string_view name;     // e.g. "a4"
    std::string_view formula;  // where it is used, e.g. "C4(n) in I_g1"
    Real value;
};

/// Every fitted constant, at full printed precision. Immutable.
struct ConstantsRegistry {
    // R'_h2(n): p(n) ~ exp(pi sqrt(2n/3)) / (4 sqrt3 (n + a2 sqrt(n + c2) + b2))
    Real a2 = 0.4432884566L, b2 = 0.1325096085L, c2 = 0.274078L;
    // C'_2(n) = scale * sqrt(n + shift) + offset, odd / even n
    std::array<Real, 3> c2prime_odd{0.4527092482L, 4.35278L, -0.05498719946L};
    std::array<Real, 3> c2prime_even{0.4412187317L, -2.01699L, 0.2102618735L};
    // exponent correction C1(n) = a1 / sqrt(n + c1) + b1
    Real a1 = 0.5097429624L, b1 = -1.453552800L, c1 = -3.259480684L;
    // C4(n) = a4 n^1.5 + b4 n + c4 n^0.5 + d4
    std::array<Real, 4> c4{1.000010809L, 1.862505234L, 1.169930087L, -0.7005460222L};
    // C5(n) = b5 n + c5 n^0.5 + d5
    std::array<Real, 3> c5{1.864260743L, 1.084436400L, 0.4754177757L};
    // C'_5(n) = slope n + intercept
    std::array<Real, 2> c5_linear{1.873818457L, 27.08318017L};
    // C7a(n) = k0/n^0.5 + k1/n + k2/n^1.5 + k3/n^2 + k4
    std::array<Real, 5> c7a{0.8782296151L, 0.2567016063L, -3.580442785L, 21.28305831L, 0.6879945549L};
    // C7b(n) = k0/n^0.5 + k1/n + k2/n^1.5 + k3
    std::array<Real, 4> c7b{0.8861039149L, -0.05719053203L, 0.9843423289L, 0.6879343652L};
    // C8(n) = alpha n + beta sqrt(n) + gamma, odd / even n
    std::array<Real, 3> c8_odd{1.942141112L, -0.4796781366L, 8.291226268L};
    std::array<Real, 3> c8_even{1.803056782L, 2.356539877L, -6.043824511L};

    /// Flat listing with provenance, for reporting.
    std::span<const ConstantEntry> entries() const;
};

const ConstantsRegistry& constants();

struct Estimate {
    Index n = 0;
    Real value = 0;
    BigCount rounded;  // floor(value + 1/2)
    FormulaId formula = FormulaId::IG;
};

/// floor(x + 1/2) as an exact integer; x must be finite and >= 0.
BigCount round_half_up(Real x);

// p(n) asymptotics and imported p(n) estimators
Real hr_p_asymptotic(Index n);
BigCount r_h0(Index n);  // 1 <= n <= 100, n != 2
BigCount r_h2(Index n);  // n >= 80
/// R'(n) - R'(n-1) with R'_h0 for n <= 80, R'_h2 beyond.
BigCount h1_composite(Index n);

// h(n) estimators
Real ig(Index n);
Real ingham_general(Real a, Real b, Index n);
Real iga(Index n);  // n >= 4
Real ig1(Index n);
Real ig2(Index n);
Real ig2_linear(Index n);
Real ig0(Index n);  // 3 <= n <= 100
Real f7a(Index n);
Real f7b(Index n);

Real c4_poly(Index n);
Real c5_poly(Index n);
Real c7a_poly(Index n);
Real c7b_poly(Index n);
Real c8_poly(Index n);

/// binomial(n-1, q-1) / q!, 1 <= q <= n.
Real auluck_pq(Index q, Index n);

struct FormulaParams {
    Real a = 1;  // INGHAM_GENERAL
    Real b = 2;
    Index q = 1;  // AULUCK_PQ
};

/// Evaluate any formula at n; DomainError outside its domain.
Estimate estimate(FormulaId id, Index n, const FormulaParams& params = {});

/// Inclusive domain [lo, hi] of a formula (hi = max Index when unbounded).
struct Domain {
    Index lo;
    Index hi;
};
Domain formula_domain(FormulaId id);
bool in_domain(FormulaId id, Index n);

}  // namespace hcount

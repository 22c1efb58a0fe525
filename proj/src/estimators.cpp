#include "hcount/estimators.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "hcount/errors.hpp"

namespace hcount {

namespace {

constexpr Real kPi = std::numbers::pi_v<Real>;
// pi * sqrt(2/3), the exponent scale in exp(pi sqrt(2n/3))
const Real kExpScale = kPi * std::sqrt(Real(2) / Real(3));
const Real kSqrt2 = std::sqrt(Real(2));
const Real kSqrt3 = std::sqrt(Real(3));

constexpr Index kUnbounded = std::numeric_limits<Index>::max();

Real growth(Real n) { return std::exp(kExpScale * std::sqrt(n)); }

void require(bool ok, const char* what, Index n) {
    if (!ok) throw DomainError(std::string(what) + ": n=" + std::to_string(n) + " outside domain");
}

struct NamedFormula {
    FormulaId id;
    std::string_view name;
};

constexpr std::array kNames{
    NamedFormula{FormulaId::HR, "hr"},
    NamedFormula{FormulaId::IG, "ig"},
    NamedFormula{FormulaId::IG_ROUND, "ig-round"},
    NamedFormula{FormulaId::IGA, "iga"},
    NamedFormula{FormulaId::IGA_ROUND, "iga-round"},
    NamedFormula{FormulaId::IG1, "ig1"},
    NamedFormula{FormulaId::IG1_ROUND, "ig1-round"},
    NamedFormula{FormulaId::IG2, "ig2"},
    NamedFormula{FormulaId::IG2_ROUND, "ig2-round"},
    NamedFormula{FormulaId::IG0, "ig0"},
    NamedFormula{FormulaId::IG0_ROUND, "ig0-round"},
    NamedFormula{FormulaId::F7A, "f7a"},
    NamedFormula{FormulaId::F7B, "f7b"},
    NamedFormula{FormulaId::H1, "h1"},
    NamedFormula{FormulaId::RH0, "r-h0"},
    NamedFormula{FormulaId::RH2, "r-h2"},
    NamedFormula{FormulaId::AULUCK_PQ, "auluck-pq"},
    NamedFormula{FormulaId::INGHAM_GENERAL, "ingham-general"},
    NamedFormula{FormulaId::IG2_LINEAR, "ig2-linear"},
};

constexpr std::array kAllIds = [] {
    std::array<FormulaId, kNames.size()> ids{};
    for (std::size_t i = 0; i < kNames.size(); ++i) ids[i] = kNames[i].id;
    return ids;
}();

}  // namespace

std::string_view formula_name(FormulaId id) {
    for (const auto& f : kNames) {
        if (f.id == id) return f.name;
    }
    return "?";
}

std::optional<FormulaId> parse_formula(std::string_view name) {
    for (const auto& f : kNames) {
        if (f.name == name) return f.id;
    }
    return std::nullopt;
}

std::span<const FormulaId> all_formulas() { return kAllIds; }

bool is_rounded(FormulaId id) {
    switch (id) {
        case FormulaId::IG_ROUND:
        case FormulaId::IGA_ROUND:
        case FormulaId::IG1_ROUND:
        case FormulaId::IG2_ROUND:
        case FormulaId::IG0_ROUND:
        case FormulaId::H1:
        case FormulaId::RH0:
        case FormulaId::RH2:
            return true;
        default:
            return false;
    }
}

bool estimates_p(FormulaId id) {
    return id == FormulaId::HR || id == FormulaId::RH0 || id == FormulaId::RH2;
}

std::span<const ConstantEntry> ConstantsRegistry::entries() const {
    static const std::array<ConstantEntry, 36> list{{
        {"a2", "R'_h2(n)", a2},
        {"b2", "R'_h2(n)", b2},
        {"c2", "R'_h2(n)", c2},
        {"scale_odd", "C'_2(n) odd n", c2prime_odd[0]},
        {"shift_odd", "C'_2(n) odd n", c2prime_odd[1]},
        {"offset_odd", "C'_2(n) odd n", c2prime_odd[2]},
        {"scale_even", "C'_2(n) even n", c2prime_even[0]},
        {"shift_even", "C'_2(n) even n", c2prime_even[1]},
        {"offset_even", "C'_2(n) even n", c2prime_even[2]},
        {"a1", "C1(n) exponent correction in I_ga", a1},
        {"b1", "C1(n) exponent correction in I_ga", b1},
        {"c1", "C1(n) exponent correction in I_ga", c1},
        {"a4", "C4(n) in I_g1", c4[0]},
        {"b4", "C4(n) in I_g1", c4[1]},
        {"c4", "C4(n) in I_g1", c4[2]},
        {"d4", "C4(n) in I_g1", c4[3]},
        {"b5", "C5(n) in I_g2", c5[0]},
        {"c5", "C5(n) in I_g2", c5[1]},
        {"d5", "C5(n) in I_g2", c5[2]},
        {"slope", "C'_5(n) linear alternative", c5_linear[0]},
        {"intercept", "C'_5(n) linear alternative", c5_linear[1]},
        {"k0a", "C7a(n) in F_7a", c7a[0]},
        {"k1a", "C7a(n) in F_7a", c7a[1]},
        {"k2a", "C7a(n) in F_7a", c7a[2]},
        {"k3a", "C7a(n) in F_7a", c7a[3]},
        {"k4a", "C7a(n) in F_7a", c7a[4]},
        {"k0b", "C7b(n) in F_7b", c7b[0]},
        {"k1b", "C7b(n) in F_7b", c7b[1]},
        {"k2b", "C7b(n) in F_7b", c7b[2]},
        {"k3b", "C7b(n) in F_7b", c7b[3]},
        {"alpha_odd", "C8(n) in I_g0, odd n", c8_odd[0]},
        {"beta_odd", "C8(n) in I_g0, odd n", c8_odd[1]},
        {"gamma_odd", "C8(n) in I_g0, odd n", c8_odd[2]},
        {"alpha_even", "C8(n) in I_g0, even n", c8_even[0]},
        {"beta_even", "C8(n) in I_g0, even n", c8_even[1]},
        {"gamma_even", "C8(n) in I_g0, even n", c8_even[2]},
    }};
    return list;
}

const ConstantsRegistry& constants() {
    static const ConstantsRegistry registry;
    return registry;
}

BigCount round_half_up(Real x) {
    if (!std::isfinite(x) || x < 0) throw DomainError("round_half_up: needs a finite nonnegative value");
    return BigCount::floor_of(x + Real(0.5));
}

Real hr_p_asymptotic(Index n) {
    require(n >= 1, "hr_p_asymptotic", n);
    const Real x = static_cast<Real>(n);
    return growth(x) / (4 * kSqrt3 * x);
}

namespace {

Real c2_prime(Index n) {
    const auto& k = (n % 2 == 1) ? constants().c2prime_odd : constants().c2prime_even;
    const Real arg = static_cast<Real>(n) + k[1];
    require(arg >= 0, "C'_2", n);
    return k[0] * std::sqrt(arg) + k[2];
}

}  // namespace

BigCount r_h0(Index n) {
    require(n >= 1 && n <= 100 && n != 2, "r_h0", n);
    const Real x = static_cast<Real>(n);
    return round_half_up(growth(x) / (4 * kSqrt3 * (x + c2_prime(n))));
}

BigCount r_h2(Index n) {
    require(n >= 80, "r_h2", n);
    const auto& c = constants();
    const Real x = static_cast<Real>(n);
    return round_half_up(growth(x) / (4 * kSqrt3 * (x + c.a2 * std::sqrt(x + c.c2) + c.b2)));
}

BigCount h1_composite(Index n) {
    require(n >= 2, "h1_composite", n);
    if (n <= 80) return r_h0(n) - r_h0(n - 1);
    return r_h2(n) - r_h2(n - 1);
}

Real ig(Index n) {
    require(n >= 1, "ig", n);
    const Real x = static_cast<Real>(n);
    return kPi * growth(x) / (12 * std::sqrt(2 * x * x * x));
}

Real ingham_general(Real a, Real b, Index n) {
    if (!(a > 0) || !(b > 0)) throw DomainError("ingham_general: needs a > 0 and b > 0");
    require(n >= 1, "ingham_general", n);
    const Real x = static_cast<Real>(n);
    const Real r = b / a;
    const Real log_value = std::lgamma(r) + (r - 1) * std::log(kPi) -
                           (Real(1.5) + r / 2) * std::numbers::ln2_v<Real> - (r / 2) * std::log(Real(3)) +
                           (r / 2 - Real(0.5)) * std::log(a) - ((a + b) / (2 * a)) * std::log(x) +
                           kPi * std::sqrt(2 * x / (3 * a));
    return std::exp(log_value);
}

Real iga(Index n) {
    require(n >= 4, "iga", n);
    const auto& c = constants();
    const Real x = static_cast<Real>(n);
    const Real shifted = x + c.a1 / std::sqrt(x + c.c1) + c.b1;
    return kPi * growth(shifted) / (12 * std::sqrt(2 * x * x * x));
}

Real c4_poly(Index n) {
    const auto& k = constants().c4;
    const Real x = static_cast<Real>(n);
    const Real r = std::sqrt(x);
    return k[0] * x * r + k[1] * x + k[2] * r + k[3];
}

Real c5_poly(Index n) {
    const auto& k = constants().c5;
    const Real x = static_cast<Real>(n);
    return k[0] * x + k[1] * std::sqrt(x) + k[2];
}

Real c7a_poly(Index n) {
    const auto& k = constants().c7a;
    const Real x = static_cast<Real>(n);
    const Real r = std::sqrt(x);
    return k[0] / r + k[1] / x + k[2] / (x * r) + k[3] / (x * x) + k[4];
}

Real c7b_poly(Index n) {
    const auto& k = constants().c7b;
    const Real x = static_cast<Real>(n);
    const Real r = std::sqrt(x);
    return k[0] / r + k[1] / x + k[2] / (x * r) + k[3];
}

Real c8_poly(Index n) {
    const auto& k = (n % 2 == 1) ? constants().c8_odd : constants().c8_even;
    const Real x = static_cast<Real>(n);
    return k[0] * x + k[1] * std::sqrt(x) + k[2];
}

namespace {

// pi exp(pi sqrt(2n/3)) / (12 sqrt2 * denominator)
Real modified_denominator(Index n, Real denominator) {
    return kPi * growth(static_cast<Real>(n)) / (12 * kSqrt2 * denominator);
}

Real n_to_three_halves(Index n) {
    const Real x = static_cast<Real>(n);
    return x * std::sqrt(x);
}

Real ig_minus_correction(Index n, Real c7) {
    const Real x = static_cast<Real>(n);
    return ig(n) - kPi * kPi * growth(x) / (24 * kSqrt3 * x * x * c7);
}

}  // namespace

Real ig1(Index n) {
    require(n >= 1, "ig1", n);
    return modified_denominator(n, c4_poly(n));
}

Real ig2(Index n) {
    require(n >= 1, "ig2", n);
    return modified_denominator(n, n_to_three_halves(n) + c5_poly(n));
}

Real ig2_linear(Index n) {
    require(n >= 1, "ig2_linear", n);
    const auto& k = constants().c5_linear;
    return modified_denominator(n, n_to_three_halves(n) + k[0] * static_cast<Real>(n) + k[1]);
}

Real ig0(Index n) {
    require(n >= 3 && n <= 100, "ig0", n);
    return modified_denominator(n, n_to_three_halves(n) + c8_poly(n));
}

Real f7a(Index n) {
    require(n >= 1, "f7a", n);
    return ig_minus_correction(n, c7a_poly(n));
}

Real f7b(Index n) {
    require(n >= 1, "f7b", n);
    return ig_minus_correction(n, c7b_poly(n));
}

Real auluck_pq(Index q, Index n) {
    if (q < 1 || q > n) {
        throw DomainError("auluck_pq: needs 1 <= q <= n, got q=" + std::to_string(q) + " n=" + std::to_string(n));
    }
    mpz_class binom, fact;
    mpz_bin_uiui(binom.get_mpz_t(), n - 1, q - 1);
    mpz_fac_ui(fact.get_mpz_t(), q);
    const ScaledValue num = BigCount(binom).scaled();
    const ScaledValue den = BigCount(fact).scaled();
    return std::ldexp(num.mantissa / den.mantissa, static_cast<int>(num.exponent - den.exponent));
}

Domain formula_domain(FormulaId id) {
    switch (id) {
        case FormulaId::IGA:
        case FormulaId::IGA_ROUND:
            return {4, kUnbounded};
        case FormulaId::IG0:
        case FormulaId::IG0_ROUND:
            return {3, 100};
        case FormulaId::RH0:
            return {1, 100};
        case FormulaId::RH2:
            return {80, kUnbounded};
        case FormulaId::H1:
            return {4, kUnbounded};  // R'_h0(2) is undefined, which removes n = 2, 3
        default:
            return {1, kUnbounded};
    }
}

bool in_domain(FormulaId id, Index n) {
    const Domain d = formula_domain(id);
    if (n < d.lo || n > d.hi) return false;
    if (id == FormulaId::RH0 && n == 2) return false;
    return true;
}

Estimate estimate(FormulaId id, Index n, const FormulaParams& params) {
    Estimate e;
    e.n = n;
    e.formula = id;
    auto real_valued = [&](Real v, bool round) {
        e.rounded = round_half_up(v);
        e.value = round ? e.rounded.to_long_double() : v;
    };
    auto integer_valued = [&](BigCount v) {
        e.value = v.to_long_double();
        e.rounded = std::move(v);
    };
    switch (id) {
        case FormulaId::HR: real_valued(hr_p_asymptotic(n), false); break;
        case FormulaId::IG: real_valued(ig(n), false); break;
        case FormulaId::IG_ROUND: real_valued(ig(n), true); break;
        case FormulaId::IGA: real_valued(iga(n), false); break;
        case FormulaId::IGA_ROUND: real_valued(iga(n), true); break;
        case FormulaId::IG1: real_valued(ig1(n), false); break;
        case FormulaId::IG1_ROUND: real_valued(ig1(n), true); break;
        case FormulaId::IG2: real_valued(ig2(n), false); break;
        case FormulaId::IG2_ROUND: real_valued(ig2(n), true); break;
        case FormulaId::IG0: real_valued(ig0(n), false); break;
        case FormulaId::IG0_ROUND: real_valued(ig0(n), true); break;
        case FormulaId::F7A: real_valued(f7a(n), false); break;
        case FormulaId::F7B: real_valued(f7b(n), false); break;
        case FormulaId::IG2_LINEAR: real_valued(ig2_linear(n), false); break;
        case FormulaId::H1: integer_valued(h1_composite(n)); break;
        case FormulaId::RH0: integer_valued(r_h0(n)); break;
        case FormulaId::RH2: integer_valued(r_h2(n)); break;
        case FormulaId::AULUCK_PQ: real_valued(auluck_pq(params.q, n), false); break;
        case FormulaId::INGHAM_GENERAL: real_valued(ingham_general(params.a, params.b, n), false); break;
    }
    return e;
}

}  // namespace hcount

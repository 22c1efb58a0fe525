#include "hcount/bigcount.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace hcount {

BigCount BigCount::from_decimal(std::string_view digits) {
    if (digits.empty()) throw std::invalid_argument("empty decimal string");
    for (char c : digits) {
        if (c < '0' || c > '9') throw std::invalid_argument("not a nonnegative decimal integer");
    }
    return BigCount(mpz_class(std::string(digits), 10));
}

BigCount BigCount::floor_of(long double x) {
    if (!std::isfinite(x) || x < 0.0L) throw std::domain_error("floor_of: needs a finite nonnegative value");
    x = std::floor(x);
    if (x < 1.0L) return BigCount(0);
    int exp2 = 0;
    const long double frac = std::frexp(x, &exp2);  // x = frac * 2^exp2, frac in [0.5,1)
    const auto top = static_cast<std::uint64_t>(std::ldexp(frac, 64));
    mpz_class m(static_cast<unsigned long>(top));
    const int shift = exp2 - 64;
    if (shift >= 0) {
        m <<= shift;
    } else {
        m >>= -shift;
    }
    return BigCount(std::move(m));
}

std::size_t BigCount::bit_length() const {
    if (sgn(v_) == 0) return 0;
    return mpz_sizeinbase(v_.get_mpz_t(), 2);
}

ScaledValue BigCount::scaled() const {
    if (sgn(v_) <= 0) throw std::domain_error("scaled: value must be positive");
    const std::size_t bits = bit_length();
    mpz_class top;
    long shift = 0;
    if (bits > 64) {
        shift = static_cast<long>(bits) - 64;
        mpz_tdiv_q_2exp(top.get_mpz_t(), v_.get_mpz_t(), static_cast<mp_bitcnt_t>(shift));
    } else {
        top = v_;
    }
    const long double t = static_cast<long double>(top.get_ui());
    int e = 0;
    const long double m = std::frexp(t, &e);
    return {m, static_cast<long>(e) + shift};
}

long double BigCount::to_long_double() const {
    if (sgn(v_) == 0) return 0.0L;
    const ScaledValue s = scaled();
    if (s.exponent > std::numeric_limits<long double>::max_exponent) {
        return std::numeric_limits<long double>::infinity();
    }
    return std::ldexp(s.mantissa, static_cast<int>(s.exponent));
}

long double BigCount::log() const {
    const ScaledValue s = scaled();
    return std::log(s.mantissa) + static_cast<long double>(s.exponent) * std::numbers::ln2_v<long double>;
}

}  // namespace hcount

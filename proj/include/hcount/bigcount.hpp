#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace hcount {

/// Binary scientific form of a positive integer: value = mantissa * 2^exponent,
/// with mantissa in [0.5, 1) carrying the top 64 bits.
struct ScaledValue {
    long double mantissa = 0.0L;
    long exponent = 0;
};

/// Exact nonnegative count (p(n), h(n), P_q(n), D_n, ...).
///
/// Thin value wrapper over a GMP integer. Subtraction is allowed to pass
/// through negative intermediates, but every value stored in a table or
/// returned from a counting routine is >= 0.
class BigCount {
public:
    BigCount() = default;
    BigCount(std::uint64_t v) : v_(static_cast<unsigned long>(v)) {}  // NOLINT: implicit by design of counts
    explicit BigCount(mpz_class v) : v_(std::move(v)) {}

    static BigCount from_decimal(std::string_view digits);
    /// floor(x) for finite x >= 0, exact for every representable long double.
    static BigCount floor_of(long double x);

    BigCount& operator+=(const BigCount& o) { v_ += o.v_; return *this; }
    BigCount& operator-=(const BigCount& o) { v_ -= o.v_; return *this; }
    BigCount& operator*=(const BigCount& o) { v_ *= o.v_; return *this; }

    friend BigCount operator+(BigCount a, const BigCount& b) { return a += b; }
    friend BigCount operator-(BigCount a, const BigCount& b) { return a -= b; }
    friend BigCount operator*(BigCount a, const BigCount& b) { return a *= b; }

    friend bool operator==(const BigCount& a, const BigCount& b) { return cmp(a.v_, b.v_) == 0; }
    friend std::strong_ordering operator<=>(const BigCount& a, const BigCount& b) {
        const int c = cmp(a.v_, b.v_);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

    bool is_zero() const { return sgn(v_) == 0; }
    bool is_negative() const { return sgn(v_) < 0; }
    std::size_t bit_length() const;
    std::size_t decimal_digits() const { return to_string().size(); }

    std::string to_string() const { return v_.get_str(10); }

    /// Top-64-bit mantissa and binary exponent. Requires value > 0.
    ScaledValue scaled() const;
    /// Nearest long double (relative error <= 2^-63), +inf past the range.
    long double to_long_double() const;
    /// Natural logarithm via the scaled form; accurate regardless of size.
    long double log() const;

    const mpz_class& raw() const { return v_; }
    mpz_class& raw() { return v_; }

private:
    mpz_class v_{0};
};

}  // namespace hcount

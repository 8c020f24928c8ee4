#pragma once

#include <cstdint>
#include <string>

#include <mpfr.h>

namespace etalab {

/// Non-negative magnitude with a 53-bit mantissa and an unbounded exponent.
///
/// Used for ball radii and bookkeeping bounds.  Every `*_up` operation
/// returns a value no smaller than the exact result and every `*_down`
/// operation one no larger, so chains of these stay rigorous.  The
/// value is `man * 2^exp` with `man` in [0.5, 1), or exactly zero.
class Mag {
public:
    Mag() = default;

    static Mag zero() { return {}; }
    static Mag pow2(std::int64_t e);                // exactly 2^e
    static Mag from_double_up(double x);            // |x| rounded up
    static Mag from_double_down(double x);          // |x| rounded down
    static Mag from_mpfr_up(const mpfr_t x);        // |x| rounded up
    static Mag from_mpfr_down(const mpfr_t x);      // |x| rounded down

    bool is_zero() const { return man_ == 0.0; }
    double mantissa() const { return man_; }
    std::int64_t exponent() const { return exp_; }

    /// The value as a double; saturates to 0 / +inf outside the double range.
    double to_double() const;
    /// log2 of the value, -inf for zero.
    double log2() const;
    /// Exact conversion; `x` must have at least 53 bits of precision.
    void to_mpfr(mpfr_t x) const;

    friend Mag add_up(const Mag& a, const Mag& b);
    friend Mag sub_down(const Mag& a, const Mag& b);  // max(a - b, 0)
    friend Mag mul_up(const Mag& a, const Mag& b);
    friend Mag mul_down(const Mag& a, const Mag& b);
    friend Mag div_up(const Mag& a, const Mag& b);    // b must be nonzero
    friend Mag div_down(const Mag& a, const Mag& b);
    friend Mag mul_2exp(const Mag& a, std::int64_t e);
    friend Mag sqrt_up(const Mag& a);
    friend Mag expm1_up(const Mag& a);                // e^a - 1
    friend Mag max(const Mag& a, const Mag& b);
    friend Mag min(const Mag& a, const Mag& b);

    friend int compare(const Mag& a, const Mag& b);
    friend bool operator<(const Mag& a, const Mag& b) { return compare(a, b) < 0; }
    friend bool operator<=(const Mag& a, const Mag& b) { return compare(a, b) <= 0; }
    friend bool operator>(const Mag& a, const Mag& b) { return compare(a, b) > 0; }
    friend bool operator>=(const Mag& a, const Mag& b) { return compare(a, b) >= 0; }
    friend bool operator==(const Mag& a, const Mag& b) { return compare(a, b) == 0; }

    std::string to_string(int digits = 6) const;

private:
    Mag(double man, std::int64_t exp) : man_(man), exp_(exp) {}
    static Mag normalize(double x, std::int64_t extra_exp);

    double man_ = 0.0;
    std::int64_t exp_ = 0;
};

Mag add_up(const Mag& a, const Mag& b);
Mag sub_down(const Mag& a, const Mag& b);
Mag mul_up(const Mag& a, const Mag& b);
Mag mul_down(const Mag& a, const Mag& b);
Mag div_up(const Mag& a, const Mag& b);
Mag div_down(const Mag& a, const Mag& b);
Mag mul_2exp(const Mag& a, std::int64_t e);
Mag sqrt_up(const Mag& a);
Mag expm1_up(const Mag& a);
Mag max(const Mag& a, const Mag& b);
Mag min(const Mag& a, const Mag& b);
int compare(const Mag& a, const Mag& b);

}  // namespace etalab

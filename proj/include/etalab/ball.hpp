#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>

#include <gmpxx.h>
#include <mpfr.h>

#include "etalab/error.hpp"
#include "etalab/mag.hpp"

namespace etalab {

using Prec = mpfr_prec_t;

/// Largest working precision accepted anywhere in the library.
inline constexpr Prec kMaxPrec = Prec{1} << 26;

/// RAII owner of an `mpfr_t`.
class Float {
public:
    explicit Float(Prec prec = 64);
    Float(const Float& other);
    Float(Float&& other) noexcept;
    Float& operator=(const Float& other);
    Float& operator=(Float&& other) noexcept;
    ~Float();

    mpfr_ptr get() { return v_; }
    mpfr_srcptr get() const { return v_; }
    Prec prec() const { return mpfr_get_prec(v_); }

    void swap(Float& other) noexcept { mpfr_swap(v_, other.v_); }

private:
    mpfr_t v_;
};

/// Complex midpoint-radius ball: the set {z : |z - mid| <= rad}.
///
/// A single radius bounds the Euclidean distance to the midpoint.  All
/// operations are rigorous: when the inputs contain exact values, the
/// output contains the exact result.  The result precision of a binary
/// operation is the larger of the two input precisions.
class Ball {
public:
    explicit Ball(Prec prec = 64);
    Ball(long re, Prec prec);
    /// Exactly representable double (checked).
    static Ball from_double(double re, double im, Prec prec);
    static Ball from_int(long re, long im, Prec prec);
    static Ball from_mpz(const mpz_class& re, Prec prec);
    static Ball from_mpq(const mpq_class& re, Prec prec);
    /// Decimal literals; inexact conversions widen the radius.
    static Ball from_decimal(std::string_view re, std::string_view im, Prec prec);
    static Ball from_parts(const Float& re, const Float& im, Mag rad);

    static Ball pi(Prec prec);
    static Ball ln2(Prec prec);
    /// Euler-Mascheroni constant.
    static Ball euler_gamma(Prec prec);

    Prec prec() const { return re_.prec(); }
    const Float& mid_re() const { return re_; }
    const Float& mid_im() const { return im_; }
    const Mag& rad() const { return rad_; }

    bool is_exact() const { return rad_.is_zero(); }
    bool is_real() const { return mpfr_zero_p(im_.get()) != 0; }

    /// Upper / lower bound on |z| over the ball.
    Mag abs_upper() const;
    Mag abs_lower() const;
    /// Upper bound on |mid|.
    Mag mid_abs_upper() const;

    bool contains_zero() const;
    bool excludes_zero() const { return !contains_zero(); }
    /// True if the exact complex number (given as another exact ball or a
    /// ball whose every point must lie inside) is contained.
    bool contains(const Ball& other) const;
    /// True unless the two balls are certainly disjoint.
    bool overlaps(const Ball& other) const;

    /// rad / max(|mid|, rad); zero for exact balls.
    Mag relative_accuracy() const;
    /// -log10(relative_accuracy), +inf for exact balls.
    double accuracy_digits() const;

    /// Copy rounded to `prec` bits; the rounding error joins the radius.
    Ball with_prec(Prec prec) const;
    Ball with_added_rad(const Mag& extra) const;

    Ball real_part() const;
    Ball imag_part() const;
    Ball conj() const;
    /// |z| as a real ball.
    Ball abs() const;

    Ball& operator+=(const Ball& y);
    Ball& operator-=(const Ball& y);
    Ball& operator*=(const Ball& y);
    Ball& operator/=(const Ball& y);

    friend Ball operator+(const Ball& x, const Ball& y);
    friend Ball operator-(const Ball& x, const Ball& y);
    friend Ball operator*(const Ball& x, const Ball& y);
    friend Ball operator/(const Ball& x, const Ball& y);
    friend Ball operator-(const Ball& x);

    Ball mul_si(long c) const;
    Ball div_si(long c) const;
    Ball mul_2exp(long e) const;
    Ball sqr() const { return *this * *this; }
    Ball pow_si(long n) const;

    friend Ball exp(const Ball& z);
    /// Principal branch, cut along the non-positive reals.
    friend Ball log(const Ball& z);
    /// Principal branch z^w = exp(w log z).
    friend Ball pow(const Ball& z, const Ball& w);

    /// Decimal form `mid_re mid_im rad prec`.  Re-parsing with `parse`
    /// yields a ball that contains this one.
    std::string serialize() const;
    static Ball parse(std::string_view text);

    /// Human-readable midpoint with `digits` significant digits.
    std::string mid_string(int digits) const;
    std::string to_string(int digits = 20) const;

private:
    Ball(Float re, Float im, Mag rad) : re_(std::move(re)), im_(std::move(im)), rad_(rad) {}

    Float re_;
    Float im_;
    Mag rad_;
};

std::ostream& operator<<(std::ostream& os, const Ball& b);

/// Upper bound on the error of one correctly rounded operation whose
/// result is `x`.
Mag rounding_error(mpfr_srcptr x);

/// Decimal digit count to bits.
inline Prec digits_to_bits(double digits) { return static_cast<Prec>(digits * 3.3219280948873623) + 1; }

}  // namespace etalab

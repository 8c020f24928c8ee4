#pragma once

// Plain multiprecision complex numbers without error bounds, for the
// heuristic steps (root iteration, magnitude estimates) whose output is
// certified afterwards.

#include <cmath>

#include "etalab/ball.hpp"

namespace etalab::detail {

class Cx {
public:
    explicit Cx(Prec p = 64) : re_(p), im_(p) {
        mpfr_set_zero(re_.get(), 1);
        mpfr_set_zero(im_.get(), 1);
    }
    explicit Cx(const Ball& b) : re_(b.prec()), im_(b.prec()) {
        mpfr_set(re_.get(), b.mid_re().get(), MPFR_RNDN);
        mpfr_set(im_.get(), b.mid_im().get(), MPFR_RNDN);
    }
    Cx(double re, double im, Prec p) : re_(p), im_(p) {
        mpfr_set_d(re_.get(), re, MPFR_RNDN);
        mpfr_set_d(im_.get(), im, MPFR_RNDN);
    }

    Prec prec() const { return re_.prec(); }
    mpfr_srcptr re() const { return re_.get(); }
    mpfr_srcptr im() const { return im_.get(); }
    mpfr_ptr re() { return re_.get(); }
    mpfr_ptr im() { return im_.get(); }

    /// Exact ball with this midpoint.
    Ball ball() const { return Ball::from_parts(re_, im_, Mag{}); }

    bool is_zero() const { return mpfr_zero_p(re_.get()) && mpfr_zero_p(im_.get()); }

    /// |z| as a double (may be 0 or inf outside the double range).
    double abs_d() const {
        Float t(53);
        mpfr_hypot(t.get(), re_.get(), im_.get(), MPFR_RNDN);
        return mpfr_get_d(t.get(), MPFR_RNDN);
    }
    /// log2|z|, -inf for zero; safe for any exponent.
    double log2_abs() const {
        if (is_zero()) {
            return -INFINITY;
        }
        Float t(53);
        mpfr_hypot(t.get(), re_.get(), im_.get(), MPFR_RNDN);
        long e = 0;
        const double m = mpfr_get_d_2exp(&e, t.get(), MPFR_RNDN);
        return std::log2(m) + static_cast<double>(e);
    }

    friend Cx operator+(const Cx& a, const Cx& b) {
        Cx r(a.prec());
        mpfr_add(r.re(), a.re(), b.re(), MPFR_RNDN);
        mpfr_add(r.im(), a.im(), b.im(), MPFR_RNDN);
        return r;
    }
    friend Cx operator-(const Cx& a, const Cx& b) {
        Cx r(a.prec());
        mpfr_sub(r.re(), a.re(), b.re(), MPFR_RNDN);
        mpfr_sub(r.im(), a.im(), b.im(), MPFR_RNDN);
        return r;
    }
    friend Cx operator*(const Cx& a, const Cx& b) {
        Cx r(a.prec());
        mpfr_fmms(r.re(), a.re(), b.re(), a.im(), b.im(), MPFR_RNDN);
        mpfr_fmma(r.im(), a.re(), b.im(), a.im(), b.re(), MPFR_RNDN);
        return r;
    }
    friend Cx operator/(const Cx& a, const Cx& b) {
        const Prec p = a.prec();
        Cx r(p);
        Float den(p);
        Float nr(p);
        Float ni(p);
        mpfr_fmma(den.get(), b.re(), b.re(), b.im(), b.im(), MPFR_RNDN);
        mpfr_fmma(nr.get(), a.re(), b.re(), a.im(), b.im(), MPFR_RNDN);
        mpfr_fmms(ni.get(), a.im(), b.re(), a.re(), b.im(), MPFR_RNDN);
        mpfr_div(r.re(), nr.get(), den.get(), MPFR_RNDN);
        mpfr_div(r.im(), ni.get(), den.get(), MPFR_RNDN);
        return r;
    }
    Cx& operator+=(const Cx& b) { return *this = *this + b; }
    Cx& operator-=(const Cx& b) { return *this = *this - b; }
    Cx mul_d(double s) const {
        Cx r(*this);
        mpfr_mul_d(r.re(), r.re(), s, MPFR_RNDN);
        mpfr_mul_d(r.im(), r.im(), s, MPFR_RNDN);
        return r;
    }

private:
    Float re_;
    Float im_;
};

}  // namespace etalab::detail

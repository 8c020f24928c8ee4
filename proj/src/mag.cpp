#include "etalab/mag.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

namespace etalab {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double up(double x) { return std::nextafter(x, kInf); }
double down(double x) { return x <= 0.0 ? 0.0 : std::nextafter(x, 0.0); }

}  // namespace

Mag Mag::normalize(double x, std::int64_t extra_exp) {
    if (x == 0.0) {
        return {};
    }
    int e = 0;
    const double m = std::frexp(x, &e);
    return {m, static_cast<std::int64_t>(e) + extra_exp};
}

Mag Mag::pow2(std::int64_t e) { return {0.5, e + 1}; }

Mag Mag::from_double_up(double x) { return normalize(std::fabs(x), 0); }

Mag Mag::from_double_down(double x) { return normalize(std::fabs(x), 0); }

Mag Mag::from_mpfr_up(const mpfr_t x) {
    if (mpfr_zero_p(x)) {
        return {};
    }
    long e = 0;
    // Rounding away from zero bounds |x| from above.
    const double d = std::fabs(mpfr_get_d_2exp(&e, x, MPFR_RNDA));
    return normalize(d, e);
}

Mag Mag::from_mpfr_down(const mpfr_t x) {
    if (mpfr_zero_p(x)) {
        return {};
    }
    long e = 0;
    const double d = std::fabs(mpfr_get_d_2exp(&e, x, MPFR_RNDZ));
    return normalize(d, e);
}

double Mag::to_double() const {
    if (is_zero()) {
        return 0.0;
    }
    if (exp_ > 1100) {
        return kInf;
    }
    if (exp_ < -1100) {
        return 0.0;
    }
    return std::ldexp(man_, static_cast<int>(exp_));
}

double Mag::log2() const {
    if (is_zero()) {
        return -kInf;
    }
    return std::log2(man_) + static_cast<double>(exp_);
}

void Mag::to_mpfr(mpfr_t x) const {
    mpfr_set_d(x, man_, MPFR_RNDN);
    mpfr_mul_2si(x, x, static_cast<long>(exp_), MPFR_RNDN);
}

Mag add_up(const Mag& a, const Mag& b) {
    if (a.is_zero()) {
        return b;
    }
    if (b.is_zero()) {
        return a;
    }
    const Mag& hi = a.exp_ >= b.exp_ ? a : b;
    const Mag& lo = a.exp_ >= b.exp_ ? b : a;
    const std::int64_t shift = hi.exp_ - lo.exp_;
    if (shift > 100) {
        // lo is below one ulp of hi.
        return Mag::normalize(up(hi.man_), hi.exp_);
    }
    const double s = hi.man_ + std::ldexp(lo.man_, -static_cast<int>(shift));
    return Mag::normalize(up(s), hi.exp_);
}

Mag sub_down(const Mag& a, const Mag& b) {
    if (b.is_zero()) {
        return a;
    }
    if (compare(a, b) <= 0) {
        return {};
    }
    const std::int64_t shift = a.exp_ - b.exp_;
    if (shift > 100) {
        return Mag::normalize(down(a.man_), a.exp_);
    }
    const double s = a.man_ - std::ldexp(b.man_, -static_cast<int>(shift));
    return Mag::normalize(down(s), a.exp_);
}

Mag mul_up(const Mag& a, const Mag& b) {
    if (a.is_zero() || b.is_zero()) {
        return {};
    }
    return Mag::normalize(up(a.man_ * b.man_), a.exp_ + b.exp_);
}

Mag mul_down(const Mag& a, const Mag& b) {
    if (a.is_zero() || b.is_zero()) {
        return {};
    }
    return Mag::normalize(down(a.man_ * b.man_), a.exp_ + b.exp_);
}

Mag div_up(const Mag& a, const Mag& b) {
    if (a.is_zero()) {
        return {};
    }
    return Mag::normalize(up(a.man_ / b.man_), a.exp_ - b.exp_);
}

Mag div_down(const Mag& a, const Mag& b) {
    if (a.is_zero()) {
        return {};
    }
    return Mag::normalize(down(a.man_ / b.man_), a.exp_ - b.exp_);
}

Mag mul_2exp(const Mag& a, std::int64_t e) {
    if (a.is_zero()) {
        return a;
    }
    return {a.man_, a.exp_ + e};
}

Mag sqrt_up(const Mag& a) {
    if (a.is_zero()) {
        return a;
    }
    double m = a.man_;
    std::int64_t e = a.exp_;
    if (e % 2 != 0) {
        m *= 2.0;
        e -= 1;
    }
    // sqrt is correctly rounded in IEEE arithmetic.
    return Mag::normalize(up(std::sqrt(m)), e / 2);
}

Mag expm1_up(const Mag& a) {
    if (a.is_zero()) {
        return a;
    }
    if (a.exp_ < -30) {
        // e^x - 1 <= x + x^2 for 0 <= x <= 1.
        return add_up(a, mul_up(a, a));
    }
    // x * log2(e): exponent of the result in base 2 (upper bound).
    const double x = a.to_double();
    if (x < 700.0) {
        // expm1 is accurate to a few ulps; pad the result generously.
        return Mag::from_double_up(up(std::expm1(x) * (1.0 + 0x1p-40)));
    }
    const double t = up(up(x * 1.4426950408889634) * (1.0 + 0x1p-50));
    const double ip = std::floor(t);
    const double frac = std::exp2(t - ip) * (1.0 + 0x1p-40);
    return Mag::normalize(up(frac), static_cast<std::int64_t>(ip));
}

Mag max(const Mag& a, const Mag& b) { return compare(a, b) >= 0 ? a : b; }

Mag min(const Mag& a, const Mag& b) { return compare(a, b) <= 0 ? a : b; }

int compare(const Mag& a, const Mag& b) {
    if (a.is_zero() || b.is_zero()) {
        if (a.is_zero() && b.is_zero()) {
            return 0;
        }
        return a.is_zero() ? -1 : 1;
    }
    if (a.exp_ != b.exp_) {
        return a.exp_ < b.exp_ ? -1 : 1;
    }
    if (a.man_ != b.man_) {
        return a.man_ < b.man_ ? -1 : 1;
    }
    return 0;
}

std::string Mag::to_string(int digits) const {
    if (is_zero()) {
        return "0";
    }
    mpfr_t x;
    mpfr_init2(x, 64);
    to_mpfr(x);
    char buf[64];
    mpfr_snprintf(buf, sizeof buf, "%.*RUe", digits - 1, x);
    mpfr_clear(x);
    return buf;
}

}  // namespace etalab

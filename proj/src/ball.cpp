#include "etalab/ball.hpp"

#include <cmath>
#include <cstring>
#include <ostream>
#include <sstream>
#include <vector>

namespace etalab {
namespace {

bool init_mpfr_range() {
    mpfr_set_emax(mpfr_get_emax_max());
    mpfr_set_emin(mpfr_get_emin_min());
    return true;
}

void ensure_range() {
    thread_local const bool ready = init_mpfr_range();
    (void)ready;
}

void check_prec(Prec prec) {
    if (prec < MPFR_PREC_MIN || prec > kMaxPrec) {
        throw Error(ErrorCode::PrecisionOverflow, "requested precision " + std::to_string(prec) + " bits");
    }
}

// Upper bound on the error of one correctly rounded operation whose
// result is x; nothing when the operation was exact.
Mag op_error(mpfr_srcptr x, int ternary) {
    if (ternary == 0) {
        return {};
    }
    return rounding_error(x);
}

Mag hypot_up(mpfr_srcptr re, mpfr_srcptr im) {
    Float t(64);
    mpfr_hypot(t.get(), re, im, MPFR_RNDU);
    return Mag::from_mpfr_up(t.get());
}

Mag hypot_down(mpfr_srcptr re, mpfr_srcptr im) {
    Float t(64);
    mpfr_hypot(t.get(), re, im, MPFR_RNDD);
    return Mag::from_mpfr_down(t.get());
}

// |x - y| bounds for complex midpoints.
Mag mid_distance(const Ball& x, const Ball& y, bool upper) {
    const Prec p = std::max(x.prec(), y.prec()) + 2;
    Float dr(p);
    Float di(p);
    const mpfr_rnd_t rnd = upper ? MPFR_RNDA : MPFR_RNDZ;
    mpfr_sub(dr.get(), x.mid_re().get(), y.mid_re().get(), rnd);
    mpfr_sub(di.get(), x.mid_im().get(), y.mid_im().get(), rnd);
    return upper ? hypot_up(dr.get(), di.get()) : hypot_down(dr.get(), di.get());
}

}  // namespace

Mag rounding_error(mpfr_srcptr x) {
    if (mpfr_zero_p(x)) {
        return {};
    }
    return mul_2exp(Mag::from_mpfr_up(x), 1 - static_cast<std::int64_t>(mpfr_get_prec(x)));
}

// ---------------------------------------------------------------- Float

Float::Float(Prec prec) {
    ensure_range();
    check_prec(prec);
    mpfr_init2(v_, prec);
    mpfr_set_zero(v_, 1);
}

Float::Float(const Float& other) {
    ensure_range();
    mpfr_init2(v_, other.prec());
    mpfr_set(v_, other.v_, MPFR_RNDN);
}

Float::Float(Float&& other) noexcept {
    ensure_range();
    mpfr_init2(v_, MPFR_PREC_MIN);
    mpfr_swap(v_, other.v_);
}

Float& Float::operator=(const Float& other) {
    if (this != &other) {
        mpfr_set_prec(v_, other.prec());
        mpfr_set(v_, other.v_, MPFR_RNDN);
    }
    return *this;
}

Float& Float::operator=(Float&& other) noexcept {
    mpfr_swap(v_, other.v_);
    return *this;
}

Float::~Float() { mpfr_clear(v_); }

// ---------------------------------------------------------- construction

Ball::Ball(Prec prec) : re_(prec), im_(prec) {}

Ball::Ball(long re, Prec prec) : re_(prec), im_(prec) {
    const int t = mpfr_set_si(re_.get(), re, MPFR_RNDN);
    rad_ = op_error(re_.get(), t);
}

Ball Ball::from_double(double re, double im, Prec prec) {
    Ball b(prec);
    Mag err = op_error(b.re_.get(), mpfr_set_d(b.re_.get(), re, MPFR_RNDN));
    err = add_up(err, op_error(b.im_.get(), mpfr_set_d(b.im_.get(), im, MPFR_RNDN)));
    b.rad_ = err;
    return b;
}

Ball Ball::from_int(long re, long im, Prec prec) {
    Ball b(prec);
    Mag err = op_error(b.re_.get(), mpfr_set_si(b.re_.get(), re, MPFR_RNDN));
    err = add_up(err, op_error(b.im_.get(), mpfr_set_si(b.im_.get(), im, MPFR_RNDN)));
    b.rad_ = err;
    return b;
}

Ball Ball::from_mpz(const mpz_class& re, Prec prec) {
    Ball b(prec);
    b.rad_ = op_error(b.re_.get(), mpfr_set_z(b.re_.get(), re.get_mpz_t(), MPFR_RNDN));
    return b;
}

Ball Ball::from_mpq(const mpq_class& re, Prec prec) {
    Ball b(prec);
    b.rad_ = op_error(b.re_.get(), mpfr_set_q(b.re_.get(), re.get_mpq_t(), MPFR_RNDN));
    return b;
}

Ball Ball::from_decimal(std::string_view re, std::string_view im, Prec prec) {
    Ball b(prec);
    Mag err;
    auto parse_part = [&](std::string_view text, Float& dst) {
        const std::string s(text);
        char* end = nullptr;
        const int t = mpfr_strtofr(dst.get(), s.c_str(), &end, 10, MPFR_RNDN);
        if (s.empty() || end != s.c_str() + s.size()) {
            throw Error(ErrorCode::InvalidArgument, "bad decimal literal '" + s + "'");
        }
        err = add_up(err, op_error(dst.get(), t));
    };
    parse_part(re, b.re_);
    parse_part(im, b.im_);
    b.rad_ = err;
    return b;
}

Ball Ball::from_parts(const Float& re, const Float& im, Mag rad) {
    const Prec p = std::max(re.prec(), im.prec());
    Float r(p);
    Float i(p);
    Mag err = rad;
    err = add_up(err, op_error(r.get(), mpfr_set(r.get(), re.get(), MPFR_RNDN)));
    err = add_up(err, op_error(i.get(), mpfr_set(i.get(), im.get(), MPFR_RNDN)));
    return Ball(std::move(r), std::move(i), err);
}

Ball Ball::pi(Prec prec) {
    Ball b(prec);
    b.rad_ = op_error(b.re_.get(), mpfr_const_pi(b.re_.get(), MPFR_RNDN));
    return b;
}

Ball Ball::ln2(Prec prec) {
    Ball b(prec);
    b.rad_ = op_error(b.re_.get(), mpfr_const_log2(b.re_.get(), MPFR_RNDN));
    return b;
}

Ball Ball::euler_gamma(Prec prec) {
    Ball b(prec);
    b.rad_ = op_error(b.re_.get(), mpfr_const_euler(b.re_.get(), MPFR_RNDN));
    return b;
}

// ------------------------------------------------------------- queries

Mag Ball::mid_abs_upper() const { return hypot_up(re_.get(), im_.get()); }

Mag Ball::abs_upper() const { return add_up(mid_abs_upper(), rad_); }

Mag Ball::abs_lower() const { return sub_down(hypot_down(re_.get(), im_.get()), rad_); }

bool Ball::contains_zero() const { return hypot_down(re_.get(), im_.get()) <= rad_; }

bool Ball::contains(const Ball& other) const {
    return add_up(mid_distance(*this, other, true), other.rad_) <= rad_;
}

bool Ball::overlaps(const Ball& other) const {
    return mid_distance(*this, other, false) <= add_up(rad_, other.rad_);
}

Mag Ball::relative_accuracy() const {
    if (rad_.is_zero()) {
        return {};
    }
    const Mag m = hypot_down(re_.get(), im_.get());
    return div_up(rad_, max(m, rad_));
}

double Ball::accuracy_digits() const {
    if (rad_.is_zero()) {
        return INFINITY;
    }
    return -relative_accuracy().log2() * 0.30102999566398120;
}

Ball Ball::with_prec(Prec prec) const {
    Float r(prec);
    Float i(prec);
    Mag err = rad_;
    err = add_up(err, op_error(r.get(), mpfr_set(r.get(), re_.get(), MPFR_RNDN)));
    err = add_up(err, op_error(i.get(), mpfr_set(i.get(), im_.get(), MPFR_RNDN)));
    return Ball(std::move(r), std::move(i), err);
}

Ball Ball::with_added_rad(const Mag& extra) const {
    Ball b(*this);
    b.rad_ = add_up(b.rad_, extra);
    return b;
}

Ball Ball::real_part() const {
    Ball b(*this);
    mpfr_set_zero(b.im_.get(), 1);
    return b;
}

Ball Ball::imag_part() const {
    Ball b(*this);
    mpfr_swap(b.re_.get(), b.im_.get());
    mpfr_set_zero(b.im_.get(), 1);
    return b;
}

Ball Ball::conj() const {
    Ball b(*this);
    mpfr_neg(b.im_.get(), b.im_.get(), MPFR_RNDN);
    return b;
}

Ball Ball::abs() const {
    Ball b(prec());
    const int t = mpfr_hypot(b.re_.get(), re_.get(), im_.get(), MPFR_RNDN);
    b.rad_ = add_up(rad_, op_error(b.re_.get(), t));
    return b;
}

// ---------------------------------------------------------- arithmetic

Ball operator+(const Ball& x, const Ball& y) {
    Ball z(std::max(x.prec(), y.prec()));
    const int tr = mpfr_add(z.re_.get(), x.re_.get(), y.re_.get(), MPFR_RNDN);
    const int ti = mpfr_add(z.im_.get(), x.im_.get(), y.im_.get(), MPFR_RNDN);
    Mag r = add_up(x.rad_, y.rad_);
    r = add_up(r, op_error(z.re_.get(), tr));
    z.rad_ = add_up(r, op_error(z.im_.get(), ti));
    return z;
}

Ball operator-(const Ball& x, const Ball& y) {
    Ball z(std::max(x.prec(), y.prec()));
    const int tr = mpfr_sub(z.re_.get(), x.re_.get(), y.re_.get(), MPFR_RNDN);
    const int ti = mpfr_sub(z.im_.get(), x.im_.get(), y.im_.get(), MPFR_RNDN);
    Mag r = add_up(x.rad_, y.rad_);
    r = add_up(r, op_error(z.re_.get(), tr));
    z.rad_ = add_up(r, op_error(z.im_.get(), ti));
    return z;
}

Ball operator-(const Ball& x) {
    Ball z(x);
    mpfr_neg(z.re_.get(), z.re_.get(), MPFR_RNDN);
    mpfr_neg(z.im_.get(), z.im_.get(), MPFR_RNDN);
    return z;
}

Ball operator*(const Ball& x, const Ball& y) {
    Ball z(std::max(x.prec(), y.prec()));
    mpfr_srcptr a = x.re_.get();
    mpfr_srcptr b = x.im_.get();
    mpfr_srcptr c = y.re_.get();
    mpfr_srcptr d = y.im_.get();
    int tr = 0;
    int ti = 0;
    if (mpfr_zero_p(b) && mpfr_zero_p(d)) {
        tr = mpfr_mul(z.re_.get(), a, c, MPFR_RNDN);
    } else if (mpfr_zero_p(d)) {
        tr = mpfr_mul(z.re_.get(), a, c, MPFR_RNDN);
        ti = mpfr_mul(z.im_.get(), b, c, MPFR_RNDN);
    } else if (mpfr_zero_p(b)) {
        tr = mpfr_mul(z.re_.get(), a, c, MPFR_RNDN);
        ti = mpfr_mul(z.im_.get(), a, d, MPFR_RNDN);
    } else {
        tr = mpfr_fmms(z.re_.get(), a, c, b, d, MPFR_RNDN);
        ti = mpfr_fmma(z.im_.get(), a, d, b, c, MPFR_RNDN);
    }
    Mag r = add_up(op_error(z.re_.get(), tr), op_error(z.im_.get(), ti));
    if (!x.rad_.is_zero() || !y.rad_.is_zero()) {
        const Mag mx = x.mid_abs_upper();
        const Mag my = y.mid_abs_upper();
        r = add_up(r, mul_up(mx, y.rad_));
        r = add_up(r, mul_up(my, x.rad_));
        r = add_up(r, mul_up(x.rad_, y.rad_));
    }
    z.rad_ = r;
    return z;
}

Ball operator/(const Ball& x, const Ball& y) {
    const Prec p = std::max(x.prec(), y.prec());
    const Mag my_low = hypot_down(y.re_.get(), y.im_.get());
    if (my_low <= y.rad_ || (mpfr_zero_p(y.re_.get()) && mpfr_zero_p(y.im_.get()))) {
        throw Error(ErrorCode::DivisorContainsZero, "divisor ball " + y.to_string(8));
    }
    Ball z(p);
    bool exact = true;
    if (mpfr_zero_p(y.im_.get())) {
        exact &= mpfr_div(z.re_.get(), x.re_.get(), y.re_.get(), MPFR_RNDN) == 0;
        exact &= mpfr_div(z.im_.get(), x.im_.get(), y.re_.get(), MPFR_RNDN) == 0;
    } else {
        mpfr_srcptr a = x.re_.get();
        mpfr_srcptr b = x.im_.get();
        mpfr_srcptr c = y.re_.get();
        mpfr_srcptr d = y.im_.get();
        Float den(p);
        Float nr(p);
        Float ni(p);
        exact &= mpfr_fmma(den.get(), c, c, d, d, MPFR_RNDN) == 0;
        exact &= mpfr_fmma(nr.get(), a, c, b, d, MPFR_RNDN) == 0;
        exact &= mpfr_fmms(ni.get(), b, c, a, d, MPFR_RNDN) == 0;
        exact &= mpfr_div(z.re_.get(), nr.get(), den.get(), MPFR_RNDN) == 0;
        exact &= mpfr_div(z.im_.get(), ni.get(), den.get(), MPFR_RNDN) == 0;
    }
    Mag r;
    if (!exact) {
        // At most three correctly rounded steps per component.
        const Mag sum = add_up(Mag::from_mpfr_up(z.re_.get()), Mag::from_mpfr_up(z.im_.get()));
        r = mul_2exp(sum, 4 - static_cast<std::int64_t>(p));
    }
    if (!x.rad_.is_zero() || !y.rad_.is_zero()) {
        const Mag my_up = y.mid_abs_upper();
        const Mag mx_up = x.mid_abs_upper();
        const Mag num = add_up(mul_up(x.rad_, my_up), mul_up(mx_up, y.rad_));
        const Mag den = mul_down(my_low, sub_down(my_low, y.rad_));
        r = add_up(r, div_up(num, den));
    }
    z.rad_ = r;
    return z;
}

Ball& Ball::operator+=(const Ball& y) { return *this = *this + y; }
Ball& Ball::operator-=(const Ball& y) { return *this = *this - y; }
Ball& Ball::operator*=(const Ball& y) { return *this = *this * y; }
Ball& Ball::operator/=(const Ball& y) { return *this = *this / y; }

Ball Ball::mul_si(long c) const {
    Ball z(prec());
    const int tr = mpfr_mul_si(z.re_.get(), re_.get(), c, MPFR_RNDN);
    const int ti = mpfr_mul_si(z.im_.get(), im_.get(), c, MPFR_RNDN);
    Mag r = mul_up(rad_, Mag::from_double_up(static_cast<double>(c)));
    r = add_up(r, op_error(z.re_.get(), tr));
    z.rad_ = add_up(r, op_error(z.im_.get(), ti));
    return z;
}

Ball Ball::div_si(long c) const {
    if (c == 0) {
        throw Error(ErrorCode::DivisorContainsZero, "division by integer 0");
    }
    Ball z(prec());
    const int tr = mpfr_div_si(z.re_.get(), re_.get(), c, MPFR_RNDN);
    const int ti = mpfr_div_si(z.im_.get(), im_.get(), c, MPFR_RNDN);
    Mag r = div_up(rad_, Mag::from_double_down(static_cast<double>(c)));
    r = add_up(r, op_error(z.re_.get(), tr));
    z.rad_ = add_up(r, op_error(z.im_.get(), ti));
    return z;
}

Ball Ball::mul_2exp(long e) const {
    Ball z(*this);
    mpfr_mul_2si(z.re_.get(), z.re_.get(), e, MPFR_RNDN);
    mpfr_mul_2si(z.im_.get(), z.im_.get(), e, MPFR_RNDN);
    z.rad_ = etalab::mul_2exp(z.rad_, e);
    return z;
}

Ball Ball::pow_si(long n) const {
    if (n < 0) {
        return Ball(1, prec()) / pow_si(-n);
    }
    Ball result(1, prec());
    Ball base(*this);
    auto e = static_cast<unsigned long>(n);
    while (e != 0) {
        if (e & 1UL) {
            result *= base;
        }
        e >>= 1;
        if (e != 0) {
            base = base.sqr();
        }
    }
    return result;
}

// ---------------------------------------------------- transcendentals

Ball exp(const Ball& z) {
    const Prec p = z.prec();
    if (z.is_exact() && mpfr_zero_p(z.re_.get()) && mpfr_zero_p(z.im_.get())) {
        return Ball(1, p);
    }
    Ball w(p);
    Float e(p);
    mpfr_exp(e.get(), z.re_.get(), MPFR_RNDN);
    Mag err;
    if (mpfr_zero_p(z.im_.get())) {
        mpfr_set(w.re_.get(), e.get(), MPFR_RNDN);
        err = rounding_error(w.re_.get());
    } else {
        Float s(p);
        Float c(p);
        mpfr_sin_cos(s.get(), c.get(), z.im_.get(), MPFR_RNDN);
        mpfr_mul(w.re_.get(), e.get(), c.get(), MPFR_RNDN);
        mpfr_mul(w.im_.get(), e.get(), s.get(), MPFR_RNDN);
        const Mag sum = add_up(Mag::from_mpfr_up(w.re_.get()), Mag::from_mpfr_up(w.im_.get()));
        err = mul_2exp(sum, 3 - static_cast<std::int64_t>(p));
    }
    if (!z.rad_.is_zero()) {
        Mag ez = Mag::from_mpfr_up(e.get());
        ez = add_up(ez, mul_2exp(ez, 2 - static_cast<std::int64_t>(p)));
        err = add_up(err, mul_up(ez, expm1_up(z.rad_)));
    }
    w.rad_ = err;
    return w;
}

Ball log(const Ball& z) {
    const Prec p = z.prec();
    mpfr_srcptr re = z.re_.get();
    mpfr_srcptr im = z.im_.get();
    // Distance from the midpoint to the cut (-inf, 0].
    const Mag dist = mpfr_sgn(re) <= 0 ? Mag::from_mpfr_down(im) : hypot_down(re, im);
    if (dist <= z.rad_) {
        throw Error(ErrorCode::LogOnBranchCut, "log argument " + z.to_string(8));
    }
    Ball w(p);
    Mag err;
    if (mpfr_zero_p(im)) {
        const int t = mpfr_log(w.re_.get(), re, MPFR_RNDN);
        err = op_error(w.re_.get(), t);
    } else {
        Float h(p + 16);
        mpfr_hypot(h.get(), re, im, MPFR_RNDN);
        mpfr_log(w.re_.get(), h.get(), MPFR_RNDN);
        mpfr_atan2(w.im_.get(), im, re, MPFR_RNDN);
        // ln|z|: hypot error 2^-(p+16) relative plus one rounding.
        err = add_up(rounding_error(w.re_.get()), Mag::pow2(-p - 14));
        err = add_up(err, rounding_error(w.im_.get()));
    }
    if (!z.rad_.is_zero()) {
        const Mag m = hypot_down(re, im);
        err = add_up(err, div_up(z.rad_, sub_down(m, z.rad_)));
    }
    w.rad_ = err;
    return w;
}

Ball pow(const Ball& z, const Ball& w) { return exp(w * log(z)); }

// -------------------------------------------------------------- text io

namespace {

// Decimal scientific string with `digits` significant digits.
std::string decimal(mpfr_srcptr x, int digits) {
    if (mpfr_zero_p(x)) {
        return "0";
    }
    mpfr_exp_t e = 0;
    char* s = mpfr_get_str(nullptr, &e, 10, static_cast<size_t>(digits), x, MPFR_RNDN);
    std::string m(s);
    mpfr_free_str(s);
    std::string sign;
    if (!m.empty() && m[0] == '-') {
        sign = "-";
        m.erase(0, 1);
    }
    std::ostringstream out;
    out << sign << m[0];
    if (m.size() > 1) {
        out << '.' << m.substr(1);
    }
    out << 'e' << (static_cast<long>(e) - 1);
    return out.str();
}

}  // namespace

std::string Ball::serialize() const {
    const Prec p = prec();
    const int digits = static_cast<int>(std::ceil(static_cast<double>(p) * 0.30102999566398120)) + 2;
    // Rounding to `digits` decimals moves each part by at most
    // |x| * 10^(1-digits) <= |x| * 2^-(3(digits-1)).
    const auto shift = static_cast<std::int64_t>(3 * (digits - 1));
    Mag r = rad_;
    r = add_up(r, etalab::mul_2exp(Mag::from_mpfr_up(re_.get()), -shift));
    r = add_up(r, etalab::mul_2exp(Mag::from_mpfr_up(im_.get()), -shift));
    std::ostringstream out;
    out << decimal(re_.get(), digits) << ' ' << decimal(im_.get(), digits) << ' ';
    if (r.is_zero()) {
        out << '0';
    } else {
        out << r.to_string(6);
    }
    out << ' ' << p;
    return out.str();
}

Ball Ball::parse(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string re;
    std::string im;
    std::string rad;
    long p = 0;
    if (!(in >> re >> im >> rad >> p) || p <= 0) {
        throw Error(ErrorCode::InvalidArgument, "malformed ball '" + std::string(text) + "'");
    }
    Ball b = from_decimal(re, im, static_cast<Prec>(p));
    Float r(64);
    char* end = nullptr;
    mpfr_strtofr(r.get(), rad.c_str(), &end, 10, MPFR_RNDU);
    if (end != rad.c_str() + rad.size() || mpfr_sgn(r.get()) < 0) {
        throw Error(ErrorCode::InvalidArgument, "malformed radius '" + rad + "'");
    }
    b.rad_ = add_up(b.rad_, Mag::from_mpfr_up(r.get()));
    return b;
}

std::string Ball::mid_string(int digits) const {
    std::string s = decimal(re_.get(), digits);
    if (!mpfr_zero_p(im_.get())) {
        std::string i = decimal(im_.get(), digits);
        if (i[0] != '-') {
            s += '+';
        }
        s += i + 'i';
    }
    return s;
}

std::string Ball::to_string(int digits) const {
    std::string s = mid_string(digits);
    if (!rad_.is_zero()) {
        s += " +/- " + rad_.to_string(3);
    }
    return s;
}

std::ostream& operator<<(std::ostream& os, const Ball& b) { return os << b.to_string(); }

}  // namespace etalab

#include "etalab/etaeval.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "etalab/bernoulli.hpp"

namespace etalab {

std::string_view to_string(Function f) { return f == Function::eta ? "eta" : "zeta"; }

std::string_view to_string(Method m) {
    switch (m) {
    case Method::euler_maclaurin: return "euler_maclaurin";
    case Method::direct_accelerated: return "direct_accelerated";
    case Method::via_relation: return "via_relation";
    }
    return "unknown";
}

Function parse_function(std::string_view s) {
    if (s == "eta") {
        return Function::eta;
    }
    if (s == "zeta") {
        return Function::zeta;
    }
    throw Error(ErrorCode::InvalidArgument, "unknown function '" + std::string(s) + "'");
}

Method parse_method(std::string_view s) {
    for (Method m : {Method::euler_maclaurin, Method::direct_accelerated, Method::via_relation}) {
        if (s == to_string(m)) {
            return m;
        }
    }
    throw Error(ErrorCode::InvalidArgument, "unknown method '" + std::string(s) + "'");
}

Ball TruncatedSeries::derivative(int k) const {
    if (k < 0 || k > order()) {
        throw Error(ErrorCode::MissingDerivative, "series order " + std::to_string(order()) + " < " + std::to_string(k));
    }
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(k));
    return coeffs[k] * Ball::from_mpz(f, coeffs[k].prec());
}

std::vector<Ball> TruncatedSeries::derivatives() const {
    std::vector<Ball> out;
    out.reserve(coeffs.size());
    for (int k = 0; k <= order(); ++k) {
        out.push_back(derivative(k));
    }
    return out;
}

DerivVector::DerivVector(Ball point, std::vector<Ball> values, Function function, Method method, int digits)
    : point_(std::move(point)), values_(std::move(values)), function_(function), method_(method), digits_(digits) {
    if (values_.empty()) {
        throw Error(ErrorCode::InvalidArgument, "derivative vector needs at least one value");
    }
    if (digits_ < 0) {
        throw Error(ErrorCode::InvalidArgument, "negative digit count");
    }
    for (std::size_t k = 0; k < values_.size(); ++k) {
        if (values_[k].accuracy_digits() < digits_) {
            throw Error(ErrorCode::InvalidArgument, "order " + std::to_string(k) + " certified to " +
                                                        std::to_string(values_[k].accuracy_digits()) +
                                                        " digits, below the stated " + std::to_string(digits_));
        }
    }
}

const Ball& DerivVector::at(int k) const {
    if (k < 0 || k > order()) {
        throw Error(ErrorCode::MissingDerivative,
                    "derivative of order " + std::to_string(k) + " requested, " + std::to_string(order()) + " available");
    }
    return values_[k];
}

double DerivVector::min_accuracy_digits() const {
    double d = INFINITY;
    for (const Ball& v : values_) {
        d = std::min(d, v.accuracy_digits());
    }
    return d;
}

namespace {

using Series = std::vector<Ball>;

void check_order(int K) {
    if (K < 0 || K > kMaxOrder) {
        throw Error(ErrorCode::InvalidArgument, "derivative order must lie in [0, " + std::to_string(kMaxOrder) + "]");
    }
}

// Relative truncation tolerance, in bits, used at working precision p.
long tol_bits(Prec p) { return std::max<long>(16, static_cast<long>(p) - 48); }

Series series_mul(const Series& a, const Series& b) {
    const std::size_t n = a.size();
    Series r(n, Ball(a[0].prec()));
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = 0; i <= k; ++i) {
            r[k] += a[i] * b[k - i];
        }
    }
    return r;
}

// v(x) * (c + x), truncated.
Series mul_linear(const Series& v, const Ball& c) {
    Series r(v.size(), Ball(v[0].prec()));
    for (std::size_t k = 0; k < v.size(); ++k) {
        r[k] = c * v[k];
        if (k > 0) {
            r[k] += v[k - 1];
        }
    }
    return r;
}

// exp(L x) = sum L^k/k! x^k for a real ball L.
Series exp_linear(const Ball& L, int K) {
    Series r;
    r.reserve(K + 1);
    r.emplace_back(1, L.prec());
    for (int k = 1; k <= K; ++k) {
        r.push_back((r.back() * L).div_si(k));
    }
    return r;
}

double mag_log2(const Ball& b) {
    const Mag m = b.mid_abs_upper();
    return m.is_zero() ? -INFINITY : m.log2();
}

// ------------------------------------------------------ Euler-Maclaurin

struct EmPlan {
    long M;
    long B;
};

// 64-bit scratch value with explicit rounding.
struct R64 {
    Float v{64};
    mpfr_ptr p() { return v.get(); }
};

// Upper bounds on the x^k coefficients of the remainder after B
// Bernoulli corrections at cutoff M.  Empty when the bound does not apply.
std::vector<Mag> em_remainder(const Ball& a, int K, long M, long B) {
    R64 sigma, beta1, lnM, z, e, t, u;
    mpfr_set(sigma.p(), a.mid_re().get(), MPFR_RNDD);
    {
        R64 r;
        a.rad().to_mpfr(r.p());
        mpfr_sub(sigma.p(), sigma.p(), r.p(), MPFR_RNDD);
    }
    mpfr_add_si(beta1.p(), sigma.p(), 2 * B - 1, MPFR_RNDD);
    if (mpfr_sgn(beta1.p()) <= 0) {
        return {};
    }
    mpfr_set_si(lnM.p(), M, MPFR_RNDD);
    mpfr_log(lnM.p(), lnM.p(), MPFR_RNDD);
    mpfr_mul(z.p(), beta1.p(), lnM.p(), MPFR_RNDD);
    if (mpfr_cmp_si(z.p(), K + 1) <= 0) {
        return {};
    }
    mpfr_neg(e.p(), z.p(), MPFR_RNDU);
    mpfr_exp(e.p(), e.p(), MPFR_RNDU);

    // G_j >= int_M^inf t^(-sigma-2B) (ln t)^j / j! dt, via the incomplete gamma bound.
    std::vector<Mag> G(K + 1);
    R64 pw;
    mpfr_set_ui(pw.p(), 1, MPFR_RNDU);
    for (int j = 0; j <= K; ++j) {
        if (j > 0) {
            mpfr_mul(pw.p(), pw.p(), z.p(), MPFR_RNDU);
            mpfr_div(pw.p(), pw.p(), beta1.p(), MPFR_RNDU);
            mpfr_div_ui(pw.p(), pw.p(), static_cast<unsigned long>(j), MPFR_RNDU);
        }
        // 1 - j/z, rounded down
        mpfr_ui_div(t.p(), static_cast<unsigned long>(j), z.p(), MPFR_RNDU);
        mpfr_ui_sub(t.p(), 1, t.p(), MPFR_RNDD);
        mpfr_mul(u.p(), t.p(), beta1.p(), MPFR_RNDD);
        mpfr_mul(t.p(), e.p(), pw.p(), MPFR_RNDU);
        mpfr_div(t.p(), t.p(), u.p(), MPFR_RNDU);
        G[j] = Mag::from_mpfr_up(t.p());
    }

    // Majorant of the Pochhammer symbol (a + x)_(2B).
    std::vector<Mag> P(K + 1);
    P[0] = Mag::pow2(0);
    for (long r = 0; r < 2 * B; ++r) {
        const Ball ar = a + Ball(r, a.prec());
        const Mag c = ar.abs_upper();
        for (int i = K; i >= 0; --i) {
            Mag next = mul_up(P[i], c);
            if (i > 0) {
                next = add_up(next, P[i - 1]);
            }
            P[i] = next;
        }
    }

    const auto table = bernoulli_even(static_cast<std::size_t>(B));
    mpz_class fac;
    mpz_fac_ui(fac.get_mpz_t(), static_cast<unsigned long>(2 * B));
    mpq_class q = abs((*table)[B - 1]) / fac;
    mpfr_set_q(t.p(), q.get_mpq_t(), MPFR_RNDU);
    const Mag lead = Mag::from_mpfr_up(t.p());

    std::vector<Mag> R(K + 1);
    for (int k = 0; k <= K; ++k) {
        Mag s;
        for (int i = 0; i <= k; ++i) {
            s = add_up(s, mul_up(P[i], G[k - i]));
        }
        R[k] = mul_up(lead, s);
    }
    return R;
}

EmPlan initial_plan(const Ball& a, int K, long bits) {
    const double im = std::fabs(mpfr_get_d(a.mid_im().get(), MPFR_RNDN));
    const double absa = a.mid_abs_upper().to_double();
    EmPlan plan;
    plan.B = static_cast<long>(std::ceil(static_cast<double>(bits) / 6.0 + K / 4.0 + im / 2.0 + 5.0));
    plan.M = std::max<long>(plan.B, static_cast<long>(std::ceil(absa + 5.0)));
    return plan;
}

EmPlan choose_plan(const Ball& a, int K, long bits, const std::vector<Mag>& tol) {
    EmPlan plan = initial_plan(a, K, bits);
    for (int iter = 0; iter < 80; ++iter) {
        const auto R = em_remainder(a, K, plan.M, plan.B);
        bool ok = !R.empty();
        for (int k = 0; ok && k <= K; ++k) {
            ok = R[k] <= tol[k];
        }
        if (ok) {
            return plan;
        }
        plan.B = static_cast<long>(std::ceil(plan.B * 1.3));
        plan.M = static_cast<long>(std::ceil(plan.M * 1.3));
    }
    throw Error(ErrorCode::NonConvergence, "no Euler-Maclaurin cutoff meets the tolerance");
}

// Main part of the expansion (everything except the remainder).
Series em_sum(const Ball& a0, int K, const EmPlan& plan, Prec p) {
    const Ball a = a0.with_prec(p);
    Series acc(K + 1, Ball(p));
    acc[0] = Ball(1, p);
    for (long n = 2; n < plan.M; ++n) {
        const Ball L = -log(Ball(n, p));
        Ball t = exp(a * L);
        acc[0] += t;
        for (int k = 1; k <= K; ++k) {
            t = (t * L).div_si(k);
            acc[k] += t;
        }
    }
    const Ball Mb(plan.M, p);
    const Ball lnM = log(Mb);
    const Series EM = exp_linear(-lnM, K);
    const Ball Ma = exp(-(a * lnM));  // M^-a

    // M^(1-s)/(s-1)
    Series inv(K + 1, Ball(p));
    const Ball am1 = a - Ball(1, p);
    const Ball r = Ball(1, p) / am1;
    inv[0] = r;
    for (int k = 1; k <= K; ++k) {
        inv[k] = -(inv[k - 1] * r);
    }
    Series base(K + 1, Ball(p));
    for (int k = 0; k <= K; ++k) {
        base[k] = Ma * EM[k];
    }
    const Series pole = series_mul(base, inv);
    for (int k = 0; k <= K; ++k) {
        acc[k] += pole[k].mul_si(plan.M);
        acc[k] += base[k].mul_2exp(-1);
    }

    // Bernoulli corrections: T_j = (s)_(2j-1) M^(-s-2j+1).
    const auto table = bernoulli_even(static_cast<std::size_t>(plan.B));
    Series T = mul_linear(base, a);
    for (auto& c : T) {
        c = c.div_si(plan.M);
    }
    mpz_class fac = 2;
    const long M2 = plan.M * plan.M;
    for (long j = 1; j <= plan.B; ++j) {
        const Ball coef = Ball::from_mpq(mpq_class((*table)[j - 1] / fac), p);
        for (int k = 0; k <= K; ++k) {
            acc[k] += coef * T[k];
        }
        if (j == plan.B) {
            break;
        }
        T = mul_linear(mul_linear(T, a + Ball(2 * j - 1, p)), a + Ball(2 * j, p));
        for (auto& c : T) {
            c = c.div_si(M2);
        }
        fac *= static_cast<unsigned long>((2 * j + 1) * (2 * j + 2));
    }
    return acc;
}

// Rough coefficient magnitudes, used only to pick cutoffs and guard bits.
std::vector<double> estimate_log2_coeffs(const Ball& a, int K, Prec prec) {
    const EmPlan plan = initial_plan(a, K, 64);
    std::vector<double> out(K + 1, -INFINITY);
    for (Prec p = 128;; p *= 2) {
        p = std::min(p, prec);
        const Series s = em_sum(a, K, plan, p);
        bool good = true;
        for (int k = 0; k <= K; ++k) {
            out[k] = mag_log2(s[k]);
            good = good && s[k].accuracy_digits() >= 2;
        }
        if (good || p >= prec) {
            return out;
        }
    }
}

TruncatedSeries em_series_impl(const Ball& a, int K, Prec prec) {
    if (a.overlaps(Ball(1, a.prec()))) {
        throw Error(ErrorCode::PoleProximity, "argument ball " + a.to_string(10) + " touches the pole at 1");
    }
    const long bits = tol_bits(prec);
    const auto est = estimate_log2_coeffs(a, K, prec);
    double top = -INFINITY;
    for (double e : est) {
        top = std::max(top, e);
    }
    std::vector<Mag> tol(K + 1);
    for (int k = 0; k <= K; ++k) {
        double e = est[k];
        if (!std::isfinite(e)) {
            e = top - static_cast<double>(bits);
        }
        tol[k] = Mag::pow2(static_cast<std::int64_t>(std::floor(e)) - bits - 1);
    }
    const EmPlan plan = choose_plan(a, K, bits, tol);

    // Guard against cancellation in the partial sum.
    const double lnM = std::log(static_cast<double>(plan.M));
    const double sigma = mpfr_get_d(a.mid_re().get(), MPFR_RNDN);
    double guard = 0;
    double lf = 0;  // log2 k!
    for (int k = 0; k <= K; ++k) {
        if (k > 0) {
            lf += std::log2(static_cast<double>(k));
        }
        const double terms = std::log2(static_cast<double>(plan.M)) * (1.0 + std::max(0.0, -sigma) + 1.0) +
                             k * std::log2(std::max(lnM, 1.0)) - lf;
        if (std::isfinite(est[k])) {
            guard = std::max(guard, terms - est[k]);
        }
    }
    const Prec work = prec + std::min<Prec>(static_cast<Prec>(std::ceil(guard)) + 16, 4 * prec);

    Series s = em_sum(a, K, plan, work);
    const auto R = em_remainder(a, K, plan.M, plan.B);
    TruncatedSeries out{a, {}};
    out.coeffs.reserve(K + 1);
    for (int k = 0; k <= K; ++k) {
        out.coeffs.push_back(s[k].with_added_rad(R[k]).with_prec(prec));
    }
    return out;
}

// ------------------------------------------------------- direct method

struct CvzWeights {
    mpz_class d;                  // T_n(3)
    std::vector<mpq_class> w;     // c_k / d
};

std::shared_ptr<const CvzWeights> cvz_weights(long n) {
    static std::mutex mu;
    static std::map<long, std::shared_ptr<const CvzWeights>> cache;
    {
        std::lock_guard lock(mu);
        auto it = cache.find(n);
        if (it != cache.end()) {
            return it->second;
        }
    }
    auto out = std::make_shared<CvzWeights>();
    mpz_class t0 = 1;
    mpz_class t1 = 3;
    for (long k = 1; k < n; ++k) {
        mpz_class t2 = 6 * t1 - t0;
        t0 = t1;
        t1 = t2;
    }
    out->d = n == 0 ? t0 : t1;
    mpq_class b = -1;
    mpq_class c = -mpq_class(out->d);
    out->w.reserve(n);
    for (long k = 0; k < n; ++k) {
        c = b - c;
        out->w.push_back(c / out->d);
        b = b * mpq_class(2 * (k + n) * (k - n), (2 * k + 1) * (k + 1));
        b.canonicalize();
    }
    std::lock_guard lock(mu);
    cache.emplace(n, out);
    return out;
}

// sqrt(prod_{m>=0} (1 + t^2/(sigma+m)^2)) >= Gamma(sigma)/|Gamma(sigma+it)|, rounded up.
void gamma_ratio_bound(mpfr_ptr out, mpfr_srcptr sigma, mpfr_srcptr t) {
    R64 t2, den, q, sum;
    mpfr_sqr(t2.p(), t, MPFR_RNDU);
    const double tt = mpfr_get_d(t2.p(), MPFR_RNDU);
    const long n0 = static_cast<long>(std::min(1e6, std::ceil(tt))) + 2;
    mpfr_set_ui(sum.p(), 0, MPFR_RNDU);
    for (long m = 0; m < n0; ++m) {
        mpfr_add_si(den.p(), sigma, m, MPFR_RNDD);
        mpfr_sqr(den.p(), den.p(), MPFR_RNDD);
        mpfr_div(q.p(), t2.p(), den.p(), MPFR_RNDU);
        mpfr_log1p(q.p(), q.p(), MPFR_RNDU);
        mpfr_add(sum.p(), sum.p(), q.p(), MPFR_RNDU);
    }
    // tail: sum_{m>=n0} t^2/(sigma+m)^2 <= t^2/(sigma+n0-1)
    mpfr_add_si(den.p(), sigma, n0 - 1, MPFR_RNDD);
    mpfr_div(q.p(), t2.p(), den.p(), MPFR_RNDU);
    mpfr_add(sum.p(), sum.p(), q.p(), MPFR_RNDU);
    mpfr_div_2ui(sum.p(), sum.p(), 1, MPFR_RNDU);
    mpfr_exp(out, sum.p(), MPFR_RNDU);
}

// Bounds on |E^(j)(a)| * T_n(3) for the accelerated sum's error E.
std::vector<Mag> direct_prefactors(const Ball& a, int K) {
    R64 rad, sig, th, rho, smin, tmax, g, f;
    a.rad().to_mpfr(rad.p());
    mpfr_sub(sig.p(), a.mid_re().get(), rad.p(), MPFR_RNDD);
    mpfr_abs(th.p(), a.mid_im().get(), MPFR_RNDU);
    mpfr_add(th.p(), th.p(), rad.p(), MPFR_RNDU);
    std::vector<Mag> out(K + 1);
    for (int j = 0; j <= K; ++j) {
        if (j == 0) {
            gamma_ratio_bound(g.p(), sig.p(), th.p());
            out[0] = Mag::from_mpfr_up(g.p());
            continue;
        }
        // Cauchy estimate on the circle of radius rho about a.
        mpfr_mul_ui(rho.p(), sig.p(), static_cast<unsigned long>(j), MPFR_RNDD);
        mpfr_div_ui(rho.p(), rho.p(), static_cast<unsigned long>(j + 1), MPFR_RNDD);
        mpfr_sub(smin.p(), sig.p(), rho.p(), MPFR_RNDD);
        mpfr_add(tmax.p(), th.p(), rho.p(), MPFR_RNDU);
        gamma_ratio_bound(g.p(), smin.p(), tmax.p());
        mpfr_fac_ui(f.p(), static_cast<unsigned long>(j), MPFR_RNDU);
        mpfr_mul(g.p(), g.p(), f.p(), MPFR_RNDU);
        mpfr_pow_ui(f.p(), rho.p(), static_cast<unsigned long>(j), MPFR_RNDD);
        mpfr_div(g.p(), g.p(), f.p(), MPFR_RNDU);
        out[j] = Mag::from_mpfr_up(g.p());
    }
    return out;
}

Series cvz_sum(const Ball& a0, int K, long n, Prec p) {
    const Ball a = a0.with_prec(p);
    const auto W = cvz_weights(n);
    Series s(K + 1, Ball(p));
    for (long k = 0; k < n; ++k) {
        const Ball L = -log(Ball(k + 1, p));
        Ball t = exp(a * L) * Ball::from_mpq(W->w[k], p);
        s[0] += t;
        for (int j = 1; j <= K; ++j) {
            t *= L;
            s[j] += t;
        }
    }
    return s;
}

Mag mpz_lower(const mpz_class& z) {
    R64 t;
    mpfr_set_z(t.p(), z.get_mpz_t(), MPFR_RNDD);
    return Mag::from_mpfr_down(t.p());
}

constexpr double kLog2CvzRate = 2.5431066063272239;  // log2(3 + sqrt 8)

}  // namespace

namespace kernel {

TruncatedSeries zeta_series_em(const Ball& a, int K, Prec prec) {
    check_order(K);
    return em_series_impl(a, K, prec);
}

std::vector<Ball> eta_factor_series(const Ball& a0, int K, Prec p) {
    const Ball a = a0.with_prec(p);
    const Ball ln2 = Ball::ln2(p);
    const Ball two = exp((Ball(1, p) - a) * ln2);  // 2^(1-a)
    Series f = exp_linear(-ln2, K);
    for (auto& c : f) {
        c = -(two * c);
    }
    f[0] += Ball(1, p);
    return f;
}

std::vector<Ball> eta_em(const Ball& a, int K, Prec prec) {
    check_order(K);
    const TruncatedSeries z = em_series_impl(a, K, prec + 8);
    const Series f = eta_factor_series(a, K, prec + 8);
    const Series e = series_mul(f, z.coeffs);
    TruncatedSeries es{a, e};
    Series out = es.derivatives();
    for (auto& v : out) {
        v = v.with_prec(prec);
    }
    return out;
}

std::vector<Ball> eta_direct(const Ball& a, int K, Prec prec) {
    check_order(K);
    {
        R64 s, r;
        a.rad().to_mpfr(r.p());
        mpfr_sub(s.p(), a.mid_re().get(), r.p(), MPFR_RNDD);
        if (mpfr_sgn(s.p()) <= 0) {
            throw Error(ErrorCode::DomainError, "direct method needs Re(a) > 0, got " + a.to_string(10));
        }
    }
    const long bits = tol_bits(prec);
    const auto pref = direct_prefactors(a, K);
    double pmax = 0;
    for (const Mag& m : pref) {
        pmax = std::max(pmax, m.log2());
    }
    long n = static_cast<long>(std::ceil((static_cast<double>(bits) + pmax + 8.0) / kLog2CvzRate)) + 2;
    Prec work = prec + 16;
    for (int pass = 0;; ++pass) {
        Series s = cvz_sum(a, K, n, work);
        const auto W = cvz_weights(n);
        const Mag dn = mpz_lower(W->d);
        double deficit = 0;
        double guard = 0;
        const double lnn = std::log(static_cast<double>(n));
        for (int j = 0; j <= K; ++j) {
            const double v = mag_log2(s[j]);
            const double need = div_up(pref[j], dn).log2() - (v - static_cast<double>(bits));
            deficit = std::max(deficit, need);
            if (std::isfinite(v)) {
                guard = std::max(guard, std::log2(static_cast<double>(n)) + j * std::log2(std::max(lnn, 1.0)) - v);
            }
        }
        if (deficit <= 0 || pass >= 2) {
            Series out;
            out.reserve(K + 1);
            for (int j = 0; j <= K; ++j) {
                out.push_back(s[j].with_added_rad(div_up(pref[j], dn)).with_prec(prec));
            }
            return out;
        }
        n += static_cast<long>(std::ceil(deficit / kLog2CvzRate)) + 2;
        work = prec + std::min<Prec>(static_cast<Prec>(std::ceil(std::max(0.0, guard))) + 16, 4 * prec);
    }
}

}  // namespace kernel

namespace {

double min_digits(const std::vector<Ball>& v) {
    double d = INFINITY;
    for (const Ball& b : v) {
        d = std::min(d, b.accuracy_digits());
    }
    return d;
}

void check_pole(const Ball& a) {
    if (a.overlaps(Ball(1, a.prec()))) {
        throw Error(ErrorCode::PoleProximity, "argument ball " + a.to_string(10) + " touches the pole at 1");
    }
}

bool near_one(const Ball& a) {
    const Ball d = a - Ball(1, a.prec());
    return add_up(d.mid_abs_upper(), d.rad()) < Mag::pow2(-10);
}

}  // namespace

TruncatedSeries zeta_series_em(const Ball& a, int K, const AccuracyTarget& target) {
    check_order(K);
    check_pole(a);
    return adaptive_eval_with([&](Prec p) { return kernel::zeta_series_em(a, K, p); },
                              [](const TruncatedSeries& s) { return min_digits(s.coeffs); }, target);
}

DerivVector eta_derivs(const Ball& a, int K, const AccuracyTarget& target) {
    check_order(K);
    if (near_one(a)) {
        return eta_derivs_direct(a, K, target);
    }
    check_pole(a);
    auto values = adaptive_eval_with([&](Prec p) { return kernel::eta_em(a, K, p); }, min_digits, target);
    return {a, std::move(values), Function::eta, Method::euler_maclaurin, target.digits};
}

DerivVector eta_derivs_direct(const Ball& a, int K, const AccuracyTarget& target) {
    check_order(K);
    auto values = adaptive_eval_with([&](Prec p) { return kernel::eta_direct(a, K, p); }, min_digits, target);
    return {a, std::move(values), Function::eta, Method::direct_accelerated, target.digits};
}

DerivVector zeta_from_eta(const DerivVector& v) {
    if (v.function() != Function::eta) {
        throw Error(ErrorCode::InvalidArgument, "zeta_from_eta expects eta derivatives");
    }
    const int K = v.order();
    Prec p = v.point().prec();
    for (const Ball& b : v.values()) {
        p = std::max(p, b.prec());
    }
    // f^(k)(a) = k! [x^k] (1 - 2^(1-a-x))
    TruncatedSeries fs{v.point(), kernel::eta_factor_series(v.point(), K, p)};
    const std::vector<Ball> f = fs.derivatives();
    if (f[0].contains_zero()) {
        throw Error(ErrorCode::FactorVanishes, "1 - 2^(1-a) vanishes within the ball at " + v.point().to_string(10));
    }
    std::vector<Ball> z;
    z.reserve(K + 1);
    for (int k = 0; k <= K; ++k) {
        Ball acc = v.values()[k];
        mpz_class binom = 1;
        for (int j = 1; j <= k; ++j) {
            mpz_bin_uiui(binom.get_mpz_t(), static_cast<unsigned long>(k), static_cast<unsigned long>(j));
            acc -= Ball::from_mpz(binom, p) * f[j] * z[k - j];
        }
        z.push_back(acc / f[0]);
    }
    const double got = min_digits(z);
    const int digits = std::isfinite(got) ? std::max(0, static_cast<int>(std::floor(got))) : v.digits();
    return {v.point(), std::move(z), Function::zeta, Method::via_relation, std::min(digits, v.digits())};
}

DerivVector zeta_derivs(const Ball& a, int K, const AccuracyTarget& target) {
    check_order(K);
    check_pole(a);
    auto values = adaptive_eval_with([&](Prec p) { return kernel::zeta_series_em(a, K, p).derivatives(); },
                                     min_digits, target);
    return {a, std::move(values), Function::zeta, Method::euler_maclaurin, target.digits};
}

DerivVector derivs(Function f, const Ball& a, int K, const AccuracyTarget& target) {
    return f == Function::eta ? eta_derivs(a, K, target) : zeta_derivs(a, K, target);
}

}  // namespace etalab

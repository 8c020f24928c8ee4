#include "etalab/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <limits>

#include "etalab/parallel.hpp"

namespace etalab {

namespace {

using DVs = std::vector<std::shared_ptr<const DerivVector>>;

std::string point_key(const Ball& p, Function f) {
    return std::string(to_string(f)) + "|" + exact_decimal(p.mid_re().get()) + "|" + exact_decimal(p.mid_im().get()) +
           "|" + p.rad().to_string(17);
}

BuildEnv env_of(const DVs& src, Prec prec, int l = 0, IndexSeq rows = {}, IndexSeq cols = {}) {
    BuildEnv env;
    for (const auto& d : src) {
        env.sources.push_back(d.get());
    }
    env.prec = prec;
    env.l = l;
    env.rows = std::move(rows);
    env.cols = std::move(cols);
    return env;
}

void require(bool ok, const std::string& what) {
    if (!ok) {
        throw Error(ErrorCode::InvalidArgument, what);
    }
}

Ball checked_div(const Ball& num, const Ball& den, ErrorCode code, const std::string& what) {
    if (den.contains_zero()) {
        throw Error(code, what + " contains zero");
    }
    return num / den;
}

std::vector<std::optional<Ball>> coefficient_ratios(const PolyHP& V, const PolyHP& W, int hi) {
    std::vector<std::optional<Ball>> out;
    for (int n = 0; n <= hi; ++n) {
        if (W[n].contains_zero()) {
            out.emplace_back();
        } else {
            out.emplace_back(V[n] / W[n]);
        }
    }
    return out;
}

// Gaussian elimination with partial pivoting on midpoint magnitude.
std::vector<Ball> solve_system(BallMatrix A, std::vector<Ball> b) {
    const int N = A.size();
    for (int c = 0; c < N; ++c) {
        int piv = c;
        for (int r = c + 1; r < N; ++r) {
            if (compare(A(r, c).mid_abs_upper(), A(piv, c).mid_abs_upper()) > 0) {
                piv = r;
            }
        }
        if (A(piv, c).contains_zero()) {
            throw Error(ErrorCode::SingularSystem, "pivot in column " + std::to_string(c) + " contains zero");
        }
        if (piv != c) {
            for (int k = 0; k < N; ++k) {
                std::swap(A(piv, k), A(c, k));
            }
            std::swap(b[piv], b[c]);
        }
        for (int r = c + 1; r < N; ++r) {
            const Ball f = A(r, c) / A(c, c);
            for (int k = c + 1; k < N; ++k) {
                A(r, k) -= f * A(c, k);
            }
            b[r] -= f * b[c];
        }
    }
    std::vector<Ball> x(N, Ball(b.empty() ? 64 : b[0].prec()));
    for (int r = N - 1; r >= 0; --r) {
        Ball s = b[r];
        for (int k = r + 1; k < N; ++k) {
            s -= A(r, k) * x[k];
        }
        x[r] = s / A(r, r);
    }
    return x;
}

// ------------------------------------------------------------- kernels

Ball k_q(Workbench& wb, const PointSet& A, const IndexSeq& D, int l = 0) {
    const int N = static_cast<int>(A.size());
    const DVs src = wb.derivs(wb.points(A), l + D[N - 1]);
    const BuildEnv env = env_of(src, wb.prec(), l, {}, D);
    RuleSet num;
    num.add(Selector::all(), Payload::eta(0, 1, 0, true));
    RuleSet den;
    den.add(Selector::col(0), Payload::one()).add(Selector::all(), Payload::eta(0, 1, 0, true));
    return checked_div(det(build_matrix(N, num, env)), det(build_matrix(N, den, env)), ErrorCode::DenominatorVanishes,
                       "denominator determinant");
}

LinearSolution k_linear(Workbench& wb, const PointSet& A, const IndexSeq& D, int l) {
    const int N = static_cast<int>(A.size());
    const Prec p = wb.prec();
    const DVs src = wb.derivs(wb.points(A), l + D[N - 1]);
    // Unknowns (b, c_{d_1}, ..., c_{d_{N-1}}):  b - sum_k c_k eta^(l+d_k)(a_j) = eta^(l+d_0)(a_j).
    BallMatrix M(N, p);
    std::vector<Ball> rhs;
    for (int j = 0; j < N; ++j) {
        M(j, 0) = Ball(1, p);
        for (int k = 1; k < N; ++k) {
            M(j, k) = -src[j]->at(l + D[k]).with_prec(p);
        }
        rhs.push_back(src[j]->at(l + D[0]).with_prec(p));
    }
    const std::vector<Ball> x = solve_system(M, rhs);
    const Ball dm = det(M);
    if (dm.contains_zero()) {
        throw Error(ErrorCode::SingularSystem, "system determinant contains zero");
    }
    LinearSolution out{x[0], {}, Ball(p), {}, A.descriptor(), D.to_string(), l};
    for (int k = 0; k < N; ++k) {
        BallMatrix Mk = M;
        for (int j = 0; j < N; ++j) {
            Mk(j, k) = rhs[j];
        }
        const Ball v = det(Mk) / dm;
        if (k == 0) {
            out.b_cramer = v;
        } else {
            out.c.emplace(D[k], x[k]);
            out.c_cramer.emplace(D[k], v);
        }
    }
    return out;
}

std::vector<std::optional<Ball>> k_qn(Workbench& wb, const PointSet& A) {
    const int N = static_cast<int>(A.size());
    const DVs src = wb.derivs(wb.points(A), N - 1);
    const BuildEnv env = env_of(src, wb.prec());
    RuleSet num;
    num.add(Selector::all(), Payload::eta(0, 1));
    RuleSet den;
    den.add(Selector::col(0), Payload::one()).add(Selector::all(), Payload::eta(0, 1));
    const PolyHP V = charpoly(build_matrix(N, num, env).numeric());
    const PolyHP W = charpoly(build_matrix(N, den, env).numeric());
    return coefficient_ratios(V, W, N);
}

RuleSet r_num_rules(int m, int n) {
    RuleSet r;
    r.add(Selector::cell(m, n), Payload::zero()).add(Selector::all(), Payload::eta(0, 1, 0, true));
    return r;
}

RuleSet r_den_rules(int m, int n) {
    RuleSet r;
    r.add(Selector::cell(m, n), Payload::minus_one())
        .add(Selector::row(m), Payload::zero())
        .add(Selector::col(n), Payload::zero())
        .add(Selector::all(), Payload::eta(0, 1, 0, true));
    return r;
}

void check_cell(int N, int m, int n) {
    require(m >= 0 && n >= 0 && m < N && n < N, "cell (m, n) must lie inside the N x N matrix");
}

Ball k_r(Workbench& wb, int l, int m, int n, const DVs& src) {
    const int N = static_cast<int>(src.size());
    const BuildEnv env = env_of(src, wb.prec(), l);
    RuleSet all;
    all.add(Selector::all(), Payload::eta(0, 1, 0, true));
    return cofactor_solve(build_matrix(N, all, env).numeric(), m, n);
}

Ball k_r1y(Workbench& wb, const PointSet& A, int m, int n) {
    const int N = static_cast<int>(A.size());
    check_cell(N, m, n);
    const DVs src = wb.derivs(wb.points(A), N - 1);
    const BuildEnv env = env_of(src, wb.prec());
    RuleSet lhs;
    lhs.add(Selector::cell(m, n), Payload::y()).add(Selector::all(), Payload::eta(0, 1));
    // Column 0 of the right side is all ones, also in the y cell when n = 0.
    RuleSet rhs;
    rhs.add(Selector::col(0), Payload::one()).add(Selector::cell(m, n), Payload::y()).add(Selector::all(), Payload::eta(0, 1));
    const MatrixHP L = build_matrix(N, lhs, env);
    const MatrixHP R = build_matrix(N, rhs, env);
    const Prec p = wb.prec();
    const Ball zero(p);
    const Ball one(1, p);
    const Ball l0 = det(L.substitute(zero));
    const Ball r0 = det(R.substitute(zero));
    const Ball l1 = det(L.substitute(one)) - l0;
    const Ball r1 = det(R.substitute(one)) - r0;
    return checked_div(r0 - l0, l1 - r1, ErrorCode::CoefficientVanishes, "y coefficient of the difference");
}

Ball k_sn(Workbench& wb, const ComplexLiteral& a, int N, SnVariant v, const IndexSeq& D, const IndexSeq& F) {
    require(N >= 1, "N must be >= 1");
    const bool minor = v == SnVariant::minor;
    if (minor) {
        require(D[0] == 0 && F[0] == 0, "minor variant needs d_0 = f_0 = 0");
    }
    const int K = minor ? F[N - 1] + D[N - 1] : 2 * N - 2;
    const DVs src{wb.derivs(wb.point(a), K)};
    Scale sc = Scale::none;
    switch (v) {
        case SnVariant::fact:
            sc = Scale::div_col_factorial;
            break;
        case SnVariant::antifact:
            sc = Scale::mul_col_factorial;
            break;
        case SnVariant::taylor:
            sc = Scale::div_order_factorial;
            break;
        default:
            break;
    }
    RuleSet num;
    num.add(Selector::all(), Payload::eta(1, 1).scaled(sc));
    RuleSet den;
    IndexSeq Fd = F;
    IndexSeq Dd = D;
    if (minor) {
        Fd = F.tail();
        Dd = D.tail();
        den.add(Selector::all(), Payload::eta(1, 1));
    } else {
        den.add(Selector::all(), Payload::eta(1, 1, 2).scaled(sc));
    }
    const Ball n = det(build_matrix(N, num, env_of(src, wb.prec(), 0, F, D)));
    const Ball d = det(build_matrix(N - 1, den, env_of(src, wb.prec(), 0, Fd, Dd)));
    return checked_div(n, d, ErrorCode::DenominatorVanishes, "denominator determinant");
}

// Power of two near max(1, |t|).
Ball interpolation_radius(const Ball& t) {
    const double lg = t.mid_abs_upper().log2();
    const long e = std::isfinite(lg) ? std::max(0L, std::lround(lg)) : 0L;
    return Ball(1, t.prec()).mul_2exp(e);
}

PolyHP k_epoly(Workbench& wb, int l, int m, int N, const DVs& src, bool allow_uncertain) {
    require(l >= 0 && N >= 1 && m >= 0 && m <= 2 * N - 2, "e_poly needs l >= 0, N >= 1, 0 <= m <= 2N-2");
    RuleSet r;
    r.add(Selector::antidiag(m), Payload::y()).add(Selector::all(), Payload::eta(1, 1, 0, true));
    const MatrixHP M = build_matrix(N, r, env_of(src, wb.prec(), l));
    return det_poly(M, interpolation_radius(src[0]->at(l + m).with_prec(wb.prec())), allow_uncertain);
}

Ball k_conj3(Workbench& wb, int l, int m, int N, int n, const ComplexLiteral& a) {
    require(n > 0 && n <= m + 1, "conj3 needs 0 < n <= m+1");
    const DVs src{wb.derivs(wb.point(a), l + 2 * N - 2)};
    const PolyHP E = k_epoly(wb, l, m, N, src, true);
    require(n <= E.degree(), "n exceeds the polynomial degree");
    const Ball r = checked_div(E[n - 1], E[n], ErrorCode::CoefficientVanishes, "coefficient E_n");
    return r.mul_si(n - m - 2).div_si(n);
}

Ball k_r3eq(Workbench& wb, const ComplexLiteral& a, int N) {
    require(N >= 1, "N must be >= 1");
    const DVs src{wb.derivs(wb.point(a), 2 * N - 2)};
    const BuildEnv env = env_of(src, wb.prec());
    RuleSet lhs;
    lhs.add(Selector::all(), Payload::eta(1, 1));
    RuleSet rhs;
    rhs.add(Selector::all(), Payload::eta(1, 1, 2));
    return cofactor_solve(build_matrix(N, lhs, env).numeric(), 0, 0, det(build_matrix(N - 1, rhs, env)));
}

E1Result k_e1(Workbench& wb, int m, int N, const ComplexLiteral& a) {
    require(N >= 1 && m >= 0 && m <= 2 * N - 2, "e1 needs N >= 1 and 0 <= m <= 2N-2");
    const Prec p = wb.prec();
    const DVs src{wb.derivs(wb.point(a), 2 * N - 2)};
    const BuildEnv env = env_of(src, p);
    RuleSet lhs;
    lhs.add(Selector::antidiag(m), Payload::y()).add(Selector::all(), Payload::eta(1, 1));
    RuleSet rhs;
    rhs.add(Selector::antidiag(m, 2), Payload::y()).add(Selector::all(), Payload::eta(1, 1, 2));
    const Ball rho = interpolation_radius(src[0]->at(m).with_prec(p));
    const PolyHP L = det_poly(build_matrix(N, lhs, env), rho, true);
    const PolyHP R = det_poly(build_matrix(N - 1, rhs, env), rho, true);
    E1Result out;
    const int d = std::max(L.degree(), R.degree());
    for (int n = 0; n <= d; ++n) {
        Ball c(p);
        if (n <= L.degree()) {
            c += L[n];
        }
        if (n <= R.degree()) {
            c -= R[n];
        }
        out.poly.coeffs.push_back(c);
    }
    if (out.poly.coeffs.back().contains_zero()) {
        throw Error(ErrorCode::DegreeUncertain, "leading coefficient of the difference contains zero");
    }
    out.roots = poly_roots(out.poly);
    return out;
}

std::vector<std::optional<Ball>> k_genchar(Workbench& wb, int l, int N, const Permutation& G, const ComplexLiteral& a,
                                           int max_degree) {
    require(N >= 1 && G.size() == N, "genchar needs N >= 1 and a permutation of size N");
    const DVs src{wb.derivs(wb.point(a), l + 2 * N - 2)};
    const BuildEnv env = env_of(src, wb.prec(), l);
    RuleSet v;
    v.add(Selector::cell(0, 0), Payload::zero()).add(Selector::all(), Payload::eta(1, 1, 0, true));
    RuleSet w;
    w.add(Selector::cell(0, 0), Payload::minus_one())
        .add(Selector::row(0), Payload::zero())
        .add(Selector::col(0), Payload::zero())
        .add(Selector::all(), Payload::eta(1, 1, 0, true));
    const int hi = max_degree < 0 ? N : std::min(max_degree, N);
    const PolyHP V = charpoly(build_matrix(N, v, env).numeric(), G, hi);
    const PolyHP W = charpoly(build_matrix(N, w, env).numeric(), G, hi);
    return coefficient_ratios(V, W, hi);
}

std::vector<std::optional<Ball>> k_cminor(Workbench& wb, int l, int m, int n, const PointSet& A, int max_degree) {
    const int N = static_cast<int>(A.size());
    check_cell(N, m, n);
    const DVs src = wb.derivs(wb.points(A), l + N - 1);
    const BuildEnv env = env_of(src, wb.prec(), l);
    const int hi = max_degree < 0 ? N : std::min(max_degree, N);
    const PolyHP V = charpoly(build_matrix(N, r_num_rules(m, n), env).numeric(), Permutation::identity(N), hi);
    const PolyHP W = charpoly(build_matrix(N, r_den_rules(m, n), env).numeric(), Permutation::identity(N), hi);
    return coefficient_ratios(V, W, hi);
}

LimitCheck k_limit(Workbench& wb, const ComplexLiteral& a, const ComplexLiteral& eps, int N) {
    const PointSet prog(ProgressionSpec{a, eps, N}, wb.prec());
    LimitCheck out{k_q(wb, prog, IndexSeq()), k_sn(wb, a, N, SnVariant::plain, {}, {}), Ball(wb.prec())};
    out.diff = (out.q - out.s).abs();
    return out;
}

Ball deriv_target(Workbench& wb, const Ball& point, int order) { return wb.derivs(point, order)->at(order).with_prec(wb.prec()); }

}  // namespace

// ------------------------------------------------------------ plumbing

DerivProvider::DerivProvider(Function f, std::optional<std::filesystem::path> cache_dir) : function_(f) {
    if (cache_dir) {
        disk_.emplace(*cache_dir);
    }
}

std::shared_ptr<const DerivVector> DerivProvider::get(const Ball& point, int K, int digits) {
    const std::string key = point_key(point, function_);
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = memory_.find(key);
        if (it != memory_.end()) {
            for (const auto& v : it->second) {
                if (v->order() >= K && v->digits() >= digits) {
                    return v;
                }
            }
        }
    }
    std::shared_ptr<const DerivVector> got;
    bool from_disk = false;
    if (disk_) {
        try {
            if (auto v = disk_->get(CacheKey::of(point, function_, Method::euler_maclaurin, K, digits))) {
                got = std::make_shared<const DerivVector>(std::move(*v));
                from_disk = true;
            }
        } catch (const Error& e) {
            if (e.code() != ErrorCode::CacheCorrupt) {
                throw;
            }
        }
    }
    if (!got) {
        got = std::make_shared<const DerivVector>(derivs(function_, point, K, AccuracyTarget(digits)));
        if (disk_) {
            disk_->put(*got);
        }
    }
    std::lock_guard<std::mutex> lock(mu_);
    (from_disk ? disk_hits_ : computed_) += 1;
    memory_[key].push_back(got);
    return got;
}

std::size_t DerivProvider::computed() const {
    std::lock_guard<std::mutex> lock(mu_);
    return computed_;
}

std::size_t DerivProvider::disk_hits() const {
    std::lock_guard<std::mutex> lock(mu_);
    return disk_hits_;
}

Workbench::Workbench(DerivProvider& provider, Prec prec) : provider_(&provider), prec_(prec) {
    if (prec < 64 || prec > kMaxPrec) {
        throw Error(ErrorCode::InvalidArgument, "working precision out of range");
    }
}

int Workbench::deriv_digits() const { return std::max(10, static_cast<int>(std::floor((prec_ - 64) / 3.33))); }

std::vector<Ball> Workbench::points(const PointSet& set) const { return set.at_prec(2 * prec_ + 64).points(); }

Ball Workbench::point(const ComplexLiteral& a) const { return a.to_ball(2 * prec_ + 64); }

std::vector<std::shared_ptr<const DerivVector>> Workbench::derivs(const std::vector<Ball>& pts, int K) const {
    std::vector<std::shared_ptr<const DerivVector>> out(pts.size());
    parallel_for(pts.size(), [&](std::size_t i) { out[i] = provider_->get(pts[i], K, deriv_digits()); });
    return out;
}

std::shared_ptr<const DerivVector> Workbench::derivs(const Ball& a, int K) const {
    return provider_->get(a, K, deriv_digits());
}

double digits_of(const std::vector<Ball>& v) {
    double d = std::numeric_limits<double>::infinity();
    for (const auto& b : v) {
        d = std::min(d, b.accuracy_digits());
    }
    return d;
}

double digits_of(const std::vector<std::optional<Ball>>& v) {
    double d = std::numeric_limits<double>::infinity();
    for (const auto& b : v) {
        d = std::min(d, b ? b->accuracy_digits() : -std::numeric_limits<double>::infinity());
    }
    return d;
}

double digits_of(const PolyHP& p) { return digits_of(p.coeffs); }

Ball dist_to_one(const Ball& x) { return (x - Ball(1, x.prec())).abs(); }

Ball rel_dist(const Ball& x, const Ball& t) {
    if (t.contains_zero()) {
        throw Error(ErrorCode::DivisorContainsZero, "target contains zero");
    }
    return (x / t - Ball(1, x.prec())).abs();
}

Ball ball_max(const std::vector<Ball>& v) {
    if (v.empty()) {
        throw Error(ErrorCode::InvalidArgument, "maximum of an empty list");
    }
    const Prec p = v[0].prec();
    std::vector<Float> hi;
    std::size_t best = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        require(v[i].is_real(), "ball_max expects real balls");
        Float r(p);
        Float h(p);
        v[i].rad().to_mpfr(r.get());
        mpfr_add(h.get(), v[i].mid_re().get(), r.get(), MPFR_RNDU);
        hi.push_back(std::move(h));
        if (mpfr_cmp(v[i].mid_re().get(), v[best].mid_re().get()) > 0) {
            best = i;
        }
    }
    // Widen the largest-midpoint ball until it reaches every upper end.
    Float gap(p);
    mpfr_set_zero(gap.get(), 1);
    for (const auto& h : hi) {
        Float g(p);
        mpfr_sub(g.get(), h.get(), hi[best].get(), MPFR_RNDU);
        if (mpfr_cmp(g.get(), gap.get()) > 0) {
            mpfr_set(gap.get(), g.get(), MPFR_RNDU);
        }
    }
    return v[best].with_added_rad(Mag::from_mpfr_up(gap.get()));
}

bool LinearSolution::consistent() const {
    if (!b.overlaps(b_cramer)) {
        return false;
    }
    for (const auto& [k, v] : c) {
        if (!v.overlaps(c_cramer.at(k))) {
            return false;
        }
    }
    return true;
}

// ---------------------------------------------------------- quantities

namespace {

double digits_of_solution(const LinearSolution& s) {
    double d = std::min(s.b.accuracy_digits(), s.b_cramer.accuracy_digits());
    for (const auto& [k, v] : s.c) {
        d = std::min(d, v.accuracy_digits());
    }
    return d;
}

void require_set(const PointSet& A, const IndexSeq& D) {
    require(A.size() >= 1, "point set is empty");
    (void)D[static_cast<int>(A.size()) - 1];
}

}  // namespace

Measured<LinearSolution> solve_linear_family(const PointSet& A, const IndexSeq& D, int l, const Session& s) {
    require_set(A, D);
    require(l >= 0, "shift l must be >= 0");
    return refine(s, [&](Workbench& wb) { return k_linear(wb, A, D, l); }, digits_of_solution);
}

Measured<Ball> q_ratio(const PointSet& A, const IndexSeq& D, const Session& s) {
    require_set(A, D);
    return refine(s, [&](Workbench& wb) { return k_q(wb, A, D); }, [](const Ball& b) { return digits_of(b); });
}

Measured<std::vector<std::optional<Ball>>> qn_ratios(const PointSet& A, const Session& s) {
    require(A.size() >= 1, "point set is empty");
    return refine(s, [&](Workbench& wb) { return k_qn(wb, A); },
                  [](const std::vector<std::optional<Ball>>& v) { return digits_of(v); });
}

Measured<Ball> r_value(int l, int m, int n, const PointSet& A, const Session& s) {
    require(l >= 1, "R needs l >= 1");
    const int N = static_cast<int>(A.size());
    check_cell(N, m, n);
    return refine(
        s, [&](Workbench& wb) { return k_r(wb, l, m, n, wb.derivs(wb.points(A), l + N - 1)); },
        [](const Ball& b) { return digits_of(b); });
}

Measured<Ball> r1y_value(const PointSet& A, int m, int n, const Session& s) {
    return refine(s, [&](Workbench& wb) { return k_r1y(wb, A, m, n); }, [](const Ball& b) { return digits_of(b); });
}

SnVariant parse_sn_variant(std::string_view s) {
    if (s == "plain") return SnVariant::plain;
    if (s == "fact") return SnVariant::fact;
    if (s == "antifact") return SnVariant::antifact;
    if (s == "taylor") return SnVariant::taylor;
    if (s == "minor") return SnVariant::minor;
    throw Error(ErrorCode::UsageError, "unknown variant '" + std::string(s) + "' (plain, fact, antifact, taylor, minor)");
}

std::string_view to_string(SnVariant v) {
    switch (v) {
        case SnVariant::plain:
            return "plain";
        case SnVariant::fact:
            return "fact";
        case SnVariant::antifact:
            return "antifact";
        case SnVariant::taylor:
            return "taylor";
        case SnVariant::minor:
            return "minor";
    }
    return "?";
}

Measured<Ball> s_n(const ComplexLiteral& a, int N, SnVariant variant, const Session& s, const IndexSeq& D,
                   const IndexSeq& F) {
    return refine(s, [&](Workbench& wb) { return k_sn(wb, a, N, variant, D, F); },
                  [](const Ball& b) { return digits_of(b); });
}

Measured<PolyHP> e_poly(int l, int m, int N, const ComplexLiteral& a, const Session& s) {
    return refine(
        s,
        [&](Workbench& wb) {
            const DVs src{wb.derivs(wb.point(a), l + 2 * N - 2)};
            return k_epoly(wb, l, m, N, src, false);
        },
        [](const PolyHP& p) { return digits_of(p); });
}

Measured<RootSpread> conj2_root_spread(int l, int m, int N, const ComplexLiteral& a, const Session& s) {
    return refine(
        s,
        [&](Workbench& wb) {
            const DVs src{wb.derivs(wb.point(a), l + 2 * N - 2)};
            RootSpread out{poly_roots(k_epoly(wb, l, m, N, src, false)), src[0]->at(l + m).with_prec(wb.prec()),
                           Ball(wb.prec())};
            std::vector<Ball> d;
            for (const auto& r : out.roots) {
                d.push_back((r - out.target).abs());
            }
            out.spread = ball_max(d);
            return out;
        },
        [](const RootSpread& r) { return r.spread.accuracy_digits(); });
}

Measured<Ball> conj3_ratio(int l, int m, int N, int n, const ComplexLiteral& a, const Session& s) {
    return refine(s, [&](Workbench& wb) { return k_conj3(wb, l, m, N, n, a); },
                  [](const Ball& b) { return digits_of(b); });
}

Measured<E1Result> e1_poly(int m, int N, const ComplexLiteral& a, const Session& s) {
    return refine(s, [&](Workbench& wb) { return k_e1(wb, m, N, a); },
                  [](const E1Result& r) { return std::min(digits_of(r.poly), digits_of(r.roots)); });
}

Measured<Ball> r3eq_solution(const ComplexLiteral& a, int N, const Session& s) {
    return refine(s, [&](Workbench& wb) { return k_r3eq(wb, a, N); }, [](const Ball& b) { return digits_of(b); });
}

Measured<std::vector<std::optional<Ball>>> genchar_ratios(int l, int N, const Permutation& G, const ComplexLiteral& a,
                                                          const Session& s, int max_degree) {
    return refine(s, [&](Workbench& wb) { return k_genchar(wb, l, N, G, a, max_degree); },
                  [](const std::vector<std::optional<Ball>>& v) { return digits_of(v); });
}

Measured<std::vector<std::optional<Ball>>> charpoly_minor_ratios(int l, int m, int n, const PointSet& A,
                                                                 const Session& s, int max_degree) {
    require(l >= 0, "shift l must be >= 0");
    return refine(s, [&](Workbench& wb) { return k_cminor(wb, l, m, n, A, max_degree); },
                  [](const std::vector<std::optional<Ball>>& v) { return digits_of(v); });
}

Measured<LimitCheck> limit_check(const ComplexLiteral& a, const ComplexLiteral& eps, int N, const Session& s) {
    require(N >= 1, "N must be >= 1");
    return refine(s, [&](Workbench& wb) { return k_limit(wb, a, eps, N); },
                  [](const LimitCheck& c) { return std::min({c.q.accuracy_digits(), c.s.accuracy_digits(), c.diff.accuracy_digits()}); });
}

// ----------------------------------------------------------- reporting

bool ResultRow::inconclusive() const {
    if (!value) {
        return true;
    }
    if (!delta) {
        return false;
    }
    return compare(delta->rad(), delta->mid_abs_upper()) > 0;
}

bool ExperimentResult::inconclusive() const {
    return std::any_of(rows.begin(), rows.end(), [](const ResultRow& r) { return r.inconclusive(); });
}

const std::vector<std::string>& experiment_names() {
    static const std::vector<std::string> names{"linear", "q",     "qn",      "r",     "r-sweep",
                                                "r1y",    "sn",    "epoly",   "conj2", "conj3",
                                                "e1",     "r3eq",  "genchar", "charpoly-minor", "limit"};
    return names;
}

namespace {

template <class T>
const T& need(const std::optional<T>& v, const char* flag) {
    if (!v) {
        throw Error(ErrorCode::UsageError, std::string("missing required flag --") + flag);
    }
    return *v;
}

ResultRow row_one(std::string label, const Ball& v) { return {std::move(label), v, Ball(1, v.prec()), dist_to_one(v), {}}; }

ResultRow row_target(std::string label, const Ball& v, const Ball& t) {
    return {std::move(label), v, t, rel_dist(v, t), {}};
}

ResultRow row_plain(std::string label, const Ball& v, std::string note = {}) {
    return {std::move(label), v, std::nullopt, std::nullopt, std::move(note)};
}

ResultRow row_optional(std::string label, const std::optional<Ball>& v, const Ball& t, bool to_one) {
    if (!v) {
        return {std::move(label), std::nullopt, t, std::nullopt, "denominator coefficient contains zero"};
    }
    return to_one ? row_one(std::move(label), *v) : row_target(std::move(label), *v, t);
}

// Digits of the values; a delta must also carry kDeltaDigits of its own,
// so tiny deltas push the precision up instead of coming out inconclusive.
constexpr int kDeltaDigits = 6;

double rows_digits(const std::vector<ResultRow>& rows, int goal) {
    double d = std::numeric_limits<double>::infinity();
    for (const auto& r : rows) {
        d = std::min(d, r.value ? r.value->accuracy_digits() : -std::numeric_limits<double>::infinity());
        if (r.delta) {
            d = std::min(d, r.delta->accuracy_digits() + goal - kDeltaDigits);
        }
    }
    return d;
}

std::string set_list(const std::set<int>& s) {
    std::string out;
    for (int v : s) {
        out += (out.empty() ? "" : ",") + std::to_string(v);
    }
    return out.empty() ? "-" : out;
}

}  // namespace

ExperimentResult run_experiment(const std::string& name, const ExperimentParams& p, const Session& s) {
    const auto t0 = std::chrono::steady_clock::now();
    ExperimentResult res;
    res.name = name;
    auto param = [&](const char* k, const std::string& v) { res.params.emplace_back(k, v); };
    auto need_set = [&]() {
        const PointSet A = PointSet::parse(need(p.set, "set"), 64);
        param("set", A.descriptor());
        return A;
    };
    auto need_a = [&]() {
        const ComplexLiteral& a = need(p.a, "a");
        param("a", a.str());
        return a;
    };
    auto need_int = [&](const std::optional<int>& v, const char* flag) {
        const int x = need(v, flag);
        param(flag, std::to_string(x));
        return x;
    };
    auto opt_int = [&](const std::optional<int>& v, const char* flag, int dflt) {
        const int x = v.value_or(dflt);
        param(flag, std::to_string(x));
        return x;
    };

    Measured<std::vector<ResultRow>> out;
    auto run = [&](auto&& task) {
        out = refine(s, task, [&](const std::vector<ResultRow>& rows) { return rows_digits(rows, s.target.digits); });
    };

    if (name == "linear") {
        const PointSet A = need_set();
        const IndexSeq D = IndexSeq::missing(p.drop_d);
        param("drop-d", set_list(p.drop_d));
        const int l = opt_int(p.l, "l", 0);
        run([&](Workbench& wb) {
            const LinearSolution sol = k_linear(wb, A, D, l);
            std::vector<ResultRow> rows{row_one("b", sol.b), row_one("b_cramer", sol.b_cramer)};
            for (const auto& [k, v] : sol.c) {
                rows.push_back(row_plain("c_" + std::to_string(k), v));
            }
            if (!sol.consistent()) {
                rows.front().note = "direct solve and Cramer balls are disjoint";
            }
            return rows;
        });
    } else if (name == "q") {
        const PointSet A = need_set();
        const IndexSeq D = IndexSeq::missing(p.drop_d);
        param("drop-d", set_list(p.drop_d));
        run([&](Workbench& wb) { return std::vector<ResultRow>{row_one("Q", k_q(wb, A, D))}; });
    } else if (name == "qn") {
        const PointSet A = need_set();
        run([&](Workbench& wb) {
            std::vector<ResultRow> rows;
            const auto q = k_qn(wb, A);
            for (std::size_t n = 0; n < q.size(); ++n) {
                rows.push_back(row_optional("Q_" + std::to_string(n), q[n], Ball(1, wb.prec()), true));
            }
            return rows;
        });
    } else if (name == "r") {
        const PointSet A = need_set();
        const int l = need_int(p.l, "l");
        const int m = need_int(p.m, "m");
        const int n = need_int(p.n, "n");
        require(l >= 1, "R needs l >= 1");
        const int N = static_cast<int>(A.size());
        check_cell(N, m, n);
        run([&](Workbench& wb) {
            const auto pts = wb.points(A);
            const DVs src = wb.derivs(pts, l + N - 1);
            return std::vector<ResultRow>{row_target("R", k_r(wb, l, m, n, src), src[m]->at(l + n).with_prec(wb.prec()))};
        });
    } else if (name == "r-sweep") {
        const PointSet A = need_set();
        const int N = static_cast<int>(A.size());
        const int lmax = opt_int(p.l, "l", N - 1);
        run([&](Workbench& wb) {
            const auto pts = wb.points(A);
            const DVs src = wb.derivs(pts, lmax + N - 1);
            std::vector<Ball> deltas(static_cast<std::size_t>(lmax) * N * N, Ball(wb.prec()));
            std::vector<Ball> values = deltas;
            parallel_for(deltas.size(), [&](std::size_t i) {
                const int l = 1 + static_cast<int>(i / (N * N));
                const int m = static_cast<int>(i / N % N);
                const int n = static_cast<int>(i % N);
                values[i] = k_r(wb, l, m, n, src);
                deltas[i] = rel_dist(values[i], src[m]->at(l + n).with_prec(wb.prec()));
            });
            std::size_t worst = 0;
            for (std::size_t i = 1; i < deltas.size(); ++i) {
                if (mpfr_cmp(deltas[i].mid_re().get(), deltas[worst].mid_re().get()) > 0) {
                    worst = i;
                }
            }
            const int l = 1 + static_cast<int>(worst / (N * N));
            const int m = static_cast<int>(worst / N % N);
            const int n = static_cast<int>(worst % N);
            const Ball worst_delta = ball_max(deltas);
            std::vector<ResultRow> rows{{"max |R/eta-1|", worst_delta, std::nullopt, worst_delta,
                                         "worst at l=" + std::to_string(l) + " m=" + std::to_string(m) + " n=" +
                                             std::to_string(n) + " over " + std::to_string(deltas.size()) + " cases"}};
            rows.push_back(row_target("R(worst)", values[worst], src[m]->at(l + n).with_prec(wb.prec())));
            return rows;
        });
    } else if (name == "r1y") {
        const PointSet A = need_set();
        const int m = need_int(p.m, "m");
        const int n = need_int(p.n, "n");
        run([&](Workbench& wb) {
            const Ball y = k_r1y(wb, A, m, n);
            return std::vector<ResultRow>{row_target("y", y, deriv_target(wb, wb.points(A)[m], n))};
        });
    } else if (name == "sn") {
        const ComplexLiteral a = need_a();
        const int N = need_int(p.N, "N");
        const SnVariant v = parse_sn_variant(p.variant.value_or("plain"));
        param("variant", std::string(to_string(v)));
        const IndexSeq D = IndexSeq::missing(p.drop_d);
        const IndexSeq F = IndexSeq::missing(p.drop_f);
        if (v == SnVariant::minor) {
            param("drop-d", set_list(p.drop_d));
            param("drop-f", set_list(p.drop_f));
        }
        run([&](Workbench& wb) { return std::vector<ResultRow>{row_one("S", k_sn(wb, a, N, v, D, F))}; });
    } else if (name == "epoly") {
        const ComplexLiteral a = need_a();
        const int l = need_int(p.l, "l");
        const int m = need_int(p.m, "m");
        const int N = need_int(p.N, "N");
        run([&](Workbench& wb) {
            const DVs src{wb.derivs(wb.point(a), l + 2 * N - 2)};
            const PolyHP E = k_epoly(wb, l, m, N, src, false);
            std::vector<ResultRow> rows;
            for (int d = 0; d <= E.degree(); ++d) {
                rows.push_back(row_plain("E_" + std::to_string(d), E[d]));
            }
            rows.back().note = "degree " + std::to_string(E.degree());
            return rows;
        });
    } else if (name == "conj2") {
        const ComplexLiteral a = need_a();
        const int l = need_int(p.l, "l");
        const int m = need_int(p.m, "m");
        const int N = need_int(p.N, "N");
        run([&](Workbench& wb) {
            const DVs src{wb.derivs(wb.point(a), l + 2 * N - 2)};
            const Ball t = src[0]->at(l + m).with_prec(wb.prec());
            const auto roots = poly_roots(k_epoly(wb, l, m, N, src, false));
            std::vector<ResultRow> rows;
            std::vector<Ball> d;
            for (std::size_t i = 0; i < roots.size(); ++i) {
                rows.push_back(row_target("root_" + std::to_string(i), roots[i], t));
                d.push_back((roots[i] - t).abs());
            }
            rows.push_back(row_plain("max |root-eta|", ball_max(d)));
            return rows;
        });
    } else if (name == "conj3") {
        const ComplexLiteral a = need_a();
        const int l = need_int(p.l, "l");
        const int m = need_int(p.m, "m");
        const int N = need_int(p.N, "N");
        std::vector<int> ns;
        if (p.n) {
            ns.push_back(need_int(p.n, "n"));
        } else {
            for (int n = 1; n <= m + 1; ++n) {
                ns.push_back(n);
            }
        }
        run([&](Workbench& wb) {
            const Ball t = deriv_target(wb, wb.point(a), l + m);
            std::vector<ResultRow> rows;
            for (int n : ns) {
                rows.push_back(row_target("n=" + std::to_string(n), k_conj3(wb, l, m, N, n, a), t));
            }
            return rows;
        });
    } else if (name == "e1") {
        const ComplexLiteral a = need_a();
        const int m = need_int(p.m, "m");
        const int N = need_int(p.N, "N");
        run([&](Workbench& wb) {
            const E1Result e = k_e1(wb, m, N, a);
            const Ball t = deriv_target(wb, wb.point(a), m);
            std::vector<ResultRow> rows;
            for (std::size_t i = 0; i < e.roots.size(); ++i) {
                rows.push_back(row_target("root_" + std::to_string(i), e.roots[i], t));
            }
            return rows;
        });
    } else if (name == "r3eq") {
        const ComplexLiteral a = need_a();
        const int N = need_int(p.N, "N");
        run([&](Workbench& wb) {
            return std::vector<ResultRow>{row_target("y", k_r3eq(wb, a, N), deriv_target(wb, wb.point(a), 0))};
        });
    } else if (name == "genchar") {
        const ComplexLiteral a = need_a();
        const int l = need_int(p.l, "l");
        const int N = need_int(p.N, "N");
        const auto [q, r] = p.perm.value_or(std::pair<int, int>{1, 1});
        param("perm", std::to_string(q) + "," + std::to_string(r));
        const int hi = opt_int(p.max_degree, "max-degree", 2);
        const Permutation G = perm_qr(q, r, N);
        run([&](Workbench& wb) {
            const Ball t = deriv_target(wb, wb.point(a), l);
            const auto v = k_genchar(wb, l, N, G, a, hi);
            std::vector<ResultRow> rows;
            for (std::size_t n = 0; n < v.size(); ++n) {
                rows.push_back(row_optional("n=" + std::to_string(n), v[n], t, false));
            }
            return rows;
        });
    } else if (name == "charpoly-minor") {
        const PointSet A = need_set();
        const int l = need_int(p.l, "l");
        const int m = need_int(p.m, "m");
        const int n = need_int(p.n, "n");
        const int hi = opt_int(p.max_degree, "max-degree", static_cast<int>(A.size()));
        run([&](Workbench& wb) {
            const Ball t = deriv_target(wb, wb.points(A).at(m), l + n);
            const auto v = k_cminor(wb, l, m, n, A, hi);
            std::vector<ResultRow> rows;
            for (std::size_t d = 0; d < v.size(); ++d) {
                rows.push_back(row_optional("deg " + std::to_string(d), v[d], t, false));
            }
            return rows;
        });
    } else if (name == "limit") {
        const ComplexLiteral a = need_a();
        const ComplexLiteral& eps = need(p.eps, "eps");
        param("eps", eps.str());
        const int N = need_int(p.N, "N");
        run([&](Workbench& wb) {
            const LimitCheck c = k_limit(wb, a, eps, N);
            return std::vector<ResultRow>{row_one("Q(prog)", c.q), row_one("S_N", c.s), row_plain("|Q-S|", c.diff)};
        });
    } else {
        std::string known;
        for (const auto& n : experiment_names()) {
            known += (known.empty() ? "" : ", ") + n;
        }
        throw Error(ErrorCode::UsageError, "unknown experiment '" + name + "' (known: " + known + ")");
    }
    res.rows = std::move(out.value);
    res.digits = out.digits;
    res.prec = out.prec;
    res.reached = out.reached;
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

}  // namespace etalab

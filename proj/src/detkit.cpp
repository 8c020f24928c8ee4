#include "etalab/detkit.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>

#include "etalab/parallel.hpp"
#include "midcomplex.hpp"

namespace etalab {

using detail::Cx;

namespace {

Ball factorial_ball(int n, Prec prec) {
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(n));
    return Ball::from_mpz(f, prec);
}

// exp(2 pi i t / n) for t = 0..n-1; quarter turns are exact.
std::vector<Ball> roots_of_unity(int n, Prec prec) {
    std::vector<Ball> w;
    w.reserve(static_cast<std::size_t>(n));
    const Ball two_pi_i = Ball::pi(prec + 16).mul_2exp(1) * Ball::from_int(0, 1, prec + 16);
    for (int t = 0; t < n; ++t) {
        if ((4 * t) % n == 0) {
            static const long re[4] = {1, 0, -1, 0};
            static const long im[4] = {0, 1, 0, -1};
            const int q = 4 * t / n;
            w.push_back(Ball::from_int(re[q], im[q], prec));
        } else {
            w.push_back(exp(two_pi_i.mul_si(t).div_si(n)).with_prec(prec));
        }
    }
    return w;
}

// Coefficients of the degree < n polynomial with values vals[t] at r * w[t].
std::vector<Ball> interpolate_circle(const std::vector<Ball>& vals, const std::vector<Ball>& w, const Ball& inv_r,
                                     Prec prec) {
    const int n = static_cast<int>(vals.size());
    std::vector<Ball> out;
    out.reserve(static_cast<std::size_t>(n));
    Ball scale = Ball(1, prec).div_si(n);
    for (int k = 0; k < n; ++k) {
        Ball s(prec);
        for (int t = 0; t < n; ++t) {
            const int idx = static_cast<int>((static_cast<long>(n) - (static_cast<long>(t) * k) % n) % n);
            s += vals[t] * w[idx];
        }
        out.push_back(s * scale);
        scale *= inv_r;
    }
    return out;
}

std::vector<std::vector<Cx>> midpoints(const BallMatrix& X) {
    const int N = X.size();
    std::vector<std::vector<Cx>> A(N);
    for (int j = 0; j < N; ++j) {
        A[j].reserve(N);
        for (int k = 0; k < N; ++k) {
            A[j].emplace_back(X(j, k));
        }
    }
    return A;
}

// Estimate of log2 |c_n| for det(A - lambda I), by Hessenberg reduction on
// midpoints followed by the Hessenberg recurrence.
std::vector<double> estimate_charpoly_log2(std::vector<std::vector<Cx>> A, Prec prec) {
    const int N = static_cast<int>(A.size());
    for (int k = 0; k + 2 < N; ++k) {
        int piv = k + 1;
        double best = A[piv][k].log2_abs();
        for (int i = k + 2; i < N; ++i) {
            const double v = A[i][k].log2_abs();
            if (v > best) {
                best = v;
                piv = i;
            }
        }
        if (A[piv][k].is_zero()) {
            continue;
        }
        if (piv != k + 1) {
            std::swap(A[piv], A[k + 1]);
            for (int i = 0; i < N; ++i) {
                std::swap(A[i][piv], A[i][k + 1]);
            }
        }
        for (int i = k + 2; i < N; ++i) {
            if (A[i][k].is_zero()) {
                continue;
            }
            const Cx m = A[i][k] / A[k + 1][k];
            for (int c = k; c < N; ++c) {
                A[i][c] -= m * A[k + 1][c];
            }
            for (int r = 0; r < N; ++r) {
                A[r][k + 1] += m * A[r][i];
            }
        }
    }
    // p[k] = det(H_k - lambda I) for the leading k x k block.
    std::vector<std::vector<Cx>> p(N + 1);
    p[0] = {Cx(1.0, 0.0, prec)};
    for (int k = 1; k <= N; ++k) {
        std::vector<Cx> q(k + 1, Cx(prec));
        const Cx& hkk = A[k - 1][k - 1];
        for (int d = 0; d < k; ++d) {
            q[d] += hkk * p[k - 1][d];
            q[d + 1] -= p[k - 1][d];
        }
        Cx prod(1.0, 0.0, prec);
        for (int i = k - 1; i >= 1; --i) {
            prod = prod * A[i][i - 1];
            if (prod.is_zero()) {
                break;
            }
            const Cx f = A[i - 1][k - 1] * prod;
            for (std::size_t d = 0; d < p[i - 1].size(); ++d) {
                q[d] -= f * p[i - 1][d];
            }
        }
        p[k] = std::move(q);
    }
    std::vector<double> out(N + 1);
    for (int n = 0; n <= N; ++n) {
        out[n] = p[N][n].log2_abs();
    }
    return out;
}

// log2 of the evaluation radius best suited to each coefficient, from the
// upper concave hull of the estimated log-magnitudes.
std::vector<double> ideal_log2_radius(const std::vector<double>& L) {
    const int N = static_cast<int>(L.size()) - 1;
    std::vector<int> hull;
    for (int n = 0; n <= N; ++n) {
        if (!std::isfinite(L[n])) {
            continue;
        }
        while (hull.size() >= 2) {
            const int a = hull[hull.size() - 2];
            const int b = hull.back();
            // Drop b if it lies on or below the segment a..n.
            if ((L[b] - L[a]) * (n - a) <= (L[n] - L[a]) * (b - a)) {
                hull.pop_back();
            } else {
                break;
            }
        }
        hull.push_back(n);
    }
    auto slope = [&](std::size_t e) {
        return (L[hull[e + 1]] - L[hull[e]]) / static_cast<double>(hull[e + 1] - hull[e]);
    };
    std::vector<double> out(N + 1, 0.0);
    if (hull.size() < 2) {
        return out;
    }
    std::size_t e = 0;
    for (int n = 0; n <= N; ++n) {
        while (e + 2 < hull.size() && hull[e + 1] <= n) {
            ++e;
        }
        // Radius balancing the edge that spans n; at interior vertices take
        // the middle of the two adjacent choices.
        double r = -slope(e);
        if (n == hull[e] && e > 0) {
            r = 0.5 * (r - slope(e - 1));
        } else if (n == hull[e + 1] && e + 2 < hull.size()) {
            r = 0.5 * (r - slope(e + 1));
        }
        out[n] = r;
    }
    return out;
}

std::vector<long> choose_radii(const std::vector<double>& ideal, int lo, int hi) {
    constexpr double kMergeBits = 4.0;
    std::vector<double> v;
    for (int n = lo; n <= hi; ++n) {
        v.push_back(ideal[n]);
    }
    std::sort(v.begin(), v.end());
    std::vector<long> out;
    std::size_t i = 0;
    while (i < v.size()) {
        std::size_t j = i;
        while (j + 1 < v.size() && v[j + 1] - v[i] <= kMergeBits) {
            ++j;
        }
        const long r = std::lround(0.5 * (v[i] + v[j]));
        if (out.empty() || out.back() != r) {
            out.push_back(r);
        }
        i = j + 1;
    }
    return out;
}

BallMatrix permute_rows(const BallMatrix& X, const Permutation& G) {
    const int N = X.size();
    BallMatrix Y(N, X.size() ? X(0, 0).prec() : 64);
    for (int k = 0; k < N; ++k) {
        for (int c = 0; c < N; ++c) {
            Y(k, c) = X(G[k], c);
        }
    }
    return Y;
}

void require_square_index(int N, int m, int n) {
    if (m < 0 || n < 0 || m >= N || n >= N) {
        throw Error(ErrorCode::InvalidArgument, "cell index outside the matrix");
    }
}

}  // namespace

// ---------------------------------------------------------------- basics

BallMatrix BallMatrix::minor(int j, int k) const {
    BallMatrix out(n_ - 1, n_ > 0 ? (*this)(0, 0).prec() : 64);
    for (int r = 0, rr = 0; r < n_; ++r) {
        if (r == j) {
            continue;
        }
        for (int c = 0, cc = 0; c < n_; ++c) {
            if (c == k) {
                continue;
            }
            out(rr, cc++) = (*this)(r, c);
        }
        ++rr;
    }
    return out;
}

Permutation::Permutation(std::vector<int> images) : g_(std::move(images)), sign_(1) {
    const int N = size();
    std::vector<bool> seen(N, false);
    for (int v : g_) {
        if (v < 0 || v >= N || seen[v]) {
            throw Error(ErrorCode::InvalidArgument, "permutation images must be a bijection on 0..N-1");
        }
        seen[v] = true;
    }
    // Parity from the cycle decomposition.
    std::vector<bool> done(N, false);
    for (int i = 0; i < N; ++i) {
        if (done[i]) {
            continue;
        }
        int len = 0;
        for (int c = i; !done[c]; c = g_[c]) {
            done[c] = true;
            ++len;
        }
        if (len % 2 == 0) {
            sign_ = -sign_;
        }
    }
}

Permutation Permutation::identity(int N) {
    std::vector<int> g(N);
    std::iota(g.begin(), g.end(), 0);
    return Permutation(std::move(g));
}

bool Permutation::is_identity() const {
    for (int k = 0; k < size(); ++k) {
        if (g_[k] != k) {
            return false;
        }
    }
    return true;
}

std::string Permutation::to_string() const {
    std::string s = "(";
    for (int k = 0; k < size(); ++k) {
        s += (k ? "," : "") + std::to_string(g_[k]);
    }
    return s + ")";
}

Permutation perm_qr(int q, int r, int N) {
    if (q < 1 || r < 1 || N < 0) {
        throw Error(ErrorCode::InvalidArgument, "perm_qr needs q, r >= 1 and N >= 0");
    }
    if (std::gcd(q, r) != 1) {
        throw Error(ErrorCode::NotCoprime, "gcd(" + std::to_string(q) + ", " + std::to_string(r) + ") != 1");
    }
    std::vector<int> g(N);
    std::iota(g.begin(), g.end(), 0);
    std::stable_sort(g.begin(), g.end(), [&](int a, int b) {
        return (static_cast<long>(a) * r) % q < (static_cast<long>(b) * r) % q;
    });
    return Permutation(std::move(g));
}

IndexSeq IndexSeq::listed(std::vector<int> values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] < 0 || (i > 0 && values[i] <= values[i - 1])) {
            throw Error(ErrorCode::InvalidArgument, "index sequence must be strictly increasing and non-negative");
        }
    }
    IndexSeq s;
    s.listed_ = true;
    s.values_ = std::move(values);
    return s;
}

IndexSeq IndexSeq::missing(std::set<int> skipped) {
    for (int v : skipped) {
        if (v < 0) {
            throw Error(ErrorCode::InvalidArgument, "skipped indices must be non-negative");
        }
    }
    IndexSeq s;
    s.missing_ = std::move(skipped);
    return s;
}

int IndexSeq::operator[](int i) const {
    if (i < 0) {
        throw Error(ErrorCode::InvalidArgument, "negative position in index sequence");
    }
    const int pos = i + drop_;
    if (listed_) {
        if (pos >= static_cast<int>(values_.size())) {
            throw Error(ErrorCode::InvalidArgument,
                        "index sequence has only " + std::to_string(values_.size()) + " listed terms");
        }
        return values_[pos];
    }
    // pos-th non-negative integer outside the skipped set.
    int v = pos;
    for (int m : missing_) {
        if (m <= v) {
            ++v;
        } else {
            break;
        }
    }
    return v;
}

IndexSeq IndexSeq::tail() const {
    IndexSeq s = *this;
    ++s.drop_;
    return s;
}

std::string IndexSeq::to_string() const {
    std::ostringstream os;
    if (listed_) {
        os << "[";
        for (std::size_t i = drop_; i < values_.size(); ++i) {
            os << (i > static_cast<std::size_t>(drop_) ? "," : "") << values_[i];
        }
        os << "]";
        return os.str();
    }
    os << "N";
    if (!missing_.empty()) {
        os << "\\{";
        bool first = true;
        for (int m : missing_) {
            os << (first ? "" : ",") << m;
            first = false;
        }
        os << "}";
    }
    if (drop_ > 0) {
        os << ">>" << drop_;
    }
    return os.str();
}

Ball PolyHP::eval(const Ball& y) const {
    if (coeffs.empty()) {
        return Ball(y.prec());
    }
    Ball acc = coeffs.back();
    for (int n = degree() - 1; n >= 0; --n) {
        acc = acc * y + coeffs[n];
    }
    return acc;
}

std::string PolyHP::to_string(int digits) const {
    std::string s;
    for (int n = 0; n <= degree(); ++n) {
        s += (n ? " + " : "") + std::string("(") + coeffs[n].to_string(digits) + ")";
        if (n > 0) {
            s += "*y^" + std::to_string(n);
        }
    }
    return degree_uncertain ? s + " [degree uncertain]" : s;
}

// ------------------------------------------------------ replacement rules

Selector Selector::cell(int m, int n) {
    Selector s;
    s.kind = Kind::cell;
    s.m = m;
    s.n = n;
    return s;
}

Selector Selector::row(int m) {
    Selector s;
    s.kind = Kind::row;
    s.m = m;
    return s;
}

Selector Selector::col(int n) {
    Selector s;
    s.kind = Kind::col;
    s.n = n;
    return s;
}

Selector Selector::all() { return Selector{}; }

Selector Selector::antidiag(int m, int shift) {
    Selector s;
    s.kind = Kind::antidiag;
    s.m = m;
    s.shift = shift;
    return s;
}

Selector Selector::permdiag(const Permutation& G) {
    Selector s;
    s.kind = Kind::permdiag;
    s.g = G.images();
    return s;
}

bool Selector::matches(int j, int k) const {
    switch (kind) {
        case Kind::cell:
            return j == m && k == n;
        case Kind::row:
            return j == m;
        case Kind::col:
            return k == n;
        case Kind::all:
            return true;
        case Kind::antidiag:
            return j + k + shift == m;
        case Kind::permdiag:
            return k < static_cast<int>(g.size()) && g[k] == j;
    }
    return false;
}

std::string Selector::to_string() const {
    switch (kind) {
        case Kind::cell:
            return "x[" + std::to_string(m) + "," + std::to_string(n) + "]";
        case Kind::row:
            return "x[" + std::to_string(m) + ",k]";
        case Kind::col:
            return "x[j," + std::to_string(n) + "]";
        case Kind::all:
            return "x[j,k]";
        case Kind::antidiag: {
            std::string s = "x[j+k";
            if (shift != 0) {
                s += "+" + std::to_string(shift);
            }
            return s + "=" + std::to_string(m) + "]";
        }
        case Kind::permdiag:
            return "x[g_k,k]";
    }
    return "?";
}

Payload Payload::constant(const Ball& v) {
    Payload p;
    p.kind = Kind::constant;
    p.value = v;
    return p;
}

Payload Payload::zero() { return constant(Ball(0, 64)); }
Payload Payload::one() { return constant(Ball(1, 64)); }
Payload Payload::minus_one() { return constant(Ball(-1, 64)); }

Payload Payload::y() {
    Payload p;
    p.kind = Kind::y;
    return p;
}

Payload Payload::eta(int row_coef, int col_coef, int offset, bool use_shift) {
    Payload p;
    p.kind = Kind::eta;
    p.row_coef = row_coef;
    p.col_coef = col_coef;
    p.offset = offset;
    p.use_shift = use_shift;
    return p;
}

Payload Payload::scaled(Scale s) const {
    Payload p = *this;
    p.scale = s;
    return p;
}

std::string Payload::to_string() const {
    switch (kind) {
        case Kind::y:
            return "y";
        case Kind::constant:
            return value.mid_string(6);
        case Kind::eta:
            break;
    }
    std::vector<std::string> terms;
    if (use_shift) {
        terms.emplace_back("l");
    }
    auto add = [&](int coef, const char* name) {
        if (coef == 1) {
            terms.emplace_back(name);
        } else if (coef != 0) {
            terms.push_back(std::to_string(coef) + "*" + name);
        }
    };
    add(row_coef, "j");
    add(col_coef, "k");
    if (offset != 0 || terms.empty()) {
        terms.push_back(std::to_string(offset));
    }
    std::string e;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        e += (i && terms[i][0] != '-' ? "+" : "") + terms[i];
    }
    std::string s = "eta(" + e + ")@a";
    switch (scale) {
        case Scale::none:
            break;
        case Scale::div_col_factorial:
            s += "/k!";
            break;
        case Scale::mul_col_factorial:
            s += "*k!";
            break;
        case Scale::div_order_factorial:
            s += "/(" + e + ")!";
            break;
    }
    return s;
}

std::string CellRule::to_string() const { return sel.to_string() + "->" + payload.to_string(); }

RuleSet& RuleSet::add(Selector s, Payload p) {
    rules.push_back({std::move(s), std::move(p)});
    return *this;
}

RuleSet& RuleSet::shift_lambda(Selector s) {
    lambda_on = std::move(s);
    return *this;
}

std::string RuleSet::to_string() const {
    std::string s;
    for (std::size_t i = 0; i < rules.size(); ++i) {
        s += (i ? "; " : "") + rules[i].to_string();
    }
    if (lambda_on) {
        s += (s.empty() ? "" : "; ") + lambda_on->to_string() + "->x-lambda";
    }
    return s;
}

MatrixHP::MatrixHP(int N, Symbol s, Prec prec) : n_(N), symbol_(s), c_(N, prec), u_(N, prec) {}

bool MatrixHP::has_symbol(int j, int k) const {
    const Ball& u = u_(j, k);
    return symbol_ != Symbol::none && !(u.is_exact() && u.mid_abs_upper().is_zero());
}

const BallMatrix& MatrixHP::numeric() const {
    if (symbol_ != Symbol::none) {
        throw Error(ErrorCode::InvalidArgument, "matrix still carries a symbol");
    }
    return c_;
}

BallMatrix MatrixHP::substitute(const Ball& v) const {
    if (symbol_ == Symbol::none) {
        return c_;
    }
    BallMatrix out = c_;
    for (int j = 0; j < n_; ++j) {
        for (int k = 0; k < n_; ++k) {
            if (has_symbol(j, k)) {
                out(j, k) = c_(j, k) + u_(j, k) * v;
            }
        }
    }
    return out;
}

MatrixHP build_matrix(int N, const RuleSet& rules, const BuildEnv& env) {
    if (N < 0) {
        throw Error(ErrorCode::InvalidArgument, "matrix size must be non-negative");
    }
    bool uses_y = false;
    for (const auto& r : rules.rules) {
        uses_y = uses_y || r.payload.kind == Payload::Kind::y;
    }
    if (uses_y && rules.lambda_on) {
        throw Error(ErrorCode::InvalidArgument, "a matrix carries at most one symbol");
    }
    const Symbol sym = uses_y ? Symbol::y : (rules.lambda_on ? Symbol::lambda : Symbol::none);
    const Prec prec = env.prec;
    MatrixHP M(N, sym, prec);
    std::map<int, Ball> fact;
    auto factorial = [&](int n) -> const Ball& {
        auto it = fact.find(n);
        if (it == fact.end()) {
            it = fact.emplace(n, factorial_ball(n, prec)).first;
        }
        return it->second;
    };
    for (int j = 0; j < N; ++j) {
        for (int k = 0; k < N; ++k) {
            const CellRule* hit = nullptr;
            for (const auto& r : rules.rules) {
                if (r.sel.matches(j, k)) {
                    hit = &r;
                    break;
                }
            }
            if (!hit) {
                throw Error(ErrorCode::UncoveredCell,
                            "no rule covers cell (" + std::to_string(j) + "," + std::to_string(k) + ")");
            }
            const Payload& p = hit->payload;
            Ball v(prec);
            switch (p.kind) {
                case Payload::Kind::constant:
                    v = p.value.with_prec(prec);
                    break;
                case Payload::Kind::y:
                    M.u(j, k) = Ball(1, prec);
                    break;
                case Payload::Kind::eta: {
                    long e = p.offset + (p.use_shift ? env.l : 0);
                    if (p.row_coef != 0) {
                        e += static_cast<long>(p.row_coef) * env.rows[j];
                    }
                    if (p.col_coef != 0) {
                        e += static_cast<long>(p.col_coef) * env.cols[k];
                    }
                    if (e < 0) {
                        throw Error(ErrorCode::InvalidArgument, "negative derivative order in cell (" +
                                                                    std::to_string(j) + "," + std::to_string(k) + ")");
                    }
                    if (env.sources.empty()) {
                        throw Error(ErrorCode::InvalidArgument, "no derivative source supplied");
                    }
                    const DerivVector* src = env.sources.size() == 1 ? env.sources[0] : env.sources.at(j);
                    v = src->at(static_cast<int>(e)).with_prec(prec);
                    switch (p.scale) {
                        case Scale::none:
                            break;
                        case Scale::div_col_factorial:
                            v /= factorial(k);
                            break;
                        case Scale::mul_col_factorial:
                            v *= factorial(k);
                            break;
                        case Scale::div_order_factorial:
                            v /= factorial(static_cast<int>(e));
                            break;
                    }
                    break;
                }
            }
            M.c(j, k) = v;
            if (rules.lambda_on && rules.lambda_on->matches(j, k)) {
                M.u(j, k) = Ball(-1, prec);
            }
        }
    }
    return M;
}

// ------------------------------------------------------------ operations

Ball det(const BallMatrix& M) {
    const int N = M.size();
    if (N == 0) {
        return Ball(1, 64);
    }
    BallMatrix A = M;
    Prec prec = 64;
    for (int j = 0; j < N; ++j) {
        for (int k = 0; k < N; ++k) {
            prec = std::max(prec, A(j, k).prec());
        }
    }
    Ball d(1, prec);
    for (int c = 0; c < N; ++c) {
        int piv = -1;
        Mag best;
        bool column_zero = true;
        for (int r = c; r < N; ++r) {
            const Ball& x = A(r, c);
            if (!(x.is_exact() && x.mid_abs_upper().is_zero())) {
                column_zero = false;
            }
            const Mag m = x.mid_abs_upper();
            if (piv < 0 || compare(m, best) > 0) {
                best = m;
                piv = r;
            }
        }
        if (column_zero) {
            return Ball(0, prec);
        }
        if (A(piv, c).contains_zero()) {
            throw Error(ErrorCode::SingularUncertain, "pivot in column " + std::to_string(c) + " contains zero");
        }
        if (piv != c) {
            for (int k = c; k < N; ++k) {
                std::swap(A(piv, k), A(c, k));
            }
            d = -d;
        }
        const Ball& p = A(c, c);
        d *= p;
        const Ball inv = Ball(1, prec) / p;
        for (int r = c + 1; r < N; ++r) {
            if (A(r, c).is_exact() && A(r, c).mid_abs_upper().is_zero()) {
                continue;
            }
            const Ball f = A(r, c) * inv;
            for (int k = c + 1; k < N; ++k) {
                A(r, k) -= f * A(c, k);
            }
        }
    }
    return d;
}

Ball det(const MatrixHP& M) { return det(M.numeric()); }

PolyHP charpoly(const BallMatrix& X) { return charpoly(X, Permutation::identity(X.size())); }

PolyHP charpoly(const BallMatrix& X, const Permutation& G, int tight_upto) {
    const int N = X.size();
    if (G.size() != N) {
        throw Error(ErrorCode::InvalidArgument, "permutation size differs from matrix size");
    }
    PolyHP out;
    if (N == 0) {
        out.coeffs = {Ball(1, 64)};
        return out;
    }
    const Prec prec = X(0, 0).prec();
    const BallMatrix Y = G.is_identity() ? X : permute_rows(X, G);
    const int sg = G.sign();

    std::vector<Ball> c(N + 1, Ball(prec));
    std::vector<bool> have(N + 1, false);
    c[0] = det(Y);
    have[0] = true;
    c[N] = Ball((N % 2 == 0) ? 1 : -1, prec);
    have[N] = true;

    if (N >= 2) {
        const std::vector<double> L = estimate_charpoly_log2(midpoints(Y), prec);
        const std::vector<double> ideal = ideal_log2_radius(L);
        const int hi = (tight_upto < 0) ? N - 1 : std::clamp(tight_upto, 1, N - 1);
        const std::vector<long> radii = choose_radii(ideal, 1, hi);
        const std::vector<Ball> w = roots_of_unity(N + 1, prec);

        for (long lr : radii) {
            std::vector<Ball> vals(N + 1, Ball(prec));
            parallel_for(static_cast<std::size_t>(N + 1), [&](std::size_t t) {
                const Ball lam = w[t].mul_2exp(lr);
                BallMatrix Z = Y;
                for (int i = 0; i < N; ++i) {
                    Z(i, i) -= lam;
                }
                vals[t] = det(Z);
            });
            const Ball inv_r = Ball(1, prec).mul_2exp(-lr);
            const std::vector<Ball> got = interpolate_circle(vals, w, inv_r, prec);
            for (int n = 1; n < N; ++n) {
                if (!have[n] || compare(got[n].rad(), c[n].rad()) < 0) {
                    c[n] = got[n];
                    have[n] = true;
                }
            }
        }
    }
    for (auto& b : c) {
        out.coeffs.push_back(sg < 0 ? -b : b);
    }
    return out;
}

PolyHP det_poly(const MatrixHP& M, const Ball& rho, bool allow_uncertain) {
    const int N = M.size();
    std::vector<bool> rows(N, false);
    std::vector<bool> cols(N, false);
    if (M.symbol() != Symbol::none) {
        for (int j = 0; j < N; ++j) {
            for (int k = 0; k < N; ++k) {
                if (M.has_symbol(j, k)) {
                    rows[j] = true;
                    cols[k] = true;
                }
            }
        }
    }
    const int d = static_cast<int>(std::min(std::count(rows.begin(), rows.end(), true),
                                            std::count(cols.begin(), cols.end(), true)));
    const Prec prec = N > 0 ? M.c(0, 0).prec() : 64;
    PolyHP out;
    if (d == 0) {
        out.coeffs = {det(M.substitute(Ball(prec)))};
        return out;
    }
    if (rho.contains_zero()) {
        throw Error(ErrorCode::InvalidArgument, "interpolation radius must be nonzero");
    }
    const std::vector<Ball> w = roots_of_unity(d + 1, prec);
    std::vector<Ball> vals(d + 1, Ball(prec));
    parallel_for(static_cast<std::size_t>(d + 1), [&](std::size_t t) { vals[t] = det(M.substitute(w[t] * rho)); });
    out.coeffs = interpolate_circle(vals, w, Ball(1, prec) / rho, prec);
    if (out.coeffs.back().contains_zero()) {
        if (!allow_uncertain) {
            throw Error(ErrorCode::DegreeUncertain,
                        "leading coefficient of the degree " + std::to_string(d) + " polynomial contains zero");
        }
        out.degree_uncertain = true;
    }
    return out;
}

Ball cofactor_solve(const BallMatrix& M, int m, int n) { return cofactor_solve(M, m, n, Ball(0, 64)); }

Ball cofactor_solve(const BallMatrix& M, int m, int n, const Ball& rhs) {
    const int N = M.size();
    require_square_index(N, m, n);
    BallMatrix Z = M;
    Z(m, n) = Ball(0, M(m, n).prec());
    const Ball base = det(Z);
    Ball cof = det(M.minor(m, n));
    if ((m + n) % 2 != 0) {
        cof = -cof;
    }
    if (cof.contains_zero()) {
        throw Error(ErrorCode::CofactorVanishes,
                    "cofactor of cell (" + std::to_string(m) + "," + std::to_string(n) + ") contains zero");
    }
    return (rhs - base) / cof;
}

std::vector<Ball> poly_roots(const PolyHP& p) {
    if (p.degree_uncertain) {
        throw Error(ErrorCode::DegreeUncertain, "root finding needs a certified degree");
    }
    const int d = p.degree();
    if (d < 1) {
        throw Error(ErrorCode::InvalidArgument, "root finding needs degree >= 1");
    }
    if (p.coeffs.back().contains_zero()) {
        throw Error(ErrorCode::DegreeUncertain, "leading coefficient contains zero");
    }
    if (d == 1) {
        return {-p[0] / p[1]};
    }
    Prec prec = 64;
    for (const auto& c : p.coeffs) {
        prec = std::max(prec, c.prec());
    }
    std::vector<Cx> a;
    for (const auto& c : p.coeffs) {
        a.emplace_back(c);
    }
    auto horner = [&](const Cx& z, Cx& val, Cx& der) {
        val = a[d];
        der = Cx(prec);
        for (int n = d - 1; n >= 0; --n) {
            der = der * z + val;
            val = val * z + a[n];
        }
    };

    // Start on a circle with the geometric mean of the root moduli.
    const double lead = a[d].log2_abs();
    double l0 = a[0].log2_abs();
    if (!std::isfinite(l0)) {
        l0 = lead - 64.0 * d;
    }
    const double lr = (l0 - lead) / d;
    std::vector<Cx> z;
    for (int i = 0; i < d; ++i) {
        const double th = 2.0 * M_PI * i / d + 0.4;
        Cx u(std::cos(th), std::sin(th), prec);
        mpfr_mul_2si(u.re(), u.re(), std::lround(lr), MPFR_RNDN);
        mpfr_mul_2si(u.im(), u.im(), std::lround(lr), MPFR_RNDN);
        mpfr_mul_d(u.re(), u.re(), std::exp2(lr - std::lround(lr)), MPFR_RNDN);
        mpfr_mul_d(u.im(), u.im(), std::exp2(lr - std::lround(lr)), MPFR_RNDN);
        z.push_back(u);
    }

    constexpr int kMaxIter = 500;
    const double tiny = -static_cast<double>(prec) + 8.0;
    Cx val(prec);
    Cx der(prec);
    const Cx one(1.0, 0.0, prec);
    for (int it = 0; it < kMaxIter; ++it) {
        bool done = true;
        for (int i = 0; i < d; ++i) {
            horner(z[i], val, der);
            if (val.is_zero()) {
                continue;
            }
            if (der.is_zero()) {
                done = false;
                continue;
            }
            const Cx nw = val / der;
            Cx s(prec);
            for (int j = 0; j < d; ++j) {
                if (j != i) {
                    const Cx diff = z[i] - z[j];
                    if (!diff.is_zero()) {
                        s += one / diff;
                    }
                }
            }
            const Cx step = nw / (one - nw * s);
            z[i] -= step;
            if (step.log2_abs() > z[i].log2_abs() + tiny) {
                done = false;
            }
        }
        if (done) {
            break;
        }
    }

    // Separate coincident midpoints so that the inclusion radii stay finite.
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < i; ++j) {
            if ((z[i] - z[j]).is_zero()) {
                const double sc = z[i].is_zero() ? lr : z[i].log2_abs();
                Cx bump(0.0, 1.0, prec);
                mpfr_mul_2si(bump.im(), bump.im(), std::lround(sc - prec / 2.0) + i, MPFR_RNDN);
                z[i] += bump;
            }
        }
    }

    // Inclusion disks r_i = d |p(z_i)| / (|a_d| prod |z_i - z_j|).
    std::vector<Ball> zb;
    for (const auto& zi : z) {
        zb.push_back(zi.ball());
    }
    const Mag lead_low = p.coeffs.back().abs_lower();
    std::vector<Mag> rad(d);
    for (int i = 0; i < d; ++i) {
        Mag den = lead_low;
        for (int j = 0; j < d; ++j) {
            if (j != i) {
                den = mul_down(den, (zb[i] - zb[j]).abs_lower());
            }
        }
        const Mag num = mul_up(p.eval(zb[i]).abs_upper(), Mag::from_double_up(d));
        if (num.is_zero()) {
            rad[i] = Mag();
            continue;
        }
        if (den.is_zero() || !std::isfinite(num.log2() - den.log2())) {
            throw Error(ErrorCode::NonConvergence, "root inclusion radius is not finite");
        }
        rad[i] = div_up(num, den);
    }
    // Components of overlapping disks: each ball covers its whole component.
    std::vector<int> comp(d);
    std::iota(comp.begin(), comp.end(), 0);
    std::function<int(int)> find = [&](int x) { return comp[x] == x ? x : comp[x] = find(comp[x]); };
    auto dist_up = [&](int i, int j) { return (zb[i] - zb[j]).abs_upper(); };
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < i; ++j) {
            if (compare((zb[i] - zb[j]).abs_lower(), add_up(rad[i], rad[j])) <= 0) {
                comp[find(i)] = find(j);
            }
        }
    }
    std::vector<Ball> out;
    for (int i = 0; i < d; ++i) {
        Mag r = rad[i];
        for (int j = 0; j < d; ++j) {
            if (j != i && find(j) == find(i)) {
                r = max(r, add_up(dist_up(i, j), rad[j]));
            }
        }
        out.push_back(zb[i].with_added_rad(r));
    }
    return out;
}

}  // namespace etalab

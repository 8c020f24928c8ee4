#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "etalab/adaptive.hpp"
#include "etalab/cache.hpp"
#include "etalab/detkit.hpp"
#include "etalab/etaeval.hpp"
#include "etalab/pointsets.hpp"

namespace etalab {

// ------------------------------------------------------------ plumbing

/// Memoizing source of derivative vectors, optionally backed by a disk cache.
class DerivProvider {
public:
    explicit DerivProvider(Function f = Function::eta, std::optional<std::filesystem::path> cache_dir = std::nullopt);

    Function function() const { return function_; }

    /// f^(0..K)(point) to `digits` relative digits each.
    std::shared_ptr<const DerivVector> get(const Ball& point, int K, int digits);

    std::size_t computed() const;
    std::size_t disk_hits() const;

private:
    Function function_;
    std::optional<DerivCache> disk_;
    mutable std::mutex mu_;
    std::map<std::string, std::vector<std::shared_ptr<const DerivVector>>> memory_;
    std::size_t computed_ = 0;
    std::size_t disk_hits_ = 0;
};

/// How hard to try: the accuracy goal for the final quantity, or a single
/// attempt at a fixed working precision.
struct Session {
    DerivProvider* provider = nullptr;
    AccuracyTarget target{};
    std::optional<Prec> fixed_prec;
};

/// A result together with the accuracy it reached.
template <class T>
struct Measured {
    T value;
    double digits = 0;
    Prec prec = 0;
    bool reached = false;
};

/// Per-attempt environment: working precision and derivative access.
class Workbench {
public:
    Workbench(DerivProvider& provider, Prec prec);

    Prec prec() const { return prec_; }
    /// Decimal digits requested from the evaluator at this precision.
    int deriv_digits() const;
    /// Points of `set` regenerated with headroom over the working precision.
    std::vector<Ball> points(const PointSet& set) const;
    Ball point(const ComplexLiteral& a) const;

    std::vector<std::shared_ptr<const DerivVector>> derivs(const std::vector<Ball>& pts, int K) const;
    std::shared_ptr<const DerivVector> derivs(const Ball& a, int K) const;

private:
    DerivProvider* provider_;
    Prec prec_;
};

/// Runs `task(workbench)` at growing precision until measure(result)
/// reaches the session's goal; returns the best attempt otherwise.
/// Errors that more precision may cure are retried; if no attempt
/// produced a result the last such error is rethrown.
template <class Task, class Measure>
auto refine(const Session& s, Task&& task, Measure&& measure) -> Measured<decltype(task(std::declval<Workbench&>()))> {
    using T = decltype(task(std::declval<Workbench&>()));
    if (!s.provider) {
        throw Error(ErrorCode::InvalidArgument, "session has no derivative provider");
    }
    if (s.fixed_prec) {
        Workbench wb(*s.provider, *s.fixed_prec);
        T v = task(wb);
        const double d = measure(v);
        return {std::move(v), d, *s.fixed_prec, d >= s.target.digits};
    }
    s.target.validate();
    Prec prec = s.target.start_prec();
    std::optional<Measured<T>> best;
    std::optional<Error> last;
    double prev = -HUGE_VAL;
    bool have_prev = false;
    int flat = 0;
    for (;;) {
        bool stalled = false;
        try {
            Workbench wb(*s.provider, prec);
            T v = task(wb);
            const double d = measure(v);
            if (d >= s.target.digits) {
                return {std::move(v), d, prec, true};
            }
            flat = (have_prev && d < prev + 1.0) ? flat + 1 : 0;
            stalled = flat >= 2;
            prev = d;
            have_prev = true;
            if (!best || d > best->digits) {
                best = Measured<T>{std::move(v), d, prec, false};
            }
        } catch (const Error& e) {
            if (!is_precision_limited(e.code()) && e.code() != ErrorCode::AccuracyUnreachable) {
                throw;
            }
            last = e;
            have_prev = false;
            flat = 0;
        }
        if (stalled || prec >= s.target.max_prec_bits) {
            break;
        }
        prec = std::min(prec * 2, s.target.max_prec_bits);
    }
    if (!best) {
        throw *last;
    }
    return std::move(*best);
}

/// Decimal digits of a ball, +inf when exact.
inline double digits_of(const Ball& b) { return b.accuracy_digits(); }
double digits_of(const std::vector<Ball>& v);
double digits_of(const std::vector<std::optional<Ball>>& v);
double digits_of(const PolyHP& p);

/// |x - 1| and |x / t - 1| as real balls.
Ball dist_to_one(const Ball& x);
Ball rel_dist(const Ball& x, const Ball& t);
/// Real ball containing max_i |v_i| (v_i real non-negative balls).
Ball ball_max(const std::vector<Ball>& v);

// ---------------------------------------------------------- quantities

struct LinearSolution {
    Ball b;
    /// Derivative order d_k -> c_{d_k}, k = 1..N-1.
    std::map<int, Ball> c;
    /// The same unknowns from determinant ratios.
    Ball b_cramer;
    std::map<int, Ball> c_cramer;
    std::string set;
    std::string D;
    int l = 0;

    /// Direct solve and Cramer balls intersect for every unknown.
    bool consistent() const;
};

Measured<LinearSolution> solve_linear_family(const PointSet& A, const IndexSeq& D, int l, const Session& s);
Measured<Ball> q_ratio(const PointSet& A, const IndexSeq& D, const Session& s);
/// Q_0..Q_N; entries whose denominator coefficient is not certified
/// nonzero are empty.
Measured<std::vector<std::optional<Ball>>> qn_ratios(const PointSet& A, const Session& s);
Measured<Ball> r_value(int l, int m, int n, const PointSet& A, const Session& s);
Measured<Ball> r1y_value(const PointSet& A, int m, int n, const Session& s);

enum class SnVariant { plain, fact, antifact, taylor, minor };
SnVariant parse_sn_variant(std::string_view s);
std::string_view to_string(SnVariant v);

/// Hankel-type ratio; `F` (rows) and `D` (columns) only matter for the
/// minor variant.
Measured<Ball> s_n(const ComplexLiteral& a, int N, SnVariant variant, const Session& s,
                   const IndexSeq& D = IndexSeq(), const IndexSeq& F = IndexSeq());

/// E_{l,m,N}(a, y): y on the anti-diagonal j+k=m, otherwise eta^(l+j+k)(a).
Measured<PolyHP> e_poly(int l, int m, int N, const ComplexLiteral& a, const Session& s);

struct RootSpread {
    std::vector<Ball> roots;
    Ball target;
    /// max_i |root_i - target|.
    Ball spread;
};
Measured<RootSpread> conj2_root_spread(int l, int m, int N, const ComplexLiteral& a, const Session& s);

/// ((n-m-2)/n) E_{l,m,N,n-1} / E_{l,m,N,n}, 0 < n <= m+1.
Measured<Ball> conj3_ratio(int l, int m, int N, int n, const ComplexLiteral& a, const Session& s);

struct E1Result {
    PolyHP poly;
    std::vector<Ball> roots;
};
/// Difference of the two anti-diagonal determinants (N x N with y on
/// j+k=m, (N-1) x (N-1) with y on j+k+2=m) and its roots.
Measured<E1Result> e1_poly(int m, int N, const ComplexLiteral& a, const Session& s);

/// y with D_N(x00 -> y, eta^(j+k)) = D_{N-1}(eta^(j+k+2)).
Measured<Ball> r3eq_solution(const ComplexLiteral& a, int N, const Session& s);

/// V_n / W_n for n = 0..max_degree (all when negative).
Measured<std::vector<std::optional<Ball>>> genchar_ratios(int l, int N, const Permutation& G, const ComplexLiteral& a,
                                                          const Session& s, int max_degree = -1);
Measured<std::vector<std::optional<Ball>>> charpoly_minor_ratios(int l, int m, int n, const PointSet& A,
                                                                 const Session& s, int max_degree = -1);

struct LimitCheck {
    Ball q;
    Ball s;
    Ball diff;
};
Measured<LimitCheck> limit_check(const ComplexLiteral& a, const ComplexLiteral& eps, int N, const Session& s);

// ----------------------------------------------------------- reporting

/// One reported quantity; `delta` is |value - 1| or |value / target - 1|.
struct ResultRow {
    std::string label;
    std::optional<Ball> value;
    std::optional<Ball> target;
    std::optional<Ball> delta;
    std::string note;

    /// The delta's radius exceeds its midpoint (or the value is missing).
    bool inconclusive() const;
};

struct ExperimentResult {
    std::string name;
    std::vector<std::pair<std::string, std::string>> params;
    std::vector<ResultRow> rows;
    double digits = 0;
    Prec prec = 0;
    bool reached = false;
    double seconds = 0;

    bool inconclusive() const;
};

struct ExperimentParams {
    std::optional<ComplexLiteral> a;
    std::optional<std::string> set;
    std::optional<int> N, l, m, n;
    std::optional<std::string> variant;
    std::optional<std::pair<int, int>> perm;
    std::set<int> drop_d, drop_f;
    std::optional<ComplexLiteral> eps;
    std::optional<int> max_degree;
};

/// Names accepted by run_experiment.
const std::vector<std::string>& experiment_names();

/// Dispatches by name; UsageError for unknown names or missing parameters.
ExperimentResult run_experiment(const std::string& name, const ExperimentParams& p, const Session& s);

}  // namespace etalab

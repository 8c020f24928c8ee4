#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>

#include "etalab/ball.hpp"

namespace etalab {

/// Requested certified relative accuracy and the precision cap for reaching it.
struct AccuracyTarget {
    int digits = 20;
    Prec max_prec_bits = Prec{1} << 18;

    AccuracyTarget() = default;
    AccuracyTarget(int d, Prec cap = Prec{1} << 18) : digits(d), max_prec_bits(cap) { validate(); }

    void validate() const {
        if (digits < 1) {
            throw Error(ErrorCode::InvalidArgument, "accuracy target needs digits >= 1");
        }
        if (max_prec_bits < 64 || max_prec_bits > kMaxPrec) {
            throw Error(ErrorCode::InvalidArgument, "max_prec_bits must lie in [64, 2^26]");
        }
    }

    /// 64 + ceil(3.33 * digits) bits, clamped to the cap.
    Prec start_prec() const {
        const auto p = static_cast<Prec>(64 + std::ceil(3.33 * digits));
        return std::min(p, max_prec_bits);
    }

    /// Bits of relative accuracy the target corresponds to.
    Prec goal_bits() const { return digits_to_bits(digits); }
};

class AccuracyUnreachable : public Error {
public:
    AccuracyUnreachable(const std::string& what, double achieved, std::optional<Ball> best)
        : Error(ErrorCode::AccuracyUnreachable, what), achieved_(achieved), best_(std::move(best)) {}

    double achieved_digits() const { return achieved_; }
    const std::optional<Ball>& best() const { return best_; }

private:
    double achieved_;
    std::optional<Ball> best_;
};

namespace detail {
inline std::optional<Ball> as_best(const Ball& b) { return b; }
template <class R>
std::optional<Ball> as_best(const R&) { return std::nullopt; }
}  // namespace detail

/// Runs `task(prec)` at the start precision and then at doubled
/// precisions until `measure(result)` (achieved decimal digits) reaches
/// the target.  Precision-limited errors thrown by the task trigger a
/// retry; once the cap is hit the best result is reported through
/// AccuracyUnreachable, or the last error is rethrown when no attempt
/// produced a result.  Two successive attempts that each gain less than one
/// digit end the search early: the inputs' own radii are then the limit.
template <class Task, class Measure>
auto adaptive_eval_with(Task&& task, Measure&& measure, const AccuracyTarget& target)
    -> decltype(task(Prec{})) {
    using Result = decltype(task(Prec{}));
    target.validate();
    Prec prec = target.start_prec();
    std::optional<Result> best;
    double best_digits = -INFINITY;
    std::optional<Error> last_error;
    double prev_digits = -INFINITY;
    int flat = 0;
    bool stalled = false;
    for (;;) {
        try {
            Result r = task(prec);
            const double got = measure(r);
            if (got >= target.digits) {
                return r;
            }
            flat = got < prev_digits + 1.0 ? flat + 1 : 0;
            stalled = flat >= 2;
            prev_digits = got;
            if (!best || got > best_digits) {
                best_digits = got;
                best.emplace(std::move(r));
            }
        } catch (const Error& e) {
            if (!is_precision_limited(e.code())) {
                throw;
            }
            last_error = e;
            prev_digits = -INFINITY;
            flat = 0;
        }
        if (stalled || prec >= target.max_prec_bits) {
            break;
        }
        prec = std::min(prec * 2, target.max_prec_bits);
    }
    if (!best) {
        throw *last_error;
    }
    const std::string where = stalled ? "no gain at " + std::to_string(prec) + " bits (inputs too coarse)"
                                      : "at the precision cap of " + std::to_string(target.max_prec_bits) + " bits";
    throw AccuracyUnreachable("reached " + std::to_string(best_digits) + " of " + std::to_string(target.digits) +
                                  " digits, " + where,
                              best_digits, detail::as_best(*best));
}

/// Adaptive evaluation of a single ball-valued computation.
template <class Task>
Ball adaptive_eval(Task&& task, const AccuracyTarget& target) {
    return adaptive_eval_with(std::forward<Task>(task), [](const Ball& b) { return b.accuracy_digits(); }, target);
}

}  // namespace etalab

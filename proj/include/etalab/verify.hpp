#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "etalab/experiments.hpp"

namespace etalab {

enum class CheckStatus { pass, fail, inconclusive };
std::string_view to_string(CheckStatus s);

/// Outcome of one verification check, with the data it was decided on.
struct Check {
    std::string id;
    std::string title;
    CheckStatus status = CheckStatus::pass;
    std::string detail;
    std::vector<ExperimentResult> results;
};

/// Worst status first: fail, then inconclusive, then pass.
CheckStatus combine(CheckStatus a, CheckStatus b);

// Reference point sets: a 2x3 grid and a 12-point circle.
inline constexpr const char* kGridSet = "grid:-2.5+5i;2+1i;1+2i;2;3";
inline constexpr const char* kCircleSet = "circle:0.5+7i;3+2i;12";

/// Q for both sets against the printed constants, |difference| < 1e-19.
Check check_reference_constants(const Session& s);
/// All 1584 R(l,m,n) ratios of both sets within 1e-7 of their targets.
Check check_r_bound(const Session& s);
/// Exact algebraic identities of the determinant engine.
Check check_engine_identities(const Session& s);
/// |S_N - 1| at 0.4+17i strictly decreasing over N = 5, 10, 20, 30 and
/// agreeing with the frozen ladder.
Check check_sn_trend(const Session& s);
/// conj3 ratios at N = high within 1e-2 and below their N = 30 values.
Check check_conj3_trend(const Session& s, int high = 50);
/// Minor variants decreasing over N = 10, 20, 30.
Check check_minor_trend(const Session& s);
/// Generalized characteristic polynomial ratios decreasing over N = 10, 20, 30.
Check check_genchar_trend(const Session& s);
/// First-order behaviour of the coalescing progression limit.
Check check_limit(const Session& s);
/// Euler-Maclaurin and direct evaluations intersect order by order.
Check check_evaluators(const Session& s, std::uint64_t seed = 2024, int count = 20, int K = 30);

/// "paper", "engine", "trends".
const std::vector<std::string>& suite_names();
/// UsageError for unknown suites or a target below 10 digits.
std::vector<Check> run_suite(std::string_view suite, const Session& s);

}  // namespace etalab

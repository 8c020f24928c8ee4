#pragma once

#include <string_view>
#include <vector>

#include "etalab/adaptive.hpp"
#include "etalab/ball.hpp"

namespace etalab {

enum class Function { eta, zeta };
enum class Method { euler_maclaurin, direct_accelerated, via_relation };

std::string_view to_string(Function f);
std::string_view to_string(Method m);
Function parse_function(std::string_view s);
Method parse_method(std::string_view s);

/// Largest derivative order any evaluator accepts.
inline constexpr int kMaxOrder = 256;

/// Taylor coefficients of f(center + x) up to x^order.
struct TruncatedSeries {
    Ball center;
    std::vector<Ball> coeffs;

    int order() const { return static_cast<int>(coeffs.size()) - 1; }
    /// f^(k)(center) = k! c_k.
    Ball derivative(int k) const;
    std::vector<Ball> derivatives() const;
};

/// Derivatives f^(0..K)(point) of eta or zeta, each certified to
/// `digits` relative decimal digits.
class DerivVector {
public:
    /// Throws InvalidArgument if a value misses the stated accuracy.
    DerivVector(Ball point, std::vector<Ball> values, Function function, Method method, int digits);

    const Ball& point() const { return point_; }
    const std::vector<Ball>& values() const { return values_; }
    int order() const { return static_cast<int>(values_.size()) - 1; }
    Function function() const { return function_; }
    Method method() const { return method_; }
    int digits() const { return digits_; }

    /// Value of order k; MissingDerivative beyond the stored order.
    const Ball& at(int k) const;

    /// Smallest certified accuracy over all orders, in decimal digits.
    double min_accuracy_digits() const;

private:
    Ball point_;
    std::vector<Ball> values_;
    Function function_;
    Method method_;
    int digits_;
};

/// Euler-Maclaurin expansion of zeta(a + x) to order K.
TruncatedSeries zeta_series_em(const Ball& a, int K, const AccuracyTarget& target);

/// Production path for eta^(k)(a): zeta series times the series of
/// 1 - 2^(1-s); falls back to the direct method close to s = 1.
DerivVector eta_derivs(const Ball& a, int K, const AccuracyTarget& target);

/// Alternating Dirichlet series with Chebyshev acceleration; Re a > 0.
DerivVector eta_derivs_direct(const Ball& a, int K, const AccuracyTarget& target);

/// zeta^(k)(a) from eta^(k)(a) by Leibniz inversion of eta = (1 - 2^(1-s)) zeta.
DerivVector zeta_from_eta(const DerivVector& v);

/// zeta^(k)(a) straight from the Euler-Maclaurin series.
DerivVector zeta_derivs(const Ball& a, int K, const AccuracyTarget& target);

/// Dispatch on the function kind, using the production method of each.
DerivVector derivs(Function f, const Ball& a, int K, const AccuracyTarget& target);

namespace kernel {

/// Single-precision evaluations; the relative truncation tolerance is
/// tied to `prec` so that retries at higher precision also lengthen the sums.
TruncatedSeries zeta_series_em(const Ball& a, int K, Prec prec);
std::vector<Ball> eta_em(const Ball& a, int K, Prec prec);
std::vector<Ball> eta_direct(const Ball& a, int K, Prec prec);

/// Coefficients of 1 - 2^(1-a-x) to order K.
std::vector<Ball> eta_factor_series(const Ball& a, int K, Prec prec);

}  // namespace kernel

}  // namespace etalab

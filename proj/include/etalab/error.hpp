#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace etalab {

enum class ErrorCode {
    DivisorContainsZero,
    LogOnBranchCut,
    PrecisionOverflow,
    AccuracyUnreachable,
    PoleProximity,
    DomainError,
    FactorVanishes,
    CacheCorrupt,
    DegenerateSet,
    UncoveredCell,
    MissingDerivative,
    SingularUncertain,
    DegreeUncertain,
    CofactorVanishes,
    NonConvergence,
    NotCoprime,
    SingularSystem,
    DenominatorVanishes,
    CoefficientVanishes,
    UsageError,
    IoError,
    InvalidArgument,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

// Errors that may disappear when the same computation is repeated at a
// higher working precision.
inline bool is_precision_limited(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::DivisorContainsZero:
    case ErrorCode::SingularUncertain:
    case ErrorCode::DegreeUncertain:
    case ErrorCode::CofactorVanishes:
    case ErrorCode::DenominatorVanishes:
    case ErrorCode::CoefficientVanishes:
    case ErrorCode::FactorVanishes:
    case ErrorCode::SingularSystem:
    case ErrorCode::NonConvergence:
    case ErrorCode::LogOnBranchCut:
        return true;
    default:
        return false;
    }
}

}  // namespace etalab

#include "etalab/error.hpp"

namespace etalab {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::DivisorContainsZero: return "DivisorContainsZero";
    case ErrorCode::LogOnBranchCut: return "LogOnBranchCut";
    case ErrorCode::PrecisionOverflow: return "PrecisionOverflow";
    case ErrorCode::AccuracyUnreachable: return "AccuracyUnreachable";
    case ErrorCode::PoleProximity: return "PoleProximity";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::FactorVanishes: return "FactorVanishes";
    case ErrorCode::CacheCorrupt: return "CacheCorrupt";
    case ErrorCode::DegenerateSet: return "DegenerateSet";
    case ErrorCode::UncoveredCell: return "UncoveredCell";
    case ErrorCode::MissingDerivative: return "MissingDerivative";
    case ErrorCode::SingularUncertain: return "SingularUncertain";
    case ErrorCode::DegreeUncertain: return "DegreeUncertain";
    case ErrorCode::CofactorVanishes: return "CofactorVanishes";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::NotCoprime: return "NotCoprime";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::DenominatorVanishes: return "DenominatorVanishes";
    case ErrorCode::CoefficientVanishes: return "CoefficientVanishes";
    case ErrorCode::UsageError: return "UsageError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

}  // namespace etalab

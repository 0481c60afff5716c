#include "cofkit/error.hpp"

namespace cofkit {

const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::NonSymmetric: return "NonSymmetric";
        case ErrorCode::ZeroAxis: return "ZeroAxis";
        case ErrorCode::NonConvergence: return "NonConvergence";
        case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
        case ErrorCode::IdenticalVariants: return "IdenticalVariants";
        case ErrorCode::DegenerateAxis: return "DegenerateAxis";
        case ErrorCode::FractionOutOfRange: return "FractionOutOfRange";
        case ErrorCode::SingularGradient: return "SingularGradient";
        case ErrorCode::NoSolution: return "NoSolution";
        case ErrorCode::ZeroShear: return "ZeroShear";
        case ErrorCode::NoTwoFoldAxis: return "NoTwoFoldAxis";
        case ErrorCode::NotACofactorTwin: return "NotACofactorTwin";
        case ErrorCode::DomainViolation: return "DomainViolation";
        case ErrorCode::RankOneViolation: return "RankOneViolation";
        case ErrorCode::CC1Violated: return "CC1Violated";
        case ErrorCode::DegenerateD: return "DegenerateD";
        case ErrorCode::WellsIncompatible: return "WellsIncompatible";
        case ErrorCode::HypothesisViolated: return "HypothesisViolated";
        case ErrorCode::UnknownMaterial: return "UnknownMaterial";
        case ErrorCode::InvalidInput: return "InvalidInput";
    }
    return "Unknown";
}

}  // namespace cofkit

#pragma once

#include <stdexcept>
#include <string>

namespace cofkit {

enum class ErrorCode {
    NonSymmetric,
    ZeroAxis,
    NonConvergence,
    NotPositiveDefinite,
    IdenticalVariants,
    DegenerateAxis,
    FractionOutOfRange,
    SingularGradient,
    NoSolution,
    ZeroShear,
    NoTwoFoldAxis,
    NotACofactorTwin,
    DomainViolation,
    RankOneViolation,
    CC1Violated,
    DegenerateD,
    WellsIncompatible,
    HypothesisViolated,
    UnknownMaterial,
    InvalidInput,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

}  // namespace cofkit

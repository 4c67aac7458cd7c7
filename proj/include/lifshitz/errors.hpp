#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lifshitz {

enum class ErrorCode {
    // caller supplied something outside the operation's domain
    DomainError,
    ModelMismatch,
    DegenerateModel,
    NonHermitianObservable,
    OnPole,
    BranchPointError,
    DenominatorZero,
    DivergentFreeEnergy,
    InvalidArgument,
    // numerics failed to deliver the requested accuracy
    ZeroFrequencyLine,
    IntegratorDivergence,
    NonlinearRegime,
    UnresolvedRoot,
    UnwrapError,
    ContourTooClose,
    NonPositiveD,
    StepUnderflow,
    NoConvergence,
    NoSignChange,
    OscillatoryDivergence,
};

std::string_view error_name(ErrorCode code);

// Validation errors map to CLI exit status 2, numerical ones to 3.
bool is_numerical(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

}  // namespace lifshitz

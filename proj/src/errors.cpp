#include "lifshitz/errors.hpp"

namespace lifshitz {

std::string_view error_name(ErrorCode code)
{
    switch (code) {
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::ModelMismatch: return "ModelMismatch";
    case ErrorCode::DegenerateModel: return "DegenerateModel";
    case ErrorCode::NonHermitianObservable: return "NonHermitianObservable";
    case ErrorCode::OnPole: return "OnPole";
    case ErrorCode::BranchPointError: return "BranchPointError";
    case ErrorCode::DenominatorZero: return "DenominatorZero";
    case ErrorCode::DivergentFreeEnergy: return "DivergentFreeEnergy";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ZeroFrequencyLine: return "ZeroFrequencyLine";
    case ErrorCode::IntegratorDivergence: return "IntegratorDivergence";
    case ErrorCode::NonlinearRegime: return "NonlinearRegime";
    case ErrorCode::UnresolvedRoot: return "UnresolvedRoot";
    case ErrorCode::UnwrapError: return "UnwrapError";
    case ErrorCode::ContourTooClose: return "ContourTooClose";
    case ErrorCode::NonPositiveD: return "NonPositiveD";
    case ErrorCode::StepUnderflow: return "StepUnderflow";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::NoSignChange: return "NoSignChange";
    case ErrorCode::OscillatoryDivergence: return "OscillatoryDivergence";
    }
    return "Unknown";
}

bool is_numerical(ErrorCode code)
{
    switch (code) {
    case ErrorCode::ZeroFrequencyLine:
    case ErrorCode::IntegratorDivergence:
    case ErrorCode::NonlinearRegime:
    case ErrorCode::UnresolvedRoot:
    case ErrorCode::UnwrapError:
    case ErrorCode::ContourTooClose:
    case ErrorCode::NonPositiveD:
    case ErrorCode::StepUnderflow:
    case ErrorCode::NoConvergence:
    case ErrorCode::NoSignChange:
    case ErrorCode::OscillatoryDivergence:
        return true;
    default:
        return false;
    }
}

}  // namespace lifshitz

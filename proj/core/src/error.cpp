#include "dbarcone/error.hpp"

namespace dbarcone {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::ZeroPolynomial: return "ZeroPolynomial";
    case ErrorCode::NonHomogeneous: return "NonHomogeneous";
    case ErrorCode::NotOnVariety: return "NotOnVariety";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::ConvergedToSingular: return "ConvergedToSingular";
    case ErrorCode::SingularOverlap: return "SingularOverlap";
    case ErrorCode::SingularAnchor: return "SingularAnchor";
    case ErrorCode::PivotTooSmall: return "PivotTooSmall";
    case ErrorCode::ImplicitFunctionFailure: return "ImplicitFunctionFailure";
    case ErrorCode::OutsideChartDomain: return "OutsideChartDomain";
    case ErrorCode::NewtonDivergence: return "NewtonDivergence";
    case ErrorCode::NotInChart: return "NotInChart";
    case ErrorCode::NotACone: return "NotACone";
    case ErrorCode::ZeroScaleWithWeight: return "ZeroScaleWithWeight";
    case ErrorCode::InsufficientSamples: return "InsufficientSamples";
    case ErrorCode::ProjectionFailure: return "ProjectionFailure";
    case ErrorCode::UnsupportedVariety: return "UnsupportedVariety";
    case ErrorCode::StepTooSmall: return "StepTooSmall";
  }
  return "Unknown";
}

}  // namespace dbarcone

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dbarcone {

enum class ErrorCode {
  InvalidArgument,
  DimensionMismatch,
  ZeroPolynomial,
  NonHomogeneous,
  NotOnVariety,
  NoConvergence,
  ConvergedToSingular,
  SingularOverlap,
  SingularAnchor,
  PivotTooSmall,
  ImplicitFunctionFailure,
  OutsideChartDomain,
  NewtonDivergence,
  NotInChart,
  NotACone,
  ZeroScaleWithWeight,
  InsufficientSamples,
  ProjectionFailure,
  UnsupportedVariety,
  StepTooSmall,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Exception carrying a machine-readable code. Every failure raised by the
/// library is an `Error`.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace dbarcone

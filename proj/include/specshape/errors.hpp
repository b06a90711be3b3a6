#pragma once

#include <stdexcept>
#include <string>

namespace specshape {

enum class ErrorCode {
  InvalidArgument,
  NonStarShaped,
  FitResidualTooLarge,
  DegenerateTriangle,
  NotConverged,
  DegenerateEigenvalue,
  TailTooLarge,
  StepTooSmall,
  ConfigError,
};

const char* to_string(ErrorCode code);

/// Library error carrying a machine-readable category.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace specshape

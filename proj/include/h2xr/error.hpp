#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace h2xr {

enum class ErrorCode {
  kNonUnitTangent,
  kOutOfDomain,
  kBadCurvatureFunction,
  kBaseMismatch,
  kInsufficientSamples,
  kDivergenceNotReached,
  kDegenerateInput,
  kNonUnitCurve,
  kNotImmersed,
  kNotParabolic,
  kDegenerateDirection,
  kPlanarSample,
  kEmptyIntersection,
  kNonFinite,
  kInvalidArgument,
  kBadConfig,
};

std::string_view error_code_name(ErrorCode code);
// Inverse of error_code_name; kInvalidArgument for unknown names.
ErrorCode error_code_from_name(std::string_view name);

// All library failures are reported through this exception type; the code
// is what callers (tests, the CLI exit-code mapping) dispatch on.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace h2xr

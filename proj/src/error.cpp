#include "h2xr/error.hpp"

namespace h2xr {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNonUnitTangent: return "NON_UNIT_TANGENT";
    case ErrorCode::kOutOfDomain: return "OUT_OF_DOMAIN";
    case ErrorCode::kBadCurvatureFunction: return "BAD_CURVATURE_FUNCTION";
    case ErrorCode::kBaseMismatch: return "BASE_MISMATCH";
    case ErrorCode::kInsufficientSamples: return "INSUFFICIENT_SAMPLES";
    case ErrorCode::kDivergenceNotReached: return "DIVERGENCE_NOT_REACHED";
    case ErrorCode::kDegenerateInput: return "DEGENERATE_INPUT";
    case ErrorCode::kNonUnitCurve: return "NON_UNIT_CURVE";
    case ErrorCode::kNotImmersed: return "NOT_IMMERSED";
    case ErrorCode::kNotParabolic: return "NOT_PARABOLIC";
    case ErrorCode::kDegenerateDirection: return "DEGENERATE_DIRECTION";
    case ErrorCode::kPlanarSample: return "PLANAR_SAMPLE";
    case ErrorCode::kEmptyIntersection: return "EMPTY_INTERSECTION";
    case ErrorCode::kNonFinite: return "NON_FINITE";
    case ErrorCode::kInvalidArgument: return "INVALID_ARGUMENT";
    case ErrorCode::kBadConfig: return "BAD_CONFIG";
  }
  return "UNKNOWN";
}

ErrorCode error_code_from_name(std::string_view name) {
  for (int i = 0; i <= static_cast<int>(ErrorCode::kBadConfig); ++i) {
    const auto code = static_cast<ErrorCode>(i);
    if (error_code_name(code) == name) return code;
  }
  return ErrorCode::kInvalidArgument;
}

}  // namespace h2xr

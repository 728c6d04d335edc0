#pragma once

// Asymptotic lines through parabolic points and their diagnostics.

#include <string_view>
#include <vector>

#include "h2xr/curvature.hpp"

namespace h2xr {

enum class StopReason { kMaxLength, kDomainEdge, kStepFailure, kPlanarHit };

std::string_view stop_reason_name(StopReason r);

struct TraceSample {
  double s{0.0};
  double u{0.0}, v{0.0};
  ProdPoint P;
  double k2{0.0};
  double H{0.0};
  double lambda{0.0};  // <D_{e2} e2, e1>
  ProdVec e1, e2, e3;  // trace direction, other principal direction, normal
};

struct TraceRecord {
  std::vector<TraceSample> samples;
  double step{0.0};
  StopReason stop_reason{StopReason::kMaxLength};  // the more severe end
  StopReason stop_backward{StopReason::kMaxLength};
  StopReason stop_forward{StopReason::kMaxLength};
};

struct TraceOptions {
  double length{5.0};  // total, split evenly between the two directions
  double step{1e-3};
  double tol{1e-7};    // planar threshold
};

// Integrates the unit asymptotic direction field in chart coordinates by
// RK4, in both directions from (u0, v0). Throws kNotParabolic unless the
// start is parabolic, kDegenerateDirection when |k2| - |k1| < 10 tol there.
TraceRecord trace_asymptotic(const Surface& s, double u0, double v0, const TraceOptions& opt = {});

struct GeodesicDeviation {
  double max_dev{0.0};
  double at_s{0.0};
};

// Max product distance between the samples and the exact geodesic leaving
// the first sample along its e1.
GeodesicDeviation geodesic_deviation(const TraceRecord& tr);

struct FrameResiduals {
  double lambda_ode{0.0};  // max |lambda' - lambda^2|
  double k2_ode{0.0};      // max |k2' - lambda k2|
  double de2{0.0};         // max |D e2 / ds|
  double de3{0.0};         // max |D e3 / ds|
};

// Central differences along the samples; needs at least five.
FrameResiduals frame_ode_residuals(const TraceRecord& tr);

struct AffineFit {
  double a{0.0};
  double b{0.0};
  double rms_residual{0.0};
  int n{0};
};

// Least squares 1/H(s) = a s + b. Throws kPlanarSample when some |k2| < tol
// and kInsufficientSamples below three samples.
AffineFit fit_inverse_H(const TraceRecord& tr, double tol = 1e-7);

}  // namespace h2xr

#pragma once

// Minkowski space R^{2,1} and the hyperboloid model of the hyperbolic plane.
//
// Signature (-,+,+); H2 is the upper sheet {<x,x> = -1, x0 > 0}. Tangent
// vectors at p are the w with <w,p> = 0; they are spacelike.

#include <cmath>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "h2xr/error.hpp"

namespace h2xr {

struct SpacetimeVec {
  double x0{0.0};
  double x1{0.0};
  double x2{0.0};

  SpacetimeVec& operator+=(const SpacetimeVec& o) {
    x0 += o.x0;
    x1 += o.x1;
    x2 += o.x2;
    return *this;
  }
  SpacetimeVec& operator-=(const SpacetimeVec& o) {
    x0 -= o.x0;
    x1 -= o.x1;
    x2 -= o.x2;
    return *this;
  }
  SpacetimeVec& operator*=(double s) {
    x0 *= s;
    x1 *= s;
    x2 *= s;
    return *this;
  }

  bool finite() const {
    return std::isfinite(x0) && std::isfinite(x1) && std::isfinite(x2);
  }
  // Euclidean size of the coordinate triple, used only to scale tolerances.
  double coord_norm() const { return std::sqrt(x0 * x0 + x1 * x1 + x2 * x2); }

  friend SpacetimeVec operator+(SpacetimeVec a, const SpacetimeVec& b) { return a += b; }
  friend SpacetimeVec operator-(SpacetimeVec a, const SpacetimeVec& b) { return a -= b; }
  friend SpacetimeVec operator-(const SpacetimeVec& a) { return {-a.x0, -a.x1, -a.x2}; }
  friend SpacetimeVec operator*(double s, SpacetimeVec a) { return a *= s; }
  friend SpacetimeVec operator*(SpacetimeVec a, double s) { return a *= s; }
  friend SpacetimeVec operator/(SpacetimeVec a, double s) { return a *= (1.0 / s); }
  friend bool operator==(const SpacetimeVec&, const SpacetimeVec&) = default;
};

double minkowski_inner(const SpacetimeVec& a, const SpacetimeVec& b);

// a ⊠ b, characterized by <a ⊠ b, c> = det(a, b, c).
SpacetimeVec minkowski_cross(const SpacetimeVec& a, const SpacetimeVec& b);

// sqrt(max(0, <w,w>)): the length of a spacelike vector.
double spacelike_norm(const SpacetimeVec& w);

class H2Point {
 public:
  // Validates the sheet condition; throws kInvalidArgument otherwise.
  explicit H2Point(const SpacetimeVec& v);

  static H2Point origin() { return H2Point(SpacetimeVec{1.0, 0.0, 0.0}); }
  // Rescales a timelike vector onto the upper sheet.
  static H2Point normalized(const SpacetimeVec& v);

  const SpacetimeVec& v() const { return v_; }

 private:
  struct Unchecked {};
  H2Point(const SpacetimeVec& v, Unchecked) : v_(v) {}
  SpacetimeVec v_;
};

class H2Tangent {
 public:
  // Validates <w, base> = 0; throws kInvalidArgument otherwise.
  H2Tangent(const H2Point& base, const SpacetimeVec& w);

  const H2Point& base() const { return base_; }
  const SpacetimeVec& w() const { return w_; }
  double norm() const { return spacelike_norm(w_); }

 private:
  H2Point base_;
  SpacetimeVec w_;
};

// w + <w,p> p: the tangential part of an ambient vector.
H2Tangent h2_project_tangent(const H2Point& p, const SpacetimeVec& w);
SpacetimeVec tangential_part(const H2Point& p, const SpacetimeVec& w);

// cosh(s) p + sinh(s) v for unit v; throws kNonUnitTangent otherwise.
H2Point h2_exp(const H2Point& p, const H2Tangent& v, double s);
// Velocity of the same geodesic at parameter s.
SpacetimeVec h2_exp_velocity(const H2Point& p, const H2Tangent& v, double s);

double h2_dist(const H2Point& p, const H2Point& q);

// Unit tangent at p pointing towards q (q != p).
H2Tangent h2_log_direction(const H2Point& p, const H2Point& q);

// ---------------------------------------------------------------------------
// Sampled unit-speed curves.

struct CurveSample {
  double s;
  H2Point p;
  SpacetimeVec T;  // unit tangent
  double kg;       // signed geodesic curvature w.r.t. n = T ⊠ p
};

struct CurvePoint {
  H2Point p;
  SpacetimeVec T;
  SpacetimeVec n;
  double kg;
};

enum class CurveInterpolation {
  // One Runge-Kutta substep of the Frenet system from the nearest sample,
  // using the stored curvature function. Exact to integrator precision.
  kFrenet,
  // Quintic Hermite through (p, T, kg n + p) at the samples, reprojected.
  kHermite,
};

using CurvatureFunction = std::function<double(double)>;

class H2Curve {
 public:
  // Samples must have strictly increasing s and unit speed (|<T,T>-1| < 1e-8).
  // kFrenet requires a curvature function.
  H2Curve(std::vector<CurveSample> samples, CurveInterpolation rule,
          CurvatureFunction curvature = {});

  const std::vector<CurveSample>& samples() const { return samples_; }
  CurveInterpolation rule() const { return rule_; }
  double s_min() const { return samples_.front().s; }
  double s_max() const { return samples_.back().s; }

  // Evaluates the curve at arclength s. Evaluation slightly outside the
  // sampled range (up to one sample spacing) is permitted so that
  // finite-difference stencils can straddle the ends.
  CurvePoint at(double s) const;

  bool extends_to(double s) const;

 private:
  CurvePoint frenet_at(double s) const;
  CurvePoint hermite_at(double s) const;

  std::vector<CurveSample> samples_;
  CurveInterpolation rule_;
  CurvatureFunction curvature_;
  double slack_{0.0};
  struct HermiteCoords;
  std::shared_ptr<const HermiteCoords> hermite_;
};

// The unit normal n = T ⊠ p used for signed geodesic curvature throughout.
SpacetimeVec curve_normal(const H2Point& p, const SpacetimeVec& T);

// Covariant derivative of a field sampled at the curve samples, evaluated at
// the sample nearest to s with a three-point difference. Throws
// kOutOfDomain unless s lies strictly inside the sampled range.
H2Tangent h2_covariant_deriv(const H2Curve& curve, std::span<const SpacetimeVec> field,
                             double s);

// Covariant derivative of a continuous field along the curve, by a central
// difference with step 1e-5 (1 + |s|).
H2Tangent h2_covariant_deriv(const H2Curve& curve,
                             const std::function<SpacetimeVec(double)>& field, double s);

// <D_T T, n> measured by h2_covariant_deriv on the velocity field.
double measured_geodesic_curvature(const H2Curve& curve, double s);

struct FrenetStart {
  H2Point p = H2Point::origin();
  SpacetimeVec T{0.0, 1.0, 0.0};
};

// Integrates alpha' = T, T' = kg n + alpha, n' = -kg T over [s_lo, s_hi] by
// classical RK4, re-projecting onto the constraint set after every step.
// The step is shrunk so that it divides the interval evenly.
H2Curve curve_from_curvature(const CurvatureFunction& kg, double s_lo, double s_hi,
                             double step, const FrenetStart& start = {});

}  // namespace h2xr

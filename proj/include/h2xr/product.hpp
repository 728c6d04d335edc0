#pragma once

// The product H2 x R with metric dsigma^2 = dzeta^2 + dt^2.

#include <span>

#include "h2xr/hyperbolic.hpp"

namespace h2xr {

struct ProdPoint {
  H2Point h = H2Point::origin();
  double t{0.0};
};

// Ambient vector of R^{2,1} x R; no tangency requirement.
struct ProdVec {
  SpacetimeVec h;
  double t{0.0};

  friend ProdVec operator+(const ProdVec& a, const ProdVec& b) { return {a.h + b.h, a.t + b.t}; }
  friend ProdVec operator-(const ProdVec& a, const ProdVec& b) { return {a.h - b.h, a.t - b.t}; }
  friend ProdVec operator*(double s, const ProdVec& a) { return {s * a.h, s * a.t}; }
  friend bool operator==(const ProdVec&, const ProdVec&) = default;
};

class ProdTangent {
 public:
  ProdTangent(const ProdPoint& base, const SpacetimeVec& vh, double vt);

  const ProdPoint& base() const { return base_; }
  const H2Tangent& vh() const { return vh_; }
  double vt() const { return vt_; }
  ProdVec vec() const { return {vh_.w(), vt_}; }

 private:
  ProdPoint base_;
  H2Tangent vh_;
  double vt_;
};

// Throws kBaseMismatch when the tangents live at different points.
double prod_metric(const ProdTangent& u, const ProdTangent& v);

// Metric applied to ambient vectors at a point, no tangency checks.
double prod_inner(const ProdVec& a, const ProdVec& b);
double prod_norm(const ProdVec& a);

// Tangential projection of the horizontal part; height unchanged.
ProdVec prod_project(const ProdPoint& p, const ProdVec& w);

struct ProdGeodesic {
  ProdPoint p0;
  SpacetimeVec dir;  // unit horizontal direction, zero for vertical lines
  double a_h{0.0};   // horizontal speed, >= 0
  double a_v{0.0};   // vertical speed; a_h^2 + a_v^2 = 1

  ProdPoint at(double s) const;
  ProdVec velocity(double s) const;
};

// Requires unit v (within 1e-9); throws kNonUnitTangent otherwise.
ProdGeodesic prod_geodesic(const ProdTangent& v);
ProdPoint prod_exp(const ProdPoint& p, const ProdTangent& v, double s);

double prod_dist(const ProdPoint& p, const ProdPoint& q);

// Max over interior samples of the covariant acceleration of a sampled
// path, with arclength taken from consecutive product distances. Needs at
// least five samples (kInsufficientSamples).
double prod_geodesic_residual(std::span<const ProdPoint> path);

struct H2Geodesic {
  H2Point p;
  SpacetimeVec v;  // unit tangent at p

  H2Point at(double s) const;
  // Unit normal of the plane through the origin cutting out the geodesic.
  SpacetimeVec plane_normal() const;
};

struct DivergenceReport {
  double s_star;  // parameter on g1, negative when found in that direction
  double achieved_distance;
  double target;
};

// Distance from x to g([-reach, reach]) by Brent minimization.
double distance_to_segment(const H2Point& x, const H2Geodesic& g, double reach);

// Scans g1(s) outward in both directions, |s| <= s_max, for the first point
// at distance >= target from g2([-s_max, s_max]).
DivergenceReport verify_geodesic_divergence(const H2Geodesic& g1, const H2Geodesic& g2,
                                            double target, double s_max);

}  // namespace h2xr

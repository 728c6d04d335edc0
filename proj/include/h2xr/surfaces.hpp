#pragma once

// Parametric surfaces in H2 x R with second-order jets, and the preset
// catalog (cylinders, slices, height graphs, perturbations).

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "h2xr/hyperbolic.hpp"
#include "h2xr/product.hpp"

namespace h2xr {

struct ChartDomain {
  double u_lo{0.0}, u_hi{1.0};
  double v_lo{0.0}, v_hi{1.0};

  double width() const { return u_hi - u_lo; }
  double height() const { return v_hi - v_lo; }
  double u_mid() const { return 0.5 * (u_lo + u_hi); }
  double v_mid() const { return 0.5 * (v_lo + v_hi); }
  bool contains(double u, double v) const;
  // Distance from (u,v) to the nearest edge, negative outside.
  double edge_distance(double u, double v) const;
  // Throws kInvalidArgument unless both intervals are nonempty and finite.
  void validate() const;
};

struct SurfaceJet {
  ProdPoint X;
  ProdVec Xu, Xv;
  ProdVec Xuu, Xuv, Xvv;
};

enum class DerivativeMode { kAnalytic, kFiniteDifference };

using PointMap = std::function<ProdPoint(double, double)>;
using JetMap = std::function<SurfaceJet(double, double)>;

class Surface {
 public:
  static constexpr double kDefaultFdStep = 1e-4;

  static Surface analytic(std::string label, ChartDomain domain, JetMap jets);
  // Central differences of the point map with the given step; horizontal
  // first derivatives are re-projected onto the tangent space.
  static Surface finite_difference(std::string label, ChartDomain domain, PointMap points,
                                   double step = kDefaultFdStep);

  // Checked evaluation: kOutOfDomain outside the domain, kNonFinite on NaN or
  // infinite output, kNotImmersed when E G - F^2 <= 1e-12.
  SurfaceJet jet(double u, double v) const;
  // Same evaluation without the domain and immersion checks. Used by
  // stencils that straddle the boundary by a fraction of their step.
  SurfaceJet jet_unchecked(double u, double v) const;
  ProdPoint point(double u, double v) const;

  const ChartDomain& domain() const { return domain_; }
  DerivativeMode mode() const { return mode_; }
  double fd_step() const { return fd_step_; }
  const std::string& label() const { return label_; }

  // Arclength-parametrized generating curve, present on cylinders (not on
  // transformed charts of them).
  const std::optional<H2Curve>& generating_curve() const { return generating_curve_; }
  Surface with_generating_curve(H2Curve curve) const;
  Surface with_label(std::string label) const;
  // Restriction to a nonempty subdomain; kInvalidArgument otherwise.
  Surface with_domain(const ChartDomain& sub) const;

 private:
  Surface() = default;

  std::string label_;
  ChartDomain domain_;
  DerivativeMode mode_{DerivativeMode::kAnalytic};
  double fd_step_{0.0};
  JetMap jets_;
  PointMap points_;
  std::optional<H2Curve> generating_curve_;
};

// Unit normal in the product metric. Orientation: expressed in the oriented
// frame (b1, p ⊠ b1, d/dt) the normal is the cross product of Xu and Xv,
// flipped so that nu > 0 whenever |nu| > 0.1.
ProdVec unit_normal(const SurfaceJet& jet);

// ---------------------------------------------------------------------------
// Presets.

// X(u,v) = (alpha(u), v) for v in v_range. Throws kNonUnitCurve when a sample
// of alpha is not unit speed.
Surface make_cylinder(const H2Curve& alpha, double v_lo = -5.0, double v_hi = 5.0,
                      DerivativeMode mode = DerivativeMode::kAnalytic);

// The same cylinder in the chart (u, v) -> (alpha(u + amp sin v), v), where
// the rulings are curved chart lines. u is shrunk by |amp| at both ends.
Surface make_sheared_cylinder(const H2Curve& alpha, double amp, double v_lo = -5.0, double v_hi = 5.0);

// Geodesic polar chart (r, theta) of H2 x {t0}, r in [1e-3, radius].
Surface make_slice(double t0, double radius);

enum class GraphChart {
  kPolar,  // (r, theta) -> cosh r o + sinh r (cos theta, sin theta)
  kFermi,  // (u, v) -> (cosh v cosh u, cosh v sinh u, sinh v)
};

struct HeightJet {
  double f{0.0}, fu{0.0}, fv{0.0}, fuu{0.0}, fuv{0.0}, fvv{0.0};
};
using HeightFunction = std::function<HeightJet(double, double)>;

HeightFunction bilinear_height(double coef);  // coef u v
HeightFunction linear_height(double a);       // a u

Surface make_graph(const HeightFunction& f, GraphChart chart, const ChartDomain& domain,
                   DerivativeMode mode = DerivativeMode::kAnalytic);
ChartDomain default_graph_domain(GraphChart chart);

using Bump = std::function<double(double, double)>;

// Gaussian centered on the domain with widths one quarter of its extent.
Bump gaussian_bump(const ChartDomain& domain);

// Pushes every point a distance eps * bump(u,v) along the base unit normal
// (on slices this is the height). Jets by finite differences; eps = 0
// returns the base unchanged.
Surface perturb(const Surface& base, double eps, const Bump& bump);

struct ChartTransform {
  double su{1.0}, sv{1.0};  // new coordinates are scaled by these
  double angle{0.0};        // rotation of the chart about the domain center
};

// Reparametrizes the chart: (U, V) = S R(-angle) ((u, v) - c) + S c. With a
// nonzero angle the domain is shrunk so that it stays inside the original.
Surface transform_chart(const Surface& base, const ChartTransform& tr);

// ---------------------------------------------------------------------------
// Curvature profiles for generating curves.

CurvatureFunction constant_curvature(double k);
CurvatureFunction linear_curvature(double k0, double k1);  // k0 + k1 s
// Cubic B-spline interpolating values at s0 + i h.
CurvatureFunction spline_curvature(double s0, double h, std::vector<double> values);

// The five generating curves of the cylinder corpus.
enum class CylinderPreset { kGeodesic, kCircle, kHorocycle, kSpline, kInflection };

struct CurveProfile {
  CurvatureFunction kg;
  double s_lo{0.0}, s_hi{1.0};
};

CurveProfile cylinder_profile(CylinderPreset preset);
std::string_view preset_name(CylinderPreset preset);
const std::vector<CylinderPreset>& all_cylinder_presets();

// Generating curves are integrated with step 1e-3.
Surface make_preset_cylinder(CylinderPreset preset,
                             DerivativeMode mode = DerivativeMode::kAnalytic);

}  // namespace h2xr

#pragma once

// Pointwise extrinsic and intrinsic geometry of surfaces in H2 x R.

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "h2xr/surfaces.hpp"

namespace h2xr {

struct FundamentalForms {
  double E{0.0}, F{0.0}, G{0.0};
  double L{0.0}, M2{0.0}, N2{0.0};
  ProdVec normal;
  double nu{0.0};  // <normal, d/dt>
};

FundamentalForms forms_from_jet(const SurfaceJet& jet);
// Throws kOutOfDomain / kNotImmersed / kNonFinite from the surface.
FundamentalForms fundamental_forms(const Surface& s, double u, double v);
// Opposite orientation: normal, second form and nu negated.
FundamentalForms flipped(const FundamentalForms& f);

// First-form coefficients on the 5x5 grid (u + (i-2)h, v + (j-2)h).
struct MetricStencil {
  double h{0.0};
  std::array<std::array<double, 5>, 5> E{}, F{}, G{};
};

// Default spacing 1e-3, halved distance to the boundary when closer;
// throws kOutOfDomain if that leaves less than 1e-5.
MetricStencil metric_stencil(const Surface& s, double u, double v);

// Gaussian curvature from E, F, G and their derivatives alone.
double brioschi_curvature(const MetricStencil& st);

using ChartDir = std::array<double, 2>;

struct ShapeData {
  double k1{0.0}, k2{0.0};  // |k1| <= |k2|
  ChartDir d1{}, d2{};      // first-form orthonormal principal directions
  double H{0.0};
  double Kext{0.0};
  double Kint_gauss{0.0};
  double Kint_brioschi{0.0};
  double nu{0.0};
};

// Eigen-decomposition of I^-1 II. d1 belongs to k1 and has a positive
// dominant component; d2 is its first-form orthogonal complement.
ShapeData shape_data(const FundamentalForms& f, double kint_brioschi);
ShapeData shape_data(const FundamentalForms& f, const MetricStencil& st);
ShapeData shape_at(const Surface& s, double u, double v);

enum class PointTag { kPlanar, kParabolic, kGeneric };

struct PointClass {
  PointTag tag;
  double tol;
};

PointClass classify_point(const ShapeData& sd, double tol);
std::string_view point_tag_name(PointTag tag);

struct CurvatureRow {
  double u{0.0}, v{0.0};
  ShapeData shape;
  PointTag cls{PointTag::kGeneric};
  std::string status;  // "ok" or an error code name
  bool ok() const { return status == "ok"; }
};

// Cell centers lo + (i + 1/2) (hi - lo) / n.
std::vector<double> cell_centers(double lo, double hi, int n);

// Row-major over v then u: row index iv * nu + iu. Failures at single
// points are recorded in the status column. Rows are computed on up to
// `jobs` threads.
std::vector<CurvatureRow> curvature_grid(const Surface& s, int n_u, int n_v, double tol,
                                         int jobs = 1);

// Runs fn(i) for i in [0, n) on up to `jobs` threads, rethrowing the first
// exception.
void parallel_for(int n, int jobs, const std::function<void(int)>& fn);

}  // namespace h2xr

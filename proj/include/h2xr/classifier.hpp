#pragma once

// Cylinder detection from flatness data: flatness scan, planar set,
// rulings, generating curve and the final verdict.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "h2xr/curvature.hpp"
#include "h2xr/flows.hpp"

namespace h2xr {

struct ClassifierConfig {
  double flatness{1e-6};
  double verticality{1e-6};
  double planar{1e-7};
  int grid{21};  // odd, so a zero of k_g at the chart center lands on a cell center
  int seeds{10};
  double trace_length{5.0};
  double trace_step{1e-3};
  int recover_samples{401};
  int jobs{1};
};

struct FlatnessReport {
  double max_abs_Kint{0.0};
  double max_abs_Kext{0.0};
  int n_u{0}, n_v{0};
  double tol{0.0};
  bool pass() const { return max_abs_Kint < tol && max_abs_Kext < tol; }
};

// Maxima of |Kint_gauss| and |Kext| over a grid. Rethrows the error of the
// first failed row.
FlatnessReport flatness_from_grid(const std::vector<CurvatureRow>& rows, int n_u, int n_v, double tol);
// n >= 8 or kInvalidArgument.
FlatnessReport flatness_scan(const Surface& s, int n, double tol, double planar_tol = 1e-7, int jobs = 1);

struct PlanarComponent {
  std::vector<int> cells;  // row-major indices
  int iu_lo{0}, iu_hi{0}, iv_lo{0}, iv_hi{0};
  double u_lo{0.0}, u_hi{0.0}, v_lo{0.0}, v_hi{0.0};  // bounding cell edges
  bool spans_v{false};
};

struct PlanarSetMap {
  int n_u{0}, n_v{0};
  std::vector<double> us, vs;
  std::vector<PointTag> cls;  // row-major over v then u
  std::vector<PlanarComponent> components;

  PointTag at(int iu, int iv) const { return cls[static_cast<std::size_t>(iv * n_u + iu)]; }
  int count(PointTag tag) const;
};

PlanarSetMap planar_set_map(const std::vector<CurvatureRow>& rows, int n_u, int n_v, const ChartDomain& d);
PlanarSetMap planar_set_map(const Surface& s, int n, double tol, int jobs = 1);

// At least min_count parabolic cell centers (fewer only if fewer exist),
// spread by farthest-point sampling in normalized chart coordinates.
std::vector<ChartDir> select_seeds(const PlanarSetMap& map, const ChartDomain& d, int count);

struct Ruling {
  TraceRecord trace;
  double verticality{0.0};
  double max_dev{0.0};
};

// Max h2_dist between each sample's footprint and the footprint at s = 0.
double ruling_verticality(const TraceRecord& tr);

std::vector<Ruling> extract_rulings(const Surface& s, const std::vector<ChartDir>& seeds,
                                    const TraceOptions& opt, int jobs = 1);

// Intersection of the chart with the height t0, found along v for n values
// of u; the longest contiguous run of hits becomes a unit-speed curve.
// Throws kEmptyIntersection when fewer than five values of u hit.
H2Curve recover_generating_curve(const Surface& s, double t0, int n);

// Symmetric Hausdorff distance in h2_dist, with continuous minimization
// along each curve.
double hausdorff_distance(const H2Curve& a, const H2Curve& b);

// Max h2_dist between a(s) and b(s + shift) over the common range, where
// the shift puts a's start on its nearest point of b.
double aligned_gap(const H2Curve& a, const H2Curve& b);

enum class Verdict { kCylinder, kNotFlat, kInconsistent };

std::string_view verdict_name(Verdict v);

struct CylinderVerdict {
  Verdict verdict{Verdict::kInconsistent};
  double ruling_verticality{0.0};
  std::optional<H2Curve> generating_curve;
  double t0{0.0};
  FlatnessReport flatness;
  PlanarSetMap planar;
  std::vector<Ruling> rulings;
  std::vector<std::string> diagnostics;
};

// Numerical failures of the surface itself (kNonFinite and friends) are
// thrown; everything else is carried by the verdict.
CylinderVerdict classify_surface(const Surface& s, const ClassifierConfig& cfg = {});

}  // namespace h2xr

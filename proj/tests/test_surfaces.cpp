#include <cmath>
#include <numbers>

#include "doctest.h"
#include "h2xr/curvature.hpp"
#include "h2xr/surfaces.hpp"
#include "support.hpp"

using namespace h2xr;
using h2xr::testing::coth;
using h2xr::testing::Sampler;

namespace {

double coord_gap(const ProdVec& a, const ProdVec& b) {
  return std::max((a.h - b.h).coord_norm(), std::abs(a.t - b.t));
}

void check_jets_agree(const Surface& exact, const Surface& fd, Sampler& rng, int probes) {
  const ChartDomain& d = exact.domain();
  for (int k = 0; k < probes; ++k) {
    const double u = rng.uniform(d.u_lo + 0.05 * d.width(), d.u_hi - 0.05 * d.width());
    const double v = rng.uniform(d.v_lo + 0.05 * d.height(), d.v_hi - 0.05 * d.height());
    const SurfaceJet a = exact.jet(u, v), b = fd.jet(u, v);
    CHECK(coord_gap(a.Xu, b.Xu) < 1e-6);
    CHECK(coord_gap(a.Xv, b.Xv) < 1e-6);
    CHECK(coord_gap(a.Xuu, b.Xuu) < 1e-4);
    CHECK(coord_gap(a.Xuv, b.Xuv) < 1e-4);
    CHECK(coord_gap(a.Xvv, b.Xvv) < 1e-4);
  }
}

}  // namespace

TEST_CASE("cylinder charts have exact vertical structure") {
  for (CylinderPreset p : all_cylinder_presets()) {
    const Surface s = make_preset_cylinder(p);
    CHECK(s.generating_curve().has_value());
    const auto us = cell_centers(s.domain().u_lo, s.domain().u_hi, 13);
    for (double u : us) {
      for (double v : {-4.0, 0.0, 2.5}) {
        const SurfaceJet j = s.jet(u, v);
        CHECK(j.Xuv == ProdVec{});
        CHECK(j.Xvv == ProdVec{});
        CHECK(prod_inner(j.Xv, j.Xv) == 1.0);
        CHECK(j.X.t == v);
        CHECK(std::abs(minkowski_inner(j.Xu.h, j.X.h.v())) < 1e-8);
      }
    }
  }
}

TEST_CASE("cylinder over a geodesic is the vertical plane through it") {
  const Surface s = make_preset_cylinder(CylinderPreset::kGeodesic);
  const H2Point o = H2Point::origin();
  // Synthesis starts at the origin at the low end of the arclength range.
  for (double u : {-1.5, 0.0, 0.7}) {
    const SurfaceJet j = s.jet(u, 1.0);
    CHECK(h2_dist(j.X.h, h2_exp(o, H2Tangent(o, {0, 1, 0}), u - s.domain().u_lo)) < 1e-9);
  }
}

TEST_CASE("finite-difference jets agree with analytic jets") {
  Sampler rng(3);
  const auto circle = cylinder_profile(CylinderPreset::kCircle);
  const H2Curve alpha = curve_from_curvature(circle.kg, circle.s_lo, circle.s_hi, 1e-3);
  check_jets_agree(make_cylinder(alpha), make_cylinder(alpha, -5, 5, DerivativeMode::kFiniteDifference),
                   rng, 30);
  for (GraphChart chart : {GraphChart::kPolar, GraphChart::kFermi}) {
    const ChartDomain d = default_graph_domain(chart);
    check_jets_agree(make_graph(bilinear_height(0.3), chart, d),
                     make_graph(bilinear_height(0.3), chart, d, DerivativeMode::kFiniteDifference), rng,
                     30);
  }
}

TEST_CASE("slice and graph-of-zero jets") {
  const Surface slice = make_slice(0.0, 2.0);
  const Surface graph = make_graph(bilinear_height(0.0), GraphChart::kPolar, slice.domain());
  for (double r : {0.1, 1.0, 1.9}) {
    for (double th : {0.3, 3.0, 6.0}) {
      const SurfaceJet a = slice.jet(r, th), b = graph.jet(r, th);
      CHECK(coord_gap(a.Xu, b.Xu) == 0.0);
      CHECK(coord_gap(a.Xvv, b.Xvv) == 0.0);
      CHECK(h2_dist(a.X.h, H2Point::origin()) == doctest::Approx(r).epsilon(1e-12));
    }
  }
}

TEST_CASE("immersion holds at probe points of every preset") {
  Sampler rng(8);
  std::vector<Surface> presets;
  for (CylinderPreset p : all_cylinder_presets()) presets.push_back(make_preset_cylinder(p));
  presets.push_back(make_slice(0.0, 2.0));
  presets.push_back(make_graph(bilinear_height(0.3), GraphChart::kFermi, default_graph_domain(GraphChart::kFermi)));
  presets.push_back(make_graph(linear_height(0.5), GraphChart::kFermi, default_graph_domain(GraphChart::kFermi)));
  for (const Surface& s : presets) {
    const ChartDomain& d = s.domain();
    for (int k = 0; k < 50; ++k) {
      const SurfaceJet j = s.jet(rng.uniform(d.u_lo, d.u_hi), rng.uniform(d.v_lo, d.v_hi));
      const double E = prod_inner(j.Xu, j.Xu), F = prod_inner(j.Xu, j.Xv), G = prod_inner(j.Xv, j.Xv);
      CHECK(E * G - F * F > 1e-12);
    }
  }
}

TEST_CASE("evaluation errors") {
  const Surface s = make_slice(0.0, 2.0);
  try {
    s.jet(3.0, 0.0);
    FAIL("expected OUT_OF_DOMAIN");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kOutOfDomain);
  }
  const Surface broken = Surface::analytic("broken", {0, 1, 0, 1}, [](double u, double v) {
    SurfaceJet j;
    j.X = {H2Point::origin(), u > 0.5 ? std::nan("") : v};
    j.Xu = {{0, 1, 0}, 0};
    j.Xv = {{}, 1};
    return j;
  });
  CHECK_NOTHROW(broken.jet(0.25, 0.5));
  try {
    broken.jet(0.75, 0.5);
    FAIL("expected NON_FINITE");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNonFinite);
  }
  const Surface folded = Surface::analytic("folded", {0, 1, 0, 1}, [](double, double) {
    SurfaceJet j;
    j.Xu = {{0, 1, 0}, 0};
    j.Xv = {{0, 2, 0}, 0};
    return j;
  });
  try {
    folded.jet(0.5, 0.5);
    FAIL("expected NOT_IMMERSED");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNotImmersed);
  }
  CHECK_THROWS_AS(make_slice(0.0, 1e-4), Error);
  CHECK_THROWS_AS(Surface::analytic("empty", {1, 1, 0, 1}, {}), Error);
}

TEST_CASE("non-unit generating curves are rejected") {
  std::vector<CurveSample> samples = {
      {0.0, H2Point::origin(), {0, 1, 0}, 0.0},
      {1.0, H2Point::origin(), {0, 2, 0}, 0.0},
  };
  try {
    H2Curve bad(samples, CurveInterpolation::kHermite);
    make_cylinder(bad);
    FAIL("expected NON_UNIT_CURVE");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNonUnitCurve);
  }
}

TEST_CASE("unit normal is orthogonal, unit and oriented") {
  Sampler rng(12);
  const Surface g = make_graph(bilinear_height(0.3), GraphChart::kFermi, default_graph_domain(GraphChart::kFermi));
  for (int k = 0; k < 50; ++k) {
    const SurfaceJet j = g.jet(rng.uniform(-1, 1), rng.uniform(-1, 1));
    const ProdVec n = unit_normal(j);
    CHECK(std::abs(prod_inner(n, n) - 1.0) < 1e-9);
    CHECK(std::abs(prod_inner(n, j.Xu)) < 1e-9);
    CHECK(std::abs(prod_inner(n, j.Xv)) < 1e-9);
    CHECK(std::abs(minkowski_inner(n.h, j.X.h.v())) < 1e-9);
    if (std::abs(n.t) > 0.1) CHECK(n.t > 0.0);
  }
  // On cylinders the normal is the curve normal T ⊠ p.
  const Surface c = make_preset_cylinder(CylinderPreset::kCircle);
  const SurfaceJet j = c.jet(1.0, 0.0);
  const ProdVec n = unit_normal(j);
  CHECK((n.h - curve_normal(j.X.h, j.Xu.h)).coord_norm() < 1e-12);
  CHECK(n.t == 0.0);
}

TEST_CASE("perturbation") {
  const Surface base = make_preset_cylinder(CylinderPreset::kCircle);
  const Surface same = perturb(base, 0.0, gaussian_bump(base.domain()));
  for (double u : {0.5, 3.0}) {
    const SurfaceJet a = base.jet(u, 1.0), b = same.jet(u, 1.0);
    CHECK(coord_gap(a.Xuu, b.Xuu) == 0.0);
    CHECK(a.X.h.v() == b.X.h.v());
  }
  CHECK(same.mode() == DerivativeMode::kAnalytic);

  const double eps = 1e-2;
  const Surface bumped = perturb(base, eps, gaussian_bump(base.domain()));
  CHECK(bumped.mode() == DerivativeMode::kFiniteDifference);
  const double uc = base.domain().u_mid(), vc = base.domain().v_mid();
  // The center moves by eps along the normal; far corners barely move.
  CHECK(prod_dist(bumped.point(uc, vc), base.point(uc, vc)) == doctest::Approx(eps).epsilon(1e-9));
  CHECK(prod_dist(bumped.point(0.01, -4.9), base.point(0.01, -4.9)) < 1e-5);

  const Surface slice = make_slice(0.0, 2.0);
  const Surface raised = perturb(slice, eps, gaussian_bump(slice.domain()));
  const ProdPoint top = raised.point(slice.domain().u_mid(), slice.domain().v_mid());
  CHECK(top.t == doctest::Approx(eps).epsilon(1e-12));
  CHECK_THROWS_AS(perturb(base, -1.0, gaussian_bump(base.domain())), Error);
}

TEST_CASE("chart transforms") {
  const Surface base = make_preset_cylinder(CylinderPreset::kSpline);
  const Surface scaled = transform_chart(base, {2.0, 3.0, 0.0});
  CHECK(scaled.domain().u_lo == doctest::Approx(2.0 * base.domain().u_lo));
  CHECK(scaled.domain().v_hi == doctest::Approx(3.0 * base.domain().v_hi));
  const SurfaceJet a = base.jet(0.4, 1.2), b = scaled.jet(0.8, 3.6);
  CHECK(prod_dist(a.X, b.X) < 1e-12);
  CHECK(coord_gap(0.5 * a.Xu, b.Xu) < 1e-15);
  CHECK(coord_gap((1.0 / 3.0) * a.Xv, b.Xv) < 1e-15);

  const Surface turned = transform_chart(base, {1.0, 1.0, std::numbers::pi / 6});
  const ChartDomain& d = turned.domain();
  CHECK(d.width() < base.domain().width());
  Sampler rng(4);
  for (int k = 0; k < 50; ++k) {
    const SurfaceJet j = turned.jet(rng.uniform(d.u_lo, d.u_hi), rng.uniform(d.v_lo, d.v_hi));
    CHECK(j.X.t >= base.domain().v_lo);
    CHECK(j.X.t <= base.domain().v_hi);
  }
}

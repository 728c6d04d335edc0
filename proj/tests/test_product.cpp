#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "h2xr/product.hpp"
#include "support.hpp"

using namespace h2xr;
using h2xr::testing::coth;
using h2xr::testing::Sampler;

namespace {

const ProdPoint kBase{H2Point::origin(), 0.0};

std::vector<ProdPoint> sample(const ProdGeodesic& g, double s0, double s1, double step) {
  std::vector<ProdPoint> out;
  const int n = static_cast<int>(std::lround((s1 - s0) / step));
  for (int i = 0; i <= n; ++i) out.push_back(g.at(s0 + i * step));
  return out;
}

ProdTangent random_unit(Sampler& rng, const ProdPoint& p) {
  const double angle = rng.uniform(0.0, std::numbers::pi);
  const H2Tangent dir = rng.unit_tangent(p.h);
  return ProdTangent(p, std::sin(angle) * dir.w(), std::cos(angle));
}

}  // namespace

TEST_CASE("product metric examples") {
  const ProdTangent up(kBase, {}, 1.0);
  const ProdTangent flat(kBase, {0, 1, 0}, 0.0);
  CHECK(prod_metric(up, up) == 1.0);
  CHECK(prod_metric(flat, up) == 0.0);
  const ProdTangent mixed(kBase, {0, std::sqrt(0.5), 0}, std::sqrt(0.5));
  CHECK(prod_metric(mixed, mixed) == doctest::Approx(1.0).epsilon(1e-15));

  const ProdTangent elsewhere(ProdPoint{H2Point::origin(), 1.0}, {}, 1.0);
  try {
    prod_metric(up, elsewhere);
    FAIL("expected BASE_MISMATCH");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kBaseMismatch);
  }
}

TEST_CASE("product exponential examples") {
  const ProdPoint top = prod_exp(kBase, ProdTangent(kBase, {}, 1.0), 3.0);
  CHECK(top.h.v() == kBase.h.v());
  CHECK(top.t == 3.0);

  const ProdPoint side = prod_exp(kBase, ProdTangent(kBase, {0, 1, 0}, 0.0), 1.0);
  CHECK(side.h.v() == h2_exp(kBase.h, H2Tangent(kBase.h, {0, 1, 0}), 1.0).v());
  CHECK(side.t == 0.0);

  const double r = std::sqrt(0.5);
  const ProdPoint diag = prod_exp(kBase, ProdTangent(kBase, {0, r, 0}, r), std::sqrt(2.0));
  CHECK(diag.h.v().x0 == doctest::Approx(std::cosh(1.0)).epsilon(1e-14));
  CHECK(diag.h.v().x1 == doctest::Approx(std::sinh(1.0)).epsilon(1e-14));
  CHECK(diag.h.v().x2 == 0.0);
  CHECK(diag.t == doctest::Approx(1.0).epsilon(1e-15));

  try {
    prod_exp(kBase, ProdTangent(kBase, {0, 1, 0}, 1.0), 1.0);
    FAIL("expected NON_UNIT_TANGENT");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNonUnitTangent);
  }
}

TEST_CASE("product distance examples") {
  CHECK(prod_dist(kBase, kBase) == 0.0);
  CHECK(prod_dist(kBase, ProdPoint{kBase.h, 2.0}) == 2.0);
  const H2Point q = h2_exp(kBase.h, H2Tangent(kBase.h, {0, 0, 1}), 3.0);
  CHECK(prod_dist(kBase, ProdPoint{q, 4.0}) == doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("product geodesics are unit speed and split") {
  Sampler rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    const ProdPoint p{rng.point(2.0), rng.uniform(-3, 3)};
    const ProdTangent v = random_unit(rng, p);
    const ProdGeodesic g = prod_geodesic(v);
    CHECK(g.a_h >= 0.0);
    CHECK(std::abs(g.a_h * g.a_h + g.a_v * g.a_v - 1.0) < 1e-12);
    for (int k = 0; k < 10; ++k) {
      const double s1 = rng.uniform(-5, 5);
      const double s2 = s1 + rng.uniform(-1e-3, 1e-3);
      CHECK(std::abs(prod_dist(g.at(s1), g.at(s2)) - std::abs(s1 - s2)) < 1e-8);
      // Horizontal part follows the H2 geodesic at speed a_h; height is affine.
      const ProdPoint x = g.at(s1);
      if (g.a_h > 0.0) {
        const H2Point expect = h2_exp(p.h, H2Tangent(p.h, v.vh().w() / g.a_h), g.a_h * s1);
        CHECK(h2_dist(x.h, expect) < 1e-9);
      }
      CHECK(x.t == doctest::Approx(p.t + g.a_v * s1).epsilon(1e-14));
    }
  }
}

TEST_CASE("geodesic residual examples") {
  const double r = std::sqrt(0.5);
  const ProdGeodesic tilted = prod_geodesic(ProdTangent(kBase, {0, r, 0}, r));
  CHECK(prod_geodesic_residual(sample(tilted, 0.0, 2.0, 1e-3)) < 1e-6);

  const ProdGeodesic vertical = prod_geodesic(ProdTangent(kBase, {}, 1.0));
  CHECK(prod_geodesic_residual(sample(vertical, 0.0, 2.0, 1.0 / 256)) < 1e-12);

  const double k = coth(1.0);
  const auto circle = curve_from_curvature([k](double) { return k; }, 0.0, 3.0, 1e-3);
  std::vector<ProdPoint> ring;
  for (const auto& smp : circle.samples()) ring.push_back({smp.p, 0.0});
  CHECK(prod_geodesic_residual(ring) == doctest::Approx(1.3130353).epsilon(1e-6));

  try {
    prod_geodesic_residual(std::vector<ProdPoint>(4, kBase));
    FAIL("expected INSUFFICIENT_SAMPLES");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kInsufficientSamples);
  }
}

TEST_CASE("geodesic residual converges under refinement") {
  // The second difference of cosh/sinh samples is a multiple of the point,
  // so exact geodesics give roundoff-level residuals at any step.
  Sampler rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    const ProdPoint p{rng.point(1.0), 0.0};
    const ProdGeodesic g = prod_geodesic(random_unit(rng, p));
    const double coarse = prod_geodesic_residual(sample(g, 0.0, 2.0, 0.1));
    const double fine = prod_geodesic_residual(sample(g, 0.0, 2.0, 0.05));
    CHECK((fine <= coarse / 3.0 || coarse < 1e-12));
    CHECK(fine < 1e-12);
  }
  // On a circle the error of the measured curvature is second order.
  const double k = coth(1.0);
  const auto circle = curve_from_curvature([k](double) { return k; }, 0.0, 3.0, 1e-3);
  const auto ring_error = [&](int stride) {
    std::vector<ProdPoint> ring;
    const auto& smp = circle.samples();
    for (std::size_t i = 0; i < smp.size(); i += stride) ring.push_back({smp[i].p, 0.0});
    return std::abs(prod_geodesic_residual(ring) - k);
  };
  CHECK(ring_error(50) <= ring_error(100) / 3.0);
  CHECK(ring_error(25) <= ring_error(50) / 3.0);
}

TEST_CASE("divergence of orthogonal geodesics") {
  const H2Geodesic g1{kBase.h, {0, 1, 0}};
  const H2Geodesic g2{kBase.h, {0, 0, 1}};
  const DivergenceReport rep = verify_geodesic_divergence(g1, g2, 5.0, 10.0);
  CHECK(rep.s_star <= 6.0);
  CHECK(rep.achieved_distance >= 5.0);
  // The foot of the perpendicular from g1(s) is the common point.
  CHECK(std::abs(rep.s_star) == doctest::Approx(5.0).epsilon(1e-6));
}

TEST_CASE("identical geodesics are rejected") {
  const H2Geodesic g1{kBase.h, {0, 1, 0}};
  const H2Geodesic same_reversed{g1.at(2.0), -h2_exp_velocity(kBase.h, H2Tangent(kBase.h, {0, 1, 0}), 2.0)};
  for (const auto& g2 : {g1, same_reversed}) {
    try {
      verify_geodesic_divergence(g1, g2, 1.0, 10.0);
      FAIL("expected DEGENERATE_INPUT");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kDegenerateInput);
    }
  }
}

TEST_CASE("ultraparallel geodesics at distance one diverge") {
  const H2Geodesic g1{kBase.h, {0, 1, 0}};
  const H2Point q = h2_exp(kBase.h, H2Tangent(kBase.h, {0, 0, 1}), 1.0);
  const H2Geodesic g2{q, {0, 1, 0}};
  CHECK(distance_to_segment(kBase.h, g2, 5.0) == doctest::Approx(1.0).epsilon(1e-9));
  const DivergenceReport rep = verify_geodesic_divergence(g1, g2, 10.0, 20.0);
  CHECK(rep.achieved_distance >= 10.0);
  // Distance to the whole geodesic is asinh|<x, N>|, never larger than to a piece of it.
  const H2Point x = g1.at(rep.s_star);
  CHECK(std::asinh(std::abs(minkowski_inner(x.v(), g2.plane_normal()))) <= rep.achieved_distance + 1e-9);

  CHECK_THROWS_AS(verify_geodesic_divergence(g1, g2, 10.0, 3.0), Error);
}

TEST_CASE("segment distance matches the closed form when the foot is inside") {
  Sampler rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    const H2Point p = rng.point(1.0);
    const H2Geodesic g{p, rng.unit_tangent(p).w()};
    const H2Point x = rng.point(2.0);
    const double exact = std::asinh(std::abs(minkowski_inner(x.v(), g.plane_normal())));
    CHECK(distance_to_segment(x, g, 10.0) == doctest::Approx(exact).epsilon(1e-7));
  }
}

TEST_CASE("random distinct geodesic pairs reach the target") {
  Sampler rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    const H2Point p1 = rng.point(2.0), p2 = rng.point(2.0);
    const H2Geodesic g1{p1, rng.unit_tangent(p1).w()};
    const H2Geodesic g2{p2, rng.unit_tangent(p2).w()};
    const double target = rng.uniform(1.0, 20.0);
    const DivergenceReport rep = verify_geodesic_divergence(g1, g2, target, target + 25.0);
    CHECK(rep.achieved_distance >= target);
    CHECK(std::abs(rep.s_star) <= target + 25.0);
  }
}

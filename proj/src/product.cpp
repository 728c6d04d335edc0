#include "h2xr/product.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <boost/math/tools/minima.hpp>

namespace h2xr {

namespace {

constexpr double kUnitTol = 1e-9;
constexpr double kScanStep = 0.25;

bool same_point(const ProdPoint& a, const ProdPoint& b) {
  const double scale = 1.0 + a.h.v().coord_norm();
  return (a.h.v() - b.h.v()).coord_norm() <= 1e-12 * scale &&
         std::abs(a.t - b.t) <= 1e-12 * (1.0 + std::abs(a.t));
}

}  // namespace

ProdTangent::ProdTangent(const ProdPoint& base, const SpacetimeVec& vh, double vt)
    : base_(base), vh_(base.h, vh), vt_(vt) {
  if (!std::isfinite(vt)) throw Error(ErrorCode::kNonFinite, "vertical component is not finite");
}

double prod_metric(const ProdTangent& u, const ProdTangent& v) {
  if (!same_point(u.base(), v.base())) {
    throw Error(ErrorCode::kBaseMismatch, "tangent vectors have different base points");
  }
  return minkowski_inner(u.vh().w(), v.vh().w()) + u.vt() * v.vt();
}

double prod_inner(const ProdVec& a, const ProdVec& b) {
  return minkowski_inner(a.h, b.h) + a.t * b.t;
}

double prod_norm(const ProdVec& a) { return std::sqrt(std::max(0.0, prod_inner(a, a))); }

ProdVec prod_project(const ProdPoint& p, const ProdVec& w) {
  return {tangential_part(p.h, w.h), w.t};
}

ProdPoint ProdGeodesic::at(double s) const {
  if (a_h > 0.0) return {h2_exp(p0.h, H2Tangent(p0.h, dir), s * a_h), p0.t + s * a_v};
  return {p0.h, p0.t + s * a_v};
}

ProdVec ProdGeodesic::velocity(double s) const {
  if (a_h > 0.0) return {a_h * h2_exp_velocity(p0.h, H2Tangent(p0.h, dir), s * a_h), a_v};
  return {SpacetimeVec{}, a_v};
}

ProdGeodesic prod_geodesic(const ProdTangent& v) {
  const double n2 = prod_inner(v.vec(), v.vec());
  if (std::abs(n2 - 1.0) > kUnitTol) {
    throw Error(ErrorCode::kNonUnitTangent, "product tangent is not unit");
  }
  ProdGeodesic g;
  g.p0 = v.base();
  g.a_h = v.vh().norm();
  g.a_v = v.vt();
  if (g.a_h > 0.0) {
    // A nearly vertical velocity loses tangency when divided by a tiny a_h.
    const SpacetimeVec d = tangential_part(g.p0.h, v.vh().w());
    g.dir = d / spacelike_norm(d);
  }
  return g;
}

ProdPoint prod_exp(const ProdPoint& p, const ProdTangent& v, double s) {
  if (!same_point(p, v.base())) {
    throw Error(ErrorCode::kBaseMismatch, "tangent is not based at the start point");
  }
  return prod_geodesic(v).at(s);
}

double prod_dist(const ProdPoint& p, const ProdPoint& q) {
  return std::hypot(h2_dist(p.h, q.h), p.t - q.t);
}

double prod_geodesic_residual(std::span<const ProdPoint> path) {
  const std::size_t n = path.size();
  if (n < 5) throw Error(ErrorCode::kInsufficientSamples, "residual needs at least five samples");
  std::vector<double> s(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) s[i] = s[i - 1] + prod_dist(path[i - 1], path[i]);

  std::vector<ProdVec> vel(n);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double ds = s[i + 1] - s[i - 1];
    vel[i] = {(path[i + 1].h.v() - path[i - 1].h.v()) / ds, (path[i + 1].t - path[i - 1].t) / ds};
  }
  double worst = 0.0;
  for (std::size_t i = 2; i + 2 < n; ++i) {
    const double ds = s[i + 1] - s[i - 1];
    const ProdVec acc = (1.0 / ds) * (vel[i + 1] - vel[i - 1]);
    worst = std::max(worst, prod_norm(prod_project(path[i], acc)));
  }
  return worst;
}

H2Point H2Geodesic::at(double s) const { return h2_exp(p, H2Tangent(p, v), s); }

SpacetimeVec H2Geodesic::plane_normal() const { return minkowski_cross(p.v(), v); }

double distance_to_segment(const H2Point& x, const H2Geodesic& g, double reach) {
  const auto f = [&](double tau) { return h2_dist(x, g.at(tau)); };
  const auto best = boost::math::tools::brent_find_minima(f, -reach, reach, 40);
  return std::min({best.second, f(-reach), f(reach)});
}

DivergenceReport verify_geodesic_divergence(const H2Geodesic& g1, const H2Geodesic& g2,
                                            double target, double s_max) {
  if (!(target > 0.0) || !(s_max > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "target and s_max must be positive");
  }
  const SpacetimeVec n1 = g1.plane_normal(), n2 = g2.plane_normal();
  const double scale = n1.coord_norm() + n2.coord_norm();
  if (std::min((n1 - n2).coord_norm(), (n1 + n2).coord_norm()) < 1e-9 * scale) {
    throw Error(ErrorCode::kDegenerateInput, "the two geodesics coincide");
  }
  const auto gap = [&](double s) { return distance_to_segment(g1.at(s), g2, s_max); };

  const double d0 = gap(0.0);
  if (d0 >= target) return {0.0, d0, target};
  const int n_steps = static_cast<int>(std::floor(s_max / kScanStep));
  for (int k = 1; k <= n_steps + 1; ++k) {
    const double hi = std::min(k * kScanStep, s_max);
    for (double sign : {1.0, -1.0}) {
      const double d = gap(sign * hi);
      if (d < target) continue;
      double lo_abs = (k - 1) * kScanStep, hi_abs = hi, d_hi = d;
      for (int it = 0; it < 50 && hi_abs - lo_abs > 1e-12; ++it) {
        const double mid = 0.5 * (lo_abs + hi_abs);
        const double dm = gap(sign * mid);
        if (dm >= target) {
          hi_abs = mid;
          d_hi = dm;
        } else {
          lo_abs = mid;
        }
      }
      return {sign * hi_abs, d_hi, target};
    }
    if (hi >= s_max) break;
  }
  throw Error(ErrorCode::kDivergenceNotReached, "target distance not reached within s_max");
}

}  // namespace h2xr

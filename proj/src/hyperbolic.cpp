#include "h2xr/hyperbolic.hpp"

#include <algorithm>
#include <array>
#include <string>

#include <boost/math/interpolators/quintic_hermite.hpp>

namespace h2xr {

namespace {

constexpr double kSheetTol = 1e-10;
constexpr double kTangentTol = 1e-10;
constexpr double kUnitTol = 1e-9;
constexpr double kCurveUnitTol = 1e-8;

struct FrenetState {
  SpacetimeVec alpha;
  SpacetimeVec T;
  SpacetimeVec n;
};

FrenetState frenet_rhs(const FrenetState& x, double kg) {
  return {x.T, kg * x.n + x.alpha, -kg * x.T};
}

FrenetState axpy(const FrenetState& x, double h, const FrenetState& d) {
  return {x.alpha + h * d.alpha, x.T + h * d.T, x.n + h * d.n};
}

double checked_curvature(const CurvatureFunction& kg, double s) {
  const double k = kg(s);
  if (!std::isfinite(k)) {
    throw Error(ErrorCode::kBadCurvatureFunction,
                "curvature function returned a non-finite value at s=" + std::to_string(s));
  }
  return k;
}

// Restores <a,a> = -1, <T,a> = 0, <T,T> = 1, <n,a> = <n,T> = 0, <n,n> = 1.
FrenetState reproject(const FrenetState& x) {
  FrenetState y;
  y.alpha = H2Point::normalized(x.alpha).v();
  y.T = x.T + minkowski_inner(x.T, y.alpha) * y.alpha;
  y.T = y.T / spacelike_norm(y.T);
  y.n = x.n + minkowski_inner(x.n, y.alpha) * y.alpha - minkowski_inner(x.n, y.T) * y.T;
  y.n = y.n / spacelike_norm(y.n);
  return y;
}

FrenetState rk4_step(const FrenetState& x, double s, double h, const CurvatureFunction& kg) {
  const double k_lo = checked_curvature(kg, s);
  const double k_mid = checked_curvature(kg, s + 0.5 * h);
  const double k_hi = checked_curvature(kg, s + h);
  const FrenetState d1 = frenet_rhs(x, k_lo);
  const FrenetState d2 = frenet_rhs(axpy(x, 0.5 * h, d1), k_mid);
  const FrenetState d3 = frenet_rhs(axpy(x, 0.5 * h, d2), k_mid);
  const FrenetState d4 = frenet_rhs(axpy(x, h, d3), k_hi);
  FrenetState out = x;
  out.alpha += (h / 6.0) * (d1.alpha + 2.0 * d2.alpha + 2.0 * d3.alpha + d4.alpha);
  out.T += (h / 6.0) * (d1.T + 2.0 * d2.T + 2.0 * d3.T + d4.T);
  out.n += (h / 6.0) * (d1.n + 2.0 * d2.n + 2.0 * d3.n + d4.n);
  return reproject(out);
}

}  // namespace

double minkowski_inner(const SpacetimeVec& a, const SpacetimeVec& b) {
  return -a.x0 * b.x0 + a.x1 * b.x1 + a.x2 * b.x2;
}

SpacetimeVec minkowski_cross(const SpacetimeVec& a, const SpacetimeVec& b) {
  return {-(a.x1 * b.x2 - a.x2 * b.x1), a.x2 * b.x0 - a.x0 * b.x2, a.x0 * b.x1 - a.x1 * b.x0};
}

double spacelike_norm(const SpacetimeVec& w) {
  return std::sqrt(std::max(0.0, minkowski_inner(w, w)));
}

H2Point::H2Point(const SpacetimeVec& v) : v_(v) {
  if (!v.finite()) throw Error(ErrorCode::kNonFinite, "hyperboloid point has non-finite coordinates");
  const double scale = std::max(1.0, v.x0 * v.x0);
  if (std::abs(minkowski_inner(v, v) + 1.0) > kSheetTol * scale || v.x0 < 1.0 - kSheetTol) {
    throw Error(ErrorCode::kInvalidArgument, "point is not on the upper sheet of the hyperboloid");
  }
}

H2Point H2Point::normalized(const SpacetimeVec& v) {
  if (!v.finite()) throw Error(ErrorCode::kNonFinite, "cannot normalize a non-finite vector");
  const double q = -minkowski_inner(v, v);
  if (!(q > 0.0)) throw Error(ErrorCode::kInvalidArgument, "vector is not timelike");
  SpacetimeVec w = v / std::sqrt(q);
  if (w.x0 < 0.0) w = -w;
  return H2Point(w, Unchecked{});
}

H2Tangent::H2Tangent(const H2Point& base, const SpacetimeVec& w) : base_(base), w_(w) {
  if (!w.finite()) throw Error(ErrorCode::kNonFinite, "tangent vector has non-finite coordinates");
  const double scale = 1.0 + w.coord_norm() * base.v().coord_norm();
  if (std::abs(minkowski_inner(w, base.v())) > kTangentTol * scale) {
    throw Error(ErrorCode::kInvalidArgument, "vector is not tangent to the hyperboloid at its base");
  }
}

SpacetimeVec tangential_part(const H2Point& p, const SpacetimeVec& w) {
  return w + minkowski_inner(w, p.v()) * p.v();
}

H2Tangent h2_project_tangent(const H2Point& p, const SpacetimeVec& w) {
  return H2Tangent(p, tangential_part(p, w));
}

namespace {
void require_unit(const H2Tangent& v) {
  const double scale = std::max(1.0, v.w().coord_norm() * v.w().coord_norm());
  if (std::abs(minkowski_inner(v.w(), v.w()) - 1.0) > kUnitTol * scale) {
    throw Error(ErrorCode::kNonUnitTangent, "geodesic direction must be a unit tangent");
  }
}
}  // namespace

H2Point h2_exp(const H2Point& p, const H2Tangent& v, double s) {
  require_unit(v);
  // No renormalization: far from the origin <x,x> cancels terms of size x0^2,
  // and rescaling by that noisy value would spoil the distance to p.
  return H2Point(std::cosh(s) * p.v() + std::sinh(s) * v.w());
}

SpacetimeVec h2_exp_velocity(const H2Point& p, const H2Tangent& v, double s) {
  require_unit(v);
  return std::sinh(s) * p.v() + std::cosh(s) * v.w();
}

double h2_dist(const H2Point& p, const H2Point& q) {
  const double c = -minkowski_inner(p.v(), q.v());
  if (c < 2.0) {
    // 2 asinh(chord / 2) avoids the loss of accuracy of arccosh near 1.
    const SpacetimeVec d = p.v() - q.v();
    const double chord = std::sqrt(std::max(0.0, minkowski_inner(d, d)));
    return 2.0 * std::asinh(0.5 * chord);
  }
  return std::acosh(std::max(1.0, c));
}

H2Tangent h2_log_direction(const H2Point& p, const H2Point& q) {
  const SpacetimeVec w = tangential_part(p, q.v());
  const double len = spacelike_norm(w);
  if (!(len > 0.0)) throw Error(ErrorCode::kDegenerateInput, "points coincide");
  return H2Tangent(p, w / len);
}

SpacetimeVec curve_normal(const H2Point& p, const SpacetimeVec& T) {
  return minkowski_cross(T, p.v());
}

// ---------------------------------------------------------------------------

struct H2Curve::HermiteCoords {
  std::vector<boost::math::interpolators::quintic_hermite<std::vector<double>>> coord;
};

H2Curve::H2Curve(std::vector<CurveSample> samples, CurveInterpolation rule,
                 CurvatureFunction curvature)
    : samples_(std::move(samples)), rule_(rule), curvature_(std::move(curvature)) {
  if (samples_.size() < 2) {
    throw Error(ErrorCode::kInsufficientSamples, "a curve needs at least two samples");
  }
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    const auto& smp = samples_[i];
    if (i > 0 && !(smp.s > samples_[i - 1].s)) {
      throw Error(ErrorCode::kInvalidArgument, "curve arclength must be strictly increasing");
    }
    if (std::abs(minkowski_inner(smp.T, smp.T) - 1.0) >= kCurveUnitTol) {
      throw Error(ErrorCode::kNonUnitCurve, "curve sample is not unit speed");
    }
    if (i > 0) slack_ = std::max(slack_, smp.s - samples_[i - 1].s);
  }
  if (rule_ == CurveInterpolation::kFrenet && !curvature_) {
    throw Error(ErrorCode::kInvalidArgument, "Frenet interpolation requires a curvature function");
  }
  if (rule_ == CurveInterpolation::kHermite) {
    auto coords = std::make_shared<HermiteCoords>();
    for (int c = 0; c < 3; ++c) {
      std::vector<double> x, y, dy, d2y;
      x.reserve(samples_.size());
      for (const auto& smp : samples_) {
        const SpacetimeVec accel = smp.kg * curve_normal(smp.p, smp.T) + smp.p.v();
        const auto pick = [c](const SpacetimeVec& v) { return c == 0 ? v.x0 : (c == 1 ? v.x1 : v.x2); };
        x.push_back(smp.s);
        y.push_back(pick(smp.p.v()));
        dy.push_back(pick(smp.T));
        d2y.push_back(pick(accel));
      }
      coords->coord.emplace_back(
          std::move(x), std::move(y), std::move(dy), std::move(d2y));
    }
    hermite_ = std::move(coords);
    // Hermite pieces are not extrapolated.
    slack_ = 0.0;
  }
}

bool H2Curve::extends_to(double s) const {
  return s >= s_min() - slack_ && s <= s_max() + slack_;
}

CurvePoint H2Curve::at(double s) const {
  if (!std::isfinite(s) || !extends_to(s)) {
    throw Error(ErrorCode::kOutOfDomain, "curve evaluated outside its arclength range");
  }
  return rule_ == CurveInterpolation::kFrenet ? frenet_at(s) : hermite_at(s);
}

CurvePoint H2Curve::frenet_at(double s) const {
  auto it = std::lower_bound(samples_.begin(), samples_.end(), s,
                             [](const CurveSample& smp, double x) { return smp.s < x; });
  std::size_t j = static_cast<std::size_t>(it - samples_.begin());
  if (j == samples_.size()) {
    j = samples_.size() - 1;
  } else if (j > 0 && (s - samples_[j - 1].s) < (samples_[j].s - s)) {
    --j;
  }
  const CurveSample& base = samples_[j];
  const double h = s - base.s;
  if (h == 0.0) return {base.p, base.T, curve_normal(base.p, base.T), base.kg};
  const FrenetState x0{base.p.v(), base.T, curve_normal(base.p, base.T)};
  const FrenetState x1 = rk4_step(x0, base.s, h, curvature_);
  return {H2Point::normalized(x1.alpha), x1.T, x1.n, checked_curvature(curvature_, s)};
}

CurvePoint H2Curve::hermite_at(double s) const {
  const auto& c = hermite_->coord;
  const double x = std::clamp(s, s_min(), s_max());
  const SpacetimeVec p{c[0](x), c[1](x), c[2](x)};
  const SpacetimeVec dp{c[0].prime(x), c[1].prime(x), c[2].prime(x)};
  const SpacetimeVec d2p{c[0].double_prime(x), c[1].double_prime(x), c[2].double_prime(x)};
  const H2Point q = H2Point::normalized(p);
  SpacetimeVec T = tangential_part(q, dp);
  const double speed = spacelike_norm(T);
  T = T / speed;
  const SpacetimeVec n = curve_normal(q, T);
  return {q, T, n, minkowski_inner(d2p, n) / (speed * speed)};
}

// ---------------------------------------------------------------------------

H2Tangent h2_covariant_deriv(const H2Curve& curve, std::span<const SpacetimeVec> field,
                             double s) {
  const auto& smp = curve.samples();
  if (field.size() != smp.size()) {
    throw Error(ErrorCode::kInvalidArgument, "field must be sampled at every curve sample");
  }
  if (smp.size() < 3 || !(s > curve.s_min() && s < curve.s_max())) {
    throw Error(ErrorCode::kOutOfDomain, "covariant derivative requested outside the curve interior");
  }
  auto it = std::lower_bound(smp.begin(), smp.end(), s,
                             [](const CurveSample& c, double x) { return c.s < x; });
  std::size_t i = static_cast<std::size_t>(it - smp.begin());
  if (i > 0 && (s - smp[i - 1].s) < (smp[i].s - s)) --i;
  i = std::clamp<std::size_t>(i, 1, smp.size() - 2);

  const double h1 = smp[i].s - smp[i - 1].s;
  const double h2 = smp[i + 1].s - smp[i].s;
  const SpacetimeVec d = (-h2 / (h1 * (h1 + h2))) * field[i - 1] +
                         ((h2 - h1) / (h1 * h2)) * field[i] +
                         (h1 / (h2 * (h1 + h2))) * field[i + 1];
  return h2_project_tangent(smp[i].p, d);
}

H2Tangent h2_covariant_deriv(const H2Curve& curve,
                             const std::function<SpacetimeVec(double)>& field, double s) {
  const double h = 1e-5 * (1.0 + std::abs(s));
  if (!curve.extends_to(s - h) || !curve.extends_to(s + h)) {
    throw Error(ErrorCode::kOutOfDomain, "covariant derivative stencil leaves the curve");
  }
  const SpacetimeVec d = (field(s + h) - field(s - h)) / (2.0 * h);
  return h2_project_tangent(curve.at(s).p, d);
}

double measured_geodesic_curvature(const H2Curve& curve, double s) {
  const H2Tangent acc =
      h2_covariant_deriv(curve, [&curve](double x) { return curve.at(x).T; }, s);
  return minkowski_inner(acc.w(), curve.at(s).n);
}

H2Curve curve_from_curvature(const CurvatureFunction& kg, double s_lo, double s_hi,
                             double step, const FrenetStart& start) {
  if (!(step > 0.0) || !std::isfinite(step)) {
    throw Error(ErrorCode::kInvalidArgument, "integration step must be positive");
  }
  if (!(s_hi > s_lo) || !std::isfinite(s_lo) || !std::isfinite(s_hi)) {
    throw Error(ErrorCode::kInvalidArgument, "arclength range must be a nonempty finite interval");
  }
  const H2Tangent t0(start.p, start.T);
  if (std::abs(minkowski_inner(t0.w(), t0.w()) - 1.0) > kUnitTol) {
    throw Error(ErrorCode::kNonUnitTangent, "start tangent must be a unit vector");
  }
  const auto n_steps = static_cast<std::size_t>(std::ceil((s_hi - s_lo) / step - 1e-9));
  const double h = (s_hi - s_lo) / static_cast<double>(n_steps);

  std::vector<CurveSample> samples;
  samples.reserve(n_steps + 1);
  FrenetState x{start.p.v(), start.T, curve_normal(start.p, start.T)};
  samples.push_back({s_lo, start.p, x.T, checked_curvature(kg, s_lo)});
  for (std::size_t i = 0; i < n_steps; ++i) {
    const double s = s_lo + static_cast<double>(i) * h;
    x = rk4_step(x, s, h, kg);
    const double s_next = (i + 1 == n_steps) ? s_hi : s_lo + static_cast<double>(i + 1) * h;
    samples.push_back({s_next, H2Point::normalized(x.alpha), x.T, checked_curvature(kg, s_next)});
  }
  return H2Curve(std::move(samples), CurveInterpolation::kFrenet, kg);
}

}  // namespace h2xr

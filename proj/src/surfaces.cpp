#include "h2xr/surfaces.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>

namespace h2xr {

namespace {

constexpr double kImmersionTol = 1e-12;
constexpr double kSliceInnerRadius = 1e-3;

bool finite(const ProdVec& v) { return v.h.finite() && std::isfinite(v.t); }

bool finite(const SurfaceJet& j) {
  return j.X.h.v().finite() && std::isfinite(j.X.t) && finite(j.Xu) && finite(j.Xv) &&
         finite(j.Xuu) && finite(j.Xuv) && finite(j.Xvv);
}

ProdVec vec_of(const ProdPoint& p) { return {p.h.v(), p.t}; }

struct H2ChartJet {
  SpacetimeVec s, su, sv, suu, suv, svv;
};

H2ChartJet polar_jet(double r, double th) {
  const double ch = std::cosh(r), sh = std::sinh(r), c = std::cos(th), s = std::sin(th);
  return {{ch, sh * c, sh * s},  {sh, ch * c, ch * s},   {0.0, -sh * s, sh * c},
          {ch, sh * c, sh * s},  {0.0, -ch * s, ch * c}, {0.0, -sh * c, -sh * s}};
}

H2ChartJet fermi_jet(double u, double v) {
  const double cu = std::cosh(u), su = std::sinh(u), cv = std::cosh(v), sv = std::sinh(v);
  return {{cv * cu, cv * su, sv}, {cv * su, cv * cu, 0.0}, {sv * cu, sv * su, cv},
          {cv * cu, cv * su, 0.0}, {sv * su, sv * cu, 0.0}, {cv * cu, cv * su, sv}};
}

H2ChartJet chart_jet(GraphChart chart, double u, double v) {
  return chart == GraphChart::kPolar ? polar_jet(u, v) : fermi_jet(u, v);
}

}  // namespace

bool ChartDomain::contains(double u, double v) const {
  const double tu = 1e-12 * (1.0 + std::abs(u_lo) + std::abs(u_hi));
  const double tv = 1e-12 * (1.0 + std::abs(v_lo) + std::abs(v_hi));
  return u >= u_lo - tu && u <= u_hi + tu && v >= v_lo - tv && v <= v_hi + tv;
}

double ChartDomain::edge_distance(double u, double v) const {
  return std::min({u - u_lo, u_hi - u, v - v_lo, v_hi - v});
}

void ChartDomain::validate() const {
  const bool ok = std::isfinite(u_lo) && std::isfinite(u_hi) && std::isfinite(v_lo) &&
                  std::isfinite(v_hi) && u_lo < u_hi && v_lo < v_hi;
  if (!ok) throw Error(ErrorCode::kInvalidArgument, "chart domain must be nonempty and finite");
}

Surface Surface::analytic(std::string label, ChartDomain domain, JetMap jets) {
  domain.validate();
  Surface s;
  s.label_ = std::move(label);
  s.domain_ = domain;
  s.mode_ = DerivativeMode::kAnalytic;
  s.jets_ = std::move(jets);
  return s;
}

Surface Surface::finite_difference(std::string label, ChartDomain domain, PointMap points,
                                   double step) {
  domain.validate();
  if (!(step > 0.0)) throw Error(ErrorCode::kInvalidArgument, "finite-difference step must be positive");
  Surface s;
  s.label_ = std::move(label);
  s.domain_ = domain;
  s.mode_ = DerivativeMode::kFiniteDifference;
  s.fd_step_ = step;
  s.points_ = std::move(points);
  return s;
}

SurfaceJet Surface::jet_unchecked(double u, double v) const {
  if (mode_ == DerivativeMode::kAnalytic) return jets_(u, v);
  const double h = fd_step_;
  const ProdPoint c = points_(u, v);
  const ProdVec x = vec_of(c);
  const ProdVec up = vec_of(points_(u + h, v)), um = vec_of(points_(u - h, v));
  const ProdVec vp = vec_of(points_(u, v + h)), vm = vec_of(points_(u, v - h));
  const ProdVec pp = vec_of(points_(u + h, v + h)), pm = vec_of(points_(u + h, v - h));
  const ProdVec mp = vec_of(points_(u - h, v + h)), mm = vec_of(points_(u - h, v - h));

  SurfaceJet j;
  j.X = c;
  j.Xu = prod_project(c, (0.5 / h) * (up - um));
  j.Xv = prod_project(c, (0.5 / h) * (vp - vm));
  j.Xuu = (1.0 / (h * h)) * ((up - x) + (um - x));
  j.Xvv = (1.0 / (h * h)) * ((vp - x) + (vm - x));
  j.Xuv = (0.25 / (h * h)) * ((pp - pm) - (mp - mm));
  return j;
}

SurfaceJet Surface::jet(double u, double v) const {
  if (!domain_.contains(u, v)) throw Error(ErrorCode::kOutOfDomain, "chart point outside the domain");
  const SurfaceJet j = jet_unchecked(u, v);
  if (!finite(j)) throw Error(ErrorCode::kNonFinite, "surface evaluator produced a non-finite value");
  const double E = prod_inner(j.Xu, j.Xu), F = prod_inner(j.Xu, j.Xv), G = prod_inner(j.Xv, j.Xv);
  if (!std::isfinite(E * G - F * F)) throw Error(ErrorCode::kNonFinite, "first fundamental form overflows");
  if (!(E * G - F * F > kImmersionTol)) throw Error(ErrorCode::kNotImmersed, "degenerate first fundamental form");
  return j;
}

ProdPoint Surface::point(double u, double v) const {
  return mode_ == DerivativeMode::kAnalytic ? jets_(u, v).X : points_(u, v);
}

Surface Surface::with_generating_curve(H2Curve curve) const {
  Surface s = *this;
  s.generating_curve_ = std::move(curve);
  return s;
}

Surface Surface::with_domain(const ChartDomain& sub) const {
  sub.validate();
  const double slack = 1e-12 * (1.0 + std::abs(domain_.width()) + std::abs(domain_.height()));
  if (sub.u_lo < domain_.u_lo - slack || sub.u_hi > domain_.u_hi + slack || sub.v_lo < domain_.v_lo - slack ||
      sub.v_hi > domain_.v_hi + slack) {
    throw Error(ErrorCode::kInvalidArgument, "domain override must lie inside the chart domain");
  }
  Surface s = *this;
  s.domain_ = sub;
  return s;
}

Surface Surface::with_label(std::string label) const {
  Surface s = *this;
  s.label_ = std::move(label);
  return s;
}

ProdVec unit_normal(const SurfaceJet& jet) {
  const H2Point& p = jet.X.h;
  SpacetimeVec b1 = tangential_part(p, {0.0, 1.0, 0.0});
  const SpacetimeVec alt = tangential_part(p, {0.0, 0.0, 1.0});
  if (spacelike_norm(alt) > spacelike_norm(b1)) b1 = alt;
  b1 = b1 / spacelike_norm(b1);
  const SpacetimeVec b2 = minkowski_cross(p.v(), b1);

  const double a[3] = {minkowski_inner(jet.Xu.h, b1), minkowski_inner(jet.Xu.h, b2), jet.Xu.t};
  const double b[3] = {minkowski_inner(jet.Xv.h, b1), minkowski_inner(jet.Xv.h, b2), jet.Xv.t};
  double c[3] = {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
  const double len = std::sqrt(c[0] * c[0] + c[1] * c[1] + c[2] * c[2]);
  if (!(len > 0.0)) throw Error(ErrorCode::kNotImmersed, "tangent vectors are parallel");
  for (double& x : c) x /= len;
  if (std::abs(c[2]) > 0.1 && c[2] < 0.0) {
    for (double& x : c) x = -x;
  }
  return {c[0] * b1 + c[1] * b2, c[2]};
}

Surface make_cylinder(const H2Curve& alpha, double v_lo, double v_hi, DerivativeMode mode) {
  for (const auto& smp : alpha.samples()) {
    if (std::abs(minkowski_inner(smp.T, smp.T) - 1.0) >= 1e-8) {
      throw Error(ErrorCode::kNonUnitCurve, "generating curve is not unit speed");
    }
  }
  const ChartDomain dom{alpha.s_min(), alpha.s_max(), v_lo, v_hi};
  Surface s = [&] {
    if (mode == DerivativeMode::kFiniteDifference) {
      return Surface::finite_difference("cylinder", dom, [alpha](double u, double v) {
        return ProdPoint{alpha.at(u).p, v};
      });
    }
    return Surface::analytic("cylinder", dom, [alpha](double u, double v) {
      const CurvePoint c = alpha.at(u);
      SurfaceJet j;
      j.X = {c.p, v};
      j.Xu = {c.T, 0.0};
      j.Xv = {SpacetimeVec{}, 1.0};
      j.Xuu = {c.kg * c.n + c.p.v(), 0.0};
      return j;
    });
  }();
  return s.with_generating_curve(alpha);
}

Surface make_sheared_cylinder(const H2Curve& alpha, double amp, double v_lo, double v_hi) {
  const ChartDomain dom{alpha.s_min() + std::abs(amp), alpha.s_max() - std::abs(amp), v_lo, v_hi};
  Surface s = Surface::analytic("sheared cylinder", dom, [alpha, amp](double u, double v) {
    const double g = amp * std::sin(v), g1 = amp * std::cos(v), g2 = -g;
    const CurvePoint c = alpha.at(u + g);
    const SpacetimeVec acc = c.kg * c.n + c.p.v();
    SurfaceJet j;
    j.X = {c.p, v};
    j.Xu = {c.T, 0.0};
    j.Xv = {g1 * c.T, 1.0};
    j.Xuu = {acc, 0.0};
    j.Xuv = {g1 * acc, 0.0};
    j.Xvv = {g1 * g1 * acc + g2 * c.T, 0.0};
    return j;
  });
  return s.with_label("sheared cylinder");
}

Surface make_slice(double t0, double radius) {
  if (!(radius > kSliceInnerRadius)) throw Error(ErrorCode::kInvalidArgument, "slice radius too small");
  const ChartDomain dom{kSliceInnerRadius, radius, 0.0, 2.0 * std::numbers::pi};
  return Surface::analytic("slice", dom, [t0](double r, double th) {
    const H2ChartJet c = polar_jet(r, th);
    SurfaceJet j;
    j.X = {H2Point(c.s), t0};
    j.Xu = {c.su, 0.0};
    j.Xv = {c.sv, 0.0};
    j.Xuu = {c.suu, 0.0};
    j.Xuv = {c.suv, 0.0};
    j.Xvv = {c.svv, 0.0};
    return j;
  });
}

HeightFunction bilinear_height(double coef) {
  return [coef](double u, double v) {
    return HeightJet{coef * u * v, coef * v, coef * u, 0.0, coef, 0.0};
  };
}

HeightFunction linear_height(double a) {
  return [a](double u, double) { return HeightJet{a * u, a, 0.0, 0.0, 0.0, 0.0}; };
}

ChartDomain default_graph_domain(GraphChart chart) {
  if (chart == GraphChart::kPolar) return {kSliceInnerRadius, 2.0, 0.0, 2.0 * std::numbers::pi};
  return {-1.0, 1.0, -1.0, 1.0};
}

Surface make_graph(const HeightFunction& f, GraphChart chart, const ChartDomain& domain,
                   DerivativeMode mode) {
  if (mode == DerivativeMode::kFiniteDifference) {
    return Surface::finite_difference("graph", domain, [f, chart](double u, double v) {
      return ProdPoint{H2Point(chart_jet(chart, u, v).s), f(u, v).f};
    });
  }
  return Surface::analytic("graph", domain, [f, chart](double u, double v) {
    const H2ChartJet c = chart_jet(chart, u, v);
    const HeightJet h = f(u, v);
    SurfaceJet j;
    j.X = {H2Point(c.s), h.f};
    j.Xu = {c.su, h.fu};
    j.Xv = {c.sv, h.fv};
    j.Xuu = {c.suu, h.fuu};
    j.Xuv = {c.suv, h.fuv};
    j.Xvv = {c.svv, h.fvv};
    return j;
  });
}

Bump gaussian_bump(const ChartDomain& domain) {
  const double uc = domain.u_mid(), vc = domain.v_mid();
  const double wu = 0.25 * domain.width(), wv = 0.25 * domain.height();
  return [=](double u, double v) {
    const double a = (u - uc) / wu, b = (v - vc) / wv;
    return std::exp(-a * a - b * b);
  };
}

Surface perturb(const Surface& base, double eps, const Bump& bump) {
  if (!(eps >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "perturbation size must be >= 0");
  if (eps == 0.0) return base;
  return Surface::finite_difference("perturbed " + base.label(), base.domain(),
                                    [base, eps, bump](double u, double v) {
                                      const SurfaceJet j = base.jet_unchecked(u, v);
                                      const ProdVec n = unit_normal(j);
                                      const ProdGeodesic g = prod_geodesic(ProdTangent(j.X, n.h, n.t));
                                      return g.at(eps * bump(u, v));
                                    });
}

Surface transform_chart(const Surface& base, const ChartTransform& tr) {
  if (!(tr.su > 0.0) || !(tr.sv > 0.0) || !std::isfinite(tr.angle)) {
    throw Error(ErrorCode::kInvalidArgument, "chart scales must be positive");
  }
  const ChartDomain& d = base.domain();
  const double uc = d.u_mid(), vc = d.v_mid();
  const double a = 0.5 * d.width(), b = 0.5 * d.height();
  const double co = std::cos(tr.angle), si = std::sin(tr.angle);
  double shrink = 1.0;
  if (si != 0.0) {
    const double ca = std::abs(co), sa = std::abs(si);
    shrink = std::min(a / (ca * a + sa * b), b / (sa * a + ca * b));
  }
  const ChartDomain nd{tr.su * (uc - shrink * a), tr.su * (uc + shrink * a),
                       tr.sv * (vc - shrink * b), tr.sv * (vc + shrink * b)};
  // (u, v) = c + A ((U, V) - S c), A = R(angle) S^-1.
  const double A00 = co / tr.su, A01 = -si / tr.sv, A10 = si / tr.su, A11 = co / tr.sv;
  const double su = tr.su, sv = tr.sv;
  auto to_base = [=](double U, double V) {
    const double x = U - su * uc, y = V - sv * vc;
    return std::pair{uc + A00 * x + A01 * y, vc + A10 * x + A11 * y};
  };
  auto jets = [base, to_base, A00, A01, A10, A11](double U, double V) {
    const auto [u, v] = to_base(U, V);
    const SurfaceJet j = base.jet_unchecked(u, v);
    SurfaceJet t;
    t.X = j.X;
    t.Xu = A00 * j.Xu + A10 * j.Xv;
    t.Xv = A01 * j.Xu + A11 * j.Xv;
    t.Xuu = (A00 * A00) * j.Xuu + (2.0 * A00 * A10) * j.Xuv + (A10 * A10) * j.Xvv;
    t.Xuv = (A00 * A01) * j.Xuu + (A00 * A11 + A10 * A01) * j.Xuv + (A10 * A11) * j.Xvv;
    t.Xvv = (A01 * A01) * j.Xuu + (2.0 * A01 * A11) * j.Xuv + (A11 * A11) * j.Xvv;
    return t;
  };
  if (base.mode() == DerivativeMode::kFiniteDifference) {
    // Differences are retaken in the new chart, with the step scaled along.
    return Surface::finite_difference(base.label(), nd, [base, to_base](double U, double V) {
      const auto [u, v] = to_base(U, V);
      return base.point(u, v);
    }, base.fd_step() * std::min(su, sv));
  }
  return Surface::analytic(base.label(), nd, jets);
}

CurvatureFunction constant_curvature(double k) {
  return [k](double) { return k; };
}

CurvatureFunction linear_curvature(double k0, double k1) {
  return [k0, k1](double s) { return k0 + k1 * s; };
}

CurvatureFunction spline_curvature(double s0, double h, std::vector<double> values) {
  if (values.size() < 4 || !(h > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "spline profile needs >= 4 values and h > 0");
  }
  const double s1 = s0 + h * static_cast<double>(values.size() - 1);
  auto spline = std::make_shared<boost::math::interpolators::cardinal_cubic_b_spline<double>>(
      values.begin(), values.end(), s0, h);
  // Constant extension past the knots, for stencils that overhang the ends.
  return [spline, s0, s1](double s) { return (*spline)(std::clamp(s, s0, s1)); };
}

CurveProfile cylinder_profile(CylinderPreset preset) {
  switch (preset) {
    case CylinderPreset::kGeodesic: return {constant_curvature(0.0), -2.0, 2.0};
    case CylinderPreset::kCircle: {
      const double k = std::cosh(1.0) / std::sinh(1.0);
      return {constant_curvature(k), 0.0, 2.0 * std::numbers::pi * std::sinh(1.0)};
    }
    case CylinderPreset::kHorocycle: return {constant_curvature(1.0), -2.0, 2.0};
    case CylinderPreset::kSpline:
      return {spline_curvature(-2.0, 1.0, {0.5, 1.2, 0.8, 1.5, 0.3}), -2.0, 2.0};
    case CylinderPreset::kInflection: return {linear_curvature(0.0, 1.0), -1.0, 1.0};
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown cylinder preset");
}

std::string_view preset_name(CylinderPreset preset) {
  switch (preset) {
    case CylinderPreset::kGeodesic: return "geodesic";
    case CylinderPreset::kCircle: return "circle";
    case CylinderPreset::kHorocycle: return "horocycle";
    case CylinderPreset::kSpline: return "spline";
    case CylinderPreset::kInflection: return "inflection";
  }
  return "unknown";
}

const std::vector<CylinderPreset>& all_cylinder_presets() {
  static const std::vector<CylinderPreset> all = {
      CylinderPreset::kGeodesic, CylinderPreset::kCircle, CylinderPreset::kHorocycle,
      CylinderPreset::kSpline, CylinderPreset::kInflection};
  return all;
}

Surface make_preset_cylinder(CylinderPreset preset, DerivativeMode mode) {
  const CurveProfile prof = cylinder_profile(preset);
  const H2Curve alpha = curve_from_curvature(prof.kg, prof.s_lo, prof.s_hi, 1e-3);
  return make_cylinder(alpha, -5.0, 5.0, mode)
      .with_label("cylinder/" + std::string(preset_name(preset)));
}

}  // namespace h2xr

#include "h2xr/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

namespace h2xr {

namespace {

constexpr int kHeightScan = 64;

// Parameter on b nearest to p: Brent around every local minimum of the
// sample distances (closed curves have two near the seam), then a few
// tangent-projection steps so coincident curves resolve below sqrt(eps).
double nearest_param(const H2Curve& b, const H2Point& p) {
  const auto& smp = b.samples();
  const std::size_t n = smp.size();
  std::vector<double> d(n);
  double gap = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    d[j] = h2_dist(p, smp[j].p);
    if (j > 0) gap = std::max(gap, smp[j].s - smp[j - 1].s);
  }
  const double floor = *std::min_element(d.begin(), d.end()) + 2.0 * gap;
  const auto f = [&](double s) { return h2_dist(p, b.at(s).p); };
  double best_s = smp.front().s, best_d = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < n; ++j) {
    if (d[j] > floor || (j > 0 && d[j] > d[j - 1]) || (j + 1 < n && d[j] > d[j + 1])) continue;
    const double lo = smp[j == 0 ? 0 : j - 1].s, hi = smp[std::min(j + 1, n - 1)].s;
    double s = hi > lo ? boost::math::tools::brent_find_minima(f, lo, hi, 40).first : smp[j].s;
    for (int it = 0; it < 3; ++it) {
      const CurvePoint q = b.at(s);
      const double next = std::clamp(s + minkowski_inner(p.v() - q.p.v(), q.T), lo, hi);
      if (f(next) >= f(s)) break;
      s = next;
    }
    if (f(s) < best_d) {
      best_d = f(s);
      best_s = s;
    }
  }
  return best_s;
}

double one_sided(const H2Curve& a, const H2Curve& b) {
  const auto& smp = a.samples();
  double worst = 0.0;
  for (std::size_t i = 0; i < smp.size(); ++i) {
    const auto probe = [&](const H2Point& p) {
      worst = std::max(worst, h2_dist(p, b.at(nearest_param(b, p)).p));
    };
    probe(smp[i].p);
    if (i + 1 < smp.size()) probe(a.at(0.5 * (smp[i].s + smp[i + 1].s)).p);
  }
  return worst;
}

std::optional<double> height_root(const Surface& s, double u, double t0) {
  const ChartDomain& d = s.domain();
  const auto g = [&](double v) { return s.point(u, v).t - t0; };
  double a = d.v_lo, ga = g(a);
  if (ga == 0.0) return a;
  for (int k = 1; k <= kHeightScan; ++k) {
    const double b = k == kHeightScan ? d.v_hi : d.v_lo + d.height() * k / kHeightScan;
    const double gb = g(b);
    if (gb == 0.0) return b;
    if (ga * gb < 0.0) {
      std::uintmax_t iters = 100;
      const auto r = boost::math::tools::toms748_solve(g, a, b, ga, gb,
                                                       boost::math::tools::eps_tolerance<double>(52), iters);
      return 0.5 * (r.first + r.second);
    }
    a = b;
    ga = gb;
  }
  return std::nullopt;
}

struct Crossing {
  H2Point p = H2Point::origin();
  SpacetimeVec T;
  double speed{0.0}, dspeed{0.0}, kg{0.0};
};

// Horizontal projection of u -> X(u, v(u)) with t(u, v(u)) = t0, and its
// derivatives through implicit differentiation.
std::optional<Crossing> crossing_at(const Surface& s, double u, double t0) {
  const auto v = height_root(s, u, t0);
  if (!v) return std::nullopt;
  const SurfaceJet j = s.jet(u, *v);
  const double tv = j.Xv.t;
  if (std::abs(tv) < 1e-12) return std::nullopt;
  const double vp = -j.Xu.t / tv;
  const double vpp = -(j.Xuu.t + 2.0 * vp * j.Xuv.t + vp * vp * j.Xvv.t) / tv;
  const SpacetimeVec c1 = j.Xu.h + vp * j.Xv.h;
  const SpacetimeVec c2 = j.Xuu.h + 2.0 * vp * j.Xuv.h + vp * vp * j.Xvv.h + vpp * j.Xv.h;

  Crossing c;
  c.p = j.X.h;
  const SpacetimeVec vel = tangential_part(c.p, c1);
  c.speed = spacelike_norm(vel);
  if (!(c.speed > 1e-12)) return std::nullopt;
  c.T = vel / c.speed;
  const SpacetimeVec acc = tangential_part(c.p, c2);
  c.dspeed = minkowski_inner(acc, c.T);
  c.kg = minkowski_inner(acc, curve_normal(c.p, c.T)) / (c.speed * c.speed);
  return c;
}

}  // namespace

FlatnessReport flatness_from_grid(const std::vector<CurvatureRow>& rows, int n_u, int n_v, double tol) {
  FlatnessReport r;
  r.n_u = n_u;
  r.n_v = n_v;
  r.tol = tol;
  for (const CurvatureRow& row : rows) {
    if (!row.ok()) {
      throw Error(error_code_from_name(row.status),
                  "curvature failed at (" + std::to_string(row.u) + ", " + std::to_string(row.v) + ")");
    }
    r.max_abs_Kint = std::max(r.max_abs_Kint, std::abs(row.shape.Kint_gauss));
    r.max_abs_Kext = std::max(r.max_abs_Kext, std::abs(row.shape.Kext));
  }
  return r;
}

FlatnessReport flatness_scan(const Surface& s, int n, double tol, double planar_tol, int jobs) {
  if (n < 8) throw Error(ErrorCode::kInvalidArgument, "flatness grid must be at least 8 x 8");
  return flatness_from_grid(curvature_grid(s, n, n, planar_tol, jobs), n, n, tol);
}

int PlanarSetMap::count(PointTag tag) const {
  return static_cast<int>(std::count(cls.begin(), cls.end(), tag));
}

PlanarSetMap planar_set_map(const std::vector<CurvatureRow>& rows, int n_u, int n_v, const ChartDomain& d) {
  PlanarSetMap m;
  m.n_u = n_u;
  m.n_v = n_v;
  m.us = cell_centers(d.u_lo, d.u_hi, n_u);
  m.vs = cell_centers(d.v_lo, d.v_hi, n_v);
  m.cls.reserve(rows.size());
  for (const CurvatureRow& r : rows) m.cls.push_back(r.cls);

  const double du = d.width() / n_u, dv = d.height() / n_v;
  std::vector<bool> seen(m.cls.size(), false);
  for (int start = 0; start < n_u * n_v; ++start) {
    if (seen[start] || m.cls[start] != PointTag::kPlanar) continue;
    PlanarComponent c;
    c.iu_lo = c.iv_lo = std::numeric_limits<int>::max();
    c.iu_hi = c.iv_hi = -1;
    std::deque<int> queue{start};
    seen[start] = true;
    while (!queue.empty()) {
      const int k = queue.front();
      queue.pop_front();
      c.cells.push_back(k);
      const int iu = k % n_u, iv = k / n_u;
      c.iu_lo = std::min(c.iu_lo, iu);
      c.iu_hi = std::max(c.iu_hi, iu);
      c.iv_lo = std::min(c.iv_lo, iv);
      c.iv_hi = std::max(c.iv_hi, iv);
      const int nb[4][2] = {{iu - 1, iv}, {iu + 1, iv}, {iu, iv - 1}, {iu, iv + 1}};
      for (const auto& q : nb) {
        if (q[0] < 0 || q[0] >= n_u || q[1] < 0 || q[1] >= n_v) continue;
        const int kk = q[1] * n_u + q[0];
        if (seen[kk] || m.cls[kk] != PointTag::kPlanar) continue;
        seen[kk] = true;
        queue.push_back(kk);
      }
    }
    std::sort(c.cells.begin(), c.cells.end());
    c.u_lo = d.u_lo + c.iu_lo * du;
    c.u_hi = d.u_lo + (c.iu_hi + 1) * du;
    c.v_lo = d.v_lo + c.iv_lo * dv;
    c.v_hi = d.v_lo + (c.iv_hi + 1) * dv;
    c.spans_v = c.iv_lo == 0 && c.iv_hi == n_v - 1;
    m.components.push_back(std::move(c));
  }
  return m;
}

PlanarSetMap planar_set_map(const Surface& s, int n, double tol, int jobs) {
  return planar_set_map(curvature_grid(s, n, n, tol, jobs), n, n, s.domain());
}

std::vector<ChartDir> select_seeds(const PlanarSetMap& map, const ChartDomain& d, int count) {
  std::vector<ChartDir> cand;
  for (int iv = 0; iv < map.n_v; ++iv) {
    for (int iu = 0; iu < map.n_u; ++iu) {
      if (map.at(iu, iv) == PointTag::kParabolic) cand.push_back({map.us[iu], map.vs[iv]});
    }
  }
  const auto norm_dist = [&](const ChartDir& a, const ChartDir& b) {
    return std::hypot((a[0] - b[0]) / d.width(), (a[1] - b[1]) / d.height());
  };
  std::vector<ChartDir> out;
  if (cand.empty() || count <= 0) return out;

  const ChartDir center{d.u_mid(), d.v_mid()};
  std::vector<double> gap(cand.size());
  for (std::size_t i = 0; i < cand.size(); ++i) gap[i] = norm_dist(cand[i], center);
  std::size_t pick = static_cast<std::size_t>(std::min_element(gap.begin(), gap.end()) - gap.begin());
  std::fill(gap.begin(), gap.end(), std::numeric_limits<double>::infinity());

  while (static_cast<int>(out.size()) < count && static_cast<std::size_t>(out.size()) < cand.size()) {
    out.push_back(cand[pick]);
    for (std::size_t i = 0; i < cand.size(); ++i) gap[i] = std::min(gap[i], norm_dist(cand[i], cand[pick]));
    pick = static_cast<std::size_t>(std::max_element(gap.begin(), gap.end()) - gap.begin());
    if (gap[pick] == 0.0) break;
  }
  return out;
}

double ruling_verticality(const TraceRecord& tr) {
  const auto zero = std::min_element(tr.samples.begin(), tr.samples.end(),
                                     [](const TraceSample& a, const TraceSample& b) {
                                       return std::abs(a.s) < std::abs(b.s);
                                     });
  if (zero == tr.samples.end()) return 0.0;
  double worst = 0.0;
  for (const TraceSample& x : tr.samples) worst = std::max(worst, h2_dist(x.P.h, zero->P.h));
  return worst;
}

std::vector<Ruling> extract_rulings(const Surface& s, const std::vector<ChartDir>& seeds,
                                    const TraceOptions& opt, int jobs) {
  std::vector<Ruling> out(seeds.size());
  parallel_for(static_cast<int>(seeds.size()), jobs, [&](int i) {
    Ruling& r = out[static_cast<std::size_t>(i)];
    r.trace = trace_asymptotic(s, seeds[i][0], seeds[i][1], opt);
    r.verticality = ruling_verticality(r.trace);
    if (r.trace.samples.size() >= 3) r.max_dev = geodesic_deviation(r.trace).max_dev;
  });
  return out;
}

H2Curve recover_generating_curve(const Surface& s, double t0, int n) {
  if (n < 5) throw Error(ErrorCode::kInvalidArgument, "curve recovery needs at least five samples");
  const ChartDomain& d = s.domain();
  const double h = d.width() / (n - 1);
  std::vector<std::optional<Crossing>> hits(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) hits[i] = crossing_at(s, i == n - 1 ? d.u_hi : d.u_lo + i * h, t0);

  int best_lo = 0, best_len = 0;
  for (int i = 0; i < n;) {
    if (!hits[i]) {
      ++i;
      continue;
    }
    int j = i;
    while (j < n && hits[j]) ++j;
    if (j - i > best_len) {
      best_len = j - i;
      best_lo = i;
    }
    i = j;
  }
  if (best_len < 5) {
    throw Error(ErrorCode::kEmptyIntersection, "height " + std::to_string(t0) + " misses the chart");
  }

  std::vector<CurveSample> samples;
  samples.reserve(static_cast<std::size_t>(best_len));
  double arc = 0.0;
  for (int i = best_lo; i < best_lo + best_len; ++i) {
    const Crossing& c = *hits[i];
    if (i > best_lo) {
      // Trapezoid with the endpoint derivative correction.
      const Crossing& b = *hits[i - 1];
      arc += 0.5 * h * (b.speed + c.speed) - h * h / 12.0 * (c.dspeed - b.dspeed);
    }
    samples.push_back({arc, c.p, c.T, c.kg});
  }
  return H2Curve(std::move(samples), CurveInterpolation::kHermite);
}

double hausdorff_distance(const H2Curve& a, const H2Curve& b) {
  return std::max(one_sided(a, b), one_sided(b, a));
}

double aligned_gap(const H2Curve& a, const H2Curve& b) {
  const double shift = nearest_param(b, a.at(a.s_min()).p) - a.s_min();
  double worst = 0.0;
  for (const CurveSample& x : a.samples()) {
    const double sb = x.s + shift;
    if (sb < b.s_min() || sb > b.s_max()) continue;
    worst = std::max(worst, h2_dist(x.p, b.at(sb).p));
  }
  return worst;
}

std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::kCylinder: return "CYLINDER";
    case Verdict::kNotFlat: return "NOT_FLAT";
    case Verdict::kInconsistent: return "INCONSISTENT";
  }
  return "INCONSISTENT";
}

CylinderVerdict classify_surface(const Surface& s, const ClassifierConfig& cfg) {
  if (!(cfg.flatness > 0.0) || !(cfg.verticality > 0.0) || !(cfg.planar > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "classifier tolerances must be positive");
  }
  if (cfg.grid < 8) throw Error(ErrorCode::kInvalidArgument, "classifier grid must be at least 8");

  CylinderVerdict out;
  const ChartDomain& d = s.domain();
  const std::vector<CurvatureRow> rows = curvature_grid(s, cfg.grid, cfg.grid, cfg.planar, cfg.jobs);
  out.flatness = flatness_from_grid(rows, cfg.grid, cfg.grid, cfg.flatness);
  out.planar = planar_set_map(rows, cfg.grid, cfg.grid, d);
  out.t0 = s.point(d.u_mid(), d.v_mid()).t;

  if (!out.flatness.pass()) {
    out.verdict = Verdict::kNotFlat;
    return out;
  }
  const auto inconsistent = [&](std::string why) {
    out.verdict = Verdict::kInconsistent;
    out.generating_curve.reset();
    out.diagnostics.push_back(std::move(why));
    return out;
  };

  const int n_planar = out.planar.count(PointTag::kPlanar);
  const int n_parabolic = out.planar.count(PointTag::kParabolic);
  const int n_cells = cfg.grid * cfg.grid;

  if (n_parabolic == 0) {
    if (n_planar != n_cells) return inconsistent("flat chart has neither parabolic cells nor a full planar set");
    // Everything planar: must be a vertical plane over a geodesic.
    double max_nu = 0.0;
    for (const CurvatureRow& r : rows) max_nu = std::max(max_nu, std::abs(r.shape.nu));
    if (max_nu >= cfg.flatness) return inconsistent("planar chart is not vertical, max |nu| = " + std::to_string(max_nu));
    try {
      H2Curve curve = recover_generating_curve(s, out.t0, cfg.recover_samples);
      double max_kg = 0.0;
      for (const CurveSample& x : curve.samples()) max_kg = std::max(max_kg, std::abs(x.kg));
      if (max_kg >= cfg.flatness) return inconsistent("planar chart curve is not a geodesic, max |k_g| = " + std::to_string(max_kg));
      out.generating_curve = std::move(curve);
    } catch (const Error& e) {
      return inconsistent(std::string("curve recovery failed: ") + e.what());
    }
    out.verdict = Verdict::kCylinder;
    return out;
  }

  TraceOptions opt;
  opt.length = cfg.trace_length;
  opt.step = cfg.trace_step;
  opt.tol = cfg.planar;
  const std::vector<ChartDir> seeds = select_seeds(out.planar, d, std::max(5, cfg.seeds));
  try {
    out.rulings = extract_rulings(s, seeds, opt, cfg.jobs);
  } catch (const Error& e) {
    return inconsistent(std::string("ruling trace failed: ") + e.what());
  }
  for (const Ruling& r : out.rulings) out.ruling_verticality = std::max(out.ruling_verticality, r.verticality);
  if (out.ruling_verticality >= cfg.verticality) {
    return inconsistent("flat chart with non-vertical rulings, verticality = " + std::to_string(out.ruling_verticality));
  }
  try {
    out.generating_curve = recover_generating_curve(s, out.t0, cfg.recover_samples);
  } catch (const Error& e) {
    return inconsistent(std::string("curve recovery failed: ") + e.what());
  }
  out.verdict = Verdict::kCylinder;
  return out;
}

}  // namespace h2xr

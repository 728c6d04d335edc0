#include "h2xr/io.hpp"

#include <cmath>
#include <limits>
#include <map>

#include <fmt/format.h>

namespace h2xr {

namespace {

std::string num(double x) { return fmt::format("{:.17g}", x); }

Json number_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

Json point_json(const SpacetimeVec& v) { return Json::array({v.x0, v.x1, v.x2}); }

}  // namespace

void write_curvature_csv(std::ostream& out, const std::vector<CurvatureRow>& rows) {
  out << "u,v,k1,k2,H,Kext,Kint_gauss,Kint_brioschi,nu,class,status\n";
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (const CurvatureRow& r : rows) {
    const ShapeData& sd = r.shape;
    const bool ok = r.ok();
    auto col = [&](double x) { return num(ok ? x : nan); };
    out << fmt::format("{},{},{},{},{},{},{},{},{},{},{}\n", num(r.u), num(r.v), col(sd.k1), col(sd.k2),
                       col(sd.H), col(sd.Kext), col(sd.Kint_gauss), col(sd.Kint_brioschi), col(sd.nu),
                       ok ? point_tag_name(r.cls) : std::string_view("NONE"), r.status);
  }
}

Json curvature_summary(const std::vector<CurvatureRow>& rows, int n_u, int n_v, double tol) {
  double kint = 0.0, kbrio = 0.0, kext = 0.0, h = 0.0;
  std::map<PointTag, int> counts{{PointTag::kPlanar, 0}, {PointTag::kParabolic, 0}, {PointTag::kGeneric, 0}};
  int failed = 0;
  for (const CurvatureRow& r : rows) {
    if (!r.ok()) {
      ++failed;
      continue;
    }
    kint = std::max(kint, std::abs(r.shape.Kint_gauss));
    kbrio = std::max(kbrio, std::abs(r.shape.Kint_brioschi));
    kext = std::max(kext, std::abs(r.shape.Kext));
    h = std::max(h, std::abs(r.shape.H));
    ++counts[r.cls];
  }
  Json j;
  j["n_u"] = n_u;
  j["n_v"] = n_v;
  j["tol"] = tol;
  j["max_abs_Kint"] = kint;
  j["max_abs_Kint_brioschi"] = kbrio;
  j["max_abs_Kext"] = kext;
  j["max_abs_H"] = h;
  Json c = Json::object(), f = Json::object();
  const double total = static_cast<double>(rows.size());
  for (const auto& [tag, n] : counts) {
    c[std::string(point_tag_name(tag))] = n;
    f[std::string(point_tag_name(tag))] = total > 0 ? n / total : 0.0;
  }
  c["FAILED"] = failed;
  f["FAILED"] = total > 0 ? failed / total : 0.0;
  j["class_counts"] = c;
  j["class_fractions"] = f;
  return j;
}

void write_trace_csv(std::ostream& out, const TraceRecord& tr) {
  out << "s,u,v,h_x0,h_x1,h_x2,t,k2,H,lambda\n";
  for (const TraceSample& s : tr.samples) {
    const SpacetimeVec& p = s.P.h.v();
    out << fmt::format("{},{},{},{},{},{},{},{},{},{}\n", num(s.s), num(s.u), num(s.v), num(p.x0), num(p.x1),
                       num(p.x2), num(s.P.t), num(s.k2), num(s.H), num(s.lambda));
  }
}

Json trace_sidecar(const TraceRecord& tr, double planar_tol) {
  Json j;
  j["stop_reason"] = stop_reason_name(tr.stop_reason);
  j["stop_backward"] = stop_reason_name(tr.stop_backward);
  j["stop_forward"] = stop_reason_name(tr.stop_forward);
  j["samples"] = tr.samples.size();
  j["step"] = tr.step;
  if (!tr.samples.empty()) {
    j["s_min"] = tr.samples.front().s;
    j["s_max"] = tr.samples.back().s;
  }
  // Each diagnostic is independent; a short or planar trace loses only the
  // parts that need more.
  auto attempt = [&](const char* key, auto&& fn) {
    try {
      j[key] = fn();
    } catch (const Error& e) {
      j[key] = nullptr;
      j[std::string(key) + "_error"] = error_code_name(e.code());
    }
  };
  attempt("deviation", [&] {
    const GeodesicDeviation d = geodesic_deviation(tr);
    return Json{{"max_dev", d.max_dev}, {"at_s", d.at_s}};
  });
  attempt("residuals", [&] {
    const FrameResiduals r = frame_ode_residuals(tr);
    return Json{{"lambda_ode", r.lambda_ode}, {"k2_ode", r.k2_ode}, {"de2", r.de2}, {"de3", r.de3}};
  });
  attempt("fit", [&] {
    const AffineFit f = fit_inverse_H(tr, planar_tol);
    return Json{{"a", f.a}, {"b", f.b}, {"rms_residual", f.rms_residual}, {"n", f.n}};
  });
  attempt("ruling_verticality", [&] { return Json(ruling_verticality(tr)); });
  return j;
}

Json verdict_json(const CylinderVerdict& v) {
  Json j;
  j["verdict"] = verdict_name(v.verdict);
  j["ruling_verticality"] = number_or_null(v.ruling_verticality);
  const FlatnessReport& f = v.flatness;
  j["flatness"] = {{"max_abs_Kint", f.max_abs_Kint}, {"max_abs_Kext", f.max_abs_Kext}, {"n_u", f.n_u},
                   {"n_v", f.n_v}, {"tol", f.tol}, {"pass", f.pass()}};
  Json comps = Json::array();
  for (const PlanarComponent& c : v.planar.components) {
    comps.push_back({{"cells", c.cells.size()},
                     {"u_range", {c.u_lo, c.u_hi}},
                     {"v_range", {c.v_lo, c.v_hi}},
                     {"spans_v", c.spans_v}});
  }
  j["planar_components"] = comps;
  Json curve = Json::array();
  if (v.generating_curve) {
    for (const CurveSample& s : v.generating_curve->samples()) curve.push_back(point_json(s.p.v()));
  }
  j["generating_curve"] = curve;
  j["t0"] = v.t0;
  Json rulings = Json::array();
  for (const Ruling& r : v.rulings) {
    const TraceSample& seed = *std::min_element(
        r.trace.samples.begin(), r.trace.samples.end(),
        [](const TraceSample& a, const TraceSample& b) { return std::abs(a.s) < std::abs(b.s); });
    rulings.push_back({{"seed", {seed.u, seed.v}},
                       {"samples", r.trace.samples.size()},
                       {"stop_reason", stop_reason_name(r.trace.stop_reason)},
                       {"verticality", r.verticality},
                       {"max_dev", r.max_dev}});
  }
  j["evidence"] = {{"parabolic_cells", v.planar.count(PointTag::kParabolic)},
                   {"planar_cells", v.planar.count(PointTag::kPlanar)},
                   {"generic_cells", v.planar.count(PointTag::kGeneric)},
                   {"rulings", rulings},
                   {"diagnostics", v.diagnostics}};
  return j;
}

Json report_json(const VerificationReport& r) {
  Json j;
  j["overall"] = r.pass() ? "PASS" : "FAIL";
  Json crit = Json::array();
  for (int c = 1; c <= kCriterionCount; ++c) {
    crit.push_back({{"criterion", c}, {"title", criterion_title(c)}, {"status", r.criterion_pass(c) ? "PASS" : "FAIL"}});
  }
  j["criteria"] = crit;
  Json entries = Json::array();
  for (const CheckEntry& e : r.entries) {
    entries.push_back({{"id", e.id},
                       {"criterion", e.criterion},
                       {"name", e.name},
                       {"status", e.pass ? "PASS" : "FAIL"},
                       {"measured", number_or_null(e.measured)},
                       {"relation", e.relation},
                       {"threshold", e.threshold}});
  }
  j["entries"] = entries;
  return j;
}

std::string report_text(const VerificationReport& r) {
  std::string out;
  for (int c = 1; c <= kCriterionCount; ++c) {
    out += fmt::format("[{}] criterion {:2d}: {}\n", r.criterion_pass(c) ? "PASS" : "FAIL", c, criterion_title(c));
    for (const CheckEntry* e : r.criterion_entries(c)) {
      out += fmt::format("    {} {:<10} {:<58} {:.6e} {} {:.3e}\n", e->pass ? "ok  " : "FAIL", e->id, e->name,
                         e->measured, e->relation, e->threshold);
    }
  }
  out += fmt::format("overall: {}\n", r.pass() ? "PASS" : "FAIL");
  return out;
}

void write_geodesic_csv(std::ostream& out, const ProdGeodesic& g, double s_max, double step) {
  if (!(step > 0.0) || !(s_max >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "geodesic sampling needs step > 0");
  out << "s,h_x0,h_x1,h_x2,t\n";
  const auto n = static_cast<long>(std::llround(s_max / step));
  for (long i = 0; i <= n; ++i) {
    const double s = std::min(s_max, static_cast<double>(i) * step);
    const ProdPoint p = g.at(s);
    const SpacetimeVec& h = p.h.v();
    out << fmt::format("{},{},{},{},{}\n", num(s), num(h.x0), num(h.x1), num(h.x2), num(p.t));
  }
}

}  // namespace h2xr

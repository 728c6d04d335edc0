#include <doctest.h>

#include <cmath>
#include <sstream>

#include "h2xr/io.hpp"

using namespace h2xr;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::kInvalidArgument;
}

double point_gap(const Surface& a, const Surface& b, double u, double v) {
  return prod_dist(a.point(u, v), b.point(u, v));
}

int count_lines(const std::string& s) { return static_cast<int>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST_CASE("surface kinds match the library builders") {
  const Surface circle = surface_from_json(Json::parse(R"({"kind":"cylinder","curve":{"kind":"preset","name":"circle"}})"));
  const Surface ref = make_preset_cylinder(CylinderPreset::kCircle);
  CHECK(circle.domain().u_hi == doctest::Approx(ref.domain().u_hi));
  CHECK(point_gap(circle, ref, 1.3, -2.0) < 1e-14);

  // k = coth 1 from the same Frenet start traces the preset circle
  const Surface k = surface_from_json(Json::parse(
      R"({"kind":"cylinder","curve":{"kind":"constant","k":1.3130352854993312,"s_range":[0,7.38]},"v_range":[-1,1]})"));
  CHECK(k.domain().v_lo == -1.0);
  CHECK(point_gap(k, ref, 2.0, 0.5) < 1e-9);

  const Surface slice = surface_from_json(Json::parse(R"({"kind":"slice","t0":0.25,"radius":1.5})"));
  CHECK(slice.point(1.0, 0.3).t == 0.25);
  CHECK(slice.domain().u_hi == 1.5);

  const Surface graph = surface_from_json(Json::parse(R"({"kind":"graph","f":{"kind":"linear","a":0.5}})"));
  CHECK(graph.point(0.4, 0.1).t == doctest::Approx(0.2));
  const Surface polar = surface_from_json(Json::parse(R"({"kind":"graph","f":{"kind":"bilinear","coef":0.3},"chart":"polar"})"));
  CHECK(polar.point(0.5, 2.0).t == doctest::Approx(0.3));

  const Surface spline = surface_from_json(
      Json::parse(R"({"kind":"cylinder","curve":{"kind":"spline","s0":-1,"h":0.5,"values":[0,0.2,0.1,-0.3,0.4]}})"));
  CHECK(spline.domain().u_lo == -1.0);
  CHECK(spline.domain().u_hi == doctest::Approx(1.0));

  const Surface fd = surface_from_json(
      Json::parse(R"({"kind":"cylinder","curve":{"kind":"preset","name":"horocycle"},"derivatives":"finite-difference"})"));
  CHECK(fd.mode() == DerivativeMode::kFiniteDifference);
}

TEST_CASE("domain, transform and label options") {
  const Json base = Json::parse(R"({"kind":"slice","t0":0,"radius":2})");
  Json j = base;
  j["domain"] = Json::parse(R"({"u":[0.5,1.5]})");
  j["label"] = "half slice";
  const Surface s = surface_from_json(j);
  CHECK(s.domain().u_lo == 0.5);
  CHECK(s.domain().u_hi == 1.5);
  CHECK(s.label() == "half slice");

  j = base;
  j["transform"] = Json::parse(R"({"su":2.0})");
  const Surface t = surface_from_json(j);
  const Surface plain = surface_from_json(base);
  // U = 2 (u - c) + 2 c = 2u
  CHECK(prod_dist(t.point(2.0, 1.0), plain.point(1.0, 1.0)) < 1e-12);
  CHECK(t.domain().u_hi == doctest::Approx(2.0 * plain.domain().u_hi));

  const Surface p = surface_from_json(Json::parse(
      R"({"kind":"perturbed","eps":0.01,"base":{"kind":"slice","t0":0,"radius":2}})"));
  const double u = p.domain().u_mid(), v = p.domain().v_mid();
  CHECK(p.point(u, v).t == doctest::Approx(0.01));  // bump is 1 at the center
}

TEST_CASE("malformed surfaces are BAD_CONFIG") {
  for (const char* text : {
           R"({"kind":"torus"})",
           R"({"kind":"cylinder"})",
           R"({"kind":"cylinder","curve":{"kind":"constant","k":"one","s_range":[0,1]}})",
           R"({"kind":"cylinder","curve":{"kind":"constant","k":1,"s_range":[0]}})",
           R"({"kind":"cylinder","curve":{"kind":"preset","name":"ellipse"}})",
           R"({"kind":"cylinder","curve":{"kind":"preset","name":"circle"},"derivatives":"symbolic"})",
           R"({"kind":"graph","f":{"kind":"cubic"}})",
           R"({"kind":"graph","f":{"kind":"linear","a":1},"chart":"klein"})",
           R"({"kind":"slice","domain":{"u":[1,1]}})",
           R"({"kind":"slice","domain":{"v":[2,1]}})",
           R"({"kind":"perturbed","eps":0.1})",
           R"([1,2,3])",
       }) {
    CAPTURE(text);
    CHECK(code_of([&] { surface_from_json(Json::parse(text)); }) == ErrorCode::kBadConfig);
  }
}

TEST_CASE("tolerance overrides") {
  Tolerances t;
  apply_tolerance(t, "flatness=1e-12");
  apply_tolerance(t, "verticality=2e-6");
  apply_tolerance(t, "planar=3e-8");
  CHECK(t.flatness == 1e-12);
  CHECK(t.verticality == 2e-6);
  CHECK(t.planar == 3e-8);
  for (const char* bad : {"flatness", "flatness=", "flatness=0", "flatness=-1", "flatness=1e-6x", "spin=1",
                          "flatness=inf", "flatness=nan"}) {
    CAPTURE(bad);
    CHECK(code_of([&] { apply_tolerance(t, bad); }) == ErrorCode::kBadConfig);
  }
}

TEST_CASE("run config sections") {
  const RunConfig cfg = run_config_from_json(Json::parse(R"({
    "surface": {"kind": "slice", "t0": 0, "radius": 2},
    "grid": {"n_u": 12, "n_v": 7},
    "trace": {"length": 3, "step": 0.002, "u0": 0.5},
    "tolerances": {"flatness": 1e-7},
    "classifier": {"grid": 15, "seeds": 6},
    "geodesic": {"t": 1, "s_max": 2},
    "corpus": [{"label": "slice", "expect": "NOT_FLAT", "surface": {"kind": "slice", "t0": 0, "radius": 1}}],
    "seed": 42
  })"));
  CHECK(cfg.surface.has_value());
  CHECK(cfg.grid_u == 12);
  CHECK(cfg.grid_v == 7);
  CHECK(cfg.trace_length == 3.0);
  CHECK(cfg.trace_step == 0.002);
  CHECK(cfg.u0 == 0.5);
  CHECK_FALSE(cfg.v0.has_value());
  CHECK(cfg.tol.flatness == 1e-7);
  CHECK(cfg.tol.planar == 1e-7);
  CHECK(cfg.geodesic.t == 1.0);
  CHECK(cfg.geodesic.s_max == 2.0);
  REQUIRE(cfg.corpus.size() == 1);
  CHECK(cfg.corpus[0].expect == Verdict::kNotFlat);
  CHECK(cfg.seed == 42u);

  const ClassifierConfig cc = classifier_config(cfg, 3);
  CHECK(cc.grid == 15);
  CHECK(cc.seeds == 6);
  CHECK(cc.flatness == 1e-7);
  CHECK(cc.trace_length == 3.0);
  CHECK(cc.jobs == 3);

  const RunConfig empty = run_config_from_json(Json::object());
  CHECK_FALSE(empty.surface.has_value());
  CHECK(empty.grid_u == 32);
  CHECK(empty.tol.verticality == 1e-6);

  for (const char* bad : {R"({"grid":{"n_u":0}})", R"({"grid":{"n_u":2.5}})", R"({"trace":{"step":-1}})",
                          R"({"tolerances":{"flatness":0}})", R"({"classifier":{"grid":4}})",
                          R"({"corpus":[{"expect":"MAYBE","surface":{"kind":"slice"}}]})", R"({"seed":-3})",
                          R"({"surface":{"kind":"slice","radius":-1,"domain":{"u":[1,0]}}})"}) {
    CAPTURE(bad);
    CHECK(code_of([&] { run_config_from_json(Json::parse(bad)); }) == ErrorCode::kBadConfig);
  }
  CHECK(code_of([] { load_run_config("/nonexistent/run.json"); }) == ErrorCode::kBadConfig);
}

TEST_CASE("curvature CSV and summary") {
  const Surface s = make_slice(0.0, 2.0);
  const auto rows = curvature_grid(s, 4, 3, 1e-7);
  std::ostringstream csv;
  write_curvature_csv(csv, rows);
  CHECK(count_lines(csv.str()) == 13);
  CHECK(csv.str().rfind("u,v,k1,k2,H,Kext,Kint_gauss,Kint_brioschi,nu,class,status\n", 0) == 0);
  CHECK(csv.str().find(",PLANAR,ok\n") != std::string::npos);
  const Json j = curvature_summary(rows, 4, 3, 1e-7);
  CHECK(j["max_abs_Kint"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(j["class_counts"]["PLANAR"] == 12);
  CHECK(j["class_fractions"]["PLANAR"].get<double>() == 1.0);
}

TEST_CASE("trace CSV and sidecar") {
  const Surface s = make_preset_cylinder(CylinderPreset::kCircle);
  const TraceRecord tr = trace_asymptotic(s, s.domain().u_mid(), 0.0, {1.0, 1e-2, 1e-7});
  std::ostringstream csv;
  write_trace_csv(csv, tr);
  CHECK(count_lines(csv.str()) == static_cast<int>(tr.samples.size()) + 1);
  const Json side = trace_sidecar(tr, 1e-7);
  CHECK(side["stop_reason"] == "MAX_LENGTH");
  CHECK(side["deviation"]["max_dev"].get<double>() < 1e-9);
  CHECK(side["fit"]["b"].get<double>() == doctest::Approx(2.0 * std::tanh(1.0)));

  // Too short for the frame residuals but enough for the fit.
  TraceRecord shortened = tr;
  shortened.samples.resize(3);
  const Json part = trace_sidecar(shortened, 1e-7);
  CHECK(part["residuals"].is_null());
  CHECK(part["residuals_error"] == "INSUFFICIENT_SAMPLES");
  CHECK(part["fit"]["n"] == 3);
}

TEST_CASE("verdict and report serialization") {
  const CylinderVerdict v = classify_surface(make_preset_cylinder(CylinderPreset::kInflection));
  const Json j = verdict_json(v);
  CHECK(j["verdict"] == "CYLINDER");
  REQUIRE(j["planar_components"].size() == 1);
  CHECK(j["planar_components"][0]["spans_v"] == true);
  REQUIRE(v.generating_curve.has_value());
  CHECK(j["generating_curve"].size() == v.generating_curve->samples().size());
  CHECK(j["evidence"]["rulings"].size() == v.rulings.size());

  VerificationReport r;
  r.entries.push_back({"PROP1", 1, "a", 1e-12, 1e-8, "<", true});
  r.entries.push_back({"DIVERGENCE", 9, "b", 3.0, 10.0, ">=", false});
  const Json rj = report_json(r);
  CHECK(rj["overall"] == "FAIL");
  CHECK(rj["criteria"][0]["status"] == "PASS");
  CHECK(rj["criteria"][8]["status"] == "FAIL");
  CHECK(rj["entries"][1]["threshold"] == 10.0);
  const std::string text = report_text(r);
  CHECK(count_lines(text) == kCriterionCount + 2 + 1);
  CHECK(text.find("overall: FAIL") != std::string::npos);
}

TEST_CASE("geodesic CSV") {
  const ProdPoint p{H2Point::origin(), 0.0};
  const ProdGeodesic g = prod_geodesic(ProdTangent(p, {0.0, 0.0, 1.0}, 0.0));
  std::ostringstream csv;
  write_geodesic_csv(csv, g, 1.0, 0.25);
  CHECK(count_lines(csv.str()) == 6);
  CHECK(csv.str().find("\n1,1.5430806348152437,0,1.1752011936438014,0\n") != std::string::npos);
  CHECK(code_of([&] { write_geodesic_csv(csv, g, 1.0, 0.0); }) == ErrorCode::kInvalidArgument);
}

#include "h2xr/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

namespace h2xr {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::kBadConfig, what); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) bad(std::string("missing key \"") + key + "\"");
  return j.at(key);
}

double number(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number()) bad(std::string("\"") + key + "\" must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) bad(std::string("\"") + key + "\" must be finite");
  return x;
}

double number_or(const Json& j, const char* key, double def) {
  return j.is_object() && j.contains(key) ? number(j, key) : def;
}

int integer_or(const Json& j, const char* key, int def) {
  if (!j.is_object() || !j.contains(key)) return def;
  const Json& v = j.at(key);
  if (!v.is_number_integer()) bad(std::string("\"") + key + "\" must be an integer");
  return v.get<int>();
}

std::string text_or(const Json& j, const char* key, std::string def) {
  if (!j.is_object() || !j.contains(key)) return def;
  const Json& v = j.at(key);
  if (!v.is_string()) bad(std::string("\"") + key + "\" must be a string");
  return v.get<std::string>();
}

std::pair<double, double> range(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    bad(std::string("\"") + key + "\" must be a pair of numbers");
  }
  return {v[0].get<double>(), v[1].get<double>()};
}

std::pair<double, double> range_or(const Json& j, const char* key, std::pair<double, double> def) {
  return j.is_object() && j.contains(key) ? range(j, key) : def;
}

SpacetimeVec vec3(const Json& j, const char* key, const SpacetimeVec& def) {
  if (!j.is_object() || !j.contains(key)) return def;
  const Json& v = j.at(key);
  if (!v.is_array() || v.size() != 3) bad(std::string("\"") + key + "\" must be three numbers");
  for (const Json& x : v) {
    if (!x.is_number()) bad(std::string("\"") + key + "\" must be three numbers");
  }
  return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
}

DerivativeMode derivative_mode(const Json& j) {
  const std::string m = text_or(j, "derivatives", "analytic");
  if (m == "analytic") return DerivativeMode::kAnalytic;
  if (m == "finite-difference") return DerivativeMode::kFiniteDifference;
  bad("unknown derivatives mode \"" + m + "\"");
}

CurveProfile curve_profile(const Json& c) {
  const std::string kind = text_or(c, "kind", "");
  if (kind == "preset") {
    const std::string name = text_or(c, "name", "");
    for (CylinderPreset p : all_cylinder_presets()) {
      if (preset_name(p) == name) return cylinder_profile(p);
    }
    bad("unknown curve preset \"" + name + "\"");
  }
  if (kind == "constant") {
    const auto [a, b] = range(c, "s_range");
    return {constant_curvature(number(c, "k")), a, b};
  }
  if (kind == "linear") {
    const auto [a, b] = range(c, "s_range");
    return {linear_curvature(number(c, "k0"), number(c, "k1")), a, b};
  }
  if (kind == "spline") {
    const double s0 = number(c, "s0"), h = number(c, "h");
    const Json& vals = field(c, "values");
    if (!vals.is_array()) bad("\"values\" must be an array");
    std::vector<double> v;
    for (const Json& x : vals) {
      if (!x.is_number()) bad("spline values must be numbers");
      v.push_back(x.get<double>());
    }
    const double s1 = s0 + h * static_cast<double>(v.empty() ? 0 : v.size() - 1);
    return {spline_curvature(s0, h, std::move(v)), s0, s1};
  }
  bad("unknown curve kind \"" + kind + "\"");
}

Surface build(const Json& j) {
  const std::string kind = text_or(j, "kind", "");
  if (kind == "cylinder") {
    const CurveProfile prof = curve_profile(field(j, "curve"));
    const auto [v_lo, v_hi] = range_or(j, "v_range", {-5.0, 5.0});
    const H2Curve alpha = curve_from_curvature(prof.kg, prof.s_lo, prof.s_hi, number_or(j, "step", 1e-3));
    return make_cylinder(alpha, v_lo, v_hi, derivative_mode(j));
  }
  if (kind == "slice") return make_slice(number_or(j, "t0", 0.0), number_or(j, "radius", 2.0));
  if (kind == "graph") {
    const Json& f = field(j, "f");
    const std::string fk = text_or(f, "kind", "");
    HeightFunction height;
    if (fk == "bilinear") {
      height = bilinear_height(number(f, "coef"));
    } else if (fk == "linear") {
      height = linear_height(number(f, "a"));
    } else {
      bad("unknown height function kind \"" + fk + "\"");
    }
    const std::string ck = text_or(j, "chart", "fermi");
    GraphChart chart;
    if (ck == "fermi") {
      chart = GraphChart::kFermi;
    } else if (ck == "polar") {
      chart = GraphChart::kPolar;
    } else {
      bad("unknown graph chart \"" + ck + "\"");
    }
    return make_graph(height, chart, default_graph_domain(chart), derivative_mode(j));
  }
  if (kind == "perturbed") {
    const Surface base = surface_from_json(field(j, "base"));
    return perturb(base, number(j, "eps"), gaussian_bump(base.domain()));
  }
  bad("unknown surface kind \"" + kind + "\"");
}

}  // namespace

Surface surface_from_json(const Json& j) {
  try {
    if (!j.is_object()) bad("surface must be an object");
    Surface s = build(j);
    if (j.contains("domain")) {
      const Json& d = j.at("domain");
      const auto [u_lo, u_hi] = range_or(d, "u", {s.domain().u_lo, s.domain().u_hi});
      const auto [v_lo, v_hi] = range_or(d, "v", {s.domain().v_lo, s.domain().v_hi});
      s = s.with_domain({u_lo, u_hi, v_lo, v_hi});
    }
    if (j.contains("transform")) {
      const Json& t = j.at("transform");
      s = transform_chart(s, {number_or(t, "su", 1.0), number_or(t, "sv", 1.0), number_or(t, "angle", 0.0)});
    }
    if (j.contains("label")) s = s.with_label(text_or(j, "label", ""));
    return s;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kBadConfig) throw;
    throw Error(ErrorCode::kBadConfig, std::string("invalid surface: ") + e.what());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kBadConfig, std::string("invalid surface: ") + e.what());
  }
}

void apply_tolerance(Tolerances& tol, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) bad("tolerance override must look like KEY=VAL");
  const std::string_view key = assignment.substr(0, eq), val = assignment.substr(eq + 1);
  double x = 0.0;
  const auto [end, ec] = std::from_chars(val.data(), val.data() + val.size(), x);
  if (ec != std::errc() || end != val.data() + val.size() || !(x > 0.0) || !std::isfinite(x)) {
    bad("tolerance value must be a positive number: " + std::string(assignment));
  }
  if (key == "flatness") {
    tol.flatness = x;
  } else if (key == "verticality") {
    tol.verticality = x;
  } else if (key == "planar") {
    tol.planar = x;
  } else {
    bad("unknown tolerance key \"" + std::string(key) + "\"");
  }
}

Verdict verdict_from_name(std::string_view name) {
  for (Verdict v : {Verdict::kCylinder, Verdict::kNotFlat, Verdict::kInconsistent}) {
    if (verdict_name(v) == name) return v;
  }
  bad("unknown verdict \"" + std::string(name) + "\"");
}

RunConfig run_config_from_json(const Json& j) {
  try {
    if (!j.is_object()) bad("config must be a JSON object");
    RunConfig cfg;
    if (j.contains("surface")) {
      cfg.surface = j.at("surface");
      surface_from_json(*cfg.surface);  // validate early
    }
    if (j.contains("grid")) {
      const Json& g = j.at("grid");
      cfg.grid_u = integer_or(g, "n_u", cfg.grid_u);
      cfg.grid_v = integer_or(g, "n_v", cfg.grid_v);
      if (cfg.grid_u < 1 || cfg.grid_v < 1) bad("grid sizes must be positive");
    }
    if (j.contains("trace")) {
      const Json& t = j.at("trace");
      cfg.trace_length = number_or(t, "length", cfg.trace_length);
      cfg.trace_step = number_or(t, "step", cfg.trace_step);
      if (t.contains("u0")) cfg.u0 = number(t, "u0");
      if (t.contains("v0")) cfg.v0 = number(t, "v0");
      if (!(cfg.trace_length > 0.0) || !(cfg.trace_step > 0.0)) bad("trace length and step must be positive");
    }
    if (j.contains("tolerances")) {
      const Json& t = j.at("tolerances");
      if (!t.is_object()) bad("\"tolerances\" must be an object");
      for (const auto& [k, v] : t.items()) {
        if (!v.is_number()) bad("tolerance \"" + k + "\" must be a number");
        apply_tolerance(cfg.tol, k + "=" + v.dump());
      }
    }
    if (j.contains("classifier")) {
      const Json& c = j.at("classifier");
      cfg.classifier_grid = integer_or(c, "grid", cfg.classifier_grid);
      cfg.seeds = integer_or(c, "seeds", cfg.seeds);
      if (cfg.classifier_grid < 8) bad("classifier grid must be at least 8");
      if (cfg.seeds < 1) bad("classifier seeds must be positive");
    }
    if (j.contains("geodesic")) {
      const Json& g = j.at("geodesic");
      GeodesicRequest& q = cfg.geodesic;
      q.point = vec3(g, "point", q.point);
      q.t = number_or(g, "t", q.t);
      q.velocity_h = vec3(g, "velocity_h", q.velocity_h);
      q.velocity_t = number_or(g, "velocity_t", q.velocity_t);
      q.s_max = number_or(g, "s_max", q.s_max);
      q.step = number_or(g, "step", q.step);
      if (!(q.s_max > 0.0) || !(q.step > 0.0)) bad("geodesic s_max and step must be positive");
    }
    if (j.contains("corpus")) {
      const Json& c = j.at("corpus");
      if (!c.is_array()) bad("\"corpus\" must be an array");
      for (const Json& e : c) {
        cfg.corpus.push_back({text_or(e, "label", "corpus entry"), verdict_from_name(text_or(e, "expect", "")),
                              surface_from_json(field(e, "surface"))});
      }
    }
    if (j.contains("seed")) {
      const Json& s = j.at("seed");
      if (!s.is_number_unsigned()) bad("\"seed\" must be a non-negative integer");
      cfg.seed = s.get<std::uint64_t>();
    }
    return cfg;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kBadConfig, e.what());
  }
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) bad("cannot read config " + path.string());
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    bad("config " + path.string() + " is not valid JSON: " + e.what());
  }
  return run_config_from_json(j);
}

ClassifierConfig classifier_config(const RunConfig& cfg, int jobs) {
  ClassifierConfig c;
  c.flatness = cfg.tol.flatness;
  c.verticality = cfg.tol.verticality;
  c.planar = cfg.tol.planar;
  c.grid = cfg.classifier_grid;
  c.seeds = cfg.seeds;
  c.trace_length = cfg.trace_length;
  c.trace_step = cfg.trace_step;
  c.jobs = jobs;
  return c;
}

}  // namespace h2xr

// Command-line front end: curvature scans, traces, classification, the
// verification report and product geodesics.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "h2xr/io.hpp"

namespace fs = std::filesystem;
using namespace h2xr;

namespace {

enum Exit : int {
  kOk = 0,
  kVerifyFail = 1,
  kBadInput = 2,
  kNumerical = 3,
  kNotParabolicExit = 4,
  kInconsistentExit = 5,
};

struct Globals {
  std::string config;
  std::string out{"."};
  std::vector<std::string> tol;
  int jobs{1};
  std::optional<std::uint64_t> seed;
  std::optional<double> u0, v0;
};

RunConfig load(const Globals& g) {
  RunConfig cfg = g.config.empty() ? RunConfig{} : load_run_config(g.config);
  for (const std::string& t : g.tol) apply_tolerance(cfg.tol, t);
  if (g.seed) cfg.seed = g.seed;
  if (g.u0) cfg.u0 = g.u0;
  if (g.v0) cfg.v0 = g.v0;
  if (g.jobs < 1) throw Error(ErrorCode::kBadConfig, "--jobs must be at least 1");
  return cfg;
}

Surface surface_of(const RunConfig& cfg) {
  if (!cfg.surface) throw Error(ErrorCode::kBadConfig, "config has no \"surface\"");
  return surface_from_json(*cfg.surface);
}

// Files are staged in memory and written one at a time.
void write_file(const fs::path& dir, const std::string& name, const std::string& body) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kBadConfig, "cannot create output directory " + dir.string());
  std::ofstream f(dir / name, std::ios::binary);
  f << body;
  if (!f) throw Error(ErrorCode::kBadConfig, "cannot write " + (dir / name).string());
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

int cmd_curvature(const Globals& g) {
  const RunConfig cfg = load(g);
  const Surface s = surface_of(cfg);
  const auto rows = curvature_grid(s, cfg.grid_u, cfg.grid_v, cfg.tol.planar, g.jobs);
  std::ostringstream csv;
  write_curvature_csv(csv, rows);
  const Json summary = curvature_summary(rows, cfg.grid_u, cfg.grid_v, cfg.tol.planar);
  write_file(g.out, "curvature.csv", csv.str());
  write_file(g.out, "curvature_summary.json", dump(summary));
  fmt::print("curvature: {} points, max|Kint| = {:.6e}\n", rows.size(), summary["max_abs_Kint"].get<double>());
  for (const CurvatureRow& r : rows) {
    if (!r.ok()) {
      fmt::print(stderr, "error: evaluation failed at ({}, {}): {}\n", r.u, r.v, r.status);
      return kNumerical;
    }
  }
  return kOk;
}

int cmd_trace(const Globals& g) {
  const RunConfig cfg = load(g);
  const Surface s = surface_of(cfg);
  const double u0 = cfg.u0.value_or(s.domain().u_mid());
  const double v0 = cfg.v0.value_or(s.domain().v_mid());
  const TraceRecord tr = trace_asymptotic(s, u0, v0, {cfg.trace_length, cfg.trace_step, cfg.tol.planar});
  std::ostringstream csv;
  write_trace_csv(csv, tr);
  const Json side = trace_sidecar(tr, cfg.tol.planar);
  write_file(g.out, "trace.csv", csv.str());
  write_file(g.out, "trace.json", dump(side));
  fmt::print("trace: {} samples, stop {}\n", tr.samples.size(), stop_reason_name(tr.stop_reason));
  return kOk;
}

int cmd_classify(const Globals& g) {
  const RunConfig cfg = load(g);
  const Surface s = surface_of(cfg);
  const CylinderVerdict v = classify_surface(s, classifier_config(cfg, g.jobs));
  write_file(g.out, "verdict.json", dump(verdict_json(v)));
  fmt::print("verdict: {}\n", verdict_name(v.verdict));
  return v.verdict == Verdict::kInconsistent ? kInconsistentExit : kOk;
}

int cmd_verify(const Globals& g) {
  RunConfig cfg = load(g);
  VerifyOptions opt;
  opt.classifier = classifier_config(cfg, g.jobs);
  if (cfg.seed) opt.seed = *cfg.seed;
  opt.extra = std::move(cfg.corpus);
  const VerificationReport r = run_verification(opt);
  const std::string text = report_text(r);
  write_file(g.out, "report.json", dump(report_json(r)));
  write_file(g.out, "report.txt", text);
  fmt::print("{}", text);
  return r.pass() ? kOk : kVerifyFail;
}

int cmd_geodesic(const Globals& g) {
  const RunConfig cfg = load(g);
  const GeodesicRequest& q = cfg.geodesic;
  std::optional<ProdGeodesic> geo;
  try {
    const H2Point p(q.point);
    const double speed = std::hypot(spacelike_norm(q.velocity_h), q.velocity_t);
    if (!(speed > 0.0)) throw Error(ErrorCode::kBadConfig, "geodesic velocity is zero");
    geo = prod_geodesic(ProdTangent({p, q.t}, q.velocity_h / speed, q.velocity_t / speed));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kBadConfig) throw;
    throw Error(ErrorCode::kBadConfig, std::string("invalid geodesic: ") + e.what());
  }
  std::ostringstream csv;
  write_geodesic_csv(csv, *geo, q.s_max, q.step);
  write_file(g.out, "geodesic.csv", csv.str());
  fmt::print("geodesic: s in [0, {}] step {}\n", q.s_max, q.step);
  return kOk;
}

int exit_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::kBadConfig: return kBadInput;
    case ErrorCode::kNotParabolic: return kNotParabolicExit;
    default: return kNumerical;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical checks of flat surfaces in H2 x R"};
  app.require_subcommand(1);
  Globals g;
  auto add_globals = [&g](CLI::App* a) {
    a->add_option("--config", g.config, "JSON run configuration");
    a->add_option("--out", g.out, "output directory");
    a->add_option("--tol", g.tol, "tolerance override KEY=VAL (flatness, verticality, planar)")->take_all();
    a->add_option("--jobs", g.jobs, "worker threads");
    a->add_option("--seed", g.seed, "probe sampling seed");
  };
  add_globals(&app);

  std::function<int(const Globals&)> run;
  auto sub = [&](const char* name, const char* desc, int (*fn)(const Globals&)) {
    CLI::App* s = app.add_subcommand(name, desc);
    s->fallthrough();
    s->callback([&run, fn] { run = fn; });
    return s;
  };
  sub("curvature", "curvature grid CSV and summary", cmd_curvature);
  CLI::App* trace = sub("trace", "asymptotic trace CSV and sidecar", cmd_trace);
  trace->add_option("--u0", g.u0, "seed u (default: config, then domain center)");
  trace->add_option("--v0", g.v0, "seed v");
  sub("classify", "cylinder verdict", cmd_classify);
  sub("verify-paper", "full acceptance report", cmd_verify);
  sub("geodesic", "product geodesic samples", cmd_geodesic);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kBadInput;
  }

  try {
    return run(g);
  } catch (const Error& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return exit_for(e);
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kNumerical;
  }
}

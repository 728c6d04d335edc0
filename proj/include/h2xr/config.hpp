#pragma once

// Run configuration and the JSON surface schema.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "h2xr/verification.hpp"

namespace h2xr {

using Json = nlohmann::ordered_json;

// Builds a surface from its JSON description. Every failure, including an
// invalid domain, is reported as kBadConfig.
//
//   {"kind": "cylinder", "curve": {...}, "v_range": [lo, hi], "derivatives": "analytic"}
//     curve: {"kind": "constant", "k": r, "s_range": [a, b]}
//          | {"kind": "linear", "k0": r, "k1": r, "s_range": [a, b]}
//          | {"kind": "spline", "s0": r, "h": r, "values": [...]}
//          | {"kind": "preset", "name": "circle"}
//   {"kind": "slice", "t0": r, "radius": r}
//   {"kind": "graph", "f": {"kind": "bilinear", "coef": r} | {"kind": "linear", "a": r},
//    "chart": "fermi" | "polar"}
//   {"kind": "perturbed", "base": {...}, "eps": r}
//
// Optional on any kind: "domain": {"u": [a, b], "v": [c, d]} restricting the
// chart, then "transform": {"su": r, "sv": r, "angle": r}, and "label".
Surface surface_from_json(const Json& j);

struct Tolerances {
  double flatness{1e-6};
  double verticality{1e-6};
  double planar{1e-7};
};

// Applies one "KEY=VAL" override; kBadConfig for unknown keys or values
// that are not positive numbers.
void apply_tolerance(Tolerances& tol, std::string_view assignment);

struct GeodesicRequest {
  SpacetimeVec point{1.0, 0.0, 0.0};
  double t{0.0};
  SpacetimeVec velocity_h{0.0, 1.0, 0.0};
  double velocity_t{0.0};
  double s_max{5.0};
  double step{0.01};
};

struct RunConfig {
  std::optional<Json> surface;
  int grid_u{32}, grid_v{32};
  double trace_length{5.0};
  double trace_step{1e-3};
  std::optional<double> u0, v0;
  Tolerances tol;
  int classifier_grid{21};
  int seeds{10};
  GeodesicRequest geodesic;
  std::vector<CorpusEntry> corpus;
  std::optional<std::uint64_t> seed;
};

RunConfig run_config_from_json(const Json& j);
RunConfig load_run_config(const std::filesystem::path& path);

ClassifierConfig classifier_config(const RunConfig& cfg, int jobs);

Verdict verdict_from_name(std::string_view name);

}  // namespace h2xr

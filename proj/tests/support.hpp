#pragma once

// Random generators and small helpers shared by the unit tests.

#include <cmath>
#include <cstdint>
#include <random>

#include "h2xr/hyperbolic.hpp"

namespace h2xr::testing {

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
  }

  // Unit tangent at p with a uniformly random direction.
  H2Tangent unit_tangent(const H2Point& p) {
    for (;;) {
      const SpacetimeVec w{uniform(-1, 1), uniform(-1, 1), uniform(-1, 1)};
      const SpacetimeVec t = tangential_part(p, w);
      const double len = spacelike_norm(t);
      if (len > 1e-3) return H2Tangent(p, t / len);
    }
  }

  // Point at hyperbolic distance at most r_max from the origin.
  H2Point point(double r_max) {
    const H2Point o = H2Point::origin();
    return h2_exp(o, unit_tangent(o), uniform(0.0, r_max));
  }

 private:
  std::mt19937_64 rng_;
};

inline double coth(double x) { return std::cosh(x) / std::sinh(x); }

}  // namespace h2xr::testing

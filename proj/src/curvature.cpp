#include "h2xr/curvature.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

namespace h2xr {

namespace {

constexpr double kStencilSpacing = 1e-3;
constexpr double kMinStencilSpacing = 1e-5;
constexpr std::array<double, 5> kFirst = {1.0, -8.0, 0.0, 8.0, -1.0};      // / 12h
constexpr std::array<double, 5> kSecond = {-1.0, 16.0, -30.0, 16.0, -1.0};  // / 12h^2

using Grid5 = std::array<std::array<double, 5>, 5>;

double d_u(const Grid5& f, double h) {
  double acc = 0.0;
  for (int i = 0; i < 5; ++i) acc += kFirst[i] * f[i][2];
  return acc / (12.0 * h);
}
double d_v(const Grid5& f, double h) {
  double acc = 0.0;
  for (int j = 0; j < 5; ++j) acc += kFirst[j] * f[2][j];
  return acc / (12.0 * h);
}
double d_uu(const Grid5& f, double h) {
  double acc = 0.0;
  for (int i = 0; i < 5; ++i) acc += kSecond[i] * f[i][2];
  return acc / (12.0 * h * h);
}
double d_vv(const Grid5& f, double h) {
  double acc = 0.0;
  for (int j = 0; j < 5; ++j) acc += kSecond[j] * f[2][j];
  return acc / (12.0 * h * h);
}
double d_uv(const Grid5& f, double h) {
  double acc = 0.0;
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) acc += kFirst[i] * kFirst[j] * f[i][j];
  }
  return acc / (144.0 * h * h);
}

double det3(const std::array<std::array<double, 3>, 3>& m) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
         m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

double second_form(const SurfaceJet& j, const ProdVec& w, const ProdVec& normal) {
  return prod_inner(prod_project(j.X, w), normal);
}

ChartDir first_form_unit(const FundamentalForms& f, ChartDir d) {
  const double n2 = f.E * d[0] * d[0] + 2.0 * f.F * d[0] * d[1] + f.G * d[1] * d[1];
  const double n = std::sqrt(n2);
  return {d[0] / n, d[1] / n};
}

}  // namespace

FundamentalForms forms_from_jet(const SurfaceJet& j) {
  FundamentalForms f;
  f.E = prod_inner(j.Xu, j.Xu);
  f.F = prod_inner(j.Xu, j.Xv);
  f.G = prod_inner(j.Xv, j.Xv);
  f.normal = unit_normal(j);
  f.nu = f.normal.t;
  f.L = second_form(j, j.Xuu, f.normal);
  f.M2 = second_form(j, j.Xuv, f.normal);
  f.N2 = second_form(j, j.Xvv, f.normal);
  return f;
}

FundamentalForms fundamental_forms(const Surface& s, double u, double v) {
  return forms_from_jet(s.jet(u, v));
}

FundamentalForms flipped(const FundamentalForms& f) {
  FundamentalForms g = f;
  g.normal = -1.0 * f.normal;
  g.nu = -f.nu;
  g.L = -f.L;
  g.M2 = -f.M2;
  g.N2 = -f.N2;
  return g;
}

MetricStencil metric_stencil(const Surface& s, double u, double v) {
  if (!s.domain().contains(u, v)) throw Error(ErrorCode::kOutOfDomain, "stencil center outside the domain");
  const double h = std::min(kStencilSpacing, 0.5 * s.domain().edge_distance(u, v));
  if (!(h >= kMinStencilSpacing)) {
    throw Error(ErrorCode::kOutOfDomain, "curvature stencil does not fit inside the domain");
  }
  MetricStencil st;
  st.h = h;
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) {
      const SurfaceJet jet = s.jet_unchecked(u + (i - 2) * h, v + (j - 2) * h);
      st.E[i][j] = prod_inner(jet.Xu, jet.Xu);
      st.F[i][j] = prod_inner(jet.Xu, jet.Xv);
      st.G[i][j] = prod_inner(jet.Xv, jet.Xv);
    }
  }
  return st;
}

double brioschi_curvature(const MetricStencil& st) {
  const double h = st.h;
  const double E = st.E[2][2], F = st.F[2][2], G = st.G[2][2];
  const double Eu = d_u(st.E, h), Ev = d_v(st.E, h), Evv = d_vv(st.E, h);
  const double Fu = d_u(st.F, h), Fv = d_v(st.F, h), Fuv = d_uv(st.F, h);
  const double Gu = d_u(st.G, h), Gv = d_v(st.G, h), Guu = d_uu(st.G, h);
  const std::array<std::array<double, 3>, 3> a = {{
      {-0.5 * Evv + Fuv - 0.5 * Guu, 0.5 * Eu, Fu - 0.5 * Ev},
      {Fv - 0.5 * Gu, E, F},
      {0.5 * Gv, F, G},
  }};
  const std::array<std::array<double, 3>, 3> b = {{
      {0.0, 0.5 * Ev, 0.5 * Gu},
      {0.5 * Ev, E, F},
      {0.5 * Gu, F, G},
  }};
  const double g = E * G - F * F;
  return (det3(a) - det3(b)) / (g * g);
}

ShapeData shape_data(const FundamentalForms& f, double kint_brioschi) {
  const double det = f.E * f.G - f.F * f.F;
  if (!(det > 0.0)) throw Error(ErrorCode::kNotImmersed, "degenerate first fundamental form");
  const double Hm = (f.E * f.N2 - 2.0 * f.F * f.M2 + f.G * f.L) / (2.0 * det);
  const double K = (f.L * f.N2 - f.M2 * f.M2) / det;
  const double disc = std::sqrt(std::max(0.0, Hm * Hm - K));
  // Larger root first, then the other from the product: exact k1 = 0 when
  // K = 0, and exact negation under a normal flip.
  const double big = Hm + std::copysign(disc, Hm);

  ShapeData sd;
  sd.k2 = big;
  sd.k1 = big != 0.0 ? K / big : 0.0;
  sd.H = 0.5 * (sd.k1 + sd.k2);
  sd.Kext = sd.k1 * sd.k2;
  sd.nu = f.nu;
  sd.Kint_gauss = sd.Kext - f.nu * f.nu;
  sd.Kint_brioschi = kint_brioschi;

  // Null vector of II - k1 I from its larger row.
  const double r0a = f.L - sd.k1 * f.E, r0b = f.M2 - sd.k1 * f.F;
  const double r1a = f.M2 - sd.k1 * f.F, r1b = f.N2 - sd.k1 * f.G;
  ChartDir d1;
  if (std::hypot(r0a, r0b) >= std::hypot(r1a, r1b)) {
    d1 = {-r0b, r0a};
  } else {
    d1 = {-r1b, r1a};
  }
  if (d1[0] == 0.0 && d1[1] == 0.0) d1 = {1.0, 0.0};
  d1 = first_form_unit(f, d1);
  const int dom = std::abs(d1[1]) >= std::abs(d1[0]) ? 1 : 0;
  if (d1[dom] < 0.0) d1 = {-d1[0], -d1[1]};
  sd.d1 = d1;
  sd.d2 = first_form_unit(f, {-(f.F * d1[0] + f.G * d1[1]), f.E * d1[0] + f.F * d1[1]});
  return sd;
}

ShapeData shape_data(const FundamentalForms& f, const MetricStencil& st) {
  return shape_data(f, brioschi_curvature(st));
}

ShapeData shape_at(const Surface& s, double u, double v) {
  const FundamentalForms f = fundamental_forms(s, u, v);
  const ShapeData sd = shape_data(f, metric_stencil(s, u, v));
  for (double x : {sd.k1, sd.k2, sd.Kint_brioschi, sd.nu}) {
    if (!std::isfinite(x)) throw Error(ErrorCode::kNonFinite, "curvature evaluation produced a non-finite value");
  }
  return sd;
}

PointClass classify_point(const ShapeData& sd, double tol) {
  if (!(tol > 0.0)) throw Error(ErrorCode::kInvalidArgument, "classification tolerance must be positive");
  const double a1 = std::abs(sd.k1), a2 = std::abs(sd.k2);
  if (std::max(a1, a2) < tol) return {PointTag::kPlanar, tol};
  if (a1 < tol) return {PointTag::kParabolic, tol};
  return {PointTag::kGeneric, tol};
}

std::string_view point_tag_name(PointTag tag) {
  switch (tag) {
    case PointTag::kPlanar: return "PLANAR";
    case PointTag::kParabolic: return "PARABOLIC";
    case PointTag::kGeneric: return "GENERIC";
  }
  return "GENERIC";
}

std::vector<double> cell_centers(double lo, double hi, int n) {
  std::vector<double> out(static_cast<std::size_t>(n));
  const double step = (hi - lo) / n;
  for (int i = 0; i < n; ++i) out[i] = lo + (i + 0.5) * step;
  return out;
}

void parallel_for(int n, int jobs, const std::function<void(int)>& fn) {
  const int workers = std::clamp(jobs, 1, std::max(1, n));
  if (workers == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (int i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

std::vector<CurvatureRow> curvature_grid(const Surface& s, int n_u, int n_v, double tol,
                                         int jobs) {
  if (n_u < 2 || n_v < 2) throw Error(ErrorCode::kInvalidArgument, "grid needs at least 2x2 samples");
  const auto us = cell_centers(s.domain().u_lo, s.domain().u_hi, n_u);
  const auto vs = cell_centers(s.domain().v_lo, s.domain().v_hi, n_v);
  std::vector<CurvatureRow> rows(static_cast<std::size_t>(n_u) * n_v);
  parallel_for(n_v, jobs, [&](int iv) {
    for (int iu = 0; iu < n_u; ++iu) {
      CurvatureRow& row = rows[static_cast<std::size_t>(iv) * n_u + iu];
      row.u = us[iu];
      row.v = vs[iv];
      try {
        row.shape = shape_at(s, row.u, row.v);
        row.cls = classify_point(row.shape, tol).tag;
        row.status = "ok";
      } catch (const Error& e) {
        constexpr double nan = std::numeric_limits<double>::quiet_NaN();
        row.shape = ShapeData{nan, nan, {nan, nan}, {nan, nan}, nan, nan, nan, nan, nan};
        row.status = std::string(error_code_name(e.code()));
      }
    }
  });
  return rows;
}

}  // namespace h2xr

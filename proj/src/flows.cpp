#include "h2xr/flows.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace h2xr {

namespace {

constexpr double kLambdaStep = 1e-5;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct LeftDomain {};

struct Frame {
  SurfaceJet jet;
  FundamentalForms forms;
  ShapeData shape;
};

ProdVec push(const SurfaceJet& j, const ChartDir& d) { return d[0] * j.Xu + d[1] * j.Xv; }

ChartDir aligned(const ChartDir& d, const ChartDir& ref) {
  if (d[0] * ref[0] + d[1] * ref[1] < 0.0) return {-d[0], -d[1]};
  return d;
}

ChartDir add(const ChartDir& y, double h, const ChartDir& k) { return {y[0] + h * k[0], y[1] + h * k[1]}; }

// Forms oriented to agree with ref_normal when one is given.
Frame frame_at(const Surface& s, double u, double v, const ProdVec* ref_normal, bool checked) {
  Frame fr;
  fr.jet = checked ? s.jet(u, v) : s.jet_unchecked(u, v);
  fr.forms = forms_from_jet(fr.jet);
  if (ref_normal != nullptr && prod_inner(fr.forms.normal, *ref_normal) < 0.0) {
    fr.forms = flipped(fr.forms);
  }
  fr.shape = shape_data(fr.forms, kNaN);
  return fr;
}

class Tracer {
 public:
  Tracer(const Surface& s, const TraceOptions& opt) : s_(s), opt_(opt) {}

  // Unit asymptotic direction at y with the sign closest to ref.
  ChartDir direction(const ChartDir& y, const ChartDir& ref) const {
    if (!s_.domain().contains(y[0], y[1])) throw LeftDomain{};
    const Frame fr = frame_at(s_, y[0], y[1], nullptr, true);
    check_conditioning(fr.shape);
    return aligned(fr.shape.d1, ref);
  }

  void check_conditioning(const ShapeData& sd) const {
    if (std::abs(sd.k2) - std::abs(sd.k1) < 10.0 * opt_.tol) {
      throw Error(ErrorCode::kDegenerateDirection, "principal curvatures too close for a unique asymptotic direction");
    }
  }

  // Sample at y; `forward` is the chart direction of increasing s.
  TraceSample sample(const ChartDir& y, double s, const ChartDir& forward,
                     const TraceSample* prev) const {
    const ProdVec* ref_e3 = prev != nullptr ? &prev->e3 : nullptr;
    const Frame fr = frame_at(s_, y[0], y[1], ref_e3, true);
    const ChartDir d1 = aligned(fr.shape.d1, forward);
    ChartDir d2 = fr.shape.d2;
    ProdVec e2 = push(fr.jet, d2);
    if (prev != nullptr && prod_inner(e2, prev->e2) < 0.0) {
      d2 = {-d2[0], -d2[1]};
      e2 = -1.0 * e2;
    }

    TraceSample out;
    out.s = s;
    out.u = y[0];
    out.v = y[1];
    out.P = fr.jet.X;
    out.k2 = fr.shape.k2;
    out.H = fr.shape.H;
    out.e1 = push(fr.jet, d1);
    out.e2 = e2;
    out.e3 = fr.forms.normal;

    // lambda = <D_{e2} e2, e1> by a central difference along d2.
    const double h = kLambdaStep;
    ProdVec side[2];
    for (int k = 0; k < 2; ++k) {
      const double sg = k == 0 ? 1.0 : -1.0;
      const Frame nb = frame_at(s_, y[0] + sg * h * d2[0], y[1] + sg * h * d2[1], &out.e3, false);
      side[k] = push(nb.jet, aligned(nb.shape.d2, d2));
    }
    const ProdVec de2 = (0.5 / h) * (side[0] - side[1]);
    out.lambda = prod_inner(prod_project(out.P, de2), out.e1);
    return out;
  }

  // Walks half the length in direction sign (+1 or -1) from the start.
  StopReason walk(const TraceSample& start, const ChartDir& d_start, double sign,
                  std::vector<TraceSample>& out) const {
    const double h = opt_.step;
    const auto n = static_cast<long>(std::llround(0.5 * opt_.length / h));
    ChartDir y{start.u, start.v};
    ChartDir ref{sign * d_start[0], sign * d_start[1]};
    const TraceSample* prev = &start;
    for (long i = 1; i <= n; ++i) {
      try {
        const ChartDir k1 = direction(y, ref);
        const ChartDir k2 = direction(add(y, 0.5 * h, k1), k1);
        const ChartDir k3 = direction(add(y, 0.5 * h, k2), k2);
        const ChartDir k4 = direction(add(y, h, k3), k3);
        const ChartDir next{y[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
                            y[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1])};
        if (!s_.domain().contains(next[0], next[1])) return StopReason::kDomainEdge;
        const ChartDir motion = direction(next, k4);
        const ChartDir forward{sign * motion[0], sign * motion[1]};
        TraceSample smp = sample(next, sign * static_cast<double>(i) * h, forward, prev);
        if (std::abs(smp.k2) < opt_.tol) return StopReason::kPlanarHit;
        out.push_back(std::move(smp));
        prev = &out.back();
        y = next;
        ref = motion;
      } catch (const LeftDomain&) {
        return StopReason::kDomainEdge;
      } catch (const Error&) {
        return StopReason::kStepFailure;
      }
    }
    return StopReason::kMaxLength;
  }

 private:
  const Surface& s_;
  const TraceOptions& opt_;
};

}  // namespace

std::string_view stop_reason_name(StopReason r) {
  switch (r) {
    case StopReason::kMaxLength: return "MAX_LENGTH";
    case StopReason::kDomainEdge: return "DOMAIN_EDGE";
    case StopReason::kStepFailure: return "STEP_FAILURE";
    case StopReason::kPlanarHit: return "PLANAR_HIT";
  }
  return "MAX_LENGTH";
}

TraceRecord trace_asymptotic(const Surface& s, double u0, double v0, const TraceOptions& opt) {
  if (!(opt.step > 0.0) || !(opt.length > 0.0) || !(opt.tol > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "trace length, step and tolerance must be positive");
  }
  const ShapeData start_shape = shape_data(fundamental_forms(s, u0, v0), kNaN);
  if (classify_point(start_shape, opt.tol).tag != PointTag::kParabolic) {
    throw Error(ErrorCode::kNotParabolic, "trace start is not a parabolic point");
  }
  const Tracer tracer(s, opt);
  tracer.check_conditioning(start_shape);

  const ChartDir d0 = start_shape.d1;
  const TraceSample start = tracer.sample({u0, v0}, 0.0, d0, nullptr);

  std::vector<TraceSample> backward, forward;
  // Reserving keeps the prev pointers into each vector valid.
  const auto n = static_cast<std::size_t>(std::llround(0.5 * opt.length / opt.step)) + 1;
  backward.reserve(n);
  forward.reserve(n);

  TraceRecord tr;
  tr.step = opt.step;
  tr.stop_forward = tracer.walk(start, d0, 1.0, forward);
  tr.stop_backward = tracer.walk(start, d0, -1.0, backward);
  tr.stop_reason = std::max(tr.stop_forward, tr.stop_backward);

  tr.samples.reserve(backward.size() + 1 + forward.size());
  tr.samples.insert(tr.samples.end(), backward.rbegin(), backward.rend());
  tr.samples.push_back(start);
  tr.samples.insert(tr.samples.end(), forward.begin(), forward.end());
  return tr;
}

GeodesicDeviation geodesic_deviation(const TraceRecord& tr) {
  if (tr.samples.size() < 3) throw Error(ErrorCode::kInsufficientSamples, "deviation needs at least three samples");
  const TraceSample& first = tr.samples.front();
  const ProdGeodesic g = prod_geodesic(ProdTangent(first.P, first.e1.h, first.e1.t));
  GeodesicDeviation out;
  for (const TraceSample& smp : tr.samples) {
    const double d = prod_dist(g.at(smp.s - first.s), smp.P);
    if (d > out.max_dev) {
      out.max_dev = d;
      out.at_s = smp.s;
    }
  }
  return out;
}

FrameResiduals frame_ode_residuals(const TraceRecord& tr) {
  const auto& smp = tr.samples;
  if (smp.size() < 5) throw Error(ErrorCode::kInsufficientSamples, "frame residuals need at least five samples");
  FrameResiduals r;
  for (std::size_t i = 1; i + 1 < smp.size(); ++i) {
    const double ds = smp[i + 1].s - smp[i - 1].s;
    const double dl = (smp[i + 1].lambda - smp[i - 1].lambda) / ds;
    const double dk = (smp[i + 1].k2 - smp[i - 1].k2) / ds;
    r.lambda_ode = std::max(r.lambda_ode, std::abs(dl - smp[i].lambda * smp[i].lambda));
    r.k2_ode = std::max(r.k2_ode, std::abs(dk - smp[i].lambda * smp[i].k2));
    const ProdVec de2 = prod_project(smp[i].P, (1.0 / ds) * (smp[i + 1].e2 - smp[i - 1].e2));
    const ProdVec de3 = prod_project(smp[i].P, (1.0 / ds) * (smp[i + 1].e3 - smp[i - 1].e3));
    r.de2 = std::max(r.de2, prod_norm(de2));
    r.de3 = std::max(r.de3, prod_norm(de3));
  }
  return r;
}

AffineFit fit_inverse_H(const TraceRecord& tr, double tol) {
  const auto& smp = tr.samples;
  if (smp.size() < 3) throw Error(ErrorCode::kInsufficientSamples, "fit needs at least three samples");
  double sm = 0.0, ym = 0.0;
  for (const TraceSample& x : smp) {
    if (std::abs(x.k2) < tol) throw Error(ErrorCode::kPlanarSample, "trace contains a planar sample");
    sm += x.s;
    ym += 1.0 / x.H;
  }
  const double n = static_cast<double>(smp.size());
  sm /= n;
  ym /= n;
  double sxx = 0.0, sxy = 0.0;
  for (const TraceSample& x : smp) {
    sxx += (x.s - sm) * (x.s - sm);
    sxy += (x.s - sm) * (1.0 / x.H - ym);
  }
  AffineFit fit;
  fit.n = static_cast<int>(smp.size());
  fit.a = sxx > 0.0 ? sxy / sxx : 0.0;
  fit.b = ym - fit.a * sm;
  double ss = 0.0;
  for (const TraceSample& x : smp) {
    const double r = 1.0 / x.H - (fit.a * x.s + fit.b);
    ss += r * r;
  }
  fit.rms_residual = std::sqrt(ss / n);
  return fit;
}

}  // namespace h2xr

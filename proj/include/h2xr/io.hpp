#pragma once

// CSV and JSON artifacts written by the command-line tool.

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "h2xr/config.hpp"

namespace h2xr {

// Header u,v,k1,k2,H,Kext,Kint_gauss,Kint_brioschi,nu,class,status. Failed
// rows carry NaN in the numeric columns.
void write_curvature_csv(std::ostream& out, const std::vector<CurvatureRow>& rows);
Json curvature_summary(const std::vector<CurvatureRow>& rows, int n_u, int n_v, double tol);

// Header s,u,v,h_x0,h_x1,h_x2,t,k2,H,lambda.
void write_trace_csv(std::ostream& out, const TraceRecord& tr);
// stop_reason, deviation, residuals and fit. A diagnostic that cannot be
// computed is null, with its error code under "<key>_error".
Json trace_sidecar(const TraceRecord& tr, double planar_tol);

Json verdict_json(const CylinderVerdict& v);

Json report_json(const VerificationReport& r);
std::string report_text(const VerificationReport& r);

// Header s,h_x0,h_x1,h_x2,t, sampled at s = 0, step, ..., s_max.
void write_geodesic_csv(std::ostream& out, const ProdGeodesic& g, double s_max, double step);

}  // namespace h2xr

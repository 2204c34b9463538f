#pragma once

// Curve files: CSV with header t,x1..xn (optionally dx1..dxn, ddx1..ddxn)
// plus a JSON sidecar {n, b, closed, interpolation_kind, samples, columns}
// stored next to it with the extension replaced by .json.

#include <string>

#include "corrugate/bessel_profile.hpp"
#include "corrugate/curve.hpp"

namespace corrugate::io {

std::string sidecar_path(const std::string& csv_path);

void write_curve_csv(const std::string& path, const SampledCurve& curve, bool with_jets = true);
/// Reads the CSV and its sidecar. Without jet columns the jets are derived
/// from the positions.
SampledCurve read_curve_csv(const std::string& path);

/// OBJ polyline (v and l records), n = 3 only.
void write_obj(const std::string& path, const SampledCurve& curve);

/// Sampled scalar field from a CSV with columns t,value over a uniform grid.
/// Closed fields omit the row at t = b.
ScalarField read_scalar_csv(const std::string& path, double b, bool closed);

/// Columns s, t, psi1, psi2, psi_t1, psi_t2, psi_tt1, psi_tt2 (quadrature route).
void write_profile_table(const std::string& path, const ProfileEvaluator& profile, double s_max, int s_count,
                         int t_count);

}  // namespace corrugate::io

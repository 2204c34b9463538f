#pragma once

#include <string>
#include <vector>

#include "corrugate/curve.hpp"

namespace corrugate::presets {

/// (r cos t, r sin t, 0, ...) on [0, 2pi].
SampledCurve circle(double radius = 1.0, Index samples = 1024, int dimension = 3);
/// (a cos t, a sin t, b t) on [0, 2pi], open.
SampledCurve helix(double a = 1.0, double b = 1.0, Index samples = 1024);
/// ((R + r cos qt) cos pt, (R + r cos qt) sin pt, r sin qt) on [0, 2pi].
SampledCurve torus_knot(int p, int q, double R, double r, Index samples = 4096);
/// The (2,3) torus knot with R = 2, r = 1.5.
SampledCurve trefoil(Index samples = 4096);
/// (t, 0, 0) on [0, length], open.
SampledCurve line(double length = 1.0, Index samples = 1024);
/// Lemniscate of Gerono (cos t, sin t cos t, 0); figure eight with a double point.
SampledCurve lemniscate(Index samples = 1024);
/// (u^2, u^3, 0) with u = t - 1 on [0, 2]; gamma'(1) = 0.
SampledCurve cusp(Index samples = 1025);
/// (u, u^3, 0) with u = t - 1 on [0, 2]; curvature vanishes at t = 1.
SampledCurve planar_cubic(Index samples = 1025);
/// Straight segment for u < 0 joined to the convex arc (u, u^4) for u > 0,
/// u = t - 1 on [0, 2]; curvature is zero along the whole segment.
SampledCurve segment_arc(Index samples = 1025);

/// Pads coordinates with zeros up to `dimension`.
SampledCurve embed(const SampledCurve& curve, int dimension);

std::vector<std::string> names();
/// Builds a preset by name; params override the defaults in order.
SampledCurve make(const std::string& name, const std::vector<double>& params, Index samples, int dimension = 3);

}  // namespace corrugate::presets

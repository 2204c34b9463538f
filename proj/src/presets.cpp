#include "corrugate/presets.hpp"

#include <cmath>
#include <numbers>

#include "corrugate/errors.hpp"

namespace corrugate::presets {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

CurveJet jet3(double x, double y, double z, double dx, double dy, double dz, double ddx, double ddy, double ddz) {
  CurveJet j;
  j.position = Eigen::Vector3d(x, y, z);
  j.first = Eigen::Vector3d(dx, dy, dz);
  j.second = Eigen::Vector3d(ddx, ddy, ddz);
  return j;
}

}  // namespace

SampledCurve embed(const SampledCurve& curve, int dimension) {
  if (dimension < curve.dimension()) throw DomainError("embed: target dimension is smaller than the curve's");
  if (dimension == curve.dimension()) return curve;
  const Index m = curve.samples();
  MatrixXd tables[3];
  for (int order = 0; order < 3; ++order) {
    tables[order] = MatrixXd::Zero(m, dimension);
    tables[order].leftCols(curve.dimension()) = curve.derivative_table(order);
  }
  return SampledCurve(curve.domain_end(), curve.closed(), tables[0], tables[1], tables[2]);
}

SampledCurve circle(double radius, Index samples, int dimension) {
  if (!(radius > 0)) throw DomainError("circle radius must be positive");
  auto curve = SampledCurve::from_function(kTwoPi, true, samples, 3, [radius](double t) {
    const double c = std::cos(t), s = std::sin(t);
    return jet3(radius * c, radius * s, 0, -radius * s, radius * c, 0, -radius * c, -radius * s, 0);
  });
  return embed(curve, dimension);
}

SampledCurve helix(double a, double b, Index samples) {
  return SampledCurve::from_function(kTwoPi, false, samples, 3, [a, b](double t) {
    const double c = std::cos(t), s = std::sin(t);
    return jet3(a * c, a * s, b * t, -a * s, a * c, b, -a * c, -a * s, 0);
  });
}

SampledCurve torus_knot(int p, int q, double R, double r, Index samples) {
  if (!(R > r && r > 0)) throw DomainError("torus knot needs R > r > 0");
  return SampledCurve::from_function(kTwoPi, true, samples, 3, [=](double t) {
    const double cq = std::cos(q * t), sq = std::sin(q * t);
    const double cp = std::cos(p * t), sp = std::sin(p * t);
    const double A = R + r * cq;
    const double A1 = -r * q * sq;
    const double A2 = -r * q * q * cq;
    return jet3(A * cp, A * sp, r * sq,
                A1 * cp - p * A * sp, A1 * sp + p * A * cp, r * q * cq,
                A2 * cp - 2.0 * p * A1 * sp - p * p * A * cp, A2 * sp + 2.0 * p * A1 * cp - p * p * A * sp,
                -r * q * q * sq);
  });
}

SampledCurve trefoil(Index samples) { return torus_knot(2, 3, 2.0, 1.5, samples); }

SampledCurve line(double length, Index samples) {
  return SampledCurve::from_function(length, false, samples, 3,
                                     [](double t) { return jet3(t, 0, 0, 1, 0, 0, 0, 0, 0); });
}

SampledCurve lemniscate(Index samples) {
  return SampledCurve::from_function(kTwoPi, true, samples, 3, [](double t) {
    const double c = std::cos(t), s = std::sin(t);
    const double c2 = std::cos(2 * t), s2 = std::sin(2 * t);
    // sin t cos t = sin(2t)/2
    return jet3(c, 0.5 * s2, 0, -s, c2, 0, -c, -2.0 * s2, 0);
  });
}

SampledCurve cusp(Index samples) {
  return SampledCurve::from_function(2.0, false, samples, 3, [](double t) {
    const double u = t - 1.0;
    return jet3(u * u, u * u * u, 0, 2 * u, 3 * u * u, 0, 2, 6 * u, 0);
  });
}

SampledCurve planar_cubic(Index samples) {
  return SampledCurve::from_function(2.0, false, samples, 3, [](double t) {
    const double u = t - 1.0;
    return jet3(u, u * u * u, 0, 1, 3 * u * u, 0, 0, 6 * u, 0);
  });
}

SampledCurve segment_arc(Index samples) {
  return SampledCurve::from_function(2.0, false, samples, 3, [](double t) {
    const double u = t - 1.0;
    if (u <= 0) return jet3(u, 0, 0, 1, 0, 0, 0, 0, 0);
    return jet3(u, u * u * u * u, 0, 1, 4 * u * u * u, 0, 0, 12 * u * u, 0);
  });
}

std::vector<std::string> names() {
  return {"circle", "helix", "torus_knot", "trefoil", "line", "lemniscate", "cusp", "planar_cubic", "segment_arc"};
}

SampledCurve make(const std::string& name, const std::vector<double>& params, Index samples, int dimension) {
  auto param = [&](std::size_t i, double fallback) { return i < params.size() ? params[i] : fallback; };
  SampledCurve curve;
  if (name == "circle") return circle(param(0, 1.0), samples, dimension);
  if (name == "helix") curve = helix(param(0, 1.0), param(1, 1.0), samples);
  else if (name == "torus_knot")
    curve = torus_knot(static_cast<int>(param(0, 2)), static_cast<int>(param(1, 3)), param(2, 2.0), param(3, 1.5), samples);
  else if (name == "trefoil") curve = trefoil(samples);
  else if (name == "line") curve = line(param(0, 1.0), samples);
  else if (name == "lemniscate") curve = lemniscate(samples);
  else if (name == "cusp") curve = cusp(samples);
  else if (name == "planar_cubic") curve = planar_cubic(samples);
  else if (name == "segment_arc") curve = segment_arc(samples);
  else throw ConfigError("unknown preset '" + name + "'");
  return embed(curve, dimension);
}

}  // namespace corrugate::presets

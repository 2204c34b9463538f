#include "corrugate/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace corrugate {

namespace {

// Distance between segments [p0, p1] and [q0, q1] in R^n.
double segment_distance(const VectorXd& p0, const VectorXd& p1, const VectorXd& q0, const VectorXd& q1) {
  const VectorXd d1 = p1 - p0;
  const VectorXd d2 = q1 - q0;
  const VectorXd r = p0 - q0;
  const double a = d1.squaredNorm();
  const double e = d2.squaredNorm();
  const double f = d2.dot(r);
  double s = 0.0, t = 0.0;
  if (a <= 1e-300 && e <= 1e-300) return r.norm();
  if (a <= 1e-300) {
    t = std::clamp(f / e, 0.0, 1.0);
  } else {
    const double c = d1.dot(r);
    if (e <= 1e-300) {
      s = std::clamp(-c / a, 0.0, 1.0);
    } else {
      const double b = d1.dot(d2);
      const double denom = a * e - b * b;
      s = denom > 1e-300 ? std::clamp((b * f - c * e) / denom, 0.0, 1.0) : 0.0;
      t = (b * s + f) / e;
      if (t < 0.0) {
        t = 0.0;
        s = std::clamp(-c / a, 0.0, 1.0);
      } else if (t > 1.0) {
        t = 1.0;
        s = std::clamp((b - c) / a, 0.0, 1.0);
      }
    }
  }
  return (p0 + d1 * s - q0 - d2 * t).norm();
}

double point_segment_distance(const VectorXd& x, const VectorXd& p0, const VectorXd& p1) {
  const VectorXd d = p1 - p0;
  const double len2 = d.squaredNorm();
  const double s = len2 > 0 ? std::clamp((x - p0).dot(d) / len2, 0.0, 1.0) : 0.0;
  return (p0 + s * d - x).norm();
}

struct CellKey {
  long long x, y, z;
  bool operator==(const CellKey& o) const { return x == o.x && y == o.y && z == o.z; }
};

struct CellHash {
  std::size_t operator()(const CellKey& k) const {
    return static_cast<std::size_t>(k.x * 73856093LL ^ k.y * 19349663LL ^ k.z * 83492791LL);
  }
};

}  // namespace

EmbeddingReport embedding_report(const SampledCurve& curve, const EmbeddingOptions& options) {
  EmbeddingReport report;
  report.immersed = is_immersed(curve);
  if (!report.immersed) return report;
  const ArclengthMap phi(curve);
  const double L = phi.total_length();
  report.length = L;
  report.clearance = options.clearance_fraction * L;
  const double feature = options.feature_fraction * L;
  const Index m = curve.samples();
  const VectorXd& s_nodes = phi.node_values();
  const NodeGeometry g = node_geometry(curve);
  const double k_max = g.curvature.maxCoeff();

  double max_step = 0.0;
  for (Index i = 0; i + 1 < m; ++i) max_step = std::max(max_step, s_nodes[i + 1] - s_nodes[i]);
  if (curve.closed()) max_step = std::max(max_step, L - s_nodes[m - 1]);
  const Index stride = std::max<Index>(1, static_cast<Index>(std::floor(0.5 * report.clearance / max_step)));

  std::vector<Index> vertices;
  for (Index i = 0; i < m; i += stride) vertices.push_back(i);
  if (curve.closed()) vertices.push_back(m);  // node m is node 0 at arclength L
  else if (vertices.back() != m - 1) vertices.push_back(m - 1);
  auto point = [&](Index i) -> VectorXd { return curve.positions().row(i % m).transpose(); };
  auto arclength = [&](Index i) { return i == m ? L : s_nodes[i]; };

  const Index segs = static_cast<Index>(vertices.size()) - 1;
  report.segments = segs;
  std::vector<VectorXd> a(segs), b(segs);
  std::vector<double> mid_s(segs);
  double seg_max = 0.0;
  double deviation = 0.0;
  for (Index j = 0; j < segs; ++j) {
    a[j] = point(vertices[j]);
    b[j] = point(vertices[j + 1]);
    mid_s[j] = 0.5 * (arclength(vertices[j]) + arclength(vertices[j + 1]));
    seg_max = std::max(seg_max, (b[j] - a[j]).norm());
    for (Index i = vertices[j] + 1; i < vertices[j + 1]; ++i)
      deviation = std::max(deviation, point_segment_distance(point(i), a[j], b[j]));
  }
  deviation += k_max * max_step * max_step / 8.0;
  report.polyline_deviation = deviation;

  const double threshold = report.clearance + 2.0 * deviation;
  const double radius = std::max(10.0 * report.clearance, 2.0 * threshold);
  report.search_radius = radius;
  const double cell = radius + seg_max;
  const int dims = std::min(3, curve.dimension());
  auto key_of = [&](const VectorXd& x) {
    long long c[3] = {0, 0, 0};
    for (int d = 0; d < dims; ++d) c[d] = static_cast<long long>(std::floor(x[d] / cell));
    return CellKey{c[0], c[1], c[2]};
  };
  std::unordered_map<CellKey, std::vector<Index>, CellHash> hash;
  std::vector<CellKey> keys(segs);
  for (Index j = 0; j < segs; ++j) {
    keys[j] = key_of(0.5 * (a[j] + b[j]));
    hash[keys[j]].push_back(j);
  }
  double best = radius;
  for (Index j = 0; j < segs; ++j) {
    const CellKey k = keys[j];
    for (long long dx = -1; dx <= 1; ++dx)
      for (long long dy = -1; dy <= 1; ++dy)
        for (long long dz = -1; dz <= 1; ++dz) {
          if (dims < 3 && dz != 0) continue;
          const auto it = hash.find(CellKey{k.x + dx, k.y + dy, k.z + dz});
          if (it == hash.end()) continue;
          for (const Index other : it->second) {
            if (other <= j) continue;
            double sep = std::fabs(mid_s[j] - mid_s[other]);
            if (curve.closed()) sep = std::min(sep, L - sep);
            if (sep < feature + seg_max) continue;
            best = std::min(best, segment_distance(a[j], b[j], a[other], b[other]));
          }
        }
  }
  report.min_separation = best;
  report.embedded = best > threshold;
  return report;
}

bool is_embedded(const SampledCurve& curve, const EmbeddingOptions& options) {
  return embedding_report(curve, options).embedded;
}

}  // namespace corrugate

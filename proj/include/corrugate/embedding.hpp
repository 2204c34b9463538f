#pragma once

#include "corrugate/curve.hpp"

namespace corrugate {

struct EmbeddingOptions {
  double clearance_fraction = 1e-4;  // of total length
  double feature_fraction = 0.02;    // arclength separation below which pairs are neighbours
};

struct EmbeddingReport {
  bool immersed = false;
  bool embedded = false;
  double length = 0.0;
  double clearance = 0.0;
  /// Smallest distance between non-neighbouring polyline segments found
  /// within the search radius; equals search_radius when none was found.
  double min_separation = 0.0;
  double search_radius = 0.0;
  /// Bound on the distance between the curve and its polyline.
  double polyline_deviation = 0.0;
  Index segments = 0;
};

/// Self-proximity audit on a decimated polyline with a spatial hash (first
/// three coordinates; distances use all of them).
EmbeddingReport embedding_report(const SampledCurve& curve, const EmbeddingOptions& options = {});
bool is_embedded(const SampledCurve& curve, const EmbeddingOptions& options = {});

}  // namespace corrugate

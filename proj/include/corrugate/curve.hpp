#pragma once

// Curves on [0, b] sampled on a uniform grid together with exact first and
// second derivatives at the nodes. Closed curves use nodes j*b/N (the node
// at b is node 0 again); open curves use j*b/(N-1) including both ends.
// Between nodes everything is evaluated by quintic Hermite interpolation of
// the stored jets, which is C^2 across nodes.

#include <Eigen/Core>
#include <array>
#include <functional>
#include <string>

#include "corrugate/parallel.hpp"

namespace corrugate {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

enum class InterpolationKind { PeriodicTrigonometric, QuinticSpline };

const char* to_string(InterpolationKind kind);
InterpolationKind interpolation_kind_from_string(const std::string& name);

/// Node positions of a uniform grid over [0, b].
struct UniformGrid {
  double b = 1.0;
  bool closed = false;
  Index count = 0;

  double spacing() const { return closed ? b / static_cast<double>(count) : b / static_cast<double>(count - 1); }
  double node(Index i) const { return static_cast<double>(i) * spacing(); }
  /// Cell index and local offset for t; wraps for closed grids, throws for
  /// open grids outside [0, b].
  void locate(double t, Index& cell, double& offset) const;
};

struct CurveJet {
  VectorXd position;
  VectorXd first;
  VectorXd second;
};

class SampledCurve {
 public:
  SampledCurve() = default;
  /// Rows are nodes, columns are coordinates.
  SampledCurve(double b, bool closed, MatrixXd position, MatrixXd first, MatrixXd second);

  /// Derives the jets from positions: spectral derivatives when closed,
  /// 7-point finite differences when open.
  static SampledCurve from_positions(double b, bool closed, MatrixXd position);
  static SampledCurve from_function(double b, bool closed, Index samples, int dimension,
                                    const std::function<CurveJet(double)>& jet);

  int dimension() const { return static_cast<int>(position_.cols()); }
  Index samples() const { return position_.rows(); }
  double domain_end() const { return grid_.b; }
  bool closed() const { return grid_.closed; }
  const UniformGrid& grid() const { return grid_; }
  double node(Index i) const { return grid_.node(i); }
  InterpolationKind interpolation_kind() const {
    return grid_.closed ? InterpolationKind::PeriodicTrigonometric : InterpolationKind::QuinticSpline;
  }

  const MatrixXd& positions() const { return position_; }
  const MatrixXd& first() const { return first_; }
  const MatrixXd& second() const { return second_; }
  /// order 0, 1 or 2.
  const MatrixXd& derivative_table(int order) const;

  VectorXd evaluate(double t, int order) const;
  CurveJet evaluate_jet(double t) const;
  /// Writes dimension() values.
  void evaluate_into(double t, int order, double* out) const;

  /// Same curve on a grid of `count` nodes. Closed curves whose count is a
  /// multiple of the current one are refined by trigonometric zero padding.
  SampledCurve resampled(Index count) const;

 private:
  UniformGrid grid_;
  MatrixXd position_, first_, second_;
};

/// Same grid structure with scalar values.
class ScalarField {
 public:
  using Jet = std::array<double, 3>;

  ScalarField() = default;
  static ScalarField constant(double value);
  /// Analytic field; the callback returns value, first and second derivative.
  static ScalarField from_function(std::function<Jet(double)> jet, std::string description = "function");
  static ScalarField sampled(double b, bool closed, VectorXd value, VectorXd first, VectorXd second);
  /// Derivatives from the samples (spectral if closed, finite differences otherwise).
  static ScalarField from_values(double b, bool closed, VectorXd value);

  Jet jet(double t) const;
  double value(double t) const { return jet(t)[0]; }
  bool is_constant() const { return kind_ == Kind::Constant; }
  const std::string& description() const { return description_; }

  /// Values at the nodes of a grid.
  VectorXd on_grid(const UniformGrid& grid) const;

 private:
  enum class Kind { Constant, Function, Sampled };
  Kind kind_ = Kind::Constant;
  double constant_ = 0.0;
  std::function<Jet(double)> function_;
  SampledCurve samples_;
  std::string description_ = "constant";
};

/// Quantities of the curve at its nodes, all exact from the jets.
struct NodeGeometry {
  VectorXd speed;        // |gamma'|
  VectorXd speed_rate;   // d|gamma'|/dt
  MatrixXd tangent;      // T
  MatrixXd curvature_vector;  // xi = dT/ds
  VectorXd curvature;    // |xi|
};

NodeGeometry node_geometry(const SampledCurve& curve, Execution exec = Execution::Parallel);

/// phi(t) = int_0^t |gamma'(u)| du, tabulated at the nodes and evaluated in
/// between by quintic Hermite interpolation (phi' = speed, phi'' = speed rate).
class ArclengthMap {
 public:
  explicit ArclengthMap(const SampledCurve& curve);

  double total_length() const { return total_; }
  double operator()(double t) const;
  /// Monotone inverse by safeguarded Newton, to 1e-12 relative.
  double inverse(double s) const;
  const VectorXd& node_values() const { return phi_; }

 private:
  UniformGrid grid_;
  VectorXd phi_, speed_, rate_;
  double total_ = 0.0;
};

ArclengthMap arclength_map(const SampledCurve& curve);

/// Unit-speed curve over [0, length] with the same number of nodes.
SampledCurve reparametrize_by_arclength(const SampledCurve& curve);

double curvature(const SampledCurve& curve, double t);
/// Curvature vector dT/ds for any parametrization.
VectorXd curvature_vector(const SampledCurve& curve, double t);
/// For unit-speed input this is gamma'' itself.
VectorXd curvature_vector_arclength(const SampledCurve& unit_speed_curve, double t);
/// |gamma' x gamma''| / |gamma'|^3, n = 3 only.
double curvature_cross_formula(const SampledCurve& curve, double t);

/// sup over a dense grid (nodes and cell midpoints of the finer input) of
/// sum_{m <= order} |d^m c1 - d^m c2|.
double cnorm_distance(const SampledCurve& c1, const SampledCurve& c2, int order);

double min_speed(const SampledCurve& curve);
bool is_immersed(const SampledCurve& curve, double threshold = 1e-8);
/// Closed flag set, or open curve whose end jets agree to `tolerance`.
bool is_closed(const SampledCurve& curve, double tolerance = 1e-9);

SampledCurve scale(const SampledCurve& curve, double c);

/// One normal field (zeta1) or a pair (zeta1, zeta2), rows are nodes.
/// Each field is orthogonal to T and xi and has length |xi|.
struct FrameField {
  MatrixXd zeta1;
  MatrixXd zeta2;
  bool has_pair() const { return zeta2.size() > 0; }
};

/// n = 3: zeta = T x xi. n >= 4: first field of normal_pair_field.
FrameField normal_field(const SampledCurve& curve);
/// n >= 4: orthonormal complement of span{T, xi} propagated node to node by
/// projection, with the holonomy of closed curves spread uniformly.
FrameField normal_pair_field(const SampledCurve& curve);

}  // namespace corrugate

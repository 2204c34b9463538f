#include "corrugate/curve.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "corrugate/errors.hpp"
#include "corrugate/finite_difference.hpp"
#include "corrugate/spectral.hpp"

namespace corrugate {

const char* to_string(InterpolationKind kind) {
  return kind == InterpolationKind::PeriodicTrigonometric ? "periodic-trigonometric" : "quintic-spline";
}

InterpolationKind interpolation_kind_from_string(const std::string& name) {
  if (name == "periodic-trigonometric") return InterpolationKind::PeriodicTrigonometric;
  if (name == "quintic-spline") return InterpolationKind::QuinticSpline;
  throw IoError("unknown interpolation_kind '" + name + "'");
}

void UniformGrid::locate(double t, Index& cell, double& offset) const {
  const double h = spacing();
  if (closed) {
    double u = std::fmod(t, b);
    if (u < 0) u += b;
    cell = std::min<Index>(static_cast<Index>(u / h), count - 1);
    offset = u - static_cast<double>(cell) * h;
    return;
  }
  const double slack = 1e-12 * std::max(1.0, b);
  if (!(t >= -slack && t <= b + slack)) {
    std::ostringstream msg;
    msg << "parameter " << t << " outside [0, " << b << "] of an open curve";
    throw DomainError(msg.str());
  }
  const double u = std::clamp(t, 0.0, b);
  cell = std::min<Index>(static_cast<Index>(u / h), count - 2);
  offset = u - static_cast<double>(cell) * h;
}

SampledCurve::SampledCurve(double b, bool closed, MatrixXd position, MatrixXd first, MatrixXd second)
    : position_(std::move(position)), first_(std::move(first)), second_(std::move(second)) {
  if (!(b > 0.0)) throw DomainError("curve domain end b must be positive");
  if (position_.rows() != first_.rows() || position_.rows() != second_.rows() || position_.cols() != first_.cols() ||
      position_.cols() != second_.cols())
    throw DomainError("curve jet tables have mismatched shapes");
  if (position_.rows() < (closed ? 4 : 7)) throw DomainError("curve needs more samples");
  grid_ = UniformGrid{b, closed, position_.rows()};
}

SampledCurve SampledCurve::from_positions(double b, bool closed, MatrixXd position) {
  const Index n = position.rows();
  MatrixXd d1(n, position.cols()), d2(n, position.cols());
  const UniformGrid grid{b, closed, n};
  for (Index c = 0; c < position.cols(); ++c) {
    std::span<const double> f(position.col(c).data(), n);
    std::span<double> o1(d1.col(c).data(), n), o2(d2.col(c).data(), n);
    if (closed) spectral::derivatives(f, b, o1, o2);
    else fd::derivatives_open(f, grid.spacing(), o1, o2);
  }
  return SampledCurve(b, closed, std::move(position), std::move(d1), std::move(d2));
}

SampledCurve SampledCurve::from_function(double b, bool closed, Index samples, int dimension,
                                         const std::function<CurveJet(double)>& jet) {
  const UniformGrid grid{b, closed, samples};
  MatrixXd p(samples, dimension), d1(samples, dimension), d2(samples, dimension);
  for (Index i = 0; i < samples; ++i) {
    const CurveJet j = jet(grid.node(i));
    p.row(i) = j.position.transpose();
    d1.row(i) = j.first.transpose();
    d2.row(i) = j.second.transpose();
  }
  return SampledCurve(b, closed, std::move(p), std::move(d1), std::move(d2));
}

const MatrixXd& SampledCurve::derivative_table(int order) const {
  switch (order) {
    case 0: return position_;
    case 1: return first_;
    case 2: return second_;
    default: throw DomainError("derivative order must be 0, 1 or 2");
  }
}

void SampledCurve::evaluate_into(double t, int order, double* out) const {
  if (order < 0 || order > 2) throw DomainError("derivative order must be 0, 1 or 2");
  Index cell;
  double x;
  grid_.locate(t, cell, x);
  const Index next = grid_.closed && cell + 1 == grid_.count ? 0 : cell + 1;
  const double h = grid_.spacing();
  for (Index c = 0; c < position_.cols(); ++c) {
    out[c] = fd::hermite5(position_(cell, c), first_(cell, c), second_(cell, c), position_(next, c), first_(next, c),
                          second_(next, c), h, x, order);
  }
}

VectorXd SampledCurve::evaluate(double t, int order) const {
  VectorXd out(dimension());
  evaluate_into(t, order, out.data());
  return out;
}

CurveJet SampledCurve::evaluate_jet(double t) const {
  return CurveJet{evaluate(t, 0), evaluate(t, 1), evaluate(t, 2)};
}

SampledCurve SampledCurve::resampled(Index count) const {
  if (count == samples()) return *this;
  const int n = dimension();
  MatrixXd tables[3] = {MatrixXd(count, n), MatrixXd(count, n), MatrixXd(count, n)};
  if (grid_.closed && count % samples() == 0) {
    const auto factor = static_cast<std::size_t>(count / samples());
    for (int order = 0; order < 3; ++order) {
      const MatrixXd& src = derivative_table(order);
      for (int c = 0; c < n; ++c) {
        const auto fine = spectral::upsample(std::span<const double>(src.col(c).data(), samples()), factor);
        tables[order].col(c) = Eigen::Map<const VectorXd>(fine.data(), count);
      }
    }
  } else {
    const UniformGrid target{grid_.b, grid_.closed, count};
    std::vector<double> row(n);
    for (Index i = 0; i < count; ++i) {
      for (int order = 0; order < 3; ++order) {
        evaluate_into(target.node(i), order, row.data());
        for (int c = 0; c < n; ++c) tables[order](i, c) = row[c];
      }
    }
  }
  return SampledCurve(grid_.b, grid_.closed, std::move(tables[0]), std::move(tables[1]), std::move(tables[2]));
}

ScalarField ScalarField::constant(double value) {
  ScalarField f;
  f.kind_ = Kind::Constant;
  f.constant_ = value;
  std::ostringstream msg;
  msg << "constant " << value;
  f.description_ = msg.str();
  return f;
}

ScalarField ScalarField::from_function(std::function<Jet(double)> jet, std::string description) {
  ScalarField f;
  f.kind_ = Kind::Function;
  f.function_ = std::move(jet);
  f.description_ = std::move(description);
  return f;
}

ScalarField ScalarField::sampled(double b, bool closed, VectorXd value, VectorXd first, VectorXd second) {
  ScalarField f;
  f.kind_ = Kind::Sampled;
  f.samples_ = SampledCurve(b, closed, std::move(value), std::move(first), std::move(second));
  f.description_ = "sampled";
  return f;
}

ScalarField ScalarField::from_values(double b, bool closed, VectorXd value) {
  ScalarField f;
  f.kind_ = Kind::Sampled;
  f.samples_ = SampledCurve::from_positions(b, closed, MatrixXd(std::move(value)));
  f.description_ = "sampled";
  return f;
}

ScalarField::Jet ScalarField::jet(double t) const {
  switch (kind_) {
    case Kind::Constant: return {constant_, 0.0, 0.0};
    case Kind::Function: return function_(t);
    case Kind::Sampled: {
      Jet out{};
      for (int order = 0; order < 3; ++order) samples_.evaluate_into(t, order, &out[order]);
      return out;
    }
  }
  return {};
}

VectorXd ScalarField::on_grid(const UniformGrid& grid) const {
  VectorXd out(grid.count);
  if (kind_ == Kind::Constant) {
    out.setConstant(constant_);
    return out;
  }
  for (Index i = 0; i < grid.count; ++i) out[i] = jet(grid.node(i))[0];
  return out;
}

NodeGeometry node_geometry(const SampledCurve& curve, Execution exec) {
  const Index m = curve.samples();
  const int n = curve.dimension();
  NodeGeometry g;
  g.speed.resize(m);
  g.speed_rate.resize(m);
  g.tangent.resize(m, n);
  g.curvature_vector.resize(m, n);
  g.curvature.resize(m);
  const MatrixXd& d1 = curve.first();
  const MatrixXd& d2 = curve.second();
  for_each_index(m, exec, [&](Index i) {
    const double v = d1.row(i).norm();
    const double inv = 1.0 / v;
    double vt = 0.0;
    for (int c = 0; c < n; ++c) vt += d1(i, c) * inv * d2(i, c);
    double k2 = 0.0;
    for (int c = 0; c < n; ++c) {
      const double tc = d1(i, c) * inv;
      const double xc = (d2(i, c) - tc * vt) * inv * inv;
      g.tangent(i, c) = tc;
      g.curvature_vector(i, c) = xc;
      k2 += xc * xc;
    }
    g.speed[i] = v;
    g.speed_rate[i] = vt;
    g.curvature[i] = std::sqrt(k2);
  });
  return g;
}

ArclengthMap::ArclengthMap(const SampledCurve& curve) : grid_(curve.grid()) {
  const Index m = curve.samples();
  speed_.resize(m);
  rate_.resize(m);
  for (Index i = 0; i < m; ++i) {
    const double v = curve.first().row(i).norm();
    if (!(v > 1e-8)) {
      std::ostringstream msg;
      msg << "arclength map: curve is not immersed near t = " << curve.node(i) << " (|gamma'| = " << v << ")";
      throw PreconditionViolation(msg.str());
    }
    speed_[i] = v;
    rate_[i] = curve.first().row(i).dot(curve.second().row(i)) / v;
  }
  phi_.resize(m);
  if (grid_.closed) {
    const auto cumulative = spectral::cumulative_integral(std::span<const double>(speed_.data(), m), grid_.b, &total_);
    phi_ = Eigen::Map<const VectorXd>(cumulative.data(), m);
  } else {
    const double h = grid_.spacing();
    phi_[0] = 0.0;
    for (Index i = 1; i < m; ++i) {
      phi_[i] = phi_[i - 1] + 0.5 * h * (speed_[i - 1] + speed_[i]) + h * h / 12.0 * (rate_[i - 1] - rate_[i]);
    }
    total_ = phi_[m - 1];
  }
}

double ArclengthMap::operator()(double t) const {
  Index cell;
  double x;
  double offset = 0.0;
  if (grid_.closed) offset = std::floor(t / grid_.b) * total_;
  grid_.locate(t, cell, x);
  Index next = cell + 1;
  double p1;
  if (grid_.closed && next == grid_.count) {
    next = 0;
    p1 = total_;
  } else {
    p1 = phi_[next];
  }
  return offset + fd::hermite5(phi_[cell], speed_[cell], rate_[cell], p1, speed_[next], rate_[next], grid_.spacing(), x, 0);
}

double ArclengthMap::inverse(double s) const {
  if (!(s >= -1e-12 * total_ && s <= total_ * (1.0 + 1e-12))) {
    std::ostringstream msg;
    msg << "arclength " << s << " outside [0, " << total_ << "]";
    throw DomainError(msg.str());
  }
  s = std::clamp(s, 0.0, total_);
  const Index m = grid_.count;
  // Nodes bracketing s; closed grids have the extra node b with phi = total.
  const Index last = grid_.closed ? m : m - 1;
  auto node_phi = [&](Index i) { return i == m ? total_ : phi_[i]; };
  Index lo = 0, hi = last;
  while (hi - lo > 1) {
    const Index mid = (lo + hi) / 2;
    if (node_phi(mid) <= s) lo = mid; else hi = mid;
  }
  const double h = grid_.spacing();
  double a = grid_.node(lo), b = grid_.node(lo) + h;
  double t = a + h * (s - node_phi(lo)) / std::max(node_phi(hi) - node_phi(lo), 1e-300);
  for (int iter = 0; iter < 60; ++iter) {
    const double value = (*this)(std::min(t, grid_.b)) - s;
    if (value > 0) b = t; else a = t;
    const Index cell = std::min<Index>(lo, m - 1);
    const double slope = speed_[cell];
    double next = t - value / slope;
    if (!(next >= a && next <= b)) next = 0.5 * (a + b);
    if (std::fabs(next - t) <= 1e-15 * std::max(1.0, grid_.b)) {
      t = next;
      break;
    }
    t = next;
  }
  return t;
}

ArclengthMap arclength_map(const SampledCurve& curve) { return ArclengthMap(curve); }

SampledCurve reparametrize_by_arclength(const SampledCurve& curve) {
  const ArclengthMap phi(curve);
  const double length = phi.total_length();
  const Index m = curve.samples();
  const int n = curve.dimension();
  const UniformGrid target{length, curve.closed(), m};
  MatrixXd p(m, n), d1(m, n), d2(m, n);
  VectorXd g0(n), g1(n), g2(n);
  for (Index i = 0; i < m; ++i) {
    const double t = phi.inverse(target.node(i));
    curve.evaluate_into(t, 0, g0.data());
    curve.evaluate_into(t, 1, g1.data());
    curve.evaluate_into(t, 2, g2.data());
    const double v = g1.norm();
    const double vt = g1.dot(g2) / v;
    p.row(i) = g0.transpose();
    d1.row(i) = (g1 / v).transpose();
    d2.row(i) = ((g2 - g1 * (vt / v)) / (v * v)).transpose();
  }
  return SampledCurve(length, curve.closed(), std::move(p), std::move(d1), std::move(d2));
}

VectorXd curvature_vector(const SampledCurve& curve, double t) {
  const VectorXd g1 = curve.evaluate(t, 1);
  const VectorXd g2 = curve.evaluate(t, 2);
  const double v = g1.norm();
  if (!(v > 1e-8)) throw PreconditionViolation("curvature: curve is not immersed at the requested parameter");
  const VectorXd T = g1 / v;
  return (g2 - T * T.dot(g2)) / (v * v);
}

double curvature(const SampledCurve& curve, double t) { return curvature_vector(curve, t).norm(); }

VectorXd curvature_vector_arclength(const SampledCurve& unit_speed_curve, double t) {
  return unit_speed_curve.evaluate(t, 2);
}

double curvature_cross_formula(const SampledCurve& curve, double t) {
  if (curve.dimension() != 3) throw DomainError("cross-product curvature needs n = 3");
  const Eigen::Vector3d g1 = curve.evaluate(t, 1);
  const Eigen::Vector3d g2 = curve.evaluate(t, 2);
  const double v = g1.norm();
  return g1.cross(g2).norm() / (v * v * v);
}

double cnorm_distance(const SampledCurve& c1, const SampledCurve& c2, int order) {
  if (order < 0 || order > 2) throw DomainError("C^l distance order must be 0, 1 or 2");
  if (c1.dimension() != c2.dimension() || std::fabs(c1.domain_end() - c2.domain_end()) > 1e-12 * c1.domain_end() ||
      c1.closed() != c2.closed())
    throw DomainError("C^l distance: curves have different domains or dimensions");
  const SampledCurve& fine = c1.samples() >= c2.samples() ? c1 : c2;
  const UniformGrid& g = fine.grid();
  const Index points = g.closed ? 2 * g.count : 2 * g.count - 1;
  const double h = 0.5 * g.spacing();
  const int n = c1.dimension();
  std::vector<double> sup(points, 0.0);
  for_each_index(points, Execution::Parallel, [&](Index i) {
    const double t = static_cast<double>(i) * h;
    double a[16], b[16];
    std::vector<double> va, vb;
    double* pa = a;
    double* pb = b;
    if (n > 16) {
      va.resize(n);
      vb.resize(n);
      pa = va.data();
      pb = vb.data();
    }
    double total = 0.0;
    for (int m = 0; m <= order; ++m) {
      c1.evaluate_into(t, m, pa);
      c2.evaluate_into(t, m, pb);
      double sq = 0.0;
      for (int c = 0; c < n; ++c) sq += (pa[c] - pb[c]) * (pa[c] - pb[c]);
      total += std::sqrt(sq);
    }
    sup[i] = total;
  });
  return *std::max_element(sup.begin(), sup.end());
}

double min_speed(const SampledCurve& curve) { return curve.first().rowwise().norm().minCoeff(); }

bool is_immersed(const SampledCurve& curve, double threshold) { return min_speed(curve) > threshold; }

bool is_closed(const SampledCurve& curve, double tolerance) {
  if (curve.closed()) return true;
  const Index last = curve.samples() - 1;
  for (int order = 0; order < 3; ++order) {
    const MatrixXd& table = curve.derivative_table(order);
    const double scale = std::max(1.0, table.cwiseAbs().maxCoeff());
    if ((table.row(0) - table.row(last)).cwiseAbs().maxCoeff() > tolerance * scale) return false;
  }
  return true;
}

SampledCurve scale(const SampledCurve& curve, double c) {
  if (!(c > 0.0)) throw DomainError("scale factor must be positive");
  return SampledCurve(curve.domain_end(), curve.closed(), c * curve.positions(), c * curve.first(), c * curve.second());
}

namespace {

void require_nondegenerate(const SampledCurve& curve, const NodeGeometry& g) {
  for (Index i = 0; i < curve.samples(); ++i) {
    if (!(g.curvature[i] > 1e-8)) {
      std::ostringstream msg;
      msg << "normal frame undefined: curvature " << g.curvature[i] << " at t = " << curve.node(i)
          << " (remove curvature zeros first)";
      throw FrameDegeneracy(msg.str());
    }
  }
}

// Orthonormal basis of the complement of span{T, N} built from coordinate axes.
MatrixXd initial_complement(const VectorXd& T, const VectorXd& N) {
  const Index n = T.size();
  MatrixXd basis(n, n - 2);
  std::vector<VectorXd> accepted{T, N};
  Index filled = 0;
  std::vector<bool> used(n, false);
  while (filled < n - 2) {
    Index best = -1;
    double best_norm = -1.0;
    VectorXd best_vec;
    for (Index e = 0; e < n; ++e) {
      if (used[e]) continue;
      VectorXd v = VectorXd::Unit(n, e);
      for (const auto& a : accepted) v -= a * a.dot(v);
      const double norm = v.norm();
      if (norm > best_norm) {
        best_norm = norm;
        best = e;
        best_vec = v;
      }
    }
    used[best] = true;
    best_vec /= best_norm;
    accepted.push_back(best_vec);
    basis.col(filled++) = best_vec;
  }
  return basis;
}

// Projects B onto the complement of span{T, N} and restores orthonormality
// by the polar factor, the smallest rotation back to an orthonormal frame.
void transport(MatrixXd& B, const VectorXd& T, const VectorXd& N) {
  for (Index c = 0; c < B.cols(); ++c) {
    B.col(c) -= T * T.dot(B.col(c));
    B.col(c) -= N * N.dot(B.col(c));
  }
  const MatrixXd gram = B.transpose() * B;
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(gram);
  const MatrixXd inv_sqrt =
      eig.eigenvectors() * eig.eigenvalues().cwiseInverse().cwiseSqrt().asDiagonal() * eig.eigenvectors().transpose();
  B = B * inv_sqrt;
}

}  // namespace

FrameField normal_pair_field(const SampledCurve& curve) {
  const int n = curve.dimension();
  if (n < 4) throw DomainError("normal_pair_field needs dimension n >= 4");
  const NodeGeometry g = node_geometry(curve);
  require_nondegenerate(curve, g);
  const Index m = curve.samples();
  auto unit_normal = [&](Index i) -> VectorXd { return g.curvature_vector.row(i).transpose() / g.curvature[i]; };
  std::vector<MatrixXd> frames(m);
  MatrixXd B = initial_complement(g.tangent.row(0).transpose(), unit_normal(0));
  frames[0] = B;
  for (Index i = 1; i < m; ++i) {
    transport(B, g.tangent.row(i).transpose(), unit_normal(i));
    frames[i] = B;
  }
  if (curve.closed()) {
    transport(B, g.tangent.row(0).transpose(), unit_normal(0));
    const MatrixXd R = frames[0].transpose() * B;  // B = frames[0] * R
    const Index k = R.rows();
    if (k == 2) {
      const double angle = std::atan2(R(1, 0), R(0, 0));
      for (Index i = 1; i < m; ++i) {
        const double a = -angle * static_cast<double>(i) / static_cast<double>(m);
        Eigen::Matrix2d rot;
        rot << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
        frames[i] = frames[i] * rot;
      }
    } else {
      MatrixXd L = R.log();
      L = 0.5 * (L - L.transpose()).eval();
      for (Index i = 1; i < m; ++i) {
        const MatrixXd rot = (-(static_cast<double>(i) / static_cast<double>(m)) * L).exp();
        frames[i] = frames[i] * rot;
      }
    }
  }
  FrameField out;
  out.zeta1.resize(m, n);
  out.zeta2.resize(m, n);
  for (Index i = 0; i < m; ++i) {
    out.zeta1.row(i) = g.curvature[i] * frames[i].col(0).transpose();
    out.zeta2.row(i) = g.curvature[i] * frames[i].col(1).transpose();
  }
  return out;
}

FrameField normal_field(const SampledCurve& curve) {
  const int n = curve.dimension();
  if (n < 3) throw DomainError("normal_field needs dimension n >= 3");
  if (n >= 4) {
    FrameField pair = normal_pair_field(curve);
    pair.zeta2.resize(0, 0);
    return pair;
  }
  const NodeGeometry g = node_geometry(curve);
  require_nondegenerate(curve, g);
  const Index m = curve.samples();
  FrameField out;
  out.zeta1.resize(m, 3);
  for (Index i = 0; i < m; ++i) {
    const Eigen::Vector3d T = g.tangent.row(i).transpose();
    const Eigen::Vector3d xi = g.curvature_vector.row(i).transpose();
    out.zeta1.row(i) = T.cross(xi).transpose();
  }
  return out;
}

}  // namespace corrugate

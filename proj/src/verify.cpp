#include "corrugate/verify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "corrugate/errors.hpp"
#include "corrugate/finite_difference.hpp"
#include "corrugate/spectral.hpp"

namespace corrugate {

bool VerificationReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

const Check* VerificationReport::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

void VerificationReport::add_upper(std::string name, double measured, double bound, double tolerance, Index grid,
                                   std::string detail) {
  Check c;
  c.name = std::move(name);
  c.measured = measured;
  c.bound = bound;
  c.tolerance = tolerance;
  c.pass = measured <= bound + tolerance;
  c.grid = grid;
  c.detail = std::move(detail);
  checks.push_back(std::move(c));
}

namespace {

// Periodic 4th-order central differences.
void periodic_differences(const VectorXd& f, double h, VectorXd& d1, VectorXd& d2) {
  const Index m = f.size();
  d1.resize(m);
  d2.resize(m);
  auto at = [&](Index i) { return f[((i % m) + m) % m]; };
  for (Index i = 0; i < m; ++i) {
    const double fm2 = at(i - 2), fm1 = at(i - 1), f0 = at(i), fp1 = at(i + 1), fp2 = at(i + 2);
    d1[i] = (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * h);
    d2[i] = (-fm2 + 16.0 * fm1 - 30.0 * f0 + 16.0 * fp1 - fp2) / (12.0 * h * h);
  }
}

// Open grids: 9-point stencils, centred inside and shifted at the ends.
constexpr int kOpenStencil = 9;

void open_differences(const VectorXd& f, double h, VectorXd& d1, VectorXd& d2) {
  const Index m = f.size();
  if (m < kOpenStencil) throw DomainError("oracle needs at least 9 samples on an open grid");
  d1.resize(m);
  d2.resize(m);
  // weights[shift] for the stencil starting shift nodes left of the target
  static const auto weights = [] {
    std::array<std::vector<std::vector<double>>, kOpenStencil> w;
    for (int shift = 0; shift < kOpenStencil; ++shift) {
      std::array<double, kOpenStencil> nodes{};
      for (int j = 0; j < kOpenStencil; ++j) nodes[j] = static_cast<double>(j - shift);
      w[shift] = fd::fornberg_weights(0.0, nodes, 2);
    }
    return w;
  }();
  for (Index i = 0; i < m; ++i) {
    const Index start = std::clamp<Index>(i - kOpenStencil / 2, 0, m - kOpenStencil);
    const auto& w = weights[i - start];
    double a = 0.0, b = 0.0;
    for (int j = 0; j < kOpenStencil; ++j) {
      a += w[1][j] * f[start + j];
      b += w[2][j] * f[start + j];
    }
    d1[i] = a / h;
    d2[i] = b / (h * h);
  }
}

double window_integral(const VectorXd& values, const UniformGrid& grid, double t0, double t1) {
  const double h = grid.spacing();
  const Index m = values.size();
  auto value_at = [&](double t) {
    Index cell;
    double x;
    grid.locate(t, cell, x);
    const Index next = grid.closed && cell + 1 == m ? 0 : cell + 1;
    return values[cell] + (values[next] - values[cell]) * x / h;
  };
  const Index first = static_cast<Index>(std::ceil(t0 / h));
  const Index last = static_cast<Index>(std::floor(t1 / h));
  if (first > last) return 0.5 * (value_at(t0) + value_at(t1)) * (t1 - t0);
  auto node_value = [&](Index i) { return values[grid.closed ? i % m : i]; };
  double sum = 0.5 * (value_at(t0) + node_value(first)) * (static_cast<double>(first) * h - t0);
  for (Index i = first; i < last; ++i) sum += 0.5 * h * (node_value(i) + node_value(i + 1));
  sum += 0.5 * (node_value(last) + value_at(t1)) * (t1 - static_cast<double>(last) * h);
  return sum;
}

}  // namespace

OracleJets oracle_jets(const SampledCurve& curve, int refinement) {
  OracleJets out;
  const int n = curve.dimension();
  const Index base = curve.samples();
  const bool closed = curve.closed();
  const Index m = closed ? base * std::max(1, refinement) : base;
  out.grid = UniformGrid{curve.domain_end(), closed, m};
  out.position.resize(m, n);
  for (int c = 0; c < n; ++c) {
    if (closed && m != base) {
      const auto fine = spectral::upsample(std::span<const double>(curve.positions().col(c).data(), base),
                                           static_cast<std::size_t>(m / base));
      out.position.col(c) = Eigen::Map<const VectorXd>(fine.data(), m);
    } else {
      out.position.col(c) = curve.positions().col(c);
    }
  }
  out.first.resize(m, n);
  out.second.resize(m, n);
  const double h = out.grid.spacing();
  for (int c = 0; c < n; ++c) {
    VectorXd d1, d2;
    if (closed) periodic_differences(out.position.col(c), h, d1, d2);
    else open_differences(out.position.col(c), h, d1, d2);
    out.first.col(c) = d1;
    out.second.col(c) = d2;
  }
  out.curvature.resize(m);
  for (Index i = 0; i < m; ++i) {
    const double v = out.first.row(i).norm();
    const double dot = out.first.row(i).dot(out.second.row(i));
    const double a2 = out.second.row(i).squaredNorm();
    out.curvature[i] = std::sqrt(std::max(0.0, v * v * a2 - dot * dot)) / (v * v * v);
  }
  return out;
}

VerificationReport check_profile(const ProfileEvaluator& profile, const std::vector<double>& s_grid,
                                 const std::vector<double>& t_grid) {
  VerificationReport report;
  const Index points = static_cast<Index>(s_grid.size() * t_grid.size());
  double circle = 0.0, ratio = 0.0, gamma_period = 0.0, psi_period = 0.0, psi_t_period = 0.0;
  double d_psi = 0.0, d_psi_t = 0.0, series = 0.0;
  const double period = 2.0 * std::numbers::pi;
  const double h = 1e-5;
  for (const double s : s_grid) {
    const ProfileRow row = profile.row(s);
    const ProfileCoefficients coeffs = profile.coefficients(s);
    for (const double t : t_grid) {
      const Vec2 tt = row.psi_tt(t);
      circle = std::max(circle, std::fabs((1.0 + tt[0]) * (1.0 + tt[0]) + tt[1] * tt[1] - (1.0 + s * s)));
      if (s != 0.0) ratio = std::max(ratio, tt.norm() / std::fabs(s));
      const Vec2 g = row.gamma(t);
      const Vec2 p = row.psi(t);
      const Vec2 pt = row.psi_t(t);
      gamma_period = std::max(gamma_period, (row.gamma(t + period) - g).norm());
      psi_period = std::max(psi_period, (row.psi(t + period) - p).norm());
      psi_t_period = std::max(psi_t_period, (row.psi_t(t + period) - pt).norm());
      const Vec2 fd_psi = (row.psi(t + h) - row.psi(t - h)) / (2.0 * h);
      const Vec2 fd_psi_t = (row.psi_t(t + h) - row.psi_t(t - h)) / (2.0 * h);
      d_psi = std::max(d_psi, (fd_psi - pt).norm() / std::max(1.0, pt.norm()));
      d_psi_t = std::max(d_psi_t, (fd_psi_t - tt).norm() / std::max(1.0, tt.norm()));
      const ProfileJet jet = ProfileEvaluator::jet(coeffs, t);
      const double scale = std::max(1.0, p.norm());
      series = std::max({series, (jet.psi - p).norm() / scale, (jet.psi_t - pt).norm() / std::max(1.0, pt.norm()),
                         (jet.psi_tt - tt).norm() / std::max(1.0, tt.norm())});
    }
  }
  report.add_upper("circle_identity", circle, 0.0, 1e-10, points, "|(1+psi_tt1)^2 + psi_tt2^2 - (1+s^2)|");
  report.add_upper("linear_bound", ratio, profile.corrugation_constant(), 0.0, points, "sup |psi_tt|/|s| vs C");
  report.add_upper("gamma_periodicity", gamma_period, 0.0, 1e-9, points);
  report.add_upper("psi_periodicity", psi_period, 0.0, 1e-9, points);
  report.add_upper("psi_t_periodicity", psi_t_period, 0.0, 1e-9, points);
  report.add_upper("psi_derivative_consistency", d_psi, 0.0, 1e-6, points, "central difference h = 1e-5");
  report.add_upper("psi_t_derivative_consistency", d_psi_t, 0.0, 1e-6, points, "central difference h = 1e-5");
  report.add_upper("series_vs_quadrature", series, 0.0, 1e-9, points, "Fourier-Bessel series against quadrature");
  return report;
}

VerificationReport check_step(const SampledCurve& prev, const SampledCurve& next, const ScalarField& k,
                              double epsilon_i, double C, const StepCheckOptions& options) {
  if (prev.dimension() != next.dimension() || prev.closed() != next.closed() ||
      std::fabs(prev.domain_end() - next.domain_end()) > 1e-12 * prev.domain_end())
    throw DomainError("check_step: curves have different domains");
  VerificationReport report;
  const SampledCurve prev_fine = prev.resampled(next.samples());
  const OracleJets a = oracle_jets(prev_fine, options.refinement);
  const OracleJets b = oracle_jets(next, options.refinement);
  const Index m = a.grid.count;
  const VectorXd kv = k.on_grid(a.grid);
  double c1 = 0.0, c2 = 0.0, speed = 0.0, defect_prev = 0.0, defect_next = 0.0, ratio = 0.0;
  double min_k = b.curvature.minCoeff();
  for (Index i = 0; i < m; ++i) {
    c1 = std::max(c1, (b.position.row(i) - a.position.row(i)).norm() + (b.first.row(i) - a.first.row(i)).norm());
    c2 = std::max(c2, (b.second.row(i) - a.second.row(i)).norm());
    speed = std::max(speed, a.first.row(i).norm());
    defect_prev = std::max(defect_prev, std::fabs(kv[i] * kv[i] - a.curvature[i] * a.curvature[i]));
    defect_next = std::max(defect_next, std::fabs(kv[i] * kv[i] - b.curvature[i] * b.curvature[i]));
    ratio = std::max(ratio, b.curvature[i] / kv[i]);
  }
  const double c2_bound = C * speed * speed * std::sqrt(defect_prev);
  report.add_upper("c1_displacement", c1, epsilon_i, 0.0, m, "sup |d| + |d'| below epsilon_i");
  report.add_upper("c2_displacement", c2, c2_bound, 0.0, m, "sup |d''| below C |gamma'|^2 sqrt(defect)");
  report.add_upper("defect_after", defect_next, epsilon_i, 0.0, m, "sup |k^2 - k_gamma^2| below epsilon_i");
  report.add_upper("curvature_below_target", ratio, 1.0, 0.0, m, "max k_gamma / k");
  Check positive;
  positive.name = "curvature_positive";
  positive.measured = min_k;
  positive.bound = 0.0;
  positive.pass = min_k > 0.0;
  positive.grid = m;
  positive.detail = "min k_gamma above zero";
  report.checks.push_back(positive);

  // Oracle against the construction's jets at the shared nodes.
  const NodeGeometry geo = node_geometry(next);
  const Index stride = next.closed() ? m / next.samples() : 1;
  // one-sided end stencils are far less accurate; leave them out of the comparison
  const Index edge = next.closed() ? 0 : kOpenStencil - 1;
  double diff = 0.0;
  const double scale = std::max(1e-300, geo.curvature.cwiseAbs().maxCoeff());
  for (Index i = edge; i < next.samples() - edge; ++i)
    diff = std::max(diff, std::fabs(b.curvature[i * stride] - geo.curvature[i]));
  std::string detail = "relative difference of finite-difference and construction curvature";
  if (edge > 0) detail += ", " + std::to_string(edge) + " end nodes excluded on each side";
  report.add_upper("oracle_agreement", diff / scale, 0.0, options.agreement_tolerance, m, detail);
  return report;
}

std::vector<std::pair<double, double>> random_windows(double b, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::pair<double, double>> out;
  for (int i = 0; i < count; ++i) {
    const double len = b * (0.05 + 0.45 * unit(rng));
    const double t0 = (b - len) * unit(rng);
    out.emplace_back(t0, t0 + len);
  }
  return out;
}

VerificationReport check_necessity(const std::vector<SampledCurve>& curve_seq, const SampledCurve& gamma,
                                   const ScalarField& k, const std::vector<std::pair<double, double>>& windows) {
  VerificationReport report;
  const OracleJets o = oracle_jets(gamma, 4);
  const VectorXd kv = k.on_grid(o.grid);
  std::vector<OracleJets> seq;
  for (const auto& c : curve_seq) seq.push_back(oracle_jets(c, 4));
  for (std::size_t w = 0; w < windows.size(); ++w) {
    const auto [t0, t1] = windows[w];
    const double len = t1 - t0;
    const double integral_gamma = window_integral(o.curvature, o.grid, t0, t1);
    const double integral_k = window_integral(kv, o.grid, t0, t1);
    std::ostringstream detail;
    detail << "U = [" << t0 << ", " << t1 << "], int k = " << integral_k;
    if (!seq.empty()) {
      detail << ", last iterate int k_gamma = " << window_integral(seq.back().curvature, seq.back().grid, t0, t1);
    }
    report.add_upper("window_" + std::to_string(w), integral_gamma, integral_k, len * 1e-6, o.grid.count, detail.str());
  }
  return report;
}

}  // namespace corrugate

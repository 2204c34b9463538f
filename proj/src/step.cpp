#include "corrugate/step.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>

#include "corrugate/finite_difference.hpp"
#include "corrugate/presets.hpp"
#include "corrugate/spectral.hpp"

namespace corrugate {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void differentiate_columns(const MatrixXd& f, const UniformGrid& grid, MatrixXd& d1, MatrixXd& d2) {
  const Index m = f.rows();
  d1.resize(m, f.cols());
  d2.resize(m, f.cols());
  for (Index c = 0; c < f.cols(); ++c) {
    std::span<const double> in(f.col(c).data(), m);
    std::span<double> o1(d1.col(c).data(), m), o2(d2.col(c).data(), m);
    if (grid.closed) spectral::derivatives(in, grid.b, o1, o2);
    else fd::derivatives_open(in, grid.spacing(), o1, o2);
  }
}

Index choose_samples(const SampledCurve& curve, double lambda, int per_oscillation) {
  const double vmax = curve.first().rowwise().norm().maxCoeff();
  const double need = per_oscillation * lambda * vmax * curve.domain_end() / kTwoPi;
  Index count = curve.samples();
  if (curve.closed()) {
    while (static_cast<double>(count) < need) count *= 2;
  } else {
    Index cells = count - 1;
    while (static_cast<double>(cells) < need) cells *= 2;
    count = cells + 1;
  }
  return count;
}

// Coefficients for one amplitude, cached per thread since neighbouring nodes
// often share it (constant a on circles).
const ProfileCoefficients& cached_coefficients(const ProfileEvaluator& profile, double a) {
  thread_local double last = std::numeric_limits<double>::quiet_NaN();
  thread_local ProfileCoefficients coeffs;
  if (!(a == last)) {
    coeffs = profile.coefficients(a);
    last = a;
  }
  return coeffs;
}

}  // namespace

const char* to_string(Kernel kernel) { return kernel == Kernel::NashTwist ? "nash-twist" : "kuiper-strain"; }

Kernel kernel_from_string(const std::string& name) {
  if (name == "kuiper-strain" || name == "kuiper") return Kernel::KuiperStrain;
  if (name == "nash-twist" || name == "nash") return Kernel::NashTwist;
  throw ConfigError("unknown kernel '" + name + "' (expected kuiper-strain or nash-twist)");
}

DefectSummary defect_summary(const SampledCurve& curve, const ScalarField& k) {
  const NodeGeometry g = node_geometry(curve);
  const VectorXd kv = k.on_grid(curve.grid());
  DefectSummary out;
  out.sup = 0.0;
  out.min_gap = std::numeric_limits<double>::infinity();
  out.min_curvature = g.curvature.minCoeff();
  out.max_ratio = 0.0;
  for (Index i = 0; i < curve.samples(); ++i) {
    const double gap = kv[i] * kv[i] - g.curvature[i] * g.curvature[i];
    out.sup = std::max(out.sup, std::fabs(gap));
    out.min_gap = std::min(out.min_gap, gap);
    out.max_ratio = std::max(out.max_ratio, g.curvature[i] / kv[i]);
  }
  return out;
}

ScalarField amplitude_field(const SampledCurve& curve, const ScalarField& k, double delta) {
  if (!(delta >= 0.0 && delta < 1.0)) throw DomainError("amplitude_field: delta must lie in [0, 1)");
  const NodeGeometry g = node_geometry(curve);
  const VectorXd kv = k.on_grid(curve.grid());
  VectorXd a(curve.samples());
  for (Index i = 0; i < curve.samples(); ++i) {
    const double ratio = kv[i] * kv[i] / (g.curvature[i] * g.curvature[i]);
    if (!(ratio >= 1.0 - 1e-12)) {
      std::ostringstream msg;
      msg << "curvature " << g.curvature[i] << " is not below the target " << kv[i] << " at t = " << curve.node(i)
          << "; a curve can only be corrugated toward larger curvature (k > k_gamma is necessary)";
      throw PreconditionViolation(msg.str());
    }
    a[i] = std::sqrt(std::max(0.0, (1.0 - delta) * (ratio - 1.0)));
  }
  return ScalarField::from_values(curve.domain_end(), curve.closed(), std::move(a));
}

StepResult corrugate(const SampledCurve& input, const ScalarField& k, const StepParams& params,
                     const ProfileEvaluator& profile) {
  const int n = input.dimension();
  if (n < 3) throw PreconditionViolation("corrugation needs curves in R^n with n >= 3");
  if (n > 16) throw DomainError("corrugation supports n <= 16");
  const bool nash = params.kernel == Kernel::NashTwist;
  if (nash && n < 4) throw DomainError("the Nash twist kernel needs n >= 4");
  if (!(params.delta >= 0.0 && params.delta < 1.0)) throw DomainError("delta must lie in [0, 1)");
  if (!(params.lambda > 0.0)) throw DomainError("lambda must be positive");
  const double lambda = params.lambda;

  const Index count = params.samples > 0 ? params.samples : choose_samples(input, lambda, params.samples_per_oscillation);
  const SampledCurve g = input.resampled(count);
  const UniformGrid& grid = g.grid();
  const NodeGeometry geo = node_geometry(g, params.exec);
  const ArclengthMap phi(g);
  const double L = phi.total_length();
  const double cycles = lambda * L / kTwoPi;
  if (g.closed() && std::fabs(cycles - std::round(cycles)) > 1e-8 * std::max(1.0, cycles)) {
    std::ostringstream msg;
    msg << "lambda = " << lambda << " is not a multiple of 2pi/length = " << kTwoPi / L
        << "; the corrugated curve would not close";
    throw DomainError(msg.str());
  }
  const FrameField frame = nash ? normal_pair_field(g) : normal_field(g);
  const VectorXd kv = k.on_grid(grid);

  StepReport report;
  report.kernel = params.kernel;
  report.lambda_used = lambda;
  report.delta_used = params.delta;
  report.oscillations = std::llround(cycles);
  report.samples = count;
  report.epsilon_i = params.epsilon_i;
  report.corrugation_constant = profile.corrugation_constant();
  report.min_speed_before = geo.speed.minCoeff();
  report.speed_sup_before = geo.speed.maxCoeff();
  report.min_gap_before = std::numeric_limits<double>::infinity();

  VectorXd a(count);
  for (Index i = 0; i < count; ++i) {
    const double gap = kv[i] * kv[i] - geo.curvature[i] * geo.curvature[i];
    report.defect_before = std::max(report.defect_before, std::fabs(gap));
    report.min_gap_before = std::min(report.min_gap_before, gap);
    const double ratio = kv[i] * kv[i] / (geo.curvature[i] * geo.curvature[i]);
    if (!(ratio >= 1.0 - 1e-12)) {
      std::ostringstream msg;
      msg << "curvature " << geo.curvature[i] << " is not below the target " << kv[i] << " at t = " << g.node(i)
          << " (k > k_gamma is necessary)";
      throw PreconditionViolation(msg.str());
    }
    a[i] = std::sqrt(std::max(0.0, (1.0 - params.delta) * (ratio - 1.0)));
    if (!(a[i] <= profile.s_max())) {
      std::ostringstream msg;
      msg << "amplitude a = " << a[i] << " at t = " << g.node(i) << " exceeds the profile range s_max = "
          << profile.s_max();
      throw DomainError(msg.str());
    }
  }
  report.max_amplitude = a.maxCoeff();
  report.c2_bound =
      profile.corrugation_constant() * report.speed_sup_before * report.speed_sup_before * std::sqrt(report.defect_before);

  // Fields to differentiate: xi, zeta1, [zeta2], a.
  const Index blocks = nash ? 3 : 2;
  MatrixXd fields(count, blocks * n + 1);
  fields.leftCols(n) = geo.curvature_vector;
  fields.middleCols(n, n) = frame.zeta1;
  if (nash) fields.middleCols(2 * n, n) = frame.zeta2;
  fields.col(blocks * n) = a;
  MatrixXd ft, ftt;
  differentiate_columns(fields, grid, ft, ftt);
  // Convert to arclength derivatives in place.
  MatrixXd& fs = ft;
  MatrixXd& fss = ftt;
  for_each_index(count, params.exec, [&](Index i) {
    const double v = geo.speed[i];
    const double vt = geo.speed_rate[i];
    for (Index c = 0; c < fields.cols(); ++c) {
      const double d1 = ft(i, c);
      fss(i, c) = (ftt(i, c) - d1 * vt / v) / (v * v);
      fs(i, c) = d1 / v;
    }
  });

  const double inv_l2 = 1.0 / (lambda * lambda);
  // Displacement jets in arclength for node i at phase theta.
  auto perturb = [&](Index i, double theta, double* D0, double* D1, double* D2) {
    const double ai = a[i];
    const double a1 = fs(i, blocks * n);
    const double a2 = fss(i, blocks * n);
    if (!nash) {
      const ProfileJet J = ProfileEvaluator::jet(cached_coefficients(profile, ai), theta);
      const Vec2 P = lambda * J.psi_t + a1 * J.psi_s;
      const Vec2 Q = lambda * lambda * J.psi_tt + 2.0 * lambda * a1 * J.psi_ts + a2 * J.psi_s + a1 * a1 * J.psi_ss;
      for (int c = 0; c < n; ++c) {
        const double e1 = fields(i, c), e2 = fields(i, n + c);
        const double e1s = fs(i, c), e2s = fs(i, n + c);
        const double e1ss = fss(i, c), e2ss = fss(i, n + c);
        D0[c] = inv_l2 * (J.psi[0] * e1 + J.psi[1] * e2);
        D1[c] = inv_l2 * (P[0] * e1 + P[1] * e2 + J.psi[0] * e1s + J.psi[1] * e2s);
        D2[c] = inv_l2 * (Q[0] * e1 + Q[1] * e2 + 2.0 * (P[0] * e1s + P[1] * e2s) + J.psi[0] * e1ss + J.psi[1] * e2ss);
      }
    } else {
      const double ct = std::cos(theta), st = std::sin(theta);
      for (int c = 0; c < n; ++c) {
        const double z1 = fields(i, n + c), z2 = fields(i, 2 * n + c);
        const double z1s = fs(i, n + c), z2s = fs(i, 2 * n + c);
        const double z1ss = fss(i, n + c), z2ss = fss(i, 2 * n + c);
        const double W = ct * z1 + st * z2;
        const double Wp = -st * z1 + ct * z2;  // rotated, times lambda below
        const double Ws = ct * z1s + st * z2s;
        const double Wps = -st * z1s + ct * z2s;
        const double Wss = ct * z1ss + st * z2ss;
        const double W1 = lambda * Wp + Ws;  // total derivative of W
        D0[c] = inv_l2 * ai * W;
        D1[c] = inv_l2 * (a1 * W + ai * W1);
        D2[c] = inv_l2 * (a2 * W + 2.0 * a1 * W1 + ai * (-lambda * lambda * W + 2.0 * lambda * Wps + Wss));
      }
    }
  };

  MatrixXd pos(count, n), d1(count, n), d2(count, n);
  VectorXd c0(count), c1(count), c2(count);
  const VectorXd& phi_nodes = phi.node_values();
  for_each_index(count, params.exec, [&](Index i) {
    double D0[16], D1[16], D2[16];
    perturb(i, lambda * phi_nodes[i], D0, D1, D2);
    const double v = geo.speed[i];
    const double vt = geo.speed_rate[i];
    double n0 = 0.0, n1 = 0.0, n2 = 0.0;
    for (int c = 0; c < n; ++c) {
      const double e0 = D0[c];
      const double e1 = v * D1[c];
      const double e2 = v * v * D2[c] + vt * D1[c];
      pos(i, c) = g.positions()(i, c) + e0;
      d1(i, c) = g.first()(i, c) + e1;
      d2(i, c) = g.second()(i, c) + e2;
      n0 += e0 * e0;
      n1 += e1 * e1;
      n2 += e2 * e2;
    }
    c0[i] = std::sqrt(n0);
    c1[i] = std::sqrt(n0) + std::sqrt(n1);
    c2[i] = std::sqrt(n2);
  });
  report.c0_displacement = c0.maxCoeff();
  report.c1_displacement = c1.maxCoeff();
  report.c2_displacement = c2.maxCoeff();

  if (g.closed()) {
    double A0[16], A1[16], A2[16], B0[16], B1[16], B2[16];
    perturb(0, 0.0, A0, A1, A2);
    perturb(0, lambda * L, B0, B1, B2);
    double m0 = 0.0, m1 = 0.0, m2 = 0.0;
    for (int c = 0; c < n; ++c) {
      m0 = std::max(m0, std::fabs(A0[c] - B0[c]));
      m1 = std::max(m1, std::fabs(A1[c] - B1[c]));
      m2 = std::max(m2, std::fabs(A2[c] - B2[c]));
    }
    const double v = geo.speed[0];
    report.closure_mismatch = std::max({m0, v * m1, v * v * m2 + std::fabs(geo.speed_rate[0]) * m1});
  }

  SampledCurve out(g.domain_end(), g.closed(), std::move(pos), std::move(d1), std::move(d2));
  const NodeGeometry after = node_geometry(out, params.exec);
  report.min_speed_after = after.speed.minCoeff();
  report.min_curvature_after = after.curvature.minCoeff();
  for (Index i = 0; i < count; ++i) {
    report.defect_after = std::max(report.defect_after, std::fabs(kv[i] * kv[i] - after.curvature[i] * after.curvature[i]));
    report.max_curvature_ratio_after = std::max(report.max_curvature_ratio_after, after.curvature[i] / kv[i]);
  }
  report.pass_c1 = report.c1_displacement < params.epsilon_i;
  report.pass_c2 = report.c2_displacement < report.c2_bound;
  report.pass_defect = report.defect_after < params.epsilon_i;
  report.pass_sandwich = report.min_curvature_after > 0.0 && report.max_curvature_ratio_after < 1.0;
  return StepResult{std::move(out), report};
}

StepResult nash_twist_corrugate(const SampledCurve& curve, const ScalarField& k, const StepParams& params,
                                const ProfileEvaluator& profile) {
  if (curve.dimension() < 4) throw DomainError("the Nash twist kernel needs n >= 4 (got n = 3)");
  StepParams p = params;
  p.kernel = Kernel::NashTwist;
  return corrugate(curve, k, p, profile);
}

StepResult perform_step(const SampledCurve& curve, const ScalarField& k, double epsilon_i, Kernel kernel,
                        const ProfileEvaluator& profile, const StepOptions& options) {
  if (!(epsilon_i > 0.0)) throw DomainError("perform_step: epsilon_i must be positive");
  const NodeGeometry geo = node_geometry(curve);
  const VectorXd kv = k.on_grid(curve.grid());
  double sup = 0.0, min_gap = std::numeric_limits<double>::infinity(), ratio_max = 0.0, kmax = 0.0;
  for (Index i = 0; i < curve.samples(); ++i) {
    const double gap = kv[i] * kv[i] - geo.curvature[i] * geo.curvature[i];
    sup = std::max(sup, std::fabs(gap));
    min_gap = std::min(min_gap, gap);
    kmax = std::max(kmax, kv[i]);
    ratio_max = std::max(ratio_max, kv[i] * kv[i] / (geo.curvature[i] * geo.curvature[i]) - 1.0);
  }
  if (sup <= 1e-14 * std::max(1.0, kmax * kmax)) {
    StepReport r;
    r.kernel = kernel;
    r.samples = curve.samples();
    r.epsilon_i = epsilon_i;
    r.defect_before = r.defect_after = sup;
    r.min_gap_before = min_gap;
    r.min_curvature_after = geo.curvature.minCoeff();
    r.speed_sup_before = geo.speed.maxCoeff();
    r.min_speed_before = r.min_speed_after = geo.speed.minCoeff();
    r.corrugation_constant = profile.corrugation_constant();
    r.pass_c1 = r.pass_c2 = r.pass_defect = r.pass_sandwich = true;
    return StepResult{curve, r};
  }
  if (!(min_gap > 0.0)) {
    std::ostringstream msg;
    msg << "target curvature is not above the curve's curvature everywhere (min k^2 - k_gamma^2 = " << min_gap
        << "); k > k_gamma is necessary";
    throw PreconditionViolation(msg.str());
  }
  const double length = ArclengthMap(curve).total_length();
  const double lambda_cap = options.lambda_cap_numerator / length;

  // Keeps a(t) inside the certified profile range.
  const double s_cap = 0.99 * profile.s_max();
  const double delta_floor = ratio_max > s_cap * s_cap ? 1.0 - s_cap * s_cap / ratio_max : 0.0;

  std::vector<double> deltas;
  const double budget_delta = std::max(delta_floor, std::min(options.delta_max, epsilon_i / (2.0 * sup)));
  if (options.target_defect > 0.0) {
    const double goal_delta = std::max(delta_floor, std::min(budget_delta, 0.8 * options.target_defect / (sup + min_gap)));
    if (goal_delta < budget_delta) deltas.push_back(goal_delta);
  }
  deltas.push_back(budget_delta);

  StepReport last;
  int trials = 0;
  for (std::size_t attempt = 0; attempt < deltas.size(); ++attempt) {
    const bool goal_mode = attempt + 1 < deltas.size();
    for (long long m = options.min_oscillations;; m *= 2) {
      const double lambda = kTwoPi * static_cast<double>(m) / length;
      if (lambda > lambda_cap) break;
      StepParams params;
      params.delta = deltas[attempt];
      params.lambda = lambda;
      params.kernel = kernel;
      params.epsilon_i = epsilon_i;
      params.samples_per_oscillation = options.samples_per_oscillation;
      params.exec = options.exec;
      params.samples = choose_samples(curve, lambda, options.samples_per_oscillation);
      if (params.samples > options.max_samples) break;
      StepResult result = corrugate(curve, k, params, profile);
      ++trials;
      result.report.trials = trials;
      last = result.report;
      const bool reached_goal = !goal_mode || result.report.defect_after <= options.target_defect;
      if (result.report.estimates_pass() && reached_goal) return result;
    }
  }
  last.trials = trials;
  std::ostringstream msg;
  msg << "no admissible lambda up to the cap " << lambda_cap << " (last tried lambda = " << last.lambda_used
      << ", defect_after = " << last.defect_after << ", c1 = " << last.c1_displacement << ", budget = " << epsilon_i
      << ")";
  throw StepFailure(msg.str(), last);
}

}  // namespace corrugate

namespace corrugate {

int corrugation_count(const SampledCurve& base, const SampledCurve& next) {
  const SampledCurve b = base.samples() == next.samples() ? base : base.resampled(next.samples());
  const FrameField frame = normal_field(b);
  const Index m = next.samples();
  VectorXd w(m);
  for (Index i = 0; i < m; ++i) w[i] = (next.positions().row(i) - b.positions().row(i)).dot(frame.zeta1.row(i));
  const double tiny = 1e-12 * std::max(1.0, w.cwiseAbs().maxCoeff());
  int last = 0, first = 0, count = 0;
  for (Index i = 0; i < m; ++i) {
    const int sign = w[i] > tiny ? 1 : (w[i] < -tiny ? -1 : 0);
    if (sign == 0) continue;
    if (first == 0) first = sign;
    if (last == -1 && sign == 1) ++count;
    last = sign;
  }
  if (next.closed() && last == -1 && first == 1) ++count;
  return count;
}

std::vector<SampledCurve> figure1_family(const ProfileEvaluator& profile, Index samples) {
  const SampledCurve circle = presets::circle(1.0, samples, 3);
  const ScalarField k = ScalarField::constant(3.0);
  std::vector<SampledCurve> out;
  for (int lambda = 1; lambda <= 6; ++lambda) {
    StepParams p;
    p.delta = 0.0;
    p.lambda = lambda;
    p.samples = samples;
    out.push_back(corrugate(circle, k, p, profile).curve);
  }
  return out;
}

}  // namespace corrugate

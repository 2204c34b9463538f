#include "corrugate/iteration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

namespace corrugate {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// C-infinity step from 0 (x <= 0) to 1 (x >= 1) with two derivatives.
std::array<double, 3> smooth_step(double x) {
  if (x <= 0.0) return {0.0, 0.0, 0.0};
  if (x >= 1.0) return {1.0, 0.0, 0.0};
  const double e = 1.0 / x - 1.0 / (1.0 - x);
  if (e > 700.0) return {0.0, 0.0, 0.0};
  if (e < -700.0) return {1.0, 0.0, 0.0};
  const double e1 = -1.0 / (x * x) - 1.0 / ((1.0 - x) * (1.0 - x));
  const double e2 = 2.0 / (x * x * x) - 2.0 / ((1.0 - x) * (1.0 - x) * (1.0 - x));
  const double h = std::exp(e);
  const double h1 = e1 * h;
  const double h2 = (e2 + e1 * e1) * h;
  const double d = 1.0 + h;
  return {1.0 / d, -h1 / (d * d), -h2 / (d * d) + 2.0 * h1 * h1 / (d * d * d)};
}

// Plateau equal to 1 on [a, b], 0 outside [a - w, b + w].
std::array<double, 3> plateau(double t, double a, double b, double w) {
  const auto up = smooth_step((t - (a - w)) / w);
  const auto down = smooth_step(((b + w) - t) / w);
  const double u1 = up[1] / w, u2 = up[2] / (w * w);
  const double d1 = -down[1] / w, d2 = down[2] / (w * w);
  return {up[0] * down[0], u1 * down[0] + up[0] * d1, u2 * down[0] + 2.0 * u1 * d1 + up[0] * d2};
}

struct Window {
  std::vector<std::pair<double, double>> intervals;
  double width = 0.0;
  bool everywhere = false;
  double period = 0.0;  // > 0 for closed curves

  std::array<double, 3> operator()(double t) const {
    if (everywhere) return {1.0, 0.0, 0.0};
    std::array<double, 3> sum{0.0, 0.0, 0.0};
    for (const auto& [a, b] : intervals) {
      double shift = 0.0;
      if (period > 0.0) shift = period * std::round((t - 0.5 * (a + b)) / period);
      const auto p = plateau(t - shift, a, b, width);
      for (int i = 0; i < 3; ++i) sum[i] += p[i];
    }
    return sum;
  }
};

Window build_window(const SampledCurve& curve, const VectorXd& kappa, double threshold) {
  Window w;
  const Index m = curve.samples();
  const double b = curve.domain_end();
  w.width = 0.05 * b;
  w.period = curve.closed() ? b : 0.0;
  std::vector<bool> marked(m);
  Index count = 0;
  for (Index i = 0; i < m; ++i) {
    marked[i] = kappa[i] < threshold;
    count += marked[i];
  }
  if (count == m) {
    w.everywhere = true;
    return w;
  }
  // Runs of marked nodes; for closed curves start after an unmarked node so
  // no run wraps.
  Index start = 0;
  if (curve.closed()) {
    while (marked[start]) ++start;
  }
  const double h = curve.grid().spacing();
  std::vector<std::pair<double, double>> runs;
  for (Index j = 0; j < m; ++j) {
    const Index i = (start + j) % m;
    if (!marked[i]) continue;
    Index len = 0;
    while (j + len < m && marked[(start + j + len) % m]) ++len;
    const double a = static_cast<double>(start + j) * h;
    const double e = static_cast<double>(start + j + len - 1) * h;
    runs.emplace_back(a, e);
    j += len - 1;
  }
  // Merge runs whose supports touch.
  for (const auto& r : runs) {
    if (!w.intervals.empty() && r.first - w.intervals.back().second <= 2.0 * w.width)
      w.intervals.back().second = r.second;
    else
      w.intervals.push_back(r);
  }
  if (curve.closed() && w.intervals.size() > 1) {
    const auto& first = w.intervals.front();
    const auto& last = w.intervals.back();
    if (first.first + b - last.second <= 2.0 * w.width) {
      w.intervals.back().second = first.second + b;
      w.intervals.erase(w.intervals.begin());
    }
  }
  if (curve.closed() && w.intervals.size() == 1 && w.intervals[0].second - w.intervals[0].first + 2.0 * w.width >= b)
    w.everywhere = true;
  return w;
}

SampledCurve add_perturbation(const SampledCurve& curve, const Window& window, double amplitude, double omega,
                              double phase, const VectorXd& nu1, const VectorXd& nu2) {
  const Index m = curve.samples();
  MatrixXd p = curve.positions(), d1 = curve.first(), d2 = curve.second();
  for (Index i = 0; i < m; ++i) {
    const double t = curve.node(i);
    const auto w = window(t);
    const double c = std::cos(omega * t + phase), s = std::sin(omega * t + phase);
    const VectorXd C = c * nu1 + s * nu2;
    const VectorXd S = -s * nu1 + c * nu2;
    p.row(i) += (amplitude * w[0] * C).transpose();
    d1.row(i) += (amplitude * (w[1] * C + w[0] * omega * S)).transpose();
    d2.row(i) += (amplitude * (w[2] * C + 2.0 * w[1] * omega * S - w[0] * omega * omega * C)).transpose();
  }
  return SampledCurve(curve.domain_end(), curve.closed(), std::move(p), std::move(d1), std::move(d2));
}

Index refined_count(const SampledCurve& curve, Index at_least) {
  Index count = curve.samples();
  if (curve.closed()) {
    while (count < at_least) count *= 2;
    return count;
  }
  Index cells = count - 1;
  while (cells + 1 < at_least) cells *= 2;
  return cells + 1;
}

}  // namespace

std::vector<double> defect_schedule(double epsilon, double ratio, int max_steps) {
  if (!(epsilon > 0.0)) throw DomainError("defect_schedule: epsilon must be positive");
  if (!(ratio > 0.0 && ratio < 1.0)) throw DomainError("defect_schedule: ratio must lie in (0, 1)");
  std::vector<double> out;
  double term = epsilon * (1.0 - ratio);
  for (int i = 0; i < max_steps; ++i) {
    out.push_back(term);
    term *= ratio;
  }
  return out;
}

SampledCurve remove_curvature_zeros(const SampledCurve& curve, const ScalarField& k, double budget,
                                    std::uint64_t seed, double* c2_change) {
  if (c2_change) *c2_change = 0.0;
  const NodeGeometry geo = node_geometry(curve);
  const VectorXd kv = k.on_grid(curve.grid());
  const double k_min = kv.minCoeff();
  const double theta = 1e-4 * std::max(geo.curvature.maxCoeff(), k_min);
  if (geo.curvature.minCoeff() > theta) return curve;
  if (!(budget > 0.0)) throw DomainError("remove_curvature_zeros: budget must be positive");
  if (!(k_min > 0.0)) throw PreconditionViolation("target curvature must be positive");

  const double kappa_target = std::min({0.4 * budget, 0.5 * k_min, std::max(2.0 * theta, k_min / 50.0)});
  const double b = curve.domain_end();
  const int oscillations = 64;
  const double omega = kTwoPi * oscillations / b;
  const SampledCurve base = curve.resampled(refined_count(curve, 32 * oscillations));
  const NodeGeometry base_geo = node_geometry(base);
  const Window window = build_window(base, base_geo.curvature, 4.0 * kappa_target);
  const double v_max = base_geo.speed.maxCoeff();
  const double amplitude0 = 2.0 * kappa_target * v_max * v_max / (omega * omega);
  const bool need_embedding = is_embedded(curve);
  const VectorXd kv_base = k.on_grid(base.grid());

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, kTwoPi);
  const int n = curve.dimension();
  std::ostringstream failures;
  for (int attempt = 0; attempt < 8; ++attempt) {
    VectorXd nu1(n), nu2(n);
    for (int c = 0; c < n; ++c) nu1[c] = gauss(rng);
    for (int c = 0; c < n; ++c) nu2[c] = gauss(rng);
    const double phase = uniform(rng);
    nu1.normalize();
    nu2 -= nu1 * nu1.dot(nu2);
    nu2.normalize();
    for (double scale = 1.0; scale >= 1.0 / 64.0; scale *= 0.5) {
      const SampledCurve candidate = add_perturbation(base, window, scale * amplitude0, omega, phase, nu1, nu2);
      const double change = cnorm_distance(candidate, base, 2);
      if (!(change < budget)) {
        failures << " attempt " << attempt << ": C2 change " << change << " >= budget;";
        continue;
      }
      const NodeGeometry g = node_geometry(candidate);
      double ratio = 0.0;
      for (Index i = 0; i < candidate.samples(); ++i) ratio = std::max(ratio, g.curvature[i] / kv_base[i]);
      const double min_k = g.curvature.minCoeff();
      if (!(min_k > theta) || !(ratio < 1.0)) {
        failures << " attempt " << attempt << ": min curvature " << min_k << ", max k_gamma/k " << ratio << ";";
        break;
      }
      if (!is_immersed(candidate) || (need_embedding && !is_embedded(candidate))) {
        failures << " attempt " << attempt << ": immersion/embedding lost;";
        continue;
      }
      if (c2_change) *c2_change = change;
      return candidate;
    }
  }
  throw PreprocessingError("could not remove curvature zeros within the C^2 budget " + std::to_string(budget) + ":" +
                           failures.str());
}

SampledCurve homotopy(const SampledCurve& gamma0, const SampledCurve& gamma_tilde, double s) {
  if (gamma0.dimension() != gamma_tilde.dimension() || gamma0.closed() != gamma_tilde.closed() ||
      std::fabs(gamma0.domain_end() - gamma_tilde.domain_end()) > 1e-12 * gamma0.domain_end())
    throw DomainError("homotopy: curves have different domains or dimensions");
  const Index count = std::max(gamma0.samples(), gamma_tilde.samples());
  const SampledCurve a = gamma0.resampled(count);
  const SampledCurve b = gamma_tilde.resampled(count);
  if (s == 0.0) return a;
  if (s == 1.0) return b;
  return SampledCurve(a.domain_end(), a.closed(), (1.0 - s) * a.positions() + s * b.positions(),
                      (1.0 - s) * a.first() + s * b.first(), (1.0 - s) * a.second() + s * b.second());
}

RunResult run(const SampledCurve& gamma0, const ScalarField& k, const RunConfig& config,
              const ProfileEvaluator& profile) {
  if (!(config.epsilon > 0.0)) throw ConfigError("epsilon must be positive");
  if (!(config.target_defect > 0.0)) throw ConfigError("target_defect must be positive");
  if (config.max_steps < 1) throw ConfigError("max_steps must be at least 1");
  if (!(config.schedule_ratio > 0.0 && config.schedule_ratio < 1.0)) throw ConfigError("schedule_ratio must lie in (0, 1)");
  if (gamma0.dimension() < 3) throw PreconditionViolation("curves must live in R^n with n >= 3");
  if (!is_immersed(gamma0)) throw PreconditionViolation("the initial curve is not immersed");

  RunReport report;
  report.corrugation_constant = profile.corrugation_constant();
  const NodeGeometry geo0 = node_geometry(gamma0);
  const VectorXd kv0 = k.on_grid(gamma0.grid());
  if (!(kv0.minCoeff() > 0.0)) throw PreconditionViolation("the target curvature must be positive");
  double sup_diff = 0.0, min_margin = std::numeric_limits<double>::infinity();
  Index worst = 0;
  for (Index i = 0; i < gamma0.samples(); ++i) {
    const double d = kv0[i] - geo0.curvature[i];
    sup_diff = std::max(sup_diff, std::fabs(d));
    if (d < min_margin) {
      min_margin = d;
      worst = i;
    }
  }
  report.initial_defect = defect_summary(gamma0, k).sup;
  if (sup_diff <= 1e-12 * std::max(1.0, kv0.maxCoeff())) {
    report.final_defect = report.initial_defect;
    report.converged = true;
    report.final_min_curvature = geo0.curvature.minCoeff();
    report.final_max_curvature = geo0.curvature.maxCoeff();
    return RunResult{gamma0, report};
  }
  if (min_margin < 1e-6) {
    std::ostringstream msg;
    msg << "target curvature k = " << kv0[worst] << " does not exceed the curve's curvature " << geo0.curvature[worst]
        << " by the margin 1e-6 at t = " << gamma0.node(worst)
        << ". k > k_gamma0 is necessary: integral curvature is lower semicontinuous under C^1 convergence, so no "
           "C^1-close curve can have curvature k where k < k_gamma0";
    throw PreconditionViolation(msg.str());
  }
  report.input_embedded = config.check_embedding && is_embedded(gamma0);

  double c2_change = 0.0;
  SampledCurve gamma =
      remove_curvature_zeros(gamma0, k, config.preprocessing_fraction * config.epsilon, config.random_seed, &c2_change);
  double epsilon = config.epsilon;
  if (gamma.samples() != gamma0.samples() || c2_change > 0.0) {
    report.preprocessed = true;
    report.preprocessing_c2_change = c2_change;
    report.preprocessing_c1_change = cnorm_distance(gamma, gamma0.resampled(gamma.samples()), 1);
    epsilon -= report.preprocessing_c1_change;
  }
  report.schedule = defect_schedule(epsilon, config.schedule_ratio, config.max_steps);
  if (config.on_iterate) config.on_iterate(0, gamma);

  const double D0 = defect_summary(gamma, k).sup;
  const double speed0 = gamma0.first().rowwise().norm().maxCoeff();
  const double C = profile.corrugation_constant();
  double partial = 0.0, eps_sum = 0.0, sqrt_sum = std::sqrt(D0);
  double defect = D0;
  StepOptions options = config.step;
  options.target_defect = config.target_defect;
  for (int i = 1; i <= config.max_steps && defect > config.target_defect; ++i) {
    const double eps_i = report.schedule[i - 1];
    StepResult result;
    try {
      result = perform_step(gamma, k, eps_i, config.kernel, profile, options);
    } catch (const StepFailure& e) {
      throw StepFailure("step " + std::to_string(i) + ": " + e.what(), e.partial_report());
    }
    const StepReport& r = result.report;
    report.steps.push_back(r);
    eps_sum += eps_i;
    if (i >= 2) sqrt_sum += std::sqrt(report.schedule[i - 2]);
    CauchyEntry entry;
    entry.step = i;
    entry.c1_distance = r.c1_displacement;
    entry.c2_distance = r.c2_displacement;
    entry.c2_norm = r.c1_displacement + r.c2_displacement;
    partial += entry.c2_norm;
    entry.partial_sum = partial;
    entry.bound = eps_sum + C * (speed0 + config.epsilon) * (speed0 + config.epsilon) * sqrt_sum;
    report.cauchy_within_bound = report.cauchy_within_bound && partial <= entry.bound;
    report.cauchy_table.push_back(entry);

    gamma = std::move(result.curve);
    defect = r.defect_after;
    IterateFlags flags;
    flags.step = i;
    flags.immersed = is_immersed(gamma);
    flags.closed = gamma.closed() ? r.closure_mismatch < 1e-8 : is_closed(gamma);
    flags.defect = defect;
    if (report.input_embedded) {
      const EmbeddingReport emb = embedding_report(gamma);
      flags.embedded = emb.embedded;
      flags.min_separation = emb.min_separation;
    }
    report.iterates.push_back(flags);
    if (config.on_iterate) config.on_iterate(i, gamma);
  }
  report.final_defect = defect;
  report.converged = defect <= config.target_defect;
  const NodeGeometry final_geo = node_geometry(gamma);
  report.final_min_curvature = final_geo.curvature.minCoeff();
  report.final_max_curvature = final_geo.curvature.maxCoeff();
  const SampledCurve start = gamma0.resampled(gamma.samples());
  report.final_c1_distance = cnorm_distance(gamma, start, 1);
  if (!report.converged) {
    std::ostringstream msg;
    msg << "target defect " << config.target_defect << " not reached after " << config.max_steps
        << " steps (defect " << defect << ")";
    throw StepFailure(msg.str(), report.steps.empty() ? StepReport{} : report.steps.back());
  }
  const int H = std::max(2, config.homotopy_samples);
  for (int j = 0; j < H; ++j) {
    const double s = static_cast<double>(j) / (H - 1);
    const SampledCurve h = homotopy(start, gamma, s);
    HomotopySample sample;
    sample.s = s;
    sample.c1_distance = cnorm_distance(h, start, 1);
    sample.immersed = is_immersed(h);
    sample.embedded = report.input_embedded && is_embedded(h);
    report.homotopy.push_back(sample);
  }
  return RunResult{std::move(gamma), std::move(report)};
}

KnotResult prescribe_knot_curvature(const SampledCurve& knot, const ScalarField& k, const RunConfig& config,
                                    const ProfileEvaluator& profile) {
  if (!knot.closed() || knot.dimension() != 3) throw PreconditionViolation("knot input must be a closed curve in R^3");
  if (!is_embedded(knot)) throw PreconditionViolation("knot input is not embedded");
  const VectorXd kv = k.on_grid(knot.grid());
  if (!(kv.minCoeff() > 0.0)) throw PreconditionViolation("the target curvature must be positive");
  const double k_max_knot = node_geometry(knot).curvature.maxCoeff();
  KnotResult out;
  out.scale_factor = k_max_knot / (0.9 * kv.minCoeff());
  out.scaled_input = scale(knot, out.scale_factor);
  RunConfig cfg = config;
  cfg.check_embedding = true;
  RunResult result = run(out.scaled_input, k, cfg, profile);
  std::ostringstream problems;
  for (const auto& it : result.report.iterates)
    if (!it.embedded) problems << " iterate " << it.step << " (separation " << it.min_separation << ")";
  for (const auto& h : result.report.homotopy)
    if (!h.embedded) problems << " homotopy s = " << h.s;
  if (!problems.str().empty())
    throw IsotopyUncertified("embedding check failed:" + problems.str(), std::move(result.report));
  out.curve = std::move(result.curve);
  out.report = std::move(result.report);
  return out;
}

}  // namespace corrugate

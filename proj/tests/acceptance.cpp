// Acceptance criteria 1-10. `acceptance N` runs one criterion, no argument
// runs all. Each prints one "criterion N: PASS|FAIL" line and the process
// exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <numbers>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

#include "corrugate/curve_io.hpp"
#include "corrugate/embedding.hpp"
#include "corrugate/iteration.hpp"
#include "corrugate/presets.hpp"
#include "corrugate/step.hpp"
#include "corrugate/verify.hpp"

using namespace corrugate;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

const ProfileEvaluator& evaluator() {
  static const ProfileEvaluator p;
  return p;
}

class Stopwatch {
 public:
  double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count(); }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

bool verdict(int n, bool pass, const std::string& detail) {
  std::printf("criterion %d: %s  %s\n", n, pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  return pass;
}

std::string fmt(const char* f, auto... args) {
  char buf[1024];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

fs::path work_dir() {
  const fs::path p = fs::temp_directory_path() / ("corrugate_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(p);
  return p;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(CORRUGATE_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// sup |k - k_gamma| with curvature from the finite-difference oracle.
double oracle_curvature_error(const SampledCurve& curve, const ScalarField& k) {
  const OracleJets o = oracle_jets(curve);
  const VectorXd kv = k.on_grid(o.grid);
  return (o.curvature - kv).cwiseAbs().maxCoeff();
}

std::vector<double> profile_s_grid() {
  std::vector<double> s;
  for (int i = 0; i < 200; ++i) s.push_back(-50.0 + 100.0 * i / 199.0);
  return s;
}
std::vector<double> profile_t_grid() {
  std::vector<double> t;
  for (int j = 0; j < 512; ++j) t.push_back(2 * kPi * j / 512.0);
  return t;
}

bool criterion1() {
  Stopwatch w;
  const VerificationReport r = check_profile(evaluator(), profile_s_grid(), profile_t_grid());
  const double secs = w.seconds();
  const Check* circle = r.find("circle_identity");
  const Check* linear = r.find("linear_bound");
  const bool pass = circle->measured < 1e-10 && linear->pass && secs < 10.0;
  return verdict(1, pass,
                 fmt("circle identity residual %.3e (< 1e-10), sup |psi_tt|/|s| = %.6f <= C = %.6f, 200x512 grid, %.2f s "
                     "(< 10 s)",
                     circle->measured, linear->measured, linear->bound, secs));
}

bool criterion2() {
  const VerificationReport r = check_profile(evaluator(), profile_s_grid(), profile_t_grid());
  const double g = r.find("gamma_periodicity")->measured;
  const double p = r.find("psi_periodicity")->measured;
  return verdict(2, g < 1e-9 && p < 1e-9,
                 fmt("sup |Gamma(s,t+2pi) - Gamma(s,t)| = %.3e, sup |Psi(s,t+2pi) - Psi(s,t)| = %.3e (< 1e-9)", g, p));
}

bool criterion3() {
  double worst = 0.0;
  for (int i = 1; i <= 100; ++i) {
    const double y = 0.01 * i;
    worst = std::max(worst, std::fabs(bessel_j0(j0_inverse(y)) - y));
  }
  const double f0 = evaluator().f_amplitude(0.0);
  const double h = 1e-4;
  const double slope = (evaluator().f_amplitude(h) - evaluator().f_amplitude(-h)) / (2 * h);
  const bool pass = worst < 1e-12 && f0 == 0.0 && std::fabs(slope - std::sqrt(2.0)) <= 1e-5;
  return verdict(3, pass,
                 fmt("max |J0(J0^-1(y)) - y| = %.3e over 100 points (< 1e-12), f(0) = %g, FD f'(0) = %.9f (sqrt 2 +- 1e-5)",
                     worst, f0, slope));
}

bool criterion4() {
  const fs::path dir = work_dir() / "figure1";
  const int code = run_cli("figure1 --samples 1024 --out-dir " + dir.string());
  bool pass = code == 0 && fs::exists(dir / "figure1.gp");
  const SampledCurve circle = presets::circle(1.0, 1024, 3);
  std::string counts;
  for (int lambda = 1; lambda <= 6; ++lambda) {
    const fs::path csv = dir / ("figure1_lambda" + std::to_string(lambda) + ".csv");
    if (!fs::exists(csv)) {
      pass = false;
      continue;
    }
    const SampledCurve c = io::read_curve_csv(csv.string());
    const int n = corrugation_count(circle, c);
    // closure of the construction, not of the periodic storage: compare
    // the analytic end point with the start
    const double gap = (c.evaluate(c.domain_end(), 0) - c.evaluate(0.0, 0)).norm();
    pass = pass && n == lambda && c.closed() && gap < 1e-9;
    counts += fmt("%d->%d ", lambda, n);
  }
  return verdict(4, pass, fmt("cli exit %d, corrugations per lambda: %s, gnuplot script emitted", code, counts.c_str()));
}

bool criterion5() {
  Stopwatch w;
  const SampledCurve c = presets::circle(1.0, 1024, 3);
  const ScalarField k = ScalarField::constant(2.0);
  std::vector<double> lambdas, residuals, oracle;
  for (int e = 7; e <= 10; ++e) {
    StepParams p;
    p.delta = 0.1;
    p.lambda = std::ldexp(1.0, e);
    const StepResult r = corrugate::corrugate(c, k, p, evaluator());
    const VerificationReport v = check_step(c, r.curve, k, 1.0, evaluator().corrugation_constant());
    lambdas.push_back(p.lambda);
    residuals.push_back(std::fabs(r.report.defect_after - 0.3));
    oracle.push_back(std::fabs(v.find("defect_after")->measured - 0.3));
  }
  // least squares on log r = log kappa + p log lambda
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double m = static_cast<double>(lambdas.size());
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    const double x = std::log(lambdas[i]), y = std::log(residuals[i]);
    sx += x, sy += y, sxx += x * x, sxy += x * y;
  }
  const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  // kappa fitted at the coarsest lambda; the bound must then hold for the rest
  const double kappa = residuals[0] * lambdas[0];
  bool bound = true;
  for (std::size_t i = 0; i < lambdas.size(); ++i) bound = bound && residuals[i] <= kappa / lambdas[i] * (1 + 1e-12);
  const double secs = w.seconds();
  const bool exponent = std::fabs(slope + 1.0) <= 0.2;
  std::string table;
  for (std::size_t i = 0; i < lambdas.size(); ++i)
    table += fmt("lambda %g: %.3e (oracle %.3e); ", lambdas[i], residuals[i], oracle[i]);
  return verdict(5, bound && exponent && secs < 60.0,
                 fmt("%s kappa = %.4f, bound %s, fitted exponent %.3f (need -1 +- 0.2: %s), %.2f s",
                     table.c_str(), kappa, bound ? "holds" : "violated", slope, exponent ? "ok" : "out of range", secs));
}

struct RunCapture {
  SampledCurve start;
  std::vector<SampledCurve> iterates;
  RunResult result;
};

RunCapture capture_run(const SampledCurve& gamma0, const ScalarField& k, RunConfig config) {
  RunCapture cap;
  config.on_iterate = [&cap](int, const SampledCurve& c) { cap.iterates.push_back(c); };
  cap.result = run(gamma0, k, config, evaluator());
  cap.start = gamma0;
  return cap;
}

bool criterion6() {
  const double C = evaluator().corrugation_constant();
  struct Case {
    std::string name;
    SampledCurve curve;
    ScalarField k;
    double target;
  };
  const std::vector<Case> cases = {
      {"circle k=3", presets::circle(1.0, 16384, 3), ScalarField::constant(3.0), 1e-3},
      {"circle k=2+0.5cos t", presets::circle(1.0, 4096, 3),
       ScalarField::from_function(
           [](double t) { return ScalarField::Jet{2 + 0.5 * std::cos(t), -0.5 * std::sin(t), -0.5 * std::cos(t)}; }),
       1e-2},
      {"helix k=1", presets::helix(1.0, 1.0, 2049), ScalarField::constant(1.0), 1e-2},
  };
  bool pass = true;
  int checked = 0;
  double worst_ratio = 0.0;
  for (const auto& cs : cases) {
    RunConfig config;
    config.target_defect = cs.target;
    const RunCapture cap = capture_run(cs.curve, cs.k, config);
    const auto& steps = cap.result.report.steps;
    for (std::size_t i = 0; i < steps.size(); ++i) {
      const VerificationReport v = check_step(cap.iterates[i], cap.iterates[i + 1], cs.k, steps[i].epsilon_i, C);
      const Check* c2 = v.find("c2_displacement");
      pass = pass && c2->pass && v.find("oracle_agreement")->pass;
      worst_ratio = std::max(worst_ratio, c2->measured / c2->bound);
      ++checked;
    }
  }
  return verdict(6, pass && checked > 0,
                 fmt("%d accepted steps re-measured by the finite-difference oracle, max |d''| / (C |gamma'|^2 sqrt D) = %.4f",
                     checked, worst_ratio));
}

bool criterion7() {
  Stopwatch w;
  const SampledCurve gamma0 = presets::circle(1.0, 16384, 3);
  const ScalarField k = ScalarField::constant(3.0);
  RunConfig config;
  config.epsilon = 0.2;
  config.target_defect = 1e-3;
  const RunResult r = run(gamma0, k, config, evaluator());
  const double secs = w.seconds();
  const double kerr = oracle_curvature_error(r.curve, k);
  const double c1 = cnorm_distance(r.curve, gamma0, 1);
  const bool pass = r.report.converged && kerr < 0.02 && c1 <= 0.2 && r.report.cauchy_within_bound && secs < 300.0;
  const auto& last = r.report.cauchy_table.back();
  return verdict(7, pass,
                 fmt("%zu steps, final grid %ld, sup |k_gamma - 3| = %.3e (< 0.02), C1 distance %.3e (<= 0.2), Cauchy "
                     "partial sum %.4f <= bound %.4f, %.1f s",
                     r.report.steps.size(), static_cast<long>(r.curve.samples()), kerr, c1, last.partial_sum, last.bound,
                     secs));
}

KnotResult trefoil_run() {
  RunConfig config;
  config.target_defect = 1e-2;
  return prescribe_knot_curvature(presets::trefoil(4096), ScalarField::constant(1.0), config, evaluator());
}

bool criterion8() {
  Stopwatch w;
  const KnotResult r = trefoil_run();
  const double closure_eval = (r.curve.evaluate(r.curve.domain_end(), 0) - r.curve.evaluate(0.0, 0)).norm();
  double closure = closure_eval;
  for (const auto& s : r.report.steps) closure = std::max(closure, s.closure_mismatch);
  const EmbeddingReport emb = embedding_report(r.curve);
  const double kerr = oracle_curvature_error(r.curve, ScalarField::constant(1.0));
  const bool pass = closure < 1e-8 && emb.embedded && emb.min_separation > 0.0 && kerr < 0.01;
  return verdict(8, pass,
                 fmt("closure mismatch %.3e (< 1e-8), embedded %s with min separation %.3e, sup |k_gamma - 1| = %.3e (< "
                     "1%%), %.1f s",
                     closure, emb.embedded ? "yes" : "no", emb.min_separation, kerr, w.seconds()));
}

bool criterion9() {
  Stopwatch w;
  const int code = run_cli("run --preset circle --k 0.5");
  const double gate_secs = w.seconds();
  bool pass = code == 1 && gate_secs < 5.0;
  std::string detail = fmt("k = 0.5 on the unit circle: exit %d in %.2f s; ", code, gate_secs);

  struct Converged {
    std::string name;
    SampledCurve curve;
    ScalarField k;
  };
  std::vector<Converged> runs;
  {
    RunConfig config;
    config.target_defect = 1e-3;
    runs.push_back({"circle k=3", run(presets::circle(1.0, 16384, 3), ScalarField::constant(3.0), config, evaluator()).curve,
                    ScalarField::constant(3.0)});
    const ScalarField kv = ScalarField::from_function(
        [](double t) { return ScalarField::Jet{2 + 0.5 * std::cos(t), -0.5 * std::sin(t), -0.5 * std::cos(t)}; });
    config.target_defect = 1e-2;
    runs.push_back({"circle k=2+0.5cos t", run(presets::circle(1.0, 4096, 3), kv, config, evaluator()).curve, kv});
    runs.push_back({"trefoil k=1", trefoil_run().curve, ScalarField::constant(1.0)});
  }
  std::uint64_t seed = 1;
  for (const auto& r : runs) {
    const VerificationReport v =
        check_necessity({r.curve}, r.curve, r.k, random_windows(r.curve.domain_end(), 10, seed++));
    double margin = std::numeric_limits<double>::infinity();
    for (const auto& c : v.checks) margin = std::min(margin, c.bound + c.tolerance - c.measured);
    pass = pass && v.all_pass() && v.checks.size() == 10;
    detail += fmt("%s: %s on 10 windows (min margin %.3e); ", r.name.c_str(), v.all_pass() ? "holds" : "VIOLATED", margin);
  }
  return verdict(9, pass, detail);
}

bool criterion10() {
  const SampledCurve c4 = presets::circle(1.0, 1024, 4);
  const ScalarField k = ScalarField::constant(2.0);
  StepParams p;
  p.delta = 0.1;
  p.lambda = 512.0;
  const StepResult kuiper = corrugate::corrugate(c4, k, p, evaluator());
  const StepResult nash = nash_twist_corrugate(c4, k, p, evaluator());
  const double diff = std::fabs(kuiper.report.defect_after - nash.report.defect_after);
  return verdict(10, diff < 2.0 / p.lambda,
                 fmt("R^4 circle, k = 2, delta = 0.1, lambda = 512: kuiper-strain %.7f, nash-twist %.7f, |diff| = %.3e "
                     "(< 2/lambda = %.3e)",
                     kuiper.report.defect_after, nash.report.defect_after, diff, 2.0 / p.lambda));
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::function<bool()>> criteria = {criterion1, criterion2, criterion3, criterion4, criterion5,
                                                       criterion6, criterion7, criterion8, criterion9, criterion10};
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));
  if (selected.empty())
    for (int i = 1; i <= 10; ++i) selected.push_back(i);
  bool all = true;
  for (int n : selected) {
    if (n < 1 || n > 10) {
      std::fprintf(stderr, "unknown criterion %d\n", n);
      return 2;
    }
    try {
      all = criteria[n - 1]() && all;
    } catch (const std::exception& e) {
      all = verdict(n, false, std::string("exception: ") + e.what()) && all;
    }
  }
  fs::remove_all(work_dir());
  return all ? 0 : 1;
}

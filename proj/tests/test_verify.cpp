#include <cmath>
#include <numbers>

#include "corrugate/iteration.hpp"
#include "corrugate/presets.hpp"
#include "corrugate/report_json.hpp"
#include "corrugate/verify.hpp"
#include "doctest.h"

using namespace corrugate;

namespace {
const ProfileEvaluator& evaluator() {
  static const ProfileEvaluator p;
  return p;
}
constexpr double kPi = std::numbers::pi;

std::vector<double> s_grid() {
  std::vector<double> s;
  for (int i = 0; i < 41; ++i) s.push_back(-20.0 + i);
  return s;
}
std::vector<double> t_grid() {
  std::vector<double> t;
  for (int i = 0; i < 64; ++i) t.push_back(2 * kPi * i / 64);
  return t;
}
}  // namespace

TEST_CASE("profile checks") {
  const VerificationReport r = check_profile(evaluator(), s_grid(), t_grid());
  CHECK(r.all_pass());
  CHECK(r.checks.size() >= 6);

  const VerificationReport zero = check_profile(evaluator(), {0.0}, t_grid());
  CHECK(zero.all_pass());
  CHECK(zero.find("circle_identity")->measured < 1e-15);
  CHECK(zero.find("psi_periodicity")->measured == 0.0);

  ProfileOptions bad;
  bad.corrugation_constant_override = 0.5 * evaluator().corrugation_constant();
  const ProfileEvaluator halved(bad);
  const VerificationReport broken = check_profile(halved, s_grid(), t_grid());
  CHECK_FALSE(broken.find("linear_bound")->pass);
  CHECK_FALSE(broken.all_pass());
}

TEST_CASE("step checks") {
  const SampledCurve c = presets::circle(1.0, 1024, 3);
  const double C = evaluator().corrugation_constant();
  SUBCASE("identical curves with zero defect") {
    const VerificationReport r = check_step(c, c, ScalarField::constant(1.0), 0.1, C);
    CHECK(r.find("c1_displacement")->pass);
    CHECK(r.find("c2_displacement")->pass);
    CHECK(r.find("defect_after")->pass);
    CHECK(r.find("oracle_agreement")->pass);
  }
  SUBCASE("accepted step") {
    const StepResult s = perform_step(c, ScalarField::constant(2.0), 0.5, Kernel::KuiperStrain, evaluator());
    const VerificationReport r = check_step(c, s.curve, ScalarField::constant(2.0), 0.5, C);
    CHECK(r.all_pass());
  }
  SUBCASE("under-resolved step is flagged") {
    StepParams p;
    p.delta = 0.1;
    p.lambda = 256.0;
    p.samples = 1024;  // 4 nodes per oscillation
    const StepResult s = corrugate::corrugate(c, ScalarField::constant(2.0), p, evaluator());
    const VerificationReport r = check_step(c, s.curve, ScalarField::constant(2.0), 1.0, C);
    CHECK_FALSE(r.find("oracle_agreement")->pass);
  }
  CHECK_THROWS_AS(check_step(c, presets::circle(1.0, 1024, 4), ScalarField::constant(2.0), 1.0, C), DomainError);
}

TEST_CASE("oracle jets") {
  const SampledCurve h = presets::helix(1.0, 1.0, 2049);
  const OracleJets o = oracle_jets(h);
  CHECK(o.grid.count == h.samples());
  CHECK(std::fabs(o.curvature.maxCoeff() - 0.5) < 1e-7);
  CHECK(std::fabs(o.curvature.minCoeff() - 0.5) < 1e-7);
  const OracleJets oc = oracle_jets(presets::trefoil(1024), 4);
  CHECK(oc.grid.count == 4096);
}

TEST_CASE("necessity checks") {
  const SampledCurve c = presets::circle(1.0, 1024, 3);
  const auto windows = random_windows(c.domain_end(), 10, 3);
  REQUIRE(windows.size() == 10);
  for (const auto& [a, b] : windows) {
    CHECK(a >= 0.0);
    CHECK(b <= c.domain_end());
    CHECK(b - a >= 0.05 * c.domain_end() - 1e-12);
    CHECK(b - a <= 0.5 * c.domain_end() + 1e-12);
  }
  const VerificationReport same = check_necessity({c, c}, c, ScalarField::constant(1.0), windows);
  CHECK(same.all_pass());
  for (const auto& chk : same.checks) CHECK(std::fabs(chk.measured - chk.bound) < 1e-9);

  const VerificationReport fault = check_necessity({c}, c, ScalarField::constant(0.5), windows);
  CHECK_FALSE(fault.all_pass());

  RunConfig config;
  config.target_defect = 1e-3;
  const RunResult run_result = run(presets::circle(1.0, 2048, 3), ScalarField::constant(2.0), config, evaluator());
  const VerificationReport after =
      check_necessity({run_result.curve}, run_result.curve, ScalarField::constant(2.0), random_windows(2 * kPi, 10, 11));
  CHECK(after.all_pass());
}

TEST_CASE("reports are deterministic") {
  const SampledCurve c = presets::circle(1.0, 1024, 3);
  const StepResult s1 = perform_step(c, ScalarField::constant(2.0), 0.5, Kernel::KuiperStrain, evaluator());
  const StepResult s2 = perform_step(c, ScalarField::constant(2.0), 0.5, Kernel::KuiperStrain, evaluator());
  const double C = evaluator().corrugation_constant();
  const auto a = to_json(check_step(c, s1.curve, ScalarField::constant(2.0), 0.5, C)).dump();
  const auto b = to_json(check_step(c, s2.curve, ScalarField::constant(2.0), 0.5, C)).dump();
  CHECK(a == b);
  CHECK(to_json(s1.report).dump() == to_json(s2.report).dump());
}

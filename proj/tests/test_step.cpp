#include <cmath>
#include <numbers>

#include "corrugate/presets.hpp"
#include "corrugate/step.hpp"
#include "doctest.h"

using namespace corrugate;

namespace {
const ProfileEvaluator& evaluator() {
  static const ProfileEvaluator p;
  return p;
}
constexpr double kPi = std::numbers::pi;
}  // namespace

TEST_CASE("amplitude field") {
  const SampledCurve c = presets::circle(1.0, 256, 3);
  CHECK(amplitude_field(c, ScalarField::constant(3.0), 0.0).value(1.0) == doctest::Approx(std::sqrt(8.0)).epsilon(1e-12));
  CHECK(std::fabs(amplitude_field(c, ScalarField::constant(2.0), 0.1).value(0.3) - std::sqrt(2.7)) < 1e-12);
  CHECK(amplitude_field(c, ScalarField::constant(1.0), 0.25).value(2.0) < 1e-7);
  // (1 + a^2) |xi|^2 = (1 - delta) k^2 + delta |xi|^2
  const double a = amplitude_field(c, ScalarField::constant(2.0), 0.3).value(0.0);
  CHECK(std::fabs(1.0 + a * a - (0.7 * 4.0 + 0.3)) < 1e-10);
  // any parametrization: radius-2 circle traversed at speed 2
  const SampledCurve big = presets::circle(2.0, 256, 3);
  CHECK(amplitude_field(big, ScalarField::constant(1.0), 0.0).value(0.0) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));
  CHECK_THROWS_AS(amplitude_field(c, ScalarField::constant(0.5), 0.1), PreconditionViolation);
}

TEST_CASE("zero amplitude leaves the curve unchanged") {
  const SampledCurve c = presets::circle(1.0, 512, 3);
  const ScalarField k = ScalarField::constant(1.0);
  StepParams p;
  p.delta = 0.1;
  p.lambda = 16.0;
  p.samples = 512;
  const StepResult r = corrugate::corrugate(c, k, p, evaluator());
  CHECK(cnorm_distance(c, r.curve, 2) < 1e-9);

  const SampledCurve c4 = presets::circle(1.0, 512, 4);
  const StepResult n = nash_twist_corrugate(c4, k, p, evaluator());
  CHECK(cnorm_distance(c4, n.curve, 2) < 1e-9);
}

TEST_CASE("corrugated circle family") {
  const SampledCurve circle = presets::circle(1.0, 1024, 3);
  const auto family = figure1_family(evaluator(), 1024);
  REQUIRE(family.size() == 6);
  for (int i = 0; i < 6; ++i) {
    CHECK(is_closed(family[i], 1e-9));
    CHECK(corrugation_count(circle, family[i]) == i + 1);
  }
}

TEST_CASE("defect recursion on the circle") {
  const SampledCurve c = presets::circle(1.0, 1024, 3);
  StepParams p;
  p.delta = 0.1;
  p.lambda = 200.0;
  const StepResult r = corrugate::corrugate(c, ScalarField::constant(2.0), p, evaluator());
  CHECK(std::fabs(r.report.defect_after - 0.3) < 2.0 / p.lambda);
  CHECK(r.report.pass_c1);
  CHECK(r.report.pass_c2);
  CHECK(r.report.pass_sandwich);
  CHECK(r.report.c2_displacement <= r.report.c2_bound);
  CHECK(r.report.oscillations == 200);
  CHECK(r.report.closure_mismatch < 1e-10);
}

TEST_CASE("Nash twist displacement bound") {
  const SampledCurve c4 = presets::circle(1.0, 1024, 4);
  StepParams p;
  p.delta = 0.1;
  p.lambda = 64.0;
  const StepResult r = nash_twist_corrugate(c4, ScalarField::constant(2.0), p, evaluator());
  CHECK(r.report.c0_displacement <= std::sqrt(2.7) / (p.lambda * p.lambda) + 1e-12);
  CHECK(r.report.kernel == Kernel::NashTwist);
  CHECK_THROWS_AS(nash_twist_corrugate(presets::circle(1.0, 256, 3), ScalarField::constant(2.0), p, evaluator()),
                  DomainError);
}

TEST_CASE("perform_step") {
  const SampledCurve c = presets::circle(1.0, 1024, 3);
  SUBCASE("zero defect returns the input") {
    const StepResult r = perform_step(c, ScalarField::constant(1.0), 0.5, Kernel::KuiperStrain, evaluator());
    CHECK(cnorm_distance(r.curve, c, 2) == 0.0);
    CHECK(r.report.estimates_pass());
  }
  SUBCASE("circle, k = 2") {
    const StepResult r = perform_step(c, ScalarField::constant(2.0), 0.5, Kernel::KuiperStrain, evaluator());
    CHECK(r.report.defect_after < 0.5);
    const DefectSummary d = defect_summary(r.curve, ScalarField::constant(2.0));
    CHECK(d.min_curvature > 0.0);
    CHECK(d.max_ratio < 1.0);
    CHECK(is_closed(r.curve, 1e-9));
    const double m = r.report.lambda_used * 2 * kPi / (2 * kPi);
    CHECK(std::fabs(m - std::round(m)) < 1e-9);
  }
  SUBCASE("precondition") {
    CHECK_THROWS_AS(perform_step(c, ScalarField::constant(0.5), 0.5, Kernel::KuiperStrain, evaluator()),
                    PreconditionViolation);
  }
  SUBCASE("cap too low is a step failure with a partial report") {
    StepOptions o;
    o.lambda_cap_numerator = 100.0;
    try {
      perform_step(c, ScalarField::constant(2.0), 1e-3, Kernel::KuiperStrain, evaluator(), o);
      FAIL("expected StepFailure");
    } catch (const StepFailure& e) {
      CHECK(e.partial_report().trials > 0);
      CHECK(e.kind() == ErrorKind::StepFailure);
    }
  }
}

TEST_CASE("lambda that does not close the curve is rejected") {
  StepParams p;
  p.lambda = 10.5;
  CHECK_THROWS_AS(corrugate::corrugate(presets::circle(1.0, 256, 3), ScalarField::constant(2.0), p, evaluator()),
                  DomainError);
}

TEST_CASE("open curves and non-constant targets") {
  const SampledCurve h = presets::helix(1.0, 1.0, 1025);
  const ScalarField k = ScalarField::from_function([](double t) {
    return ScalarField::Jet{1.0 + 0.2 * std::sin(t), 0.2 * std::cos(t), -0.2 * std::sin(t)};
  });
  const StepResult r = perform_step(h, k, 0.3, Kernel::KuiperStrain, evaluator());
  CHECK(r.report.estimates_pass());
  CHECK(r.report.defect_after < r.report.defect_before);
  CHECK((r.curve.evaluate(0.0, 0) - h.evaluate(0.0, 0)).norm() < r.report.c1_displacement + 1e-15);
}

TEST_CASE("kernel names") {
  CHECK(std::string(to_string(Kernel::KuiperStrain)) == "kuiper-strain");
  CHECK(kernel_from_string("nash-twist") == Kernel::NashTwist);
  CHECK_THROWS_AS(kernel_from_string("twist"), ConfigError);
}

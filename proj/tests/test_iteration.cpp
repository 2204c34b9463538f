#include <cmath>
#include <numeric>

#include "corrugate/iteration.hpp"
#include "corrugate/presets.hpp"
#include "doctest.h"

using namespace corrugate;

namespace {
const ProfileEvaluator& evaluator() {
  static const ProfileEvaluator p;
  return p;
}
}  // namespace

TEST_CASE("defect schedule") {
  const auto eps = defect_schedule(1.0, 0.5, 10);
  REQUIRE(eps.size() == 10);
  CHECK(eps[0] == 0.5);
  CHECK(eps[1] == 0.25);
  CHECK(eps[2] == 0.125);
  CHECK(std::accumulate(eps.begin(), eps.end(), 0.0) <= 1.0);
  const auto long_run = defect_schedule(1.0, 0.5, 60);
  CHECK(std::accumulate(long_run.begin(), long_run.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-15));
  double roots = 0.0;
  for (double e : long_run) roots += std::sqrt(e);
  CHECK(roots == doctest::Approx(std::sqrt(0.5) / (1.0 - std::sqrt(0.5))).epsilon(1e-9));
  CHECK_THROWS_AS(defect_schedule(1.0, 1.0, 5), DomainError);
  CHECK_THROWS_AS(defect_schedule(-1.0, 0.5, 5), DomainError);
}

TEST_CASE("curvature zero removal") {
  SUBCASE("nothing to do") {
    const SampledCurve c = presets::circle(2.0, 512, 3);
    double change = -1.0;
    const SampledCurve out = remove_curvature_zeros(c, ScalarField::constant(1.0), 0.1, 1, &change);
    CHECK(cnorm_distance(out, c, 2) == 0.0);
    CHECK(change == 0.0);
  }
  SUBCASE("segment joined to an arc") {
    const SampledCurve c = presets::segment_arc(2049);
    const ScalarField k = ScalarField::constant(20.0);
    double change = 0.0;
    const SampledCurve out = remove_curvature_zeros(c, k, 0.05, 1, &change);
    const NodeGeometry g = node_geometry(out);
    CHECK(g.curvature.minCoeff() > 0.0);
    CHECK(change < 0.05);
    CHECK(cnorm_distance(out, c, 2) < 0.05);
    CHECK(g.curvature.maxCoeff() < 20.0);
  }
  SUBCASE("straight line toward k = 1") {
    const SampledCurve c = presets::line(1.0, 4096);
    const SampledCurve out = remove_curvature_zeros(c, ScalarField::constant(1.0), 0.05, 7);
    const NodeGeometry g = node_geometry(out);
    CHECK(g.curvature.minCoeff() > 0.0);
    CHECK(g.curvature.maxCoeff() < 1.0);
    CHECK(cnorm_distance(out, c, 2) < 0.05);
  }
}

TEST_CASE("run preconditions") {
  const SampledCurve c = presets::circle(1.0, 1024, 3);
  RunConfig config;
  CHECK_THROWS_AS(run(c, ScalarField::constant(1.0 + 1e-9), config, evaluator()), PreconditionViolation);
  CHECK_THROWS_AS(run(c, ScalarField::constant(0.5), config, evaluator()), PreconditionViolation);
  const RunResult same = run(c, ScalarField::constant(1.0), config, evaluator());
  CHECK(same.report.steps.empty());
  CHECK(same.report.converged);
  CHECK(cnorm_distance(same.curve, c, 2) == 0.0);
}

TEST_CASE("circle to constant curvature 3") {
  const SampledCurve c = presets::circle(1.0, 4096, 3);
  RunConfig config;
  config.epsilon = 0.2;
  config.target_defect = 1e-3;
  const RunResult r = run(c, ScalarField::constant(3.0), config, evaluator());
  CHECK(r.report.converged);
  CHECK(r.report.final_defect <= 1e-3);
  CHECK(r.report.final_min_curvature > 2.95);
  CHECK(r.report.final_max_curvature < 3.05);
  CHECK(r.report.final_c1_distance <= 0.2);
  CHECK(r.report.cauchy_within_bound);
  CHECK(is_closed(r.curve, 1e-9));
  REQUIRE(r.report.homotopy.size() == 11);
  for (const auto& h : r.report.homotopy) CHECK(h.immersed);
  double c1_total = 0.0;
  for (const auto& s : r.report.steps) {
    c1_total += s.c1_displacement;
    CHECK(s.estimates_pass());
  }
  CHECK(c1_total + r.report.preprocessing_c1_change <= config.epsilon);
}

TEST_CASE("run with a non-constant target reaches the defect") {
  const SampledCurve c = presets::circle(1.0, 2048, 3);
  const ScalarField k = ScalarField::from_function([](double t) {
    return ScalarField::Jet{2.0 + 0.5 * std::cos(t), -0.5 * std::sin(t), -0.5 * std::cos(t)};
  });
  RunConfig config;
  config.target_defect = 1e-2;
  const RunResult r = run(c, k, config, evaluator());
  CHECK(r.report.converged);
  CHECK(r.report.final_defect <= 1e-2);
}

TEST_CASE("homotopy") {
  const SampledCurve a = presets::circle(1.0, 512, 3);
  const SampledCurve b = scale(a, 1.5);
  CHECK(cnorm_distance(homotopy(a, b, 0.0), a, 2) == 0.0);
  const SampledCurve mid = homotopy(a, b, 0.5);
  CHECK(std::fabs(cnorm_distance(mid, a, 1) - 0.5 * cnorm_distance(b, a, 1)) < 1e-10);
  CHECK(cnorm_distance(homotopy(a, b, 1.0), b, 2) < 1e-15);
}

TEST_CASE("unknot to curvature 5") {
  RunConfig config;
  config.target_defect = 1e-2;
  const KnotResult r = prescribe_knot_curvature(presets::circle(1.0, 1024, 3), ScalarField::constant(5.0), config, evaluator());
  CHECK(r.scale_factor == doctest::Approx(1.0 / (0.9 * 5.0)).epsilon(1e-12));
  CHECK(node_geometry(r.scaled_input).curvature.maxCoeff() < 5.0);
  CHECK(is_closed(r.curve, 1e-8));
  CHECK(is_embedded(r.curve));
  CHECK(std::fabs(node_geometry(r.curve).curvature.maxCoeff() - 5.0) < 0.05);
}

TEST_CASE("knot input must be closed") {
  CHECK_THROWS_AS(prescribe_knot_curvature(presets::helix(), ScalarField::constant(1.0), RunConfig{}, evaluator()),
                  PreconditionViolation);
}

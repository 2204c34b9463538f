#include <omp.h>

#include <cstdlib>

#include "corrugate/parallel.hpp"
#include "corrugate/presets.hpp"
#include "corrugate/step.hpp"
#include "doctest.h"

using namespace corrugate;

// Serial reference and OpenMP path must agree bit for bit. More threads than
// cores is fine here; it still exercises the static partition.
namespace {
struct Team {
  Team() { omp_set_num_threads(4); }
};
const Team team;

const ProfileEvaluator& evaluator() {
  static const ProfileEvaluator p;
  return p;
}

bool identical(const MatrixXd& a, const MatrixXd& b) { return a.rows() == b.rows() && a.cols() == b.cols() && a == b; }
}  // namespace

TEST_CASE("for_each_index visits every index once") {
  std::vector<int> hits(1000, 0);
  for_each_index(1000, Execution::Parallel, [&](std::ptrdiff_t i) { hits[i] += 1; });
  for (int h : hits) CHECK(h == 1);
}

TEST_CASE("node geometry serial vs parallel") {
  const SampledCurve c = presets::trefoil(8192);
  const NodeGeometry s = node_geometry(c, Execution::Serial);
  const NodeGeometry p = node_geometry(c, Execution::Parallel);
  CHECK(s.speed == p.speed);
  CHECK(s.curvature == p.curvature);
  CHECK(identical(s.curvature_vector, p.curvature_vector));
  CHECK(identical(s.tangent, p.tangent));
}

TEST_CASE("corrugation kernel serial vs parallel") {
  for (const Kernel kernel : {Kernel::KuiperStrain, Kernel::NashTwist}) {
    const SampledCurve c = presets::embed(presets::trefoil(4096), kernel == Kernel::NashTwist ? 4 : 3);
    const ScalarField k = ScalarField::constant(2.0);
    StepParams params;
    params.delta = 0.2;
    params.lambda = 2 * 3.141592653589793 * 64 / arclength_map(c).total_length();
    params.kernel = kernel;
    params.exec = Execution::Serial;
    const StepResult s = corrugate::corrugate(c, k, params, evaluator());
    params.exec = Execution::Parallel;
    const StepResult p = corrugate::corrugate(c, k, params, evaluator());
    CHECK(identical(s.curve.positions(), p.curve.positions()));
    CHECK(identical(s.curve.first(), p.curve.first()));
    CHECK(identical(s.curve.second(), p.curve.second()));
    CHECK(s.report.defect_after == p.report.defect_after);
  }
}

TEST_CASE("thread cap from the environment") {
  ::setenv("CORRUGATE_THREADS", "2", 1);
  CHECK(configure_threads_from_env() == 2);
  CHECK(max_threads() == 2);
  ::setenv("CORRUGATE_THREADS", "0", 1);
  CHECK(configure_threads_from_env() >= 1);
  ::unsetenv("CORRUGATE_THREADS");
  omp_set_num_threads(4);
}

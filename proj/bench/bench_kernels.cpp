#include <benchmark/benchmark.h>

#include "corrugate/parallel.hpp"
#include "corrugate/presets.hpp"
#include "corrugate/step.hpp"

using namespace corrugate;

// Serial reference vs OpenMP for the two hot loops. Arg is the sample count.
// CORRUGATE_THREADS caps the team; on one core the two paths should tie.

namespace {
const ProfileEvaluator& evaluator() {
  static const ProfileEvaluator p;
  return p;
}

Execution exec_of(const benchmark::State& state) { return state.range(1) ? Execution::Parallel : Execution::Serial; }

void label(benchmark::State& state) {
  state.SetLabel(state.range(1) ? "parallel/" + std::to_string(max_threads()) : "serial");
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_node_geometry(benchmark::State& state) {
  const SampledCurve c = presets::trefoil(state.range(0));
  const Execution exec = exec_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(node_geometry(c, exec));
  label(state);
}

void BM_corrugate(benchmark::State& state) {
  const SampledCurve c = presets::circle(1.0, 1024, 3);
  const ScalarField k = ScalarField::constant(2.0);
  StepParams p;
  p.delta = 0.2;
  p.samples = state.range(0);
  // 32 samples per oscillation
  p.lambda = static_cast<double>(state.range(0) / 32);
  p.exec = exec_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(corrugate::corrugate(c, k, p, evaluator()));
  label(state);
}
}  // namespace

BENCHMARK(BM_node_geometry)->ArgsProduct({{1 << 14, 1 << 17}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_corrugate)->ArgsProduct({{1 << 14, 1 << 17}, {0, 1}})->Unit(benchmark::kMillisecond);

int main(int argc, char** argv) {
  configure_threads_from_env();
  evaluator();
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}

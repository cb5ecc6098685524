#include <benchmark/benchmark.h>

#include <numbers>

#include "hetform/hetform.hpp"

namespace {

using namespace hetform;

double deg(double d) { return d * std::numbers::pi / 180.0; }

SetupSpec shape_t2() {
  return SetupSpec::from_angles(Topology::OneD_TwoB, 1.0, 4.0, {4.0, 4.0}, {0.0, deg(45)});
}

void BM_SolveReducedCubic(benchmark::State& state) {
  double d = 8.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_reduced_cubic({-16.0, d}));
    d = d < 12.0 ? d + 1e-3 : 8.0;
  }
}
BENCHMARK(BM_SolveReducedCubic);

void BM_ClosedLoopRhs(benchmark::State& state) {
  const SetupSpec spec = shape_t2();
  const Configuration c{Vec2(0, 0), Vec2(3, 1), Vec2(-1, 3)};
  for (auto _ : state) benchmark::DoNotOptimize(closed_loop_rhs(c, spec));
}
BENCHMARK(BM_ClosedLoopRhs);

void BM_JacobianAndEigenvalues(benchmark::State& state) {
  const SetupSpec spec = shape_t2();
  const InvariantSetDescription set = moving_set(spec).front();
  for (auto _ : state) {
    const JacobianBundle J = jacobian(spec, set.links);
    benchmark::DoNotOptimize(numeric_eigenvalues(J.matrix));
  }
}
BENCHMARK(BM_JacobianAndEigenvalues);

void BM_AnalyzeAll(benchmark::State& state) {
  const SetupSpec spec = SetupSpec::from_angles(Topology::OneB_TwoD, 1.0, 4.0, {4.0, 4.0},
                                                {deg(-7.5), deg(7.5)});
  for (auto _ : state) benchmark::DoNotOptimize(analyze_all(spec));
}
BENCHMARK(BM_AnalyzeAll);

void BM_Integrate(benchmark::State& state) {
  const SetupSpec spec = shape_t2();
  const Configuration p0{Vec2(0, 0), Vec2(3, 1), Vec2(-1, 3)};
  SimParams p;
  p.dt = 1e-3;
  p.t_end = 1e-3 * static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(integrate(spec, p0, p));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Integrate)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

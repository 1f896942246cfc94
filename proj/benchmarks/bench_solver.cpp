#include <benchmark/benchmark.h>

#include "fucik/fucik.hpp"

using namespace fucik;

namespace {

Problem reference_problem() {
  return Problem(1.0, WeightExpr::parse("1+1/(x+1)"), WeightExpr::parse("1+cos(2*x)^2"));
}

void BM_Parse(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(WeightExpr::parse("1+cos(2*x)^2+exp(-x)/(1+x^2)"));
}
BENCHMARK(BM_Parse);

void BM_TerminalAngle(benchmark::State& state) {
  const Problem p = reference_problem();
  const double lambda = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(terminal_angle(p, lambda, 1.0, Sign::Plus, {}));
}
BENCHMARK(BM_TerminalAngle)->Arg(100)->Arg(10000)->Arg(1000000);

void BM_Eigenvalue(benchmark::State& state) {
  const Problem p = reference_problem();
  const int k = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(eigenvalue(p, k, 30.0, Sign::Plus, {}));
}
BENCHMARK(BM_Eigenvalue)->Arg(4)->Arg(28)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_Table1Curve(benchmark::State& state) {
  const Problem p = reference_problem();
  const std::vector<double> grid = slope_grid(1e-5, 1e5, 11);
  for (auto _ : state) benchmark::DoNotOptimize(trace_curve(p, 4, Sign::Plus, grid, {}));
}
BENCHMARK(BM_Table1Curve)->Unit(benchmark::kMillisecond);

void BM_Count(benchmark::State& state) {
  const Problem p = reference_problem();
  for (auto _ : state) benchmark::DoNotOptimize(count(p, 1e5, 1.0, {}));
}
BENCHMARK(BM_Count)->Unit(benchmark::kMillisecond);

void BM_WeylIntegral(benchmark::State& state) {
  const Problem p = reference_problem();
  for (auto _ : state) benchmark::DoNotOptimize(weyl_integral(p, 30.0));
}
BENCHMARK(BM_WeylIntegral);

}  // namespace
BENCHMARK_MAIN();

#include <benchmark/benchmark.h>

#include "oed/examples.hpp"
#include "oed/ipiter.hpp"

namespace {

using namespace oed;

Mat random_spd(int n, uint64_t seed) {
  SplitMix64 rng(seed);
  Mat A(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) A(i, j) = 2.0 * rng.uniform() - 1.0;
  }
  return A.transpose() * A + Mat::Identity(n, n);
}

void BM_FactorSpd(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Mat M = random_spd(n, 42);
  for (auto _ : state) {
    benchmark::DoNotOptimize(factor_spd(M));
  }
}
BENCHMARK(BM_FactorSpd)->Arg(32)->Arg(64)->Arg(128)->Arg(256);

void BM_ControlEval(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ProblemDef p = synthetic_family(n, 1, QMode::dense_spd);
  const BarrierConfig cfg;
  const Vec x = Vec::Zero(n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(oed_control_eval(p, cfg, 0.0, x, 500.0));
  }
}
BENCHMARK(BM_ControlEval)->Arg(32)->Arg(64)->Arg(128)->Arg(256);

void BM_InstantSolve(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ProblemDef p = synthetic_family(n, 1, QMode::dense_spd);
  const BarrierConfig cfg;
  const Vec x0 = Vec::Zero(n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_instant(p, cfg, 0.0, x0));
  }
}
BENCHMARK(BM_InstantSolve)->Arg(32)->Arg(64)->Arg(128);

}  // namespace

BENCHMARK_MAIN();

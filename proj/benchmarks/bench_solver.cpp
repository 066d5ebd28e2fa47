#include <benchmark/benchmark.h>

#include "blochform/blochform.hpp"

namespace {

using namespace blochform;

const BlochState kGround{0.0, 0.0, -1.0};

// one representative point per root structure
BlochParams representative(int form) {
  switch (form) {
    case 0: return {1.0, 0.5, 0.3, 1.0, -1.0, false};                   // complex pair
    case 1: return from_dimensionless(0.4, 0.1, 0.005, 0.2, -1.0);      // three distinct real
    case 2: return {0.4, 0.1, 0.0, 0.15, -1.0, false};                  // double root
    default: return from_dimensionless(0.4, 0.1, 1.0 / 27, 8.0 / 27, -1.0);  // triple root
  }
}

void BM_ClassifyRoots(benchmark::State& state) {
  const RealCubic c = characteristic_poly(representative(static_cast<int>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(classify_roots(c));
}
BENCHMARK(BM_ClassifyRoots)->DenseRange(0, 3);

void BM_Solve(benchmark::State& state) {
  const BlochParams p = representative(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(solve(p, kGround));
}
BENCHMARK(BM_Solve)->DenseRange(0, 3);

void BM_Evaluate(benchmark::State& state) {
  const ClosedFormSolution sol = solve(representative(0), kGround);
  double t = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(evaluate(sol, t));
    t = t < 50.0 ? t + 0.01 : 0.0;
  }
}
BENCHMARK(BM_Evaluate);

void BM_ClassifyRegime(benchmark::State& state) {
  double beta = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(classify_regime(0.02, beta));
    beta = beta < 0.3 ? beta + 1e-4 : 0.0;
  }
}
BENCHMARK(BM_ClassifyRegime);

void BM_Rk4Window(benchmark::State& state) {
  const BlochParams p = representative(0);
  for (auto _ : state) benchmark::DoNotOptimize(rk4_integrate(p, kGround, 0.0, 50.0, 1e-3));
}
BENCHMARK(BM_Rk4Window)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

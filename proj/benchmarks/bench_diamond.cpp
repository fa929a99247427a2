#include <benchmark/benchmark.h>

#include "iselect/diamond.hpp"

namespace {

iselect::DiamondParams diagonal() {
  iselect::DiamondParams p;
  p.a1 = 1.0;
  p.a2 = -1.0;
  p.delta1 = -1.0;
  p.delta2 = -1.0;
  p.beta = {1e-4, 2e-5, 2e-5, 1e-4};
  p.k = 1e-3;
  return p;
}

void BM_TransitionRate(benchmark::State& state) {
  const auto p = diagonal();
  double n1 = 100.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(iselect::transition_rate(p, n1, 101.0, 0.25));
    n1 += 1e-9;
  }
}
BENCHMARK(BM_TransitionRate);

void BM_InterferenceResidual(benchmark::State& state) {
  const auto p = diagonal();
  double v = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(iselect::interference_residual(p, 100.0, 101.0, v));
    v += 1e-9;
  }
}
BENCHMARK(BM_InterferenceResidual);

}  // namespace

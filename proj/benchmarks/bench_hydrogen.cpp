#include <benchmark/benchmark.h>

#include "iselect/hydrogen.hpp"

namespace {

void BM_RamanAmplitude(benchmark::State& state) {
  iselect::HydrogenRamanParams p;
  p.n_max = static_cast<int>(state.range(0));
  double q = 2.7;
  for (auto _ : state) {
    benchmark::DoNotOptimize(iselect::raman_amplitude(q, p));
    q += 1e-12;
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_RamanAmplitude)->RangeMultiplier(4)->Range(50, 3200)->Complexity();

void BM_FindAntiresonance(benchmark::State& state) {
  iselect::HydrogenRamanParams p;
  p.n_max = 100;
  for (auto _ : state) {
    benchmark::DoNotOptimize(iselect::find_antiresonance(2, p));
  }
}
BENCHMARK(BM_FindAntiresonance)->Unit(benchmark::kMicrosecond);

}  // namespace

#include <benchmark/benchmark.h>

#include "iselect/numeric.hpp"
#include "iselect/two_mode.hpp"

namespace {

iselect::DiamondParams diagonal() {
  iselect::DiamondParams p;
  p.a1 = 1.0;
  p.a2 = -1.0;
  p.delta1 = -1.0;
  p.delta2 = -1.0;
  p.beta = {1e-4, 2e-5, 2e-5, 1e-4};
  return p;
}

void BM_Evolve(benchmark::State& state) {
  const auto p = diagonal();
  const double nbar = static_cast<double>(state.range(0));
  const auto s0 = iselect::coherent_joint_state(nbar, nbar);
  for (auto _ : state) {
    benchmark::DoNotOptimize(iselect::evolve(s0, p, 1.0));
  }
  state.SetComplexityN(static_cast<std::int64_t>((s0.nmax1() + 1) * (s0.nmax2() + 1)));
}
BENCHMARK(BM_Evolve)->Arg(25)->Arg(100)->Arg(400)->Complexity();

void BM_CoherenceSeries(benchmark::State& state) {
  const auto p = diagonal();
  iselect::CoherenceRun run;
  run.gamma0_times = iselect::log_spaced(1e-2, 1e2, 64);
  for (auto _ : state) {
    benchmark::DoNotOptimize(iselect::coherence_series(p, run));
  }
}
BENCHMARK(BM_CoherenceSeries)->Unit(benchmark::kMillisecond);

}  // namespace

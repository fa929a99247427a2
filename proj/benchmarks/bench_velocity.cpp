#include <benchmark/benchmark.h>

#include "iselect/velocity.hpp"

namespace {

void BM_FilterEvolve(benchmark::State& state) {
  iselect::DiamondParams p;
  p.a1 = 1.0;
  p.a2 = -1.0;
  p.delta1 = -5.0;
  p.delta2 = -6.0;
  p.k = 1.0;
  const auto e = iselect::gaussian_ensemble(-1.0, 1.0, static_cast<std::size_t>(state.range(0)), 0.0, 0.5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(iselect::filter_evolve(e, p, 1.0, 1.0, 100.0));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_FilterEvolve)->RangeMultiplier(4)->Range(256, 16384)->Complexity();

void BM_CompetitionMc(benchmark::State& state) {
  iselect::CompetitionParams c;
  c.g = 1.0;
  c.n_traj = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(iselect::competition_mc(c));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_CompetitionMc)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

}  // namespace

#include <benchmark/benchmark.h>

#include "iselect/subrecoil.hpp"

namespace {

void BM_SimulateTrajectory(benchmark::State& state) {
  iselect::SubrecoilParams p;
  p.t_total = static_cast<double>(state.range(0));
  std::uint64_t index = 0;
  for (auto _ : state) {
    auto stream = iselect::derive_stream(1, index++);
    benchmark::DoNotOptimize(iselect::simulate_trajectory(p, 4.0, stream));
  }
}
BENCHMARK(BM_SimulateTrajectory)->Arg(1000)->Arg(100000);

void BM_Ensemble(benchmark::State& state) {
  iselect::SubrecoilParams p;
  p.n_traj = static_cast<std::size_t>(state.range(0));
  p.t_total = 1e4;
  const iselect::InitialVelocity init;
  const iselect::SummaryOptions opts;
  for (auto _ : state) {
    benchmark::DoNotOptimize(iselect::simulate_ensemble(p, init, opts));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Ensemble)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

}  // namespace

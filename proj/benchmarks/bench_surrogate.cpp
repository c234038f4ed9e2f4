#include <benchmark/benchmark.h>

#include "nlcor/surrogate.hpp"
#include "nlcor/synthetic.hpp"

namespace {

void BM_MakeSurrogates(benchmark::State& state) {
  nlcor::SyntheticSpec spec;
  spec.n_series = 5;
  spec.length = static_cast<int>(state.range(0));
  const auto panel = nlcor::gen_synthetic(spec, 7);
  for (auto _ : state) {
    auto ens = nlcor::make_surrogates(panel, 20, nlcor::SurrogateMode::SharedPhase, 11);
    benchmark::DoNotOptimize(ens.realizations.back().returns);
  }
  state.SetComplexityN(state.range(0));
}
// 1000 exercises the Bluestein path, 1024 the radix-2 path.
BENCHMARK(BM_MakeSurrogates)->Arg(500)->Arg(1000)->Arg(1024)->Arg(4096)->Complexity();

void BM_EnsembleMiStats(benchmark::State& state) {
  nlcor::SyntheticSpec spec;
  spec.n_series = static_cast<int>(state.range(0));
  spec.length = 500;
  const auto panel = nlcor::gen_synthetic(spec, 7);
  const auto ens = nlcor::make_surrogates(panel, 20, nlcor::SurrogateMode::SharedPhase, 11);
  for (auto _ : state) {
    auto stats = nlcor::ensemble_mi_stats(ens);
    benchmark::DoNotOptimize(stats.mean);
  }
}
BENCHMARK(BM_EnsembleMiStats)->Arg(3)->Arg(5)->Arg(10);

}  // namespace

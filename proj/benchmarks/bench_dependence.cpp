#include <benchmark/benchmark.h>

#include "nlcor/dependence.hpp"
#include "nlcor/synthetic.hpp"

namespace {

nlcor::ReturnPanel panel_of(int n, int length) {
  nlcor::SyntheticSpec spec;
  spec.n_series = n;
  spec.length = length;
  spec.rho = 0.3;
  return nlcor::gen_synthetic(spec, 42);
}

void BM_PearsonMatrix(benchmark::State& state) {
  const auto panel = panel_of(static_cast<int>(state.range(0)), 1000);
  for (auto _ : state) {
    auto dep = nlcor::dependency_matrix(panel.returns, nlcor::Measure::Pearson);
    benchmark::DoNotOptimize(dep.values);
  }
}
BENCHMARK(BM_PearsonMatrix)->Arg(10)->Arg(50)->Arg(150);

void BM_MutualInformationMatrix(benchmark::State& state) {
  const auto panel = panel_of(static_cast<int>(state.range(0)), 1000);
  for (auto _ : state) {
    auto dep = nlcor::dependency_matrix(panel.returns, nlcor::Measure::MutualInformation);
    benchmark::DoNotOptimize(dep.values);
  }
}
BENCHMARK(BM_MutualInformationMatrix)->Arg(10)->Arg(50);

void BM_NormalizedMiPair(benchmark::State& state) {
  const auto panel = panel_of(2, static_cast<int>(state.range(0)));
  const std::span<const double> x{panel.returns.col(0).data(),
                                  static_cast<std::size_t>(panel.length())};
  const std::span<const double> y{panel.returns.col(1).data(),
                                  static_cast<std::size_t>(panel.length())};
  const int bins = nlcor::bin_count(panel.length());
  for (auto _ : state) {
    benchmark::DoNotOptimize(nlcor::normalized_mi(x, y, bins).value);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_NormalizedMiPair)->RangeMultiplier(2)->Range(250, 4000)->Complexity();

}  // namespace

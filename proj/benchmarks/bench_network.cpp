#include <benchmark/benchmark.h>

#include "nlcor/network.hpp"
#include "nlcor/rng.hpp"

namespace {

nlcor::DistanceMatrix random_distances(int n) {
  nlcor::Rng rng(5);
  nlcor::DistanceMatrix d;
  d.metric = nlcor::Metric::MiDistance;
  d.values = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double v = rng.uniform(0.1, 1.0);
      d.values(i, j) = v;
      d.values(j, i) = v;
    }
  return d;
}

std::vector<std::string> labels(int n) {
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i) out.push_back("T" + std::to_string(1000 + i));
  return out;
}

void BM_BuildMst(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto d = random_distances(n);
  const auto l = labels(n);
  for (auto _ : state) {
    auto tree = nlcor::build_mst(d, l);
    benchmark::DoNotOptimize(tree.edges);
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_BuildMst)->RangeMultiplier(2)->Range(16, 512)->Complexity();

void BM_ThresholdGraphClustering(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto d = random_distances(n);
  const auto l = labels(n);
  for (auto _ : state) {
    auto graph = nlcor::build_threshold_graph(d, l, 0.2);
    auto c = nlcor::clustering_coefficient(graph);
    benchmark::DoNotOptimize(c);
  }
}
BENCHMARK(BM_ThresholdGraphClustering)->Arg(50)->Arg(152)->Arg(300);

}  // namespace

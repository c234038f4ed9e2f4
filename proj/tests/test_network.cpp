// test_network.cpp

#include <doctest.h>

#include <cmath>
#include <deque>

#include "nlcor/errors.hpp"
#include "nlcor/network.hpp"
#include "nlcor/rng.hpp"
#include "test_support.hpp"

using namespace nlcor;

namespace {

DistanceMatrix distance_of(const Eigen::MatrixXd& values, Metric metric = Metric::MiDistance) {
  DistanceMatrix d;
  d.metric = metric;
  d.values = values;
  return d;
}

bool has_edge(const Tree& tree, int u, int v) {
  for (const TreeEdge& e : tree.edges) {
    if ((e.u == std::min(u, v)) && (e.v == std::max(u, v))) return true;
  }
  return false;
}

double total_weight(const Tree& tree) {
  double sum = 0.0;
  for (const TreeEdge& e : tree.edges) sum += e.distance;
  return sum;
}

// Path tree A - B - C - ... as a distance matrix: adjacent pairs close,
// everything else far.
Tree star_tree(int n) {
  Eigen::MatrixXd d = Eigen::MatrixXd::Constant(n, n, 5.0);
  d.diagonal().setZero();
  for (int i = 1; i < n; ++i) {
    d(0, i) = 1.0;
    d(i, 0) = 1.0;
  }
  return build_mst(distance_of(d), testsupport::index_labels(n));
}

}  // namespace

TEST_SUITE("network") {

TEST_CASE("triangle with distinct distances keeps the two cheap edges") {
  Eigen::MatrixXd d(3, 3);
  d << 0.0, 0.1, 0.3, 0.1, 0.0, 0.2, 0.3, 0.2, 0.0;
  const Tree tree = build_mst(distance_of(d), {"A", "B", "C"});
  CHECK(tree.edges.size() == 2);
  CHECK(has_edge(tree, 0, 1));
  CHECK(has_edge(tree, 1, 2));
  CHECK_FALSE(has_edge(tree, 0, 2));
  CHECK(normalized_tree_length(tree) == doctest::Approx(0.15).epsilon(1e-15));
}

TEST_CASE("a 152-node matrix yields 151 edges") {
  Rng rng(711);
  const Eigen::MatrixXd d = testsupport::random_distance_matrix(rng, 152);
  const Tree tree = build_mst(distance_of(d), testsupport::index_labels(152));
  CHECK(tree.edges.size() == 151);
}

TEST_CASE("prim total weight equals exhaustive enumeration on 7 nodes") {
  Rng rng(712);
  for (int rep = 0; rep < 100; ++rep) {
    const Eigen::MatrixXd d = testsupport::random_distance_matrix(rng, 7);
    const Tree tree = build_mst(distance_of(d), testsupport::index_labels(7));
    CHECK(total_weight(tree) == testsupport::brute_force_mst_weight(d));
  }
}

TEST_CASE("non-finite distances are rejected") {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(3, 3);
  d(0, 1) = d(1, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(build_mst(distance_of(d), {"A", "B", "C"}), ValidationError);
}

TEST_CASE("identical inputs with ties give identical trees") {
  Rng rng(713);
  // Quantized distances produce many exact ties.
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(9, 9);
  for (int i = 0; i < 9; ++i)
    for (int j = i + 1; j < 9; ++j) {
      const double v = std::round(rng.uniform(0.1, 0.5) * 4.0) / 4.0;
      d(i, j) = v;
      d(j, i) = v;
    }
  const Tree a = build_mst(distance_of(d), testsupport::index_labels(9));
  const Tree b = build_mst(distance_of(d), testsupport::index_labels(9));
  REQUIRE(a.edges.size() == b.edges.size());
  for (std::size_t e = 0; e < a.edges.size(); ++e) {
    CHECK(a.edges[e].u == b.edges[e].u);
    CHECK(a.edges[e].v == b.edges[e].v);
  }
  CHECK(a.central == b.central);
}

TEST_CASE("tree levels step by one from the center") {
  Rng rng(714);
  for (int rep = 0; rep < 20; ++rep) {
    const int n = 4 + static_cast<int>(rng.uniform(0.0, 12.0));
    const Eigen::MatrixXd d = testsupport::random_distance_matrix(rng, n);
    const Tree tree = build_mst(distance_of(d), testsupport::index_labels(n));
    CHECK(tree.levels[tree.central] == 0);
    long level_sum_check = 0;
    for (const TreeEdge& e : tree.edges) {
      CHECK(std::abs(tree.levels[e.u] - tree.levels[e.v]) == 1);
      ++level_sum_check;
    }
    CHECK(level_sum_check == n - 1);
    CHECK(*std::max_element(tree.levels.begin(), tree.levels.end()) <= n - 1);
  }
}

TEST_CASE("threshold graph keeps the closest quantile of pairs") {
  // 5 nodes -> 10 off-diagonal pairs with distinct distances.
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(5, 5);
  double v = 0.1;
  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j) {
      d(i, j) = v;
      d(j, i) = v;
      v += 0.05;
    }
  const Graph q20 = build_threshold_graph(distance_of(d), testsupport::index_labels(5), 0.2);
  CHECK(q20.edges.size() == 2);
  const Graph q11 = build_threshold_graph(distance_of(d), testsupport::index_labels(5), 0.11);
  CHECK(q11.edges.size() == 1);
  const Graph q05 = build_threshold_graph(distance_of(d), testsupport::index_labels(5), 0.05);
  CHECK(q05.edges.empty());
}

TEST_CASE("ties at the quantile are all kept") {
  Eigen::MatrixXd d = Eigen::MatrixXd::Constant(5, 5, 0.4);
  d.diagonal().setZero();
  const Graph g = build_threshold_graph(distance_of(d), testsupport::index_labels(5), 0.2);
  CHECK(g.edges.size() == 10);
}

TEST_CASE("normalized tree length of equal edges") {
  const Tree tree = star_tree(6);
  CHECK(normalized_tree_length(tree) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("normalized tree length matches a direct sum") {
  Rng rng(715);
  for (int rep = 0; rep < 50; ++rep) {
    const int n = 3 + static_cast<int>(rng.uniform(0.0, 20.0));
    const Eigen::MatrixXd d = testsupport::random_distance_matrix(rng, n, false);
    const Tree tree = build_mst(distance_of(d), testsupport::index_labels(n));
    double sum = 0.0;
    for (const TreeEdge& e : tree.edges) sum += e.distance;
    CHECK(normalized_tree_length(tree) == doctest::Approx(sum / (n - 1)).epsilon(1e-12));
  }
}

TEST_CASE("central vertex of star and path") {
  const Tree star = star_tree(7);
  CHECK(star.central == 0);

  Eigen::MatrixXd d(3, 3);
  d << 0.0, 0.1, 0.9, 0.1, 0.0, 0.1, 0.9, 0.1, 0.0;
  const Tree path = build_mst(distance_of(d), {"A", "B", "C"});
  CHECK(path.central == 1);
}

TEST_CASE("degree ties break on the hop-distance sum") {
  // Nodes 0 and 3 both have degree 3; node 0 is closer to everything.
  // Edges: 0-1, 0-2, 0-3, 3-4, 3-5, 1-6.
  const int n = 7;
  Eigen::MatrixXd d = Eigen::MatrixXd::Constant(n, n, 9.0);
  d.diagonal().setZero();
  auto connect = [&d](int u, int v) {
    d(u, v) = 1.0;
    d(v, u) = 1.0;
  };
  connect(0, 1);
  connect(0, 2);
  connect(0, 3);
  connect(3, 4);
  connect(3, 5);
  connect(1, 6);
  const Tree tree = build_mst(distance_of(d), testsupport::index_labels(n));
  REQUIRE(tree.edges.size() == 6);
  CHECK(tree.adjacency[0].size() == 3);
  CHECK(tree.adjacency[3].size() == 3);

  // BFS oracle: hop-distance sums from both candidates.
  auto hop_sum = [&tree, n](int root) {
    std::vector<int> level(n, -1);
    std::deque<int> queue{root};
    level[root] = 0;
    long sum = 0;
    while (!queue.empty()) {
      const int u = queue.front();
      queue.pop_front();
      sum += level[u];
      for (int v : tree.adjacency[u])
        if (level[v] < 0) {
          level[v] = level[u] + 1;
          queue.push_back(v);
        }
    }
    return sum;
  };
  REQUIRE(hop_sum(0) < hop_sum(3));
  CHECK(tree.central == 0);
}

TEST_CASE("mean occupation layer closed forms") {
  const Tree star = star_tree(8);
  CHECK(mean_occupation_layer(star) == doctest::Approx(7.0 / 8.0).epsilon(1e-15));

  Eigen::MatrixXd d(3, 3);
  d << 0.0, 0.1, 0.9, 0.1, 0.0, 0.1, 0.9, 0.1, 0.0;
  const Tree path = build_mst(distance_of(d), {"A", "B", "C"});
  CHECK(mean_occupation_layer(path) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("mean occupation layer equals the bfs average") {
  Rng rng(716);
  for (int rep = 0; rep < 30; ++rep) {
    const int n = 4 + static_cast<int>(rng.uniform(0.0, 16.0));
    const Eigen::MatrixXd d = testsupport::random_distance_matrix(rng, n);
    const Tree tree = build_mst(distance_of(d), testsupport::index_labels(n));
    double sum = 0.0;
    for (int l : tree.levels) sum += l;
    CHECK(mean_occupation_layer(tree) == doctest::Approx(sum / n).epsilon(1e-12));
  }
}

TEST_CASE("degree centrality closed forms and row-sum oracle") {
  const Tree star = star_tree(10);
  const std::vector<double> deg = degree_centrality(star);
  CHECK(deg[0] == doctest::Approx(9.0 / 10.0).epsilon(1e-15));
  CHECK(deg[1] == doctest::Approx(1.0 / 10.0).epsilon(1e-15));

  Rng rng(717);
  const Eigen::MatrixXd d = testsupport::random_distance_matrix(rng, 12, true, 0.05, 0.95);
  const Graph g = build_threshold_graph(distance_of(d), testsupport::index_labels(12), 0.25);
  const std::vector<double> gdeg = degree_centrality(g);
  double total = 0.0;
  for (int i = 0; i < 12; ++i) {
    int row = 0;
    for (int j = 0; j < 12; ++j)
      if (g.normalized_weights(i, j) > 0.0) ++row;
    CHECK(gdeg[i] == doctest::Approx(row / 12.0).epsilon(1e-15));
    total += gdeg[i];
  }
  CHECK(total == doctest::Approx(2.0 * g.edges.size() / 12.0).epsilon(1e-12));
}

TEST_CASE("clustering coefficient of a triangle and a star") {
  Eigen::MatrixXd tri = Eigen::MatrixXd::Constant(3, 3, 0.2);
  tri.diagonal().setZero();
  const Graph g = build_threshold_graph(distance_of(tri), {"A", "B", "C"}, 0.9);
  REQUIRE(g.edges.size() == 3);
  for (double c : clustering_coefficient(g)) CHECK(c == doctest::Approx(1.0).epsilon(1e-15));

  // Star: hub neighbors are never connected to each other.
  Eigen::MatrixXd star = Eigen::MatrixXd::Constant(5, 5, 0.9);
  star.diagonal().setZero();
  for (int i = 1; i < 5; ++i) {
    star(0, i) = 0.1;
    star(i, 0) = 0.1;
  }
  const Graph h = build_threshold_graph(distance_of(star), testsupport::index_labels(5), 0.4);
  REQUIRE(h.edges.size() == 4);
  const std::vector<double> c = clustering_coefficient(h);
  for (double v : c) CHECK(v == 0.0);
}

TEST_CASE("clustering coefficient matches the direct formula and stays in range") {
  Rng rng(718);
  for (int rep = 0; rep < 25; ++rep) {
    const int n = 6 + static_cast<int>(rng.uniform(0.0, 8.0));
    const Eigen::MatrixXd d = testsupport::random_distance_matrix(rng, n, true, 0.05, 0.95);
    const Graph g = build_threshold_graph(distance_of(d), testsupport::index_labels(n), 0.4);
    const std::vector<double> c = clustering_coefficient(g);
    for (int i = 0; i < n; ++i) {
      CHECK(c[i] >= 0.0);
      CHECK(c[i] <= 1.0 + 1e-12);
      // Direct evaluation over ordered neighbor pairs.
      int deg = 0;
      for (int j = 0; j < n; ++j)
        if (g.normalized_weights(i, j) > 0.0) ++deg;
      if (deg <= 1) {
        CHECK(c[i] == 0.0);
        continue;
      }
      double sum = 0.0;
      for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
          if (j == k || j == i || k == i) continue;
          sum += std::cbrt(g.normalized_weights(i, j) * g.normalized_weights(j, k) *
                           g.normalized_weights(i, k));
        }
      }
      CHECK(c[i] == doctest::Approx(sum / (deg * (deg - 1.0))).epsilon(1e-12));
    }
  }
}

TEST_CASE("tree betweenness matches path enumeration") {
  Rng rng(719);
  for (int rep = 0; rep < 10; ++rep) {
    const int n = 5 + static_cast<int>(rng.uniform(0.0, 6.0));
    const Eigen::MatrixXd d = testsupport::random_distance_matrix(rng, n);
    const Tree tree = build_mst(distance_of(d), testsupport::index_labels(n));
    const std::vector<double> bet = tree_betweenness(tree);

    // Oracle: BFS the unique path of every pair and count interior nodes.
    std::vector<double> counted(n, 0.0);
    for (int s = 0; s < n; ++s) {
      for (int t = s + 1; t < n; ++t) {
        std::vector<int> parent(n, -1);
        std::deque<int> queue{s};
        parent[s] = s;
        while (!queue.empty()) {
          const int u = queue.front();
          queue.pop_front();
          for (int v : tree.adjacency[u])
            if (parent[v] < 0) {
              parent[v] = u;
              queue.push_back(v);
            }
        }
        for (int v = parent[t]; v != s; v = parent[v]) counted[v] += 1.0;
      }
    }
    for (int v = 0; v < n; ++v) CHECK(bet[v] == counted[v]);
  }
}

TEST_CASE("graph weights derive from the metric and normalize to one") {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(3, 3);
  d(0, 1) = d(1, 0) = 0.2;
  d(0, 2) = d(2, 0) = 0.5;
  d(1, 2) = d(2, 1) = 0.9;
  const Graph mi = build_threshold_graph(distance_of(d, Metric::MiDistance),
                                         testsupport::index_labels(3), 0.7);
  REQUIRE(mi.edges.size() == 2);
  CHECK(mi.edges[0].weight == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(mi.edges[0].normalized_weight == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(mi.edges[1].normalized_weight == doctest::Approx(0.5 / 0.8).epsilon(1e-15));

  const Graph corr = build_threshold_graph(distance_of(d, Metric::CorrDistance),
                                           testsupport::index_labels(3), 0.7);
  CHECK(corr.edges[0].weight == doctest::Approx(1.0 - 0.2 * 0.2 / 2.0).epsilon(1e-15));
}

TEST_CASE("quantile outside the open unit interval is rejected") {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(3, 3);
  CHECK_THROWS_AS(build_threshold_graph(distance_of(d), testsupport::index_labels(3), 0.0),
                  ValidationError);
  CHECK_THROWS_AS(build_threshold_graph(distance_of(d), testsupport::index_labels(3), 1.0),
                  ValidationError);
}

}  // TEST_SUITE

// network.cpp

#include "nlcor/network.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "nlcor/errors.hpp"

namespace nlcor {
namespace {

void check_labels(const Eigen::MatrixXd& values, const std::vector<std::string>& labels) {
  if (static_cast<int>(labels.size()) != values.rows())
    throw ValidationError("label count does not match matrix size");
}

std::vector<std::vector<int>> adjacency_of(int n, const std::vector<TreeEdge>& edges) {
  std::vector<std::vector<int>> adj(n);
  for (const TreeEdge& e : edges) {
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  for (auto& a : adj) std::sort(a.begin(), a.end());
  return adj;
}

std::vector<int> bfs_levels(const std::vector<std::vector<int>>& adj, int root) {
  std::vector<int> level(adj.size(), -1);
  std::deque<int> queue{root};
  level[root] = 0;
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    for (int v : adj[u]) {
      if (level[v] < 0) {
        level[v] = level[u] + 1;
        queue.push_back(v);
      }
    }
  }
  return level;
}

// Sorted ticker pair of an edge, the deterministic tie-break key.
std::pair<const std::string&, const std::string&> pair_key(const std::vector<std::string>& labels,
                                                           int u, int v) {
  const std::string& a = labels[u];
  const std::string& b = labels[v];
  return a <= b ? std::pair<const std::string&, const std::string&>(a, b)
                : std::pair<const std::string&, const std::string&>(b, a);
}

bool edge_less(const std::vector<std::string>& labels, double w1, int u1, int v1, double w2,
               int u2, int v2) {
  if (w1 != w2) return w1 < w2;
  return pair_key(labels, u1, v1) < pair_key(labels, u2, v2);
}

}  // namespace

Tree build_mst(const DistanceMatrix& d, std::vector<std::string> labels) {
  const Eigen::MatrixXd& dist = d.values;
  const int n = static_cast<int>(dist.rows());
  if (n < 2) throw ValidationError("build_mst: need at least 2 nodes");
  check_labels(dist, labels);
  if (!dist.allFinite()) throw ValidationError("build_mst: non-finite distance entries");

  Tree tree;
  tree.labels = std::move(labels);

  int start = 0;
  for (int i = 1; i < n; ++i)
    if (tree.labels[i] < tree.labels[start]) start = i;

  std::vector<bool> in_tree(n, false);
  std::vector<double> best_w(n, std::numeric_limits<double>::infinity());
  std::vector<int> best_u(n, -1);
  in_tree[start] = true;
  for (int v = 0; v < n; ++v) {
    if (v == start) continue;
    best_w[v] = dist(start, v);
    best_u[v] = start;
  }

  for (int step = 1; step < n; ++step) {
    int pick = -1;
    for (int v = 0; v < n; ++v) {
      if (in_tree[v]) continue;
      if (pick < 0 ||
          edge_less(tree.labels, best_w[v], best_u[v], v, best_w[pick], best_u[pick], pick))
        pick = v;
    }
    tree.edges.push_back(TreeEdge{std::min(best_u[pick], pick), std::max(best_u[pick], pick),
                                  best_w[pick]});
    in_tree[pick] = true;
    for (int v = 0; v < n; ++v) {
      if (in_tree[v]) continue;
      if (edge_less(tree.labels, dist(pick, v), pick, v, best_w[v], best_u[v], v)) {
        best_w[v] = dist(pick, v);
        best_u[v] = pick;
      }
    }
  }

  tree.adjacency = adjacency_of(n, tree.edges);
  tree.central = central_vertex(tree);
  tree.levels = bfs_levels(tree.adjacency, tree.central);
  return tree;
}

Graph build_threshold_graph(const DistanceMatrix& d, std::vector<std::string> labels,
                            double quantile) {
  if (!(quantile > 0.0 && quantile < 1.0))
    throw ValidationError("build_threshold_graph: quantile must lie in (0, 1)");
  const Eigen::MatrixXd& dist = d.values;
  const int n = static_cast<int>(dist.rows());
  if (n < 2) throw ValidationError("build_threshold_graph: need at least 2 nodes");
  check_labels(dist, labels);

  std::vector<double> offdiag;
  offdiag.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) offdiag.push_back(dist(i, j));
  std::sort(offdiag.begin(), offdiag.end());

  Graph graph;
  graph.labels = std::move(labels);
  graph.adjacency.resize(n);
  graph.degree.assign(n, 0);
  graph.normalized_weights.setZero(n, n);

  const int pairs = static_cast<int>(offdiag.size());
  // floor with a roundoff guard so e.g. q = 0.3 with 10 pairs keeps 3 edges.
  const int keep = std::min(pairs, static_cast<int>(std::floor(
                                       quantile * static_cast<double>(pairs) + 1e-9)));
  if (keep < 1) return graph;
  const double threshold = offdiag[keep - 1];

  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (dist(i, j) > threshold) continue;
      GraphEdge e;
      e.u = i;
      e.v = j;
      e.distance = dist(i, j);
      if (d.metric == Metric::MiDistance) {
        e.weight = std::max(0.0, 1.0 - e.distance);
      } else {
        // Invert d = sqrt(2(1-rho)) and clip negative correlations at zero:
        // clustering weights are connection strengths.
        e.weight = std::max(0.0, 1.0 - e.distance * e.distance / 2.0);
      }
      graph.edges.push_back(e);
    }
  }

  double max_w = 0.0;
  for (const GraphEdge& e : graph.edges) max_w = std::max(max_w, e.weight);
  for (GraphEdge& e : graph.edges) {
    e.normalized_weight = max_w > 0.0 ? e.weight / max_w : 0.0;
    graph.normalized_weights(e.u, e.v) = e.normalized_weight;
    graph.normalized_weights(e.v, e.u) = e.normalized_weight;
    graph.adjacency[e.u].push_back(e.v);
    graph.adjacency[e.v].push_back(e.u);
    ++graph.degree[e.u];
    ++graph.degree[e.v];
  }
  for (auto& a : graph.adjacency) std::sort(a.begin(), a.end());
  return graph;
}

double normalized_tree_length(const Tree& tree) {
  if (tree.edges.empty()) throw ValidationError("normalized_tree_length: tree has no edges");
  double sum = 0.0;
  for (const TreeEdge& e : tree.edges) sum += e.distance;
  return sum / static_cast<double>(tree.edges.size());
}

int central_vertex(const Tree& tree) {
  const int n = tree.n_nodes();
  if (n < 1 || tree.adjacency.empty()) throw ValidationError("central_vertex: empty tree");

  int max_degree = 0;
  for (int v = 0; v < n; ++v)
    max_degree = std::max(max_degree, static_cast<int>(tree.adjacency[v].size()));

  int best = -1;
  long best_hops = 0;
  for (int v = 0; v < n; ++v) {
    if (static_cast<int>(tree.adjacency[v].size()) != max_degree) continue;
    const std::vector<int> levels = bfs_levels(tree.adjacency, v);
    long hops = 0;
    for (int l : levels) hops += l;
    if (best < 0 || hops < best_hops ||
        (hops == best_hops && tree.labels[v] < tree.labels[best])) {
      best = v;
      best_hops = hops;
    }
  }
  return best;
}

double mean_occupation_layer(const Tree& tree) {
  if (tree.central < 0 || tree.levels.empty())
    throw ValidationError("mean_occupation_layer: central vertex not assigned");
  long sum = 0;
  for (int l : tree.levels) sum += l;
  return static_cast<double>(sum) / static_cast<double>(tree.n_nodes());
}

std::vector<double> degree_centrality(const Tree& tree) {
  const int n = tree.n_nodes();
  std::vector<double> deg(n);
  for (int v = 0; v < n; ++v)
    deg[v] = static_cast<double>(tree.adjacency[v].size()) / static_cast<double>(n);
  return deg;
}

std::vector<double> degree_centrality(const Graph& graph) {
  const int n = graph.n_nodes();
  std::vector<double> deg(n);
  for (int v = 0; v < n; ++v)
    deg[v] = static_cast<double>(graph.degree[v]) / static_cast<double>(n);
  return deg;
}

std::vector<double> clustering_coefficient(const Graph& graph) {
  const int n = graph.n_nodes();
  std::vector<double> c(n, 0.0);
  for (int i = 0; i < n; ++i) {
    const int deg = graph.degree[i];
    if (deg <= 1) continue;
    const std::vector<int>& nb = graph.adjacency[i];
    double sum = 0.0;
    for (std::size_t a = 0; a < nb.size(); ++a) {
      for (std::size_t b = a + 1; b < nb.size(); ++b) {
        const double w_jk = graph.normalized_weights(nb[a], nb[b]);
        if (w_jk == 0.0) continue;
        const double w_ij = graph.normalized_weights(i, nb[a]);
        const double w_ik = graph.normalized_weights(i, nb[b]);
        sum += 2.0 * std::cbrt(w_ij * w_jk * w_ik);  // ordered pairs (j,k) and (k,j)
      }
    }
    c[i] = sum / (static_cast<double>(deg) * (deg - 1));
  }
  return c;
}

std::vector<double> tree_betweenness(const Tree& tree) {
  const int n = tree.n_nodes();
  std::vector<double> bet(n, 0.0);
  for (int v = 0; v < n; ++v) {
    // Component sizes after removing v; pairs in different components route
    // through v.
    std::vector<bool> seen(n, false);
    seen[v] = true;
    long total_sq = 0;
    long total = 0;
    for (int s : tree.adjacency[v]) {
      if (seen[s]) continue;
      long size = 0;
      std::deque<int> queue{s};
      seen[s] = true;
      while (!queue.empty()) {
        const int u = queue.front();
        queue.pop_front();
        ++size;
        for (int w : tree.adjacency[u]) {
          if (!seen[w]) {
            seen[w] = true;
            queue.push_back(w);
          }
        }
      }
      total += size;
      total_sq += size * size;
    }
    bet[v] = static_cast<double>(total * total - total_sq) / 2.0;
  }
  return bet;
}

}  // namespace nlcor

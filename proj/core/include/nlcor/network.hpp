// network.hpp
// Dependency networks built from distance matrices: minimum spanning trees
// (Prim) and quantile threshold graphs, with the topology metrics used for
// market analysis (normalized tree length, mean occupation layer, degree
// centrality, weighted clustering, tree betweenness).
//
// Determinism: among equal-weight candidate edges Prim picks the one whose
// sorted ticker pair is lexicographically smallest, and the start node is the
// lexicographically smallest ticker, so identical inputs give identical
// trees even with ties.

#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "nlcor/dependence.hpp"

namespace nlcor {

struct TreeEdge {
  int u = 0;
  int v = 0;  // u < v
  double distance = 0.0;
};

struct Tree {
  std::vector<std::string> labels;
  std::vector<TreeEdge> edges;                // N-1 edges
  std::vector<std::vector<int>> adjacency;    // sorted neighbor lists
  int central = -1;                           // degree-central vertex
  std::vector<int> levels;                    // hop distance from central

  int n_nodes() const { return static_cast<int>(labels.size()); }
};

Tree build_mst(const DistanceMatrix& d, std::vector<std::string> labels);

struct GraphEdge {
  int u = 0;
  int v = 0;  // u < v
  double distance = 0.0;
  double weight = 0.0;             // dependency strength (1-d for MI, rho>=0 for Pearson)
  double normalized_weight = 0.0;  // weight / max weight over kept edges
};

struct Graph {
  std::vector<std::string> labels;
  std::vector<GraphEdge> edges;
  std::vector<std::vector<int>> adjacency;
  Eigen::MatrixXd normalized_weights;  // zero where not connected
  std::vector<int> degree;             // raw incident-edge counts

  int n_nodes() const { return static_cast<int>(labels.size()); }
};

// Keeps the pairs whose distance is at most the q-quantile of the
// off-diagonal distances (k-th smallest with k = floor(q * n_pairs); ties at
// the quantile are all kept).
Graph build_threshold_graph(const DistanceMatrix& d, std::vector<std::string> labels,
                            double quantile = 0.2);

// Mean edge distance of the tree.
double normalized_tree_length(const Tree& tree);

// Highest-degree node; ties broken by smaller total hop distance to all
// nodes, then by lexicographic ticker.
int central_vertex(const Tree& tree);

// Mean hop level from the central vertex, the center itself at level 0.
double mean_occupation_layer(const Tree& tree);

// Incident-edge count over N, per node.
std::vector<double> degree_centrality(const Tree& tree);
std::vector<double> degree_centrality(const Graph& graph);

// Weighted clustering coefficient per node: geometric-mean triangle
// intensity (w~_ij w~_jk w~_ik)^(1/3) summed over ordered neighbor pairs,
// with a 1/(deg (deg-1)) prefactor on the raw degree. Nodes of degree <= 1
// get 0.
std::vector<double> clustering_coefficient(const Graph& graph);

// Number of node pairs whose unique tree path passes through each node.
std::vector<double> tree_betweenness(const Tree& tree);

}  // namespace nlcor

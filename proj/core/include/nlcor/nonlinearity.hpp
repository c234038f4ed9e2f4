// nonlinearity.hpp
// Significance and strength of nonlinear dependence from original-vs-
// surrogate mutual information.
//
// chi_sig is the signed z-score (I - <I*>)/sigma_I* per pair; zeta_nlc is
// |I - <I*>| / I, the fraction of the pair's mutual information that is
// attributable to nonlinearity. Diagonals are zero by convention and are
// excluded from every average.

#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "nlcor/dependence.hpp"
#include "nlcor/surrogate.hpp"

namespace nlcor {

struct SignificanceMatrix {
  Eigen::MatrixXd values;  // symmetric, zero diagonal, can be negative
  int window_index = -1;
  std::vector<std::pair<int, int>> degenerate_pairs;  // sigma below epsilon
};

struct NonlinearityMatrix {
  Eigen::MatrixXd values;  // symmetric, non-negative, zero diagonal
  int window_index = -1;
  std::vector<std::pair<int, int>> degenerate_pairs;  // original MI below epsilon
};

struct SignificanceProfile {
  Eigen::VectorXd per_asset;  // mean over the other N-1 assets
  double global = 0.0;        // mean of the per-asset values
};

SignificanceMatrix chi_sig(const DependencyMatrix& original_mi, const EnsemblePairStats& stats);

SignificanceProfile chi_profile(const SignificanceMatrix& sig);

NonlinearityMatrix zeta_nlc(const DependencyMatrix& original_mi, const EnsemblePairStats& stats);

}  // namespace nlcor

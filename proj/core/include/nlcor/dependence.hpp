// dependence.hpp
// Pairwise dependence measures for one rolling window: Pearson correlation,
// histogram entropies, normalized mutual information, the two distance
// transforms and distribution moments of distance coefficients.
//
// Binning convention (shared by marginal and joint histograms): b equal-width
// bins spanning [min, max] of each series within the window; a sample exactly
// at the max edge lands in the top bin; a constant series occupies a single
// bin. Entropies are in nats.
//
// Summation orders are part of the contract so that results are exactly
// symmetric in the two arguments: marginal entropies accumulate over bins in
// index order; the joint entropy accumulates the diagonal cells in index
// order and then each symmetric pair (i<j) as term(i,j) + term(j,i).

#pragma once

#include <Eigen/Dense>
#include <span>
#include <utility>
#include <vector>

namespace nlcor {

enum class Measure { Pearson, MutualInformation };
enum class Metric { MiDistance, CorrDistance };

// Pearson correlation coefficient; throws DegenerateInputError if either
// series has zero variance.
double pearson(std::span<const double> x, std::span<const double> y);

// Number of histogram bins for a window of length T: ceil(sqrt(T/4)).
int bin_count(int window_length);

// Empirical entropy of one series over `bins` equal-width bins, in nats.
double entropy(std::span<const double> x, int bins);

struct MiValue {
  double value = 0.0;      // normalized mutual information in [0, 1]
  bool degenerate = false; // set when either marginal entropy is zero
};

// Normalized mutual information I~ / sqrt(H(X) H(Y)), clamped to [0, 1].
// A degenerate input (zero marginal entropy) yields 0 with the flag set.
MiValue normalized_mi(std::span<const double> x, std::span<const double> y, int bins);

struct DependencyMatrix {
  Measure measure = Measure::Pearson;
  Eigen::MatrixXd values;  // symmetric, unit diagonal
  int window_index = -1;
  int bins = 0;  // mutual information only
  std::vector<std::pair<int, int>> degenerate_pairs;
};

// Pairwise measure over all unordered pairs of the window's series (time in
// rows, series in columns). Degenerate pairs get value 0 and are recorded.
// bins == 0 selects bin_count(rows) for mutual information.
DependencyMatrix dependency_matrix(const Eigen::Ref<const Eigen::MatrixXd>& window,
                                   Measure measure, int bins = 0, int window_index = -1);

struct DistanceMatrix {
  Metric metric = Metric::MiDistance;
  Eigen::MatrixXd values;  // non-negative, zero diagonal
  int window_index = -1;
};

// MI: d = 1 - I (range [0,1]); Pearson: d = sqrt(2(1-rho)) (range [0,2]).
DistanceMatrix to_distance(const DependencyMatrix& dep);

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
  double skewness = 0.0;  // standardized third moment (0 for zero variance)
  double kurtosis = 0.0;  // standardized fourth moment (0 for zero variance)
};

// Moments of the off-diagonal upper-triangle coefficients of a symmetric
// matrix (population normalization).
Moments offdiagonal_moments(const Eigen::Ref<const Eigen::MatrixXd>& m);

double offdiagonal_mean(const Eigen::Ref<const Eigen::MatrixXd>& m);

std::vector<Moments> moment_series(std::span<const DistanceMatrix> distances);

}  // namespace nlcor

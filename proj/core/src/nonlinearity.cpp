// nonlinearity.cpp

#include "nlcor/nonlinearity.hpp"

#include <cmath>

#include "nlcor/errors.hpp"

namespace nlcor {
namespace {

constexpr double kEpsilon = 1e-12;

void check_dimensions(const DependencyMatrix& original_mi, const EnsemblePairStats& stats) {
  if (original_mi.measure != Measure::MutualInformation)
    throw ValidationError("expected a mutual-information dependency matrix");
  if (original_mi.values.rows() != stats.mean.rows() ||
      original_mi.values.cols() != stats.mean.cols())
    throw ValidationError("dependency matrix and ensemble stats dimensions differ");
}

}  // namespace

SignificanceMatrix chi_sig(const DependencyMatrix& original_mi, const EnsemblePairStats& stats) {
  check_dimensions(original_mi, stats);
  const int n = static_cast<int>(original_mi.values.rows());

  SignificanceMatrix sig;
  sig.window_index = original_mi.window_index;
  sig.values.setZero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double sd = stats.sigma(i, j);
      if (sd < kEpsilon) {
        sig.degenerate_pairs.emplace_back(i, j);
        continue;
      }
      const double v = (original_mi.values(i, j) - stats.mean(i, j)) / sd;
      sig.values(i, j) = v;
      sig.values(j, i) = v;
    }
  }
  return sig;
}

SignificanceProfile chi_profile(const SignificanceMatrix& sig) {
  const int n = static_cast<int>(sig.values.rows());
  if (n < 2) throw ValidationError("chi_profile: need at least 2 assets");

  SignificanceProfile profile;
  profile.per_asset.resize(n);
  for (int i = 0; i < n; ++i) {
    double sum = 0.0;
    for (int j = 0; j < n; ++j)
      if (j != i) sum += sig.values(i, j);
    profile.per_asset(i) = sum / static_cast<double>(n - 1);
  }
  profile.global = profile.per_asset.sum() / static_cast<double>(n);
  return profile;
}

NonlinearityMatrix zeta_nlc(const DependencyMatrix& original_mi, const EnsemblePairStats& stats) {
  check_dimensions(original_mi, stats);
  const int n = static_cast<int>(original_mi.values.rows());

  NonlinearityMatrix zeta;
  zeta.window_index = original_mi.window_index;
  zeta.values.setZero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double orig = original_mi.values(i, j);
      if (orig < kEpsilon) {
        zeta.degenerate_pairs.emplace_back(i, j);
        continue;
      }
      const double v = std::abs(orig - stats.mean(i, j)) / orig;
      zeta.values(i, j) = v;
      zeta.values(j, i) = v;
    }
  }
  return zeta;
}

}  // namespace nlcor

// surrogate.hpp
// Fourier-transform surrogate panels and ensemble statistics.
//
// A surrogate keeps every amplitude of the source spectrum and adds uniform
// random phases to the modes strictly between DC and Nyquist, mirrored
// anti-symmetrically so that the inverse transform is real. Linear structure
// (autocorrelations, and with shared phases also cross-correlations) is
// preserved; nonlinear structure is destroyed.
//
// SharedPhase applies one phase draw per realization to all series of the
// panel, which conserves the pairwise Pearson matrix (the cross spectrum
// depends only on phase differences). IndependentPhase draws per series.
// Phase streams are keyed by (seed, realization, series-or-shared), so the
// ensemble is a pure function of (panel, K, mode, seed).

#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "nlcor/panel.hpp"

namespace nlcor {

enum class SurrogateMode { SharedPhase, IndependentPhase };

struct SurrogateEnsemble {
  SurrogateMode mode = SurrogateMode::SharedPhase;
  std::uint64_t seed = 0;
  std::vector<ReturnPanel> realizations;

  int count() const { return static_cast<int>(realizations.size()); }
};

SurrogateEnsemble make_surrogates(const ReturnPanel& panel, int realizations, SurrogateMode mode,
                                  std::uint64_t seed);

// Scatter of Fourier phases against phases `delay` modes away, for modes
// l = 1 .. floor(T/2) - 1 - delay. Phases lie in (-pi, pi].
struct PhaseMap {
  int delay = 1;
  std::vector<std::array<double, 2>> points;
};

PhaseMap phase_map(std::span<const double> x, int delay = 1);

// Per-pair mean and population standard deviation of normalized mutual
// information across the ensemble realizations.
struct EnsemblePairStats {
  Eigen::MatrixXd mean;
  Eigen::MatrixXd sigma;
  int realizations = 0;
  int bins = 0;
};

// bins == 0 selects the standard bin_count of the evaluated length. The
// optional column range [col_start, col_start+col_count) restricts the
// evaluation to a sub-range of each realization; col_count == -1 means all.
EnsemblePairStats ensemble_mi_stats(const SurrogateEnsemble& ensemble, int bins = 0,
                                    int col_start = 0, int col_count = -1);

}  // namespace nlcor

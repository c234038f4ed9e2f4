// surrogate.cpp

#include "nlcor/surrogate.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include "nlcor/dependence.hpp"
#include "nlcor/errors.hpp"
#include "nlcor/fft.hpp"
#include "nlcor/rng.hpp"

namespace nlcor {
namespace {

// Stream label used instead of a series index when one phase draw is shared
// by the whole panel.
constexpr std::uint64_t kSharedStream = ~std::uint64_t{0};

// Number of modes whose phase may be randomized: everything strictly between
// DC and Nyquist. For odd T there is no Nyquist bin.
int randomizable_modes(int t) { return (t % 2 == 0) ? t / 2 - 1 : t / 2; }

std::vector<double> draw_phases(std::uint64_t stream_seed, int count) {
  Rng rng(stream_seed);
  std::vector<double> phases(count);
  for (double& p : phases) p = rng.uniform(0.0, 2.0 * std::numbers::pi);
  return phases;
}

}  // namespace

SurrogateEnsemble make_surrogates(const ReturnPanel& panel, int realizations, SurrogateMode mode,
                                  std::uint64_t seed) {
  if (realizations < 1) throw ValidationError("make_surrogates: need at least 1 realization");
  const int t = panel.length();
  const int n = panel.n_series();
  if (t < 4) throw InsufficientDataError("make_surrogates: need at least 4 time steps");

  std::vector<std::vector<cdouble>> spectra(n);
  double scale = 0.0;
  for (int j = 0; j < n; ++j) {
    const std::span<const double> series{panel.returns.data() + static_cast<std::ptrdiff_t>(j) * t,
                                         static_cast<std::size_t>(t)};
    spectra[j] = spectrum(series);
    for (double v : series) scale = std::max(scale, std::abs(v));
  }

  const int modes = randomizable_modes(t);
  SurrogateEnsemble ensemble;
  ensemble.mode = mode;
  ensemble.seed = seed;
  ensemble.realizations.reserve(realizations);

  for (int k = 0; k < realizations; ++k) {
    ReturnPanel real;
    real.tickers = panel.tickers;
    real.dates = panel.dates;
    real.returns.resize(t, n);

    std::vector<double> shared;
    if (mode == SurrogateMode::SharedPhase)
      shared = draw_phases(mix_seed(seed, static_cast<std::uint64_t>(k), kSharedStream), modes);

    for (int j = 0; j < n; ++j) {
      std::vector<double> own;
      if (mode == SurrogateMode::IndependentPhase)
        own = draw_phases(
            mix_seed(seed, static_cast<std::uint64_t>(k), static_cast<std::uint64_t>(j)), modes);
      const std::vector<double>& phases = mode == SurrogateMode::SharedPhase ? shared : own;

      std::vector<cdouble> spec = spectra[j];
      for (int f = 1; f <= modes; ++f) {
        const cdouble rot(std::cos(phases[f - 1]), std::sin(phases[f - 1]));
        spec[f] *= rot;
        spec[t - f] *= std::conj(rot);
      }

      double residue = 0.0;
      const std::vector<double> series = inverse_real(spec, &residue);
      if (residue > 1e-10 * std::max(scale, 1e-30))
        throw NumericError("make_surrogates: inverse transform is not real");
      for (int s = 0; s < t; ++s) real.returns(s, j) = series[s];
    }
    ensemble.realizations.push_back(std::move(real));
  }
  return ensemble;
}

PhaseMap phase_map(std::span<const double> x, int delay) {
  const int t = static_cast<int>(x.size());
  if (delay < 1) throw ValidationError("phase_map: delay must be >= 1");
  if (t < 4 || delay >= t / 2 - 1)
    throw ValidationError("phase_map: delay too large for series length");

  const std::vector<cdouble> spec = spectrum(x);
  const int last = t / 2 - 1 - delay;

  PhaseMap map;
  map.delay = delay;
  map.points.reserve(last);
  for (int l = 1; l <= last; ++l) {
    map.points.push_back({mode_phase(spec[l]), mode_phase(spec[l + delay])});
  }
  return map;
}

EnsemblePairStats ensemble_mi_stats(const SurrogateEnsemble& ensemble, int bins, int col_start,
                                    int col_count) {
  const int k = ensemble.count();
  if (k < 1) throw ValidationError("ensemble_mi_stats: empty ensemble");
  const ReturnPanel& first = ensemble.realizations.front();
  const int t = first.length();
  const int n = first.n_series();
  if (col_count < 0) col_count = t - col_start;
  if (col_start < 0 || col_count < 2 || col_start + col_count > t)
    throw ValidationError("ensemble_mi_stats: invalid column range");

  const int b = bins > 0 ? bins : bin_count(col_count);
  std::vector<Eigen::MatrixXd> mi;
  mi.reserve(k);
  for (const ReturnPanel& real : ensemble.realizations) {
    mi.push_back(dependency_matrix(real.returns.middleRows(col_start, col_count),
                                   Measure::MutualInformation, b)
                     .values);
  }

  EnsemblePairStats stats;
  stats.realizations = k;
  stats.bins = b;
  stats.mean.setZero(n, n);
  stats.sigma.setZero(n, n);
  for (const Eigen::MatrixXd& m : mi) stats.mean += m;
  stats.mean /= static_cast<double>(k);
  for (const Eigen::MatrixXd& m : mi) {
    const Eigen::MatrixXd d = m - stats.mean;
    stats.sigma += d.cwiseProduct(d);
  }
  // Population normalization: the ensemble is the full reference
  // distribution.
  stats.sigma = (stats.sigma / static_cast<double>(k)).cwiseSqrt();
  return stats;
}

}  // namespace nlcor

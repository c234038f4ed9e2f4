// dependence.cpp

#include "nlcor/dependence.hpp"

#include <algorithm>
#include <cmath>

#include "nlcor/errors.hpp"

namespace nlcor {
namespace {

struct BinAxis {
  double lo = 0.0;
  double hi = 0.0;
  int bins = 1;

  static BinAxis of(std::span<const double> x, int bins) {
    const auto [mn, mx] = std::minmax_element(x.begin(), x.end());
    return BinAxis{*mn, *mx, bins};
  }

  int index(double v) const {
    if (!(hi > lo)) return 0;  // constant series: single occupied bin
    const int i = static_cast<int>((v - lo) / (hi - lo) * bins);
    return std::clamp(i, 0, bins - 1);
  }
};

inline double plogp(long count, long total) {
  if (count <= 0) return 0.0;
  const double p = static_cast<double>(count) / static_cast<double>(total);
  return -p * std::log(p);
}

double entropy_from_counts(const std::vector<long>& counts, long total) {
  double h = 0.0;
  for (long c : counts) h += plogp(c, total);
  return h;
}

void check_series(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ValidationError("series lengths differ");
  if (x.size() < 2) throw InsufficientDataError("need at least 2 samples");
}

// Ref can bind blocks of a larger matrix without copying, so the column
// pitch is the outer stride, not the row count.
std::span<const double> column_span(const Eigen::Ref<const Eigen::MatrixXd>& m, int j) {
  return {m.data() + static_cast<std::ptrdiff_t>(j) * m.outerStride(),
          static_cast<std::size_t>(m.rows())};
}

}  // namespace

double pearson(std::span<const double> x, std::span<const double> y) {
  check_series(x, y);
  const std::size_t n = x.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    mx += x[t];
    my += y[t];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);

  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    const double dx = x[t] - mx;
    const double dy = y[t] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0)
    throw DegenerateInputError("pearson: constant series (zero variance)");
  return std::clamp(sxy / (std::sqrt(sxx) * std::sqrt(syy)), -1.0, 1.0);
}

int bin_count(int window_length) {
  if (window_length < 4) throw InsufficientDataError("bin_count: window length must be >= 4");
  return static_cast<int>(std::ceil(std::sqrt(window_length / 4.0)));
}

double entropy(std::span<const double> x, int bins) {
  if (bins < 1) throw ValidationError("entropy: bins must be >= 1");
  if (x.empty()) throw InsufficientDataError("entropy: empty series");
  const BinAxis axis = BinAxis::of(x, bins);
  std::vector<long> counts(bins, 0);
  for (double v : x) ++counts[axis.index(v)];
  return entropy_from_counts(counts, static_cast<long>(x.size()));
}

MiValue normalized_mi(std::span<const double> x, std::span<const double> y, int bins) {
  check_series(x, y);
  if (bins < 1) throw ValidationError("normalized_mi: bins must be >= 1");

  const long n = static_cast<long>(x.size());
  const BinAxis ax = BinAxis::of(x, bins);
  const BinAxis ay = BinAxis::of(y, bins);

  std::vector<long> joint(static_cast<std::size_t>(bins) * bins, 0);
  for (long t = 0; t < n; ++t) ++joint[ax.index(x[t]) * bins + ay.index(y[t])];

  // Marginal counts are the joint's row/column sums, so marginal and joint
  // histograms stay consistent by construction.
  std::vector<long> cx(bins, 0), cy(bins, 0);
  for (int i = 0; i < bins; ++i) {
    for (int j = 0; j < bins; ++j) {
      cx[i] += joint[i * bins + j];
      cy[j] += joint[i * bins + j];
    }
  }
  const double hx = entropy_from_counts(cx, n);
  const double hy = entropy_from_counts(cy, n);
  if (hx <= 0.0 || hy <= 0.0) return MiValue{0.0, true};

  // Transpose-canonical order keeps the result exactly symmetric in (x, y).
  double hxy = 0.0;
  for (int i = 0; i < bins; ++i) hxy += plogp(joint[i * bins + i], n);
  for (int i = 0; i < bins; ++i) {
    for (int j = i + 1; j < bins; ++j) {
      hxy += plogp(joint[i * bins + j], n) + plogp(joint[j * bins + i], n);
    }
  }

  const double mi = hx + hy - hxy;
  return MiValue{std::clamp(mi / std::sqrt(hx * hy), 0.0, 1.0), false};
}

DependencyMatrix dependency_matrix(const Eigen::Ref<const Eigen::MatrixXd>& window,
                                   Measure measure, int bins, int window_index) {
  const int n = static_cast<int>(window.cols());
  const int t = static_cast<int>(window.rows());
  if (n < 2) throw ValidationError("dependency_matrix: need at least 2 series");

  DependencyMatrix dep;
  dep.measure = measure;
  dep.window_index = window_index;
  dep.bins = measure == Measure::MutualInformation ? (bins > 0 ? bins : bin_count(t)) : 0;
  dep.values = Eigen::MatrixXd::Identity(n, n);

  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      double v = 0.0;
      bool degenerate = false;
      if (measure == Measure::Pearson) {
        try {
          v = pearson(column_span(window, i), column_span(window, j));
        } catch (const DegenerateInputError&) {
          degenerate = true;
        }
      } else {
        const MiValue mi = normalized_mi(column_span(window, i), column_span(window, j), dep.bins);
        v = mi.value;
        degenerate = mi.degenerate;
      }
      if (degenerate) {
        v = 0.0;
        dep.degenerate_pairs.emplace_back(i, j);
      }
      dep.values(i, j) = v;
      dep.values(j, i) = v;
    }
  }
  return dep;
}

DistanceMatrix to_distance(const DependencyMatrix& dep) {
  DistanceMatrix dist;
  dist.window_index = dep.window_index;
  const int n = static_cast<int>(dep.values.rows());
  dist.values.setZero(n, n);
  if (dep.measure == Measure::MutualInformation) {
    dist.metric = Metric::MiDistance;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j) dist.values(i, j) = std::max(0.0, 1.0 - dep.values(i, j));
  } else {
    dist.metric = Metric::CorrDistance;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j) dist.values(i, j) = std::sqrt(std::max(0.0, 2.0 * (1.0 - dep.values(i, j))));
  }
  return dist;
}

Moments offdiagonal_moments(const Eigen::Ref<const Eigen::MatrixXd>& m) {
  const int n = static_cast<int>(m.rows());
  std::vector<double> v;
  v.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) v.push_back(m(i, j));
  if (v.empty()) throw ValidationError("offdiagonal_moments: matrix has no off-diagonal entries");

  // A constant sample is exactly momentless; detecting it first avoids
  // roundoff-scale variances when the constant is not representable.
  bool constant = true;
  for (double x : v) constant = constant && x == v.front();
  if (constant) return Moments{v.front(), 0.0, 0.0, 0.0};

  const double count = static_cast<double>(v.size());
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= count;

  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double x : v) {
    const double d = x - mean;
    const double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
  }
  m2 /= count;
  m3 /= count;
  m4 /= count;

  Moments out;
  out.mean = mean;
  out.variance = m2;
  if (m2 > 0.0) {
    const double sd = std::sqrt(m2);
    out.skewness = m3 / (sd * sd * sd);
    out.kurtosis = m4 / (m2 * m2);
  }
  return out;
}

double offdiagonal_mean(const Eigen::Ref<const Eigen::MatrixXd>& m) {
  const int n = static_cast<int>(m.rows());
  if (n < 2) throw ValidationError("offdiagonal_mean: need at least 2 rows");
  double sum = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) sum += m(i, j);
  return sum / (static_cast<double>(n) * (n - 1) / 2.0);
}

std::vector<Moments> moment_series(std::span<const DistanceMatrix> distances) {
  if (distances.empty()) throw ValidationError("moment_series: need at least one window");
  std::vector<Moments> out;
  out.reserve(distances.size());
  for (const DistanceMatrix& d : distances) out.push_back(offdiagonal_moments(d.values));
  return out;
}

}  // namespace nlcor

// synthetic.cpp

#include "nlcor/synthetic.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "nlcor/errors.hpp"
#include "nlcor/rng.hpp"

namespace nlcor {
namespace {

bool is_leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

int days_in_month(int y, int m) {
  static const int d[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (m == 2 && is_leap(y)) return 29;
  return d[m - 1];
}

struct Ymd {
  int y, m, d;
};

Ymd next_day(Ymd x) {
  ++x.d;
  if (x.d > days_in_month(x.y, x.m)) {
    x.d = 1;
    ++x.m;
    if (x.m > 12) {
      x.m = 1;
      ++x.y;
    }
  }
  return x;
}

Ymd prev_day(Ymd x) {
  --x.d;
  if (x.d < 1) {
    --x.m;
    if (x.m < 1) {
      x.m = 12;
      --x.y;
    }
    x.d = days_in_month(x.y, x.m);
  }
  return x;
}

std::string format_date(Ymd x) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", x.y, x.m, x.d);
  return buf;
}

Ymd parse_iso_date(const std::string& s) {
  Ymd x{};
  if (s.size() != 10 || std::sscanf(s.c_str(), "%4d-%2d-%2d", &x.y, &x.m, &x.d) != 3 ||
      x.m < 1 || x.m > 12 || x.d < 1 || x.d > days_in_month(x.y, x.m))
    throw ValidationError("expected ISO-8601 date, got '" + s + "'");
  return x;
}

std::vector<std::string> make_dates(int count) {
  std::vector<std::string> dates;
  dates.reserve(count);
  Ymd d{2000, 1, 3};
  for (int i = 0; i < count; ++i) {
    dates.push_back(format_date(d));
    d = next_day(d);
  }
  return dates;
}

Eigen::MatrixXd uniform_correlation(int n, double rho) {
  Eigen::MatrixXd c = Eigen::MatrixXd::Constant(n, n, rho);
  c.diagonal().setOnes();
  return c;
}

// Fills cols [0, n) of `out` rows [row0, row0+len) with correlated Gaussians.
void fill_linear_gaussian(Eigen::MatrixXd& out, int row0, int len, const Eigen::MatrixXd& corr,
                          double vol, Rng& rng) {
  const int n = static_cast<int>(out.cols());
  Eigen::LLT<Eigen::MatrixXd> llt(corr);
  if (llt.info() != Eigen::Success)
    throw ValidationError("gen_synthetic: correlation matrix is not positive definite");
  const Eigen::MatrixXd chol = llt.matrixL();

  Eigen::VectorXd z(n);
  for (int t = 0; t < len; ++t) {
    for (int j = 0; j < n; ++j) z(j) = rng.normal();
    out.row(row0 + t) = (vol * (chol * z)).transpose();
  }
}

// Series 0 drives series 1 through a standardized quadratic term
// (z^2 - 1)/sqrt(2), which is uncorrelated with z, so the coupled pair has
// (population) zero Pearson correlation but strong mutual information.
void fill_nonlinear_coupled(Eigen::MatrixXd& out, int row0, int len, double coupling, double vol,
                            Rng& rng) {
  const int n = static_cast<int>(out.cols());
  const double a = coupling;
  const double b = std::sqrt(1.0 - a * a);
  for (int t = 0; t < len; ++t) {
    const double z0 = rng.normal();
    out(row0 + t, 0) = vol * z0;
    for (int j = 1; j < n; ++j) {
      const double eps = rng.normal();
      if (j == 1) {
        out(row0 + t, j) = vol * (b * eps + a * (z0 * z0 - 1.0) / std::numbers::sqrt2);
      } else {
        out(row0 + t, j) = vol * eps;
      }
    }
  }
}

}  // namespace

ReturnPanel gen_synthetic(const SyntheticSpec& spec, std::uint64_t seed) {
  if (spec.n_series < 2) throw ValidationError("gen_synthetic: need at least 2 series");
  if (spec.length < 2) throw ValidationError("gen_synthetic: need at least 2 steps");
  if (!(spec.vol > 0.0)) throw ValidationError("gen_synthetic: vol must be positive");
  if (spec.coupling < 0.0 || spec.coupling > 1.0)
    throw ValidationError("gen_synthetic: coupling must lie in [0, 1]");

  const int n = spec.n_series;
  Eigen::MatrixXd corr;
  if (spec.correlation.size() > 0) {
    if (spec.correlation.rows() != n || spec.correlation.cols() != n)
      throw ValidationError("gen_synthetic: correlation matrix must be n_series x n_series");
    corr = spec.correlation;
  } else {
    corr = uniform_correlation(n, spec.rho);
  }

  ReturnPanel panel;
  panel.tickers.reserve(n);
  for (int j = 0; j < n; ++j) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "S%02d", j + 1);
    panel.tickers.push_back(buf);
  }
  panel.dates = make_dates(spec.length);
  panel.returns.resize(spec.length, n);

  switch (spec.regime) {
    case Regime::LinearGaussian: {
      Rng rng(mix_seed(seed, 0));
      fill_linear_gaussian(panel.returns, 0, spec.length, corr, spec.vol, rng);
      break;
    }
    case Regime::NonlinearCoupled: {
      Rng rng(mix_seed(seed, 1));
      fill_nonlinear_coupled(panel.returns, 0, spec.length, spec.coupling, spec.vol, rng);
      break;
    }
    case Regime::RegimeSwitch: {
      const int first = spec.length / 2;
      Rng rng_a(mix_seed(seed, 0));
      Rng rng_b(mix_seed(seed, 1));
      fill_linear_gaussian(panel.returns, 0, first, corr, spec.vol, rng_a);
      fill_nonlinear_coupled(panel.returns, first, spec.length - first, spec.coupling, spec.vol,
                             rng_b);
      break;
    }
  }
  return panel;
}

PriceTable to_price_table(const ReturnPanel& panel, double initial_price) {
  if (!(initial_price > 0.0)) throw ValidationError("to_price_table: initial price must be > 0");
  PriceTable table;
  table.tickers = panel.tickers;
  table.dates.reserve(panel.length() + 1);
  table.dates.push_back(format_date(prev_day(parse_iso_date(panel.dates.front()))));
  table.dates.insert(table.dates.end(), panel.dates.begin(), panel.dates.end());

  const int n = panel.n_series();
  const int l = panel.length();
  table.prices.resize(l + 1, n);
  for (int j = 0; j < n; ++j) {
    double log_p = std::log(initial_price);
    table.prices(0, j) = initial_price;
    for (int t = 0; t < l; ++t) {
      log_p += panel.returns(t, j);
      table.prices(t + 1, j) = std::exp(log_p);
    }
  }
  return table;
}

}  // namespace nlcor

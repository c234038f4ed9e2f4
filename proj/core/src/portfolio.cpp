// portfolio.cpp

#include "nlcor/portfolio.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <limits>

#include "nlcor/errors.hpp"
#include "nlcor/rng.hpp"

namespace nlcor {
namespace {

// Linear-interpolation quantile of a sorted sample (position q*(n-1)).
double quantile_sorted(const std::vector<double>& sorted, double q) {
  const std::size_t n = sorted.size();
  const double pos = q * static_cast<double>(n - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  if (lo + 1 >= n) return sorted[n - 1];
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

double median_sorted(const std::vector<double>& sorted) { return quantile_sorted(sorted, 0.5); }

void check_window(const Eigen::Ref<const Eigen::MatrixXd>& window, int min_rows) {
  if (window.rows() < min_rows)
    throw InsufficientDataError("window too short: " + std::to_string(window.rows()) +
                                " rows, need " + std::to_string(min_rows));
  if (window.cols() < 1) throw ValidationError("window has no series");
}

}  // namespace

RobustMean expected_returns(const Eigen::Ref<const Eigen::MatrixXd>& window) {
  check_window(window, 4);
  const int n = static_cast<int>(window.cols());
  const int t = static_cast<int>(window.rows());

  RobustMean out;
  out.values.resize(n);
  for (int j = 0; j < n; ++j) {
    std::vector<double> sorted(window.col(j).data(), window.col(j).data() + t);
    std::sort(sorted.begin(), sorted.end());
    const double q1 = quantile_sorted(sorted, 0.25);
    const double q3 = quantile_sorted(sorted, 0.75);
    const double iqr = q3 - q1;
    const double lo = q1 - 1.5 * iqr;
    const double hi = q3 + 1.5 * iqr;

    std::vector<double> kept;
    kept.reserve(sorted.size());
    for (double v : sorted) {
      if (v >= lo && v <= hi) kept.push_back(v);
    }
    if (kept.empty()) {
      out.fallback_series.push_back(j);
      out.values(j) = median_sorted(sorted);
    } else {
      out.values(j) = median_sorted(kept);
    }
  }
  return out;
}

Eigen::MatrixXd covariance(const Eigen::Ref<const Eigen::MatrixXd>& window) {
  check_window(window, 2);
  const int n = static_cast<int>(window.cols());
  const int t = static_cast<int>(window.rows());

  Eigen::MatrixXd centered = window;
  for (int j = 0; j < n; ++j) centered.col(j).array() -= window.col(j).mean();

  // Upper triangle computed once and mirrored, so the result is exactly
  // symmetric.
  Eigen::MatrixXd cov(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const double c = centered.col(i).dot(centered.col(j)) / static_cast<double>(t - 1);
      cov(i, j) = c;
      cov(j, i) = c;
    }
  }
  return cov;
}

AssetStats asset_stats(const Eigen::Ref<const Eigen::MatrixXd>& window) {
  AssetStats stats;
  stats.expected_returns = expected_returns(window).values;
  stats.covariance = covariance(window);
  return stats;
}

QpResult min_variance_weights(const AssetStats& stats, double target_return) {
  const Eigen::VectorXd& r = stats.expected_returns;
  const Eigen::MatrixXd& cov = stats.covariance;
  const int n = static_cast<int>(r.size());
  if (n < 1) throw ValidationError("min_variance_weights: no assets");
  if (cov.rows() != n || cov.cols() != n)
    throw ValidationError("min_variance_weights: covariance dimension mismatch");

  const double min_r = r.minCoeff();
  const double max_r = r.maxCoeff();
  const double feas_tol = 1e-12 * (1.0 + std::abs(min_r) + std::abs(max_r));
  if (target_return < min_r - feas_tol || target_return > max_r + feas_tol)
    return QpResult{QpStatus::Infeasible, Eigen::VectorXd(), 0.0, 0.0};
  const double target = std::clamp(target_return, min_r, max_r);

  // With all expected returns equal the return constraint is implied by the
  // budget constraint and would make the KKT system rank deficient.
  const bool drop_return = (max_r - min_r) <= feas_tol;

  // A tiny Tikhonov term keeps the face systems nonsingular and breaks
  // degenerate ties (e.g. duplicated assets) toward the symmetric solution.
  const double ridge = 1e-12 * (1.0 + cov.trace() / static_cast<double>(n));
  const Eigen::MatrixXd sigma = cov + ridge * Eigen::MatrixXd::Identity(n, n);

  std::vector<bool> at_bound(n, false);
  Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
  double lambda_ret = 0.0;
  double gamma = 0.0;
  const int max_iterations = 5 * n + 50;
  bool converged = false;

  for (int iteration = 0; iteration < max_iterations; ++iteration) {
    std::vector<int> free;
    for (int i = 0; i < n; ++i)
      if (!at_bound[i]) free.push_back(i);
    if (free.empty()) throw NumericError("min_variance_weights: all weights pinned at zero");

    const int f = static_cast<int>(free.size());
    const int m = f + (drop_return ? 1 : 2);
    Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(m, m);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
    for (int a = 0; a < f; ++a) {
      for (int b = 0; b < f; ++b) kkt(a, b) = 2.0 * sigma(free[a], free[b]);
      int c = f;
      if (!drop_return) {
        kkt(a, c) = -r(free[a]);
        kkt(c, a) = r(free[a]);
        ++c;
      }
      kkt(a, c) = -1.0;
      kkt(c, a) = 1.0;
    }
    if (!drop_return) rhs(f) = target;
    rhs(m - 1) = 1.0;

    const Eigen::VectorXd sol = Eigen::FullPivLU<Eigen::MatrixXd>(kkt).solve(rhs);
    if (!sol.allFinite()) throw NumericError("min_variance_weights: singular KKT system");

    w.setZero();
    for (int a = 0; a < f; ++a) w(free[a]) = sol(a);
    lambda_ret = drop_return ? 0.0 : sol(f);
    gamma = sol(m - 1);

    // Primal step: pin the most negative free weight at zero.
    int worst = -1;
    for (int a = 0; a < f; ++a) {
      if (w(free[a]) < -1e-12 && (worst < 0 || w(free[a]) < w(worst))) worst = free[a];
    }
    if (worst >= 0) {
      at_bound[worst] = true;
      continue;
    }
    for (int a = 0; a < f; ++a) w(free[a]) = std::max(w(free[a]), 0.0);

    // Dual step: release the bound with the most negative multiplier.
    const Eigen::VectorXd grad = 2.0 * (sigma * w);
    int release = -1;
    double worst_mu = -1e-10 * (1.0 + std::abs(gamma) + std::abs(lambda_ret));
    for (int i = 0; i < n; ++i) {
      if (!at_bound[i]) continue;
      const double mu = grad(i) - lambda_ret * r(i) - gamma;
      if (mu < worst_mu) {
        worst_mu = mu;
        release = i;
      }
    }
    if (release >= 0) {
      at_bound[release] = false;
      continue;
    }
    converged = true;
    break;
  }
  if (!converged) throw NumericError("min_variance_weights: active set did not converge");

  QpResult result;
  result.status = QpStatus::Optimal;
  result.weights = w;
  result.variance = w.dot(cov * w);

  // KKT residual against the unridged problem.
  const Eigen::VectorXd grad = 2.0 * (cov * w);
  double residual = std::abs(w.sum() - 1.0);
  if (!drop_return) residual = std::max(residual, std::abs(r.dot(w) - target));
  for (int i = 0; i < n; ++i) {
    const double mu = grad(i) - lambda_ret * r(i) - gamma;
    if (at_bound[i]) {
      residual = std::max(residual, std::max(0.0, -mu));  // dual feasibility
    } else {
      residual = std::max(residual, std::abs(mu));  // stationarity
    }
    residual = std::max(residual, std::max(0.0, -w(i)));
  }
  result.kkt_residual = residual;
  return result;
}

Portfolio max_sharpe_portfolio(const AssetStats& stats, int grid_points, SharpeKind kind) {
  const Eigen::VectorXd& r = stats.expected_returns;
  const int n = static_cast<int>(r.size());
  if (n < 1) throw ValidationError("max_sharpe_portfolio: no assets");
  if (grid_points < 1) throw ValidationError("max_sharpe_portfolio: grid must have >= 1 point");

  const double min_r = r.minCoeff();
  const double max_r = r.maxCoeff();
  const int points = (max_r - min_r) > 0.0 ? grid_points : 1;

  bool found = false;
  Portfolio best;
  for (int g = 0; g < points; ++g) {
    const double target =
        points == 1 ? min_r
                    : min_r + (max_r - min_r) * static_cast<double>(g) /
                          static_cast<double>(points - 1);
    const QpResult qp = min_variance_weights(stats, target);
    if (qp.status != QpStatus::Optimal) continue;

    const double mu = r.dot(qp.weights);
    const double var = std::max(qp.variance, 0.0);
    const double denom = kind == SharpeKind::ReturnOverVariance ? var : std::sqrt(var);
    const double ratio = mu / std::max(denom, 1e-300);

    const bool better =
        !found || ratio > best.sharpe ||
        (ratio == best.sharpe && (var < best.variance ||
                                  (var == best.variance && target < best.target_return)));
    if (better) {
      found = true;
      best.weights = qp.weights;
      best.expected_return = mu;
      best.variance = var;
      best.target_return = target;
      best.sharpe = ratio;
    }
  }
  if (!found) throw NumericError("max_sharpe_portfolio: no feasible target");
  return best;
}

NlcMeasures nlc_measures(std::span<const double> s1_history, int t, bool s2_strict_mean) {
  if (t < 0 || t >= static_cast<int>(s1_history.size()))
    throw ValidationError("nlc_measures: history index out of range");

  NlcMeasures m;
  m.s1 = s1_history[t];
  if (t >= 24) {
    double sum = 0.0;
    for (int i = t - 24; i <= t; ++i) sum += s1_history[i];
    // As printed: 25 terms with a 1/24 prefactor. The strict mean divides by
    // the term count instead.
    m.s2 = sum / (s2_strict_mean ? 25.0 : 24.0);
  }
  if (t >= 3 && s1_history[t - 3] > 0.0) {
    m.s3 = s1_history[t] / s1_history[t - 3] - 1.0;
  }
  return m;
}

NlcMeasures nlc_measures(std::span<const NonlinearityMatrix> zeta_history, int t,
                         bool s2_strict_mean) {
  std::vector<double> s1(zeta_history.size());
  for (std::size_t i = 0; i < zeta_history.size(); ++i)
    s1[i] = offdiagonal_mean(zeta_history[i].values);
  return nlc_measures(s1, t, s2_strict_mean);
}

namespace {

int map_s1(double s1) {
  if (s1 < 0.10) return 100;
  if (s1 < 0.15) return 75;
  if (s1 < 0.20) return 50;
  if (s1 < 0.25) return 25;
  return 0;
}

int map_s2(double s1, double s2) {
  if (s1 < 0.50 * s2) return 100;
  if (s1 < 0.75 * s2) return 75;
  if (s1 < 1.05 * s2) return 50;
  if (s1 < 1.15 * s2) return 25;
  return 0;
}

// The printed table overlaps at exactly -0.02; the first band wins there.
int map_s3(double s3) {
  if (s3 <= -0.02) return 25;
  if (s3 < 0.0) return 10;
  if (s3 < 0.02) return 0;
  if (s3 < 0.05) return -10;
  return -100;
}

}  // namespace

NlcScore score_map(const NlcMeasures& measures) {
  NlcScore score;
  score.s1 = measures.s1;
  score.s2 = measures.s2;
  score.s3 = measures.s3;
  score.s1_score = measures.s1 ? map_s1(*measures.s1) : 50;
  score.s2_score =
      (measures.s1 && measures.s2 && *measures.s2 > 0.0) ? map_s2(*measures.s1, *measures.s2) : 50;
  score.s3_score = measures.s3 ? map_s3(*measures.s3) : 0;
  score.combined =
      (static_cast<double>(score.s1_score) + score.s2_score + score.s3_score) / 3.0;
  score.s_nlc = std::clamp(score.combined, 0.0, 100.0);
  return score;
}

double cash_weight(double s_nlc) {
  if (s_nlc < -1e-9 || s_nlc > 100.0 + 1e-9)
    throw ValidationError("cash_weight: score must lie in [0, 100]");
  return (100.0 - 2.0 * std::clamp(s_nlc, 0.0, 100.0)) / 100.0;
}

namespace {

struct Account {
  Eigen::VectorXd weights;  // risky sleeve weights, sum 1
  double cash = 0.0;        // account share pinned between rebalances
  double value = 1.0;

  void rebalance(const Eigen::VectorXd& w, double w_cash) {
    weights = w;
    cash = w_cash;
  }

  // One return step: the risky sleeve earns sum_i w_i exp(x_i), cash accrues
  // 1 + rate, mixed at the pinned cash share; sleeve weights then drift.
  void step(const Eigen::Ref<const Eigen::VectorXd>& returns, double rate) {
    double risky_excess = 0.0;
    for (int i = 0; i < weights.size(); ++i)
      risky_excess += weights(i) * std::expm1(returns(i));
    value *= 1.0 + ((1.0 - cash) * risky_excess + cash * rate);

    const double gross = 1.0 + risky_excess;
    if (gross > 0.0) {
      for (int i = 0; i < weights.size(); ++i)
        weights(i) = weights(i) * std::exp(returns(i)) / gross;
    }
  }
};

}  // namespace

BacktestResult run_backtest(const ReturnPanel& panel, std::span<const double> cash_rates,
                            const BacktestConfig& config) {
  const int l = panel.length();
  const int n = panel.n_series();
  const int window = config.window;
  if (window < 4) throw ValidationError("run_backtest: window must be >= 4");
  if (config.rebalance_every < 1) throw ValidationError("run_backtest: rebalance step must be >= 1");
  if (config.surrogates < 1) throw ValidationError("run_backtest: need at least 1 surrogate");
  if (l <= window)
    throw InsufficientDataError("run_backtest: panel must be longer than the window");
  if (static_cast<int>(cash_rates.size()) != l)
    throw ValidationError("run_backtest: cash rate series must match the panel length (" +
                          std::to_string(l) + " steps, got " +
                          std::to_string(cash_rates.size()) + ")");

  Eigen::VectorXd fixed = config.fixed_weights;
  if (fixed.size() == 0) {
    fixed = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  } else {
    if (static_cast<int>(fixed.size()) != n)
      throw ValidationError("run_backtest: fixed weights must have one entry per asset");
    if (fixed.minCoeff() < 0.0 || std::abs(fixed.sum() - 1.0) > 1e-9)
      throw ValidationError("run_backtest: fixed weights must be non-negative and sum to 1");
  }

  const int bins = config.bins > 0 ? config.bins : bin_count(window);

  BacktestResult result;
  result.config = config;
  result.config.bins = bins;
  result.config.fixed_weights = fixed;
  result.start_step = window;
  result.fixed_weights = fixed;
  result.path.reserve(l - window + 1);
  result.path.push_back(PathPoint{window - 1, 1.0, 1.0, 1.0});

  Account acc_fixed{fixed, 0.0, 1.0};
  Account acc_full{Eigen::VectorXd::Constant(n, 1.0 / n), 0.0, 1.0};
  Account acc_nlc = acc_full;

  std::vector<double> s1_history;
  Eigen::VectorXd last_weights = Eigen::VectorXd::Constant(n, 1.0 / n);
  int next_rebalance = window;
  int rebalance_index = 0;

  for (int t = window; t < l; ++t) {
    if (t == next_rebalance) {
      const auto trailing = panel.returns.middleRows(t - window, window);

      RebalanceRecord record;
      record.step = t;
      record.date_index = t - 1;

      const AssetStats stats = asset_stats(trailing);
      try {
        const Portfolio port = max_sharpe_portfolio(stats, config.sharpe_grid, config.sharpe);
        record.weights = port.weights;
        record.expected_return = port.expected_return;
        record.variance = port.variance;
        last_weights = port.weights;
      } catch (const NumericError&) {
        record.weights = last_weights;
        record.expected_return = stats.expected_returns.dot(last_weights);
        record.variance = last_weights.dot(stats.covariance * last_weights);
        record.carried_forward = true;
      }

      NlcMeasures measures;
      if (n >= 2) {
        WindowView view{&panel, rebalance_index, t - window, window};
        const DependencyMatrix mi =
            dependency_matrix(trailing, Measure::MutualInformation, bins, rebalance_index);
        const SurrogateEnsemble ensemble =
            make_surrogates(window_panel(view), config.surrogates, config.surrogate_mode,
                            mix_seed(config.seed, static_cast<std::uint64_t>(rebalance_index)));
        const EnsemblePairStats ens_stats = ensemble_mi_stats(ensemble, bins);
        const NonlinearityMatrix zeta = zeta_nlc(mi, ens_stats);
        s1_history.push_back(offdiagonal_mean(zeta.values));
        measures = nlc_measures(s1_history, rebalance_index, config.s2_strict_mean);
      } else {
        s1_history.push_back(0.0);
      }
      record.score = score_map(measures);
      record.cash_weight = cash_weight(record.score.s_nlc);

      acc_fixed.rebalance(fixed, 0.0);
      acc_full.rebalance(record.weights, 0.0);
      acc_nlc.rebalance(record.weights, record.cash_weight);

      result.rebalances.push_back(std::move(record));
      next_rebalance += config.rebalance_every;
      ++rebalance_index;
    }

    const auto step_returns = panel.returns.row(t).transpose();
    acc_fixed.step(step_returns, cash_rates[t]);
    acc_full.step(step_returns, cash_rates[t]);
    acc_nlc.step(step_returns, cash_rates[t]);
    result.path.push_back(PathPoint{t, acc_fixed.value, acc_full.value, acc_nlc.value});
  }
  return result;
}

}  // namespace nlcor

// portfolio.hpp
// Markowitz mean-variance machinery and the nonlinearity-scaled backtest.
//
// The optimizer minimizes w' Sigma w over {w >= 0, sum w = 1, R'w = target}
// with an active-set method on the non-negativity bounds; the equality-
// constrained subproblem on the free face is solved as a dense KKT system.
// The maximum-Sharpe portfolio sweeps a fixed grid of target returns and
// selects the highest return/variance ratio (the conventional
// return/volatility ratio is available behind SharpeKind).
//
// Scoring model: s1 is the panel mean of zeta_nlc, s2 its trailing window
// sum over 25 rebalances with a 1/24 prefactor (as printed; a strict 25-term
// mean sits behind a flag), s3 the relative change over 3 rebalances. The
// band mapping to scores and the cash weight rule follow the scoring table
// exactly; measures missing during warm-up take neutral scores (50/50/0).

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "nlcor/dependence.hpp"
#include "nlcor/nonlinearity.hpp"
#include "nlcor/panel.hpp"
#include "nlcor/surrogate.hpp"

namespace nlcor {

struct AssetStats {
  Eigen::VectorXd expected_returns;  // per step
  Eigen::MatrixXd covariance;        // sample covariance, 1/(T-1)
};

struct RobustMean {
  Eigen::VectorXd values;
  std::vector<int> fallback_series;  // series where the IQR filter emptied the sample
};

// Per asset: median of the window after dropping samples outside
// [Q1 - 1.5 IQR, Q3 + 1.5 IQR] (linear-interpolation quantiles).
RobustMean expected_returns(const Eigen::Ref<const Eigen::MatrixXd>& window);

Eigen::MatrixXd covariance(const Eigen::Ref<const Eigen::MatrixXd>& window);

AssetStats asset_stats(const Eigen::Ref<const Eigen::MatrixXd>& window);

enum class QpStatus { Optimal, Infeasible };

struct QpResult {
  QpStatus status = QpStatus::Infeasible;
  Eigen::VectorXd weights;
  double variance = 0.0;
  double kkt_residual = 0.0;
};

// Long-only minimum-variance weights for one target return. Targets outside
// [min R, max R] yield an Infeasible result, not an exception.
QpResult min_variance_weights(const AssetStats& stats, double target_return);

enum class SharpeKind { ReturnOverVariance, ReturnOverVolatility };

struct Portfolio {
  Eigen::VectorXd weights;
  double cash_weight = 0.0;
  double expected_return = 0.0;
  double variance = 0.0;
  double target_return = 0.0;
  double sharpe = 0.0;
};

// Sweeps grid_points equally spaced targets over [min R, max R] and keeps the
// feasible portfolio with the best ratio; ties go to lower variance, then to
// the lower target.
Portfolio max_sharpe_portfolio(const AssetStats& stats, int grid_points = 101,
                               SharpeKind kind = SharpeKind::ReturnOverVariance);

struct NlcMeasures {
  std::optional<double> s1;
  std::optional<double> s2;
  std::optional<double> s3;
};

// Scoring measures at history index t. s2 needs 24 earlier entries, s3 needs
// 3 earlier entries and a nonzero s1(t-3); unavailable measures stay unset.
NlcMeasures nlc_measures(std::span<const double> s1_history, int t, bool s2_strict_mean = false);
NlcMeasures nlc_measures(std::span<const NonlinearityMatrix> zeta_history, int t,
                         bool s2_strict_mean = false);

struct NlcScore {
  std::optional<double> s1, s2, s3;
  int s1_score = 50;
  int s2_score = 50;
  int s3_score = 0;
  double combined = 0.0;  // plain mean of the three scores
  double s_nlc = 0.0;     // combined clamped to [0, 100]
};

NlcScore score_map(const NlcMeasures& measures);

// w_cash = (100 - 2 s_nlc)/100: +1 fully cash, -1 doubled risky exposure.
double cash_weight(double s_nlc);

enum class Strategy { FixedAllocation, MaxSharpeFull, NlcScaled };

struct BacktestConfig {
  int window = 500;         // trailing window for stats and zeta_nlc
  int rebalance_every = 20; // steps between rebalances
  int surrogates = 20;      // K
  int bins = 0;             // 0 -> bin_count(window)
  std::uint64_t seed = 0;
  SurrogateMode surrogate_mode = SurrogateMode::SharedPhase;
  SharpeKind sharpe = SharpeKind::ReturnOverVariance;
  int sharpe_grid = 101;
  bool s2_strict_mean = false;
  Eigen::VectorXd fixed_weights;  // empty -> equal weights
};

struct RebalanceRecord {
  int step = 0;        // first return step the allocation is exposed to
  int date_index = 0;  // decision date (window end)
  Eigen::VectorXd weights;  // max-Sharpe risky weights
  double expected_return = 0.0;
  double variance = 0.0;
  NlcScore score;
  double cash_weight = 0.0;  // NLC strategy cash weight
  bool carried_forward = false;
};

struct PathPoint {
  int date_index = 0;
  double value_fixed = 1.0;
  double value_full = 1.0;
  double value_nlc = 1.0;
};

struct BacktestResult {
  BacktestConfig config;
  int start_step = 0;
  Eigen::VectorXd fixed_weights;
  std::vector<RebalanceRecord> rebalances;
  std::vector<PathPoint> path;  // path[0] is the start point at value 1
};

// Runs the three strategies (fixed allocation, fully invested max-Sharpe,
// NLC-scaled) over the same panel. cash_rates holds one simple per-step
// accrual rate per panel return step; positive and negative cash balances
// accrue at the same rate. Between rebalances risky weights drift with asset
// returns while the cash share of the account stays at its rebalance value.
BacktestResult run_backtest(const ReturnPanel& panel, std::span<const double> cash_rates,
                            const BacktestConfig& config);

}  // namespace nlcor

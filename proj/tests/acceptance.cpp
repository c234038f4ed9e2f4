// acceptance.cpp
// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Thresholds are fixed here, not configurable.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "nlcor/dependence.hpp"
#include "nlcor/fft.hpp"
#include "nlcor/network.hpp"
#include "nlcor/nonlinearity.hpp"
#include "nlcor/panel.hpp"
#include "nlcor/portfolio.hpp"
#include "nlcor/rng.hpp"
#include "nlcor/surrogate.hpp"
#include "nlcor/synthetic.hpp"
#include "test_support.hpp"

namespace fs = std::filesystem;
using namespace nlcor;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& why) {
    if (!ok && pass) {
      pass = false;
      detail = why;
    }
  }
};

std::span<const double> series_of(const ReturnPanel& panel, int j) {
  return {panel.returns.col(j).data(), static_cast<std::size_t>(panel.length())};
}

// 1. Bin rule ---------------------------------------------------------------
Outcome criterion_bin_rule() {
  Outcome out;
  out.require(bin_count(1000) == 16, "bin_count(1000) != 16");
  return out;
}

// 2. Surrogate preservation -------------------------------------------------
Outcome criterion_surrogate_preservation() {
  Outcome out;
  SyntheticSpec spec;
  spec.n_series = 5;
  spec.length = 1024;
  spec.rho = 0.5;
  const ReturnPanel panel = gen_synthetic(spec, 2001);
  const SurrogateEnsemble ens = make_surrogates(panel, 20, SurrogateMode::SharedPhase, 2002);
  const DependencyMatrix source = dependency_matrix(panel.returns, Measure::Pearson);

  std::vector<std::vector<cdouble>> source_spectra;
  for (int j = 0; j < 5; ++j) source_spectra.push_back(spectrum(series_of(panel, j)));

  for (const ReturnPanel& real : ens.realizations) {
    for (int j = 0; j < 5; ++j) {
      const auto spec_sur = spectrum(series_of(real, j));
      double max_amp = 0.0;
      for (const auto& v : source_spectra[j]) max_amp = std::max(max_amp, std::abs(v));
      for (std::size_t f = 0; f < spec_sur.size(); ++f) {
        const double ref = std::max(std::abs(source_spectra[j][f]), 1e-12 * max_amp);
        const double rel = std::abs(std::abs(spec_sur[f]) - std::abs(source_spectra[j][f])) / ref;
        out.require(rel < 1e-10, "amplitude relative error " + std::to_string(rel));
      }
    }
    const DependencyMatrix dep = dependency_matrix(real.returns, Measure::Pearson);
    const double drho = (dep.values - source.values).cwiseAbs().maxCoeff();
    out.require(drho < 1e-8, "pearson deviation " + std::to_string(drho));
  }
  return out;
}

// 3. Nonlinearity separation ------------------------------------------------
Outcome criterion_nonlinearity_separation() {
  Outcome out;
  int linear_ok = 0;
  int coupled_ok = 0;
  for (int seed = 0; seed < 20; ++seed) {
    {
      SyntheticSpec spec;
      spec.n_series = 5;
      spec.length = 1000;
      spec.rho = 0.3;
      const ReturnPanel panel = gen_synthetic(spec, 3000 + seed);
      const DependencyMatrix mi = dependency_matrix(panel.returns, Measure::MutualInformation);
      const SurrogateEnsemble ens =
          make_surrogates(panel, 20, SurrogateMode::SharedPhase, 4000 + seed);
      const EnsemblePairStats stats = ensemble_mi_stats(ens);
      const double zeta_mean = offdiagonal_mean(zeta_nlc(mi, stats).values);
      const double chi_global = chi_profile(chi_sig(mi, stats)).global;
      if (zeta_mean < 0.1 && std::abs(chi_global) < 2.0) ++linear_ok;
    }
    {
      SyntheticSpec spec;
      spec.n_series = 2;
      spec.length = 1000;
      spec.regime = Regime::NonlinearCoupled;
      spec.coupling = 0.8;
      const ReturnPanel panel = gen_synthetic(spec, 5000 + seed);
      const DependencyMatrix mi = dependency_matrix(panel.returns, Measure::MutualInformation);
      const SurrogateEnsemble ens =
          make_surrogates(panel, 20, SurrogateMode::SharedPhase, 6000 + seed);
      const EnsemblePairStats stats = ensemble_mi_stats(ens);
      if (chi_sig(mi, stats).values(0, 1) > 3.0) ++coupled_ok;
    }
  }
  out.detail = "linear in band " + std::to_string(linear_ok) + "/20, coupled above 3 sigma " +
               std::to_string(coupled_ok) + "/20";
  out.require(linear_ok >= 18, out.detail + " (need 18)");
  out.require(coupled_ok >= 18, out.detail + " (need 18)");
  return out;
}

// 4. MST optimality ---------------------------------------------------------
Outcome criterion_mst_optimality() {
  Outcome out;
  Rng rng(9411);
  for (int rep = 0; rep < 100; ++rep) {
    const Eigen::MatrixXd d = testsupport::random_distance_matrix(rng, 7);
    DistanceMatrix dist;
    dist.metric = Metric::MiDistance;
    dist.values = d;
    const Tree tree = build_mst(dist, testsupport::index_labels(7));
    double total = 0.0;
    for (const TreeEdge& e : tree.edges) total += e.distance;
    const double brute = testsupport::brute_force_mst_weight(d);
    out.require(total == brute, "weight mismatch at instance " + std::to_string(rep));
  }
  return out;
}

// 5. Network metric oracles -------------------------------------------------
Outcome criterion_network_metrics() {
  Outcome out;
  Rng rng(9511);
  for (int rep = 0; rep < 50; ++rep) {
    const int n = 4 + static_cast<int>(rng.uniform(0.0, 13.0));
    DistanceMatrix dist;
    dist.metric = Metric::MiDistance;
    dist.values = testsupport::random_distance_matrix(rng, n, false, 0.05, 0.95);
    const Tree tree = build_mst(dist, testsupport::index_labels(n));

    double edge_sum = 0.0;
    for (const TreeEdge& e : tree.edges) edge_sum += e.distance;
    out.require(std::abs(normalized_tree_length(tree) - edge_sum / (n - 1)) <= 1e-12,
                "tree length mismatch");

    double level_sum = 0.0;
    for (int l : tree.levels) level_sum += l;
    out.require(std::abs(mean_occupation_layer(tree) - level_sum / n) <= 1e-12,
                "occupation layer mismatch");

    const std::vector<double> deg = degree_centrality(tree);
    for (int v = 0; v < n; ++v) {
      out.require(std::abs(deg[v] - static_cast<double>(tree.adjacency[v].size()) / n) <= 1e-12,
                  "degree centrality mismatch");
    }

    const Graph graph = build_threshold_graph(dist, testsupport::index_labels(n), 0.3);
    const std::vector<double> clustering = clustering_coefficient(graph);
    for (int i = 0; i < n; ++i) {
      int gdeg = 0;
      double direct = 0.0;
      for (int j = 0; j < n; ++j)
        if (graph.normalized_weights(i, j) > 0.0) ++gdeg;
      if (gdeg > 1) {
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k) {
            if (j == k || j == i || k == i) continue;
            direct += std::cbrt(graph.normalized_weights(i, j) *
                                graph.normalized_weights(j, k) *
                                graph.normalized_weights(i, k));
          }
        direct /= gdeg * (gdeg - 1.0);
      }
      out.require(std::abs(clustering[i] - direct) <= 1e-12, "clustering mismatch");
    }
  }

  // Closed forms: star hub degree (N-1)/N and layer (N-1)/N; path layer 2/3.
  const int n = 9;
  Eigen::MatrixXd star = Eigen::MatrixXd::Constant(n, n, 5.0);
  star.diagonal().setZero();
  for (int i = 1; i < n; ++i) {
    star(0, i) = 1.0;
    star(i, 0) = 1.0;
  }
  DistanceMatrix star_dist;
  star_dist.metric = Metric::MiDistance;
  star_dist.values = star;
  const Tree star_tree = build_mst(star_dist, testsupport::index_labels(n));
  out.require(degree_centrality(star_tree)[0] == static_cast<double>(n - 1) / n,
              "star hub centrality not exact");
  out.require(mean_occupation_layer(star_tree) == static_cast<double>(n - 1) / n,
              "star occupation layer not exact");

  Eigen::MatrixXd path(3, 3);
  path << 0.0, 0.125, 0.75, 0.125, 0.0, 0.125, 0.75, 0.125, 0.0;
  DistanceMatrix path_dist;
  path_dist.metric = Metric::MiDistance;
  path_dist.values = path;
  const Tree path_tree = build_mst(path_dist, {"A", "B", "C"});
  out.require(mean_occupation_layer(path_tree) == 2.0 / 3.0, "path layer not exact");
  return out;
}

// 6. QP correctness ---------------------------------------------------------
Outcome criterion_qp() {
  Outcome out;
  Rng rng(9611);
  int checked = 0;
  while (checked < 50) {
    Eigen::Matrix3d a;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) a(i, j) = rng.uniform(-1.0, 1.0);
    const Eigen::Matrix3d cov = a * a.transpose() + 0.3 * Eigen::Matrix3d::Identity();
    Eigen::Vector3d r(rng.uniform(-0.02, 0.02), rng.uniform(-0.02, 0.02),
                      rng.uniform(-0.02, 0.02));
    if (r.maxCoeff() - r.minCoeff() < 1e-4) continue;
    const double mu = rng.uniform(r.minCoeff(), r.maxCoeff());

    AssetStats stats;
    stats.covariance = cov;
    stats.expected_returns = r;
    const QpResult qp = min_variance_weights(stats, mu);
    out.require(qp.status == QpStatus::Optimal, "unexpected infeasibility");
    if (qp.status != QpStatus::Optimal) break;
    const auto oracle = testsupport::oracle_min_variance3(cov, r, mu);
    out.require(oracle.feasible, "oracle infeasible");
    out.require(qp.variance <= oracle.objective + 1e-9, "solver worse than grid");
    out.require(oracle.objective - qp.variance <= 1e-6 * std::max(oracle.objective, 1e-12),
                "relative objective gap above 1e-6");
    out.require(qp.kkt_residual <= 1e-8,
                "kkt residual " + std::to_string(qp.kkt_residual));
    ++checked;
  }

  AssetStats sym;
  sym.covariance = (Eigen::Matrix2d() << 0.5, 0.0, 0.0, 0.5).finished();
  sym.expected_returns = (Eigen::Vector2d() << 0.02, 0.02).finished();
  const QpResult even = min_variance_weights(sym, 0.02);
  out.require(even.status == QpStatus::Optimal && std::abs(even.weights(0) - 0.5) <= 1e-10 &&
                  std::abs(even.weights(1) - 0.5) <= 1e-10,
              "symmetric two-asset case not (0.5, 0.5)");

  AssetStats corner;
  corner.covariance = Eigen::Vector3d(1.0, 2.0, 4.0).asDiagonal();
  corner.expected_returns = (Eigen::Vector3d() << 0.01, 0.02, 0.03).finished();
  const QpResult unit = min_variance_weights(corner, 0.03);
  out.require(unit.status == QpStatus::Optimal && std::abs(unit.weights(2) - 1.0) <= 1e-10,
              "corner target not a unit weight");
  return out;
}

// 7. Table fidelity ---------------------------------------------------------
Outcome criterion_score_table() {
  Outcome out;
  auto s1_of = [](double v) {
    NlcMeasures m;
    m.s1 = v;
    return score_map(m).s1_score;
  };
  auto s2_of = [](double ratio) {
    NlcMeasures m;
    m.s1 = 0.2 * ratio;
    m.s2 = 0.2;
    return score_map(m).s2_score;
  };
  auto s3_of = [](double v) {
    NlcMeasures m;
    m.s1 = 0.1;
    m.s3 = v;
    return score_map(m).s3_score;
  };

  const std::vector<std::pair<double, int>> row1{
      {0.05, 100}, {0.12, 75}, {0.17, 50}, {0.22, 25}, {0.27, 0}};
  for (const auto& [v, want] : row1)
    out.require(s1_of(v) == want, "s1 band at " + std::to_string(v));

  const std::vector<std::pair<double, int>> row2{
      {0.3, 100}, {0.6, 75}, {0.9, 50}, {1.1, 25}, {1.2, 0}};
  for (const auto& [ratio, want] : row2)
    out.require(s2_of(ratio) == want, "s2 band at ratio " + std::to_string(ratio));

  const std::vector<std::pair<double, int>> row3{
      {-0.03, 25}, {-0.01, 10}, {0.01, 0}, {0.03, -10}, {0.06, -100}};
  for (const auto& [v, want] : row3)
    out.require(s3_of(v) == want, "s3 band at " + std::to_string(v));

  out.require(s1_of(0.05) == 100 && s1_of(0.27) == 0 && s3_of(0.06) == -100,
              "anchor cells");
  out.require(cash_weight(0.0) == 1.0 && cash_weight(100.0) == -1.0 && cash_weight(50.0) == 0.0,
              "cash weight endpoints");
  return out;
}

// 8. Backtest ledger --------------------------------------------------------
Outcome criterion_backtest_ledger() {
  Outcome out;
  SyntheticSpec spec;
  spec.n_series = 3;
  spec.length = 800;
  spec.regime = Regime::RegimeSwitch;
  const ReturnPanel panel = gen_synthetic(spec, 9811);
  std::vector<double> rates(800);
  Rng rng(9812);
  for (double& r : rates) r = rng.uniform(0.0, 2e-4);

  BacktestConfig config;
  config.window = 500;
  config.surrogates = 10;
  config.seed = 4;
  const BacktestResult result = run_backtest(panel, rates, config);

  for (int variant = 0; variant < 3; ++variant) {
    std::vector<testsupport::LedgerRebalance> ledger;
    for (const RebalanceRecord& r : result.rebalances)
      ledger.push_back({r.step, variant == 0 ? result.fixed_weights : r.weights,
                        variant == 2 ? r.cash_weight : 0.0});
    const std::vector<double> oracle =
        testsupport::oracle_value_path(panel.returns, rates, ledger, result.start_step);
    for (std::size_t i = 0; i < oracle.size(); ++i) {
      const double got = variant == 0   ? result.path[i + 1].value_fixed
                         : variant == 1 ? result.path[i + 1].value_full
                                        : result.path[i + 1].value_nlc;
      out.require(std::abs(got - oracle[i]) < 1e-10 * std::max(1.0, std::abs(oracle[i])),
                  "ledger deviation at step " + std::to_string(i));
    }
  }

  ReturnPanel flat;
  flat.tickers = {"A", "B", "C"};
  flat.returns = Eigen::MatrixXd::Zero(620, 3);
  for (int t = 0; t < 620; ++t) flat.dates.push_back("d" + std::to_string(100000 + t));
  BacktestConfig flat_config;
  flat_config.window = 500;
  flat_config.surrogates = 3;
  const BacktestResult flat_result =
      run_backtest(flat, std::vector<double>(620, 0.0), flat_config);
  for (const PathPoint& p : flat_result.path) {
    out.require(p.value_fixed == 1.0 && p.value_full == 1.0 && p.value_nlc == 1.0,
                "flat path deviates from exactly 1");
  }
  return out;
}

// 9. Qualitative crisis behavior ---------------------------------------------
Outcome criterion_crisis_behavior() {
  Outcome out;
  int ok = 0;
  for (int seed = 0; seed < 20; ++seed) {
    SyntheticSpec spec;
    spec.n_series = 3;
    spec.length = 1300;
    spec.regime = Regime::RegimeSwitch;
    spec.coupling = 0.8;
    const ReturnPanel panel = gen_synthetic(spec, 7000 + seed);

    BacktestConfig config;
    config.window = 500;
    config.rebalance_every = 20;
    config.surrogates = 20;
    config.seed = 8000 + seed;
    const BacktestResult result =
        run_backtest(panel, std::vector<double>(1300, 0.0), config);

    const int boundary = 650;
    double linear_sum = 0.0, nonlinear_sum = 0.0;
    int linear_count = 0, nonlinear_count = 0;
    for (const RebalanceRecord& r : result.rebalances) {
      if (r.step - config.window >= boundary) {
        nonlinear_sum += r.cash_weight;
        ++nonlinear_count;
      } else if (r.step <= boundary) {
        linear_sum += r.cash_weight;
        ++linear_count;
      }
    }
    if (linear_count > 0 && nonlinear_count > 0 &&
        nonlinear_sum / nonlinear_count > linear_sum / linear_count)
      ++ok;
  }
  out.detail = "cash-weight ordering held in " + std::to_string(ok) + "/20";
  out.require(ok >= 18, out.detail + " (need 18)");
  return out;
}

// 10. CLI determinism ---------------------------------------------------------
Outcome criterion_cli_determinism() {
  Outcome out;
  const fs::path root = fs::temp_directory_path() / "nlcor_acceptance";
  fs::remove_all(root);
  fs::create_directories(root);

  auto run = [&root, &out](const std::string& args, const std::string& tag) {
    const std::string command = std::string(NLCOR_CLI_PATH) + " " + args + " 2>" +
                                (root / (tag + ".stderr")).string();
    const int status = std::system(command.c_str());
    const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    out.require(code == 0, tag + " exited with " + std::to_string(code));
    return code == 0;
  };

  const fs::path data = root / "data";
  if (!run("synth --out-dir " + data.string() +
               " --series 3 --length 700 --regime switch --seed 21",
           "synth"))
    return out;

  const std::string backtest_args = "backtest --input " + (data / "prices.csv").string() +
                                    " --cash-rate " + (data / "cashrate.csv").string() +
                                    " --window 500 --rebalance 20 --surrogates 10 --seed 5"
                                    " --strategy nlc --out-dir ";
  const fs::path out_a = root / "run_a";
  const fs::path out_b = root / "run_b";
  if (!run(backtest_args + out_a.string(), "run_a")) return out;
  if (!run(backtest_args + out_b.string(), "run_b")) return out;

  int compared = 0;
  for (const auto& entry : fs::directory_iterator(out_a)) {
    const fs::path name = entry.path().filename();
    std::ifstream fa(entry.path(), std::ios::binary);
    std::ifstream fb(out_b / name, std::ios::binary);
    std::ostringstream sa, sb;
    sa << fa.rdbuf();
    sb << fb.rdbuf();
    out.require(sb.str() == sa.str() && !sa.str().empty(),
                "output file " + name.string() + " differs between runs");
    ++compared;
  }
  out.require(compared == 4, "expected 4 output files, saw " + std::to_string(compared));
  return out;
}

}  // namespace

int main() {
  struct Criterion {
    std::string name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {"bin rule: bin_count(1000) == 16", criterion_bin_rule},
      {"surrogate preservation: amplitudes < 1e-10, pearson < 1e-8", criterion_surrogate_preservation},
      {"nonlinearity separation on linear vs coupled panels (18/20 seeds)", criterion_nonlinearity_separation},
      {"mst optimality vs exhaustive enumeration (100 x 7 nodes)", criterion_mst_optimality},
      {"network metrics vs direct-formula/bfs oracles (1e-12)", criterion_network_metrics},
      {"qp vs simplex-grid oracle (1e-6 rel, kkt 1e-8)", criterion_qp},
      {"score table: 15 band cells and cash-weight endpoints", criterion_score_table},
      {"backtest ledger oracle (1e-10) and exact flat path", criterion_backtest_ledger},
      {"crisis behavior: higher cash weight in nonlinear regime (18/20 seeds)", criterion_crisis_behavior},
      {"cli determinism: byte-identical backtest reruns", criterion_cli_determinism},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = criteria[i].run();
    } catch (const std::exception& e) {
      outcome.pass = false;
      outcome.detail = std::string("exception: ") + e.what();
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    char line[256];
    std::snprintf(line, sizeof line, "[%s] %2zu. %s (%.2fs)%s%s",
                  outcome.pass ? "PASS" : "FAIL", i + 1, criteria[i].name.c_str(), seconds,
                  outcome.detail.empty() ? "" : " -- ", outcome.detail.c_str());
    std::cout << line << "\n";
    if (!outcome.pass) ++failures;
  }
  if (failures > 0) {
    std::cout << failures << " criterion(s) failed\n";
    return 1;
  }
  std::cout << "all criteria passed\n";
  return 0;
}

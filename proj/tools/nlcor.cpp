// nlcor.cpp
// Command line front end: file-to-file pipelines over return panels.
//
//   nlcor synth        generate a synthetic price table (plus a cash-rate file)
//   nlcor analyze      dependency/distance matrices, moments, network metrics
//   nlcor nonlinearity chi_sig / zeta_nlc series from surrogate ensembles
//   nlcor backtest     fixed / max-Sharpe / NLC-scaled strategy comparison
//
// Exit codes: 0 ok, 2 usage, 3 data validation, 4 numeric failure.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "nlcor/dependence.hpp"
#include "nlcor/errors.hpp"
#include "nlcor/io.hpp"
#include "nlcor/network.hpp"
#include "nlcor/nonlinearity.hpp"
#include "nlcor/panel.hpp"
#include "nlcor/portfolio.hpp"
#include "nlcor/rng.hpp"
#include "nlcor/surrogate.hpp"
#include "nlcor/synthetic.hpp"
#include "nlcor/version.hpp"

namespace fs = std::filesystem;
using namespace nlcor;

namespace {

std::string window_tag(int index) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "w%04d", index);
  return buf;
}

std::string measure_name(Measure m) {
  return m == Measure::Pearson ? "pearson" : "mi";
}

SurrogateMode parse_mode(const std::string& s) {
  if (s == "shared") return SurrogateMode::SharedPhase;
  if (s == "independent") return SurrogateMode::IndependentPhase;
  throw UsageError("unknown surrogate mode '" + s + "' (expected shared|independent)");
}

SharpeKind parse_sharpe(const std::string& s) {
  if (s == "paper") return SharpeKind::ReturnOverVariance;
  if (s == "conventional") return SharpeKind::ReturnOverVolatility;
  throw UsageError("unknown sharpe kind '" + s + "' (expected paper|conventional)");
}

Strategy parse_strategy(const std::string& s) {
  if (s == "fixed") return Strategy::FixedAllocation;
  if (s == "full") return Strategy::MaxSharpeFull;
  if (s == "nlc") return Strategy::NlcScaled;
  throw UsageError("unknown strategy '" + s + "' (expected fixed|full|nlc)");
}

Regime parse_regime(const std::string& s) {
  if (s == "linear") return Regime::LinearGaussian;
  if (s == "nonlinear") return Regime::NonlinearCoupled;
  if (s == "switch") return Regime::RegimeSwitch;
  throw UsageError("unknown regime '" + s + "' (expected linear|nonlinear|switch)");
}

std::vector<Measure> parse_measures(const std::string& s) {
  if (s == "pearson") return {Measure::Pearson};
  if (s == "mi") return {Measure::MutualInformation};
  if (s == "both") return {Measure::Pearson, Measure::MutualInformation};
  throw UsageError("unknown measure '" + s + "' (expected pearson|mi|both)");
}

// Applies `key=value` entries from a flat config file for options the user
// did not pass on the command line. `setters` maps known keys to their
// apply-function; unknown keys are usage errors.
void apply_config(const std::string& path, CLI::App* cmd,
                  const std::map<std::string, std::pair<std::string, std::function<void(const std::string&)>>>& setters) {
  for (const auto& [key, value] : read_kv_config(path)) {
    const auto it = setters.find(key);
    if (it == setters.end()) throw UsageError("unknown config key '" + key + "' in " + path);
    const std::string& flag = it->second.first;
    if (!flag.empty() && cmd->count(flag) > 0) continue;  // command line wins
    it->second.second(value);
  }
}

double parse_double_value(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw UsageError("config key '" + key + "': cannot parse '" + value + "' as a number");
  }
}

long parse_int_value(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const long v = std::stol(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw UsageError("config key '" + key + "': cannot parse '" + value + "' as an integer");
  }
}

std::string date_of(const ReturnPanel& panel, int index) { return panel.dates[index]; }

void ensure_out_dir(const std::string& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw ValidationError("cannot create output directory '" + out_dir + "'");
}

struct OutputTracker {
  std::string dir;
  std::vector<std::string> files;

  std::string path(const std::string& name) {
    files.push_back(name);
    return (fs::path(dir) / name).string();
  }
};

// ---------------------------------------------------------------------------
// synth

struct SynthOptions {
  std::string out_dir;
  std::string config_path;
  int series = 5;
  int length = 1250;
  std::string regime = "linear";
  double rho = 0.3;
  double coupling = 0.8;
  double vol = 0.01;
  double cash_rate_value = 0.0;
  std::uint64_t seed = 0;
};

int cmd_synth(const SynthOptions& opt) {
  SyntheticSpec spec;
  spec.n_series = opt.series;
  spec.length = opt.length;
  spec.regime = parse_regime(opt.regime);
  spec.rho = opt.rho;
  spec.coupling = opt.coupling;
  spec.vol = opt.vol;

  const ReturnPanel panel = gen_synthetic(spec, opt.seed);
  const PriceTable table = to_price_table(panel);

  ensure_out_dir(opt.out_dir);
  OutputTracker out{opt.out_dir, {}};

  {
    std::vector<std::string> header{"date"};
    header.insert(header.end(), table.tickers.begin(), table.tickers.end());
    std::vector<std::vector<std::string>> rows;
    rows.reserve(table.length());
    for (int t = 0; t < table.length(); ++t) {
      std::vector<std::string> row{table.dates[t]};
      for (int j = 0; j < table.n_series(); ++j)
        row.push_back(format_double(table.prices(t, j)));
      rows.push_back(std::move(row));
    }
    write_csv(out.path("prices.csv"), header, rows);
  }
  {
    std::vector<std::vector<std::string>> rows;
    rows.reserve(panel.length());
    for (int t = 0; t < panel.length(); ++t)
      rows.push_back({panel.dates[t], format_double(opt.cash_rate_value)});
    write_csv(out.path("cashrate.csv"), {"date", "rate"}, rows);
  }

  Manifest manifest;
  manifest.command = "synth";
  manifest.version = kVersion;
  manifest.seed = opt.seed;
  manifest.input_path = "";
  manifest.config = {{"series", std::to_string(opt.series)},
                     {"length", std::to_string(opt.length)},
                     {"regime", opt.regime},
                     {"rho", format_double(opt.rho)},
                     {"coupling", format_double(opt.coupling)},
                     {"vol", format_double(opt.vol)},
                     {"cash-rate-value", format_double(opt.cash_rate_value)}};
  std::string spec_blob;
  for (const auto& [k, v] : manifest.config) spec_blob += k + "=" + v + ";";
  char checksum[32];
  std::snprintf(checksum, sizeof checksum, "fnv1a64:%016llx",
                static_cast<unsigned long long>(fnv1a64(spec_blob)));
  manifest.input_checksum = checksum;
  manifest.outputs = out.files;
  write_manifest(out.path("manifest.json"), manifest);
  return 0;
}

// ---------------------------------------------------------------------------
// analyze

struct AnalyzeOptions {
  std::string input;
  std::string out_dir;
  int window = 1000;
  int step = 20;
  int bins = 0;
  std::string measure = "both";
  double threshold_q = 0.2;
  bool emit_matrices = false;
  bool emit_edges = false;
  bool phase_maps = false;
  int phase_delay = 1;
};

void check_pearson_degenerate(const WindowView& view) {
  const auto block = view.block();
  for (int j = 0; j < view.n_series(); ++j) {
    const double first = block(0, j);
    bool constant = true;
    for (int t = 1; t < view.length && constant; ++t) constant = block(t, j) == first;
    if (constant)
      throw ValidationError("window " + std::to_string(view.index) + " (ending " +
                            view.end_date() + "): ticker '" + view.panel->tickers[j] +
                            "' is constant; pearson is undefined");
  }
}

int cmd_analyze(const AnalyzeOptions& opt) {
  const PriceTable table = load_price_table(opt.input);
  const ReturnPanel panel = to_log_returns(table);
  const std::vector<WindowView> windows = rolling_windows(panel, WindowSpec{opt.window, opt.step});
  const std::vector<Measure> measures = parse_measures(opt.measure);

  ensure_out_dir(opt.out_dir);
  OutputTracker out{opt.out_dir, {}};

  for (Measure measure : measures) {
    const std::string tag = measure_name(measure);
    std::vector<std::vector<std::string>> moment_rows;
    std::vector<std::vector<std::string>> network_rows;
    std::vector<std::vector<std::string>> node_rows;

    for (const WindowView& view : windows) {
      if (measure == Measure::Pearson) check_pearson_degenerate(view);
      const DependencyMatrix dep =
          dependency_matrix(view.block(), measure, opt.bins, view.index);
      const DistanceMatrix dist = to_distance(dep);
      const Moments moments = offdiagonal_moments(dist.values);

      const Tree tree = build_mst(dist, panel.tickers);
      const Graph graph = build_threshold_graph(dist, panel.tickers, opt.threshold_q);
      const std::vector<double> tree_deg = degree_centrality(tree);
      const std::vector<double> graph_deg = degree_centrality(graph);
      const std::vector<double> clustering = clustering_coefficient(graph);
      const std::vector<double> betweenness = tree_betweenness(tree);

      moment_rows.push_back({view.end_date(), format_double(moments.mean),
                             format_double(moments.variance), format_double(moments.skewness),
                             format_double(moments.kurtosis)});

      double avg_deg = 0.0, avg_clu = 0.0;
      for (int i = 0; i < panel.n_series(); ++i) {
        avg_deg += graph_deg[i];
        avg_clu += clustering[i];
      }
      avg_deg /= panel.n_series();
      avg_clu /= panel.n_series();
      network_rows.push_back({view.end_date(), format_double(normalized_tree_length(tree)),
                              format_double(mean_occupation_layer(tree)),
                              panel.tickers[tree.central], format_double(avg_deg),
                              format_double(avg_clu)});

      for (int i = 0; i < panel.n_series(); ++i) {
        node_rows.push_back({view.end_date(), panel.tickers[i], format_double(tree_deg[i]),
                             format_double(betweenness[i]), format_double(graph_deg[i]),
                             format_double(clustering[i])});
      }

      if (opt.emit_matrices) {
        const std::string base = "dependency_" + tag + "_" + window_tag(view.index);
        write_matrix_csv(out.path(base + ".csv"), panel.tickers, dep.values);
        write_matrix_json(out.path(base + ".json"), panel.tickers, dep.values, tag, view.index,
                          view.end_date(), dep.bins);
        const std::string dbase = "distance_" + tag + "_" + window_tag(view.index);
        write_matrix_csv(out.path(dbase + ".csv"), panel.tickers, dist.values);
        write_matrix_json(out.path(dbase + ".json"), panel.tickers, dist.values,
                          tag + "-distance", view.index, view.end_date(), 0);
      }
      if (opt.emit_edges) {
        std::vector<std::vector<std::string>> mst_rows;
        for (const TreeEdge& e : tree.edges) {
          const double weight = dist.metric == Metric::MiDistance
                                    ? 1.0 - e.distance
                                    : std::max(0.0, 1.0 - e.distance * e.distance / 2.0);
          mst_rows.push_back({panel.tickers[e.u], panel.tickers[e.v],
                              format_double(e.distance), format_double(weight)});
        }
        write_csv(out.path("mst_" + tag + "_" + window_tag(view.index) + ".csv"),
                  {"u", "v", "distance", "weight"}, mst_rows);

        std::vector<std::vector<std::string>> graph_rows;
        for (const GraphEdge& e : graph.edges) {
          graph_rows.push_back({panel.tickers[e.u], panel.tickers[e.v],
                                format_double(e.distance),
                                format_double(e.normalized_weight)});
        }
        write_csv(out.path("threshold_" + tag + "_" + window_tag(view.index) + ".csv"),
                  {"u", "v", "distance", "weight"}, graph_rows);
      }
    }

    write_csv(out.path("moments_" + tag + ".csv"),
              {"window_end_date", "mean", "variance", "skewness", "kurtosis"}, moment_rows);
    write_csv(out.path("network_" + tag + ".csv"),
              {"window_end_date", "tree_length", "mean_occupation_layer", "central_ticker",
               "graph_avg_degree", "graph_avg_clustering"},
              network_rows);
    write_csv(out.path("nodes_" + tag + ".csv"),
              {"window_end_date", "ticker", "tree_degree", "tree_betweenness", "graph_degree",
               "graph_clustering"},
              node_rows);
  }

  if (opt.phase_maps) {
    for (int j = 0; j < panel.n_series(); ++j) {
      const PhaseMap map = phase_map(
          {panel.returns.col(j).data(), static_cast<std::size_t>(panel.length())},
          opt.phase_delay);
      std::vector<std::vector<std::string>> rows;
      rows.reserve(map.points.size());
      for (const auto& point : map.points)
        rows.push_back({format_double(point[0]), format_double(point[1])});
      write_csv(out.path("phase_map_" + panel.tickers[j] + ".csv"), {"phi", "phi_delayed"},
                rows);
    }
  }

  Manifest manifest;
  manifest.command = "analyze";
  manifest.version = kVersion;
  manifest.seed = 0;
  manifest.input_path = opt.input;
  manifest.input_checksum = file_checksum(opt.input);
  manifest.config = {{"window", std::to_string(opt.window)},
                     {"step", std::to_string(opt.step)},
                     {"bins", std::to_string(opt.bins)},
                     {"measure", opt.measure},
                     {"threshold-q", format_double(opt.threshold_q)},
                     {"emit-matrices", opt.emit_matrices ? "1" : "0"},
                     {"emit-edges", opt.emit_edges ? "1" : "0"},
                     {"phase-maps", opt.phase_maps ? "1" : "0"},
                     {"phase-delay", std::to_string(opt.phase_delay)}};
  manifest.outputs = out.files;
  write_manifest(out.path("manifest.json"), manifest);
  return 0;
}

// ---------------------------------------------------------------------------
// nonlinearity

struct NonlinearityOptions {
  std::string input;
  std::string out_dir;
  int window = 1000;
  int step = 20;
  int bins = 0;
  int surrogates = 20;
  std::string surrogate_mode = "shared";
  std::uint64_t seed = 0;
  bool emit_ensemble = false;
  std::string compare_windows;  // "a,b"
};

int cmd_nonlinearity(const NonlinearityOptions& opt) {
  if (opt.surrogates < 2)
    throw ValidationError("nonlinearity needs at least 2 surrogate realizations (sigma of a "
                          "single draw is undefined)");
  const SurrogateMode mode = parse_mode(opt.surrogate_mode);

  const PriceTable table = load_price_table(opt.input);
  const ReturnPanel panel = to_log_returns(table);
  const std::vector<WindowView> windows = rolling_windows(panel, WindowSpec{opt.window, opt.step});

  int compare_a = -1, compare_b = -1;
  if (!opt.compare_windows.empty()) {
    const std::size_t comma = opt.compare_windows.find(',');
    if (comma == std::string::npos)
      throw UsageError("--compare-windows expects two indices, e.g. 0,5");
    compare_a = static_cast<int>(parse_int_value("compare-windows", opt.compare_windows.substr(0, comma)));
    compare_b = static_cast<int>(parse_int_value("compare-windows", opt.compare_windows.substr(comma + 1)));
    const int last = static_cast<int>(windows.size()) - 1;
    if (compare_a < 0 || compare_b < 0 || compare_a > last || compare_b > last)
      throw UsageError("--compare-windows indices must lie in [0, " + std::to_string(last) + "]");
  }

  ensure_out_dir(opt.out_dir);
  OutputTracker out{opt.out_dir, {}};

  std::vector<std::vector<std::string>> profile_rows;
  std::vector<std::vector<std::string>> global_rows;
  std::vector<std::vector<std::string>> zeta_rows;
  Eigen::MatrixXd compare_lower, compare_upper;

  for (const WindowView& view : windows) {
    const DependencyMatrix mi =
        dependency_matrix(view.block(), Measure::MutualInformation, opt.bins, view.index);
    const SurrogateEnsemble ensemble =
        make_surrogates(window_panel(view), opt.surrogates, mode,
                        mix_seed(opt.seed, static_cast<std::uint64_t>(view.index)));
    const EnsemblePairStats stats = ensemble_mi_stats(ensemble, mi.bins);
    const SignificanceMatrix sig = chi_sig(mi, stats);
    const SignificanceProfile profile = chi_profile(sig);
    const NonlinearityMatrix zeta = zeta_nlc(mi, stats);

    for (int i = 0; i < panel.n_series(); ++i)
      profile_rows.push_back(
          {view.end_date(), panel.tickers[i], format_double(profile.per_asset(i))});
    global_rows.push_back({view.end_date(), format_double(profile.global)});
    zeta_rows.push_back({view.end_date(), format_double(offdiagonal_mean(zeta.values))});

    write_matrix_csv(out.path("chi_sig_" + window_tag(view.index) + ".csv"), panel.tickers,
                     sig.values);
    std::vector<std::vector<std::string>> pair_rows;
    for (int i = 0; i < panel.n_series(); ++i)
      for (int j = i + 1; j < panel.n_series(); ++j)
        pair_rows.push_back({panel.tickers[i], panel.tickers[j],
                             format_double(sig.values(i, j))});
    write_csv(out.path("chi_pairs_" + window_tag(view.index) + ".csv"),
              {"ticker_i", "ticker_j", "chi_sig"}, pair_rows);
    if (opt.emit_ensemble) {
      write_matrix_csv(out.path("mi_original_" + window_tag(view.index) + ".csv"),
                       panel.tickers, mi.values);
      write_matrix_csv(out.path("mi_surrogate_mean_" + window_tag(view.index) + ".csv"),
                       panel.tickers, stats.mean);
      write_matrix_csv(out.path("mi_surrogate_sigma_" + window_tag(view.index) + ".csv"),
                       panel.tickers, stats.sigma);
    }
    if (view.index == compare_a) compare_lower = sig.values;
    if (view.index == compare_b) compare_upper = sig.values;
  }

  write_csv(out.path("chi_profile.csv"), {"window_end_date", "ticker", "chi_bar"}, profile_rows);
  write_csv(out.path("chi_global.csv"), {"window_end_date", "chi_bar_global"}, global_rows);
  write_csv(out.path("zeta_series.csv"), {"window_end_date", "zeta_mean"}, zeta_rows);

  if (compare_a >= 0) {
    // Lower half from window a, upper half from window b.
    Eigen::MatrixXd combined = Eigen::MatrixXd::Zero(panel.n_series(), panel.n_series());
    for (int i = 0; i < panel.n_series(); ++i)
      for (int j = 0; j < panel.n_series(); ++j) {
        if (i > j) combined(i, j) = compare_lower(i, j);
        if (i < j) combined(i, j) = compare_upper(i, j);
      }
    write_matrix_csv(out.path("chi_compare_" + window_tag(compare_a) + "_" +
                              window_tag(compare_b) + ".csv"),
                     panel.tickers, combined);
  }

  Manifest manifest;
  manifest.command = "nonlinearity";
  manifest.version = kVersion;
  manifest.seed = opt.seed;
  manifest.input_path = opt.input;
  manifest.input_checksum = file_checksum(opt.input);
  manifest.config = {{"window", std::to_string(opt.window)},
                     {"step", std::to_string(opt.step)},
                     {"bins", std::to_string(opt.bins)},
                     {"surrogates", std::to_string(opt.surrogates)},
                     {"surrogate-mode", opt.surrogate_mode},
                     {"emit-ensemble", opt.emit_ensemble ? "1" : "0"},
                     {"compare-windows", opt.compare_windows}};
  manifest.outputs = out.files;
  write_manifest(out.path("manifest.json"), manifest);
  return 0;
}

// ---------------------------------------------------------------------------
// backtest

struct BacktestOptions {
  std::string input;
  std::string out_dir;
  std::string cash_rate_path;
  std::string config_path;
  int window = 500;
  int rebalance = 20;
  int bins = 0;
  int surrogates = 20;
  std::string surrogate_mode = "shared";
  std::string strategy = "nlc";
  std::string sharpe = "paper";
  std::uint64_t seed = 0;
  bool s2_strict = false;
  std::string fixed_weights;  // comma separated
};

Eigen::VectorXd parse_weights(const std::string& csv) {
  std::vector<double> values;
  std::size_t start = 0;
  while (start <= csv.size()) {
    const std::size_t comma = csv.find(',', start);
    const std::string cell = csv.substr(start, comma == std::string::npos ? std::string::npos
                                                                          : comma - start);
    values.push_back(parse_double_value("fixed-weights", cell));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  Eigen::VectorXd w(static_cast<int>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) w(static_cast<int>(i)) = values[i];
  return w;
}

int cmd_backtest(const BacktestOptions& opt) {
  const Strategy strategy = parse_strategy(opt.strategy);

  if (opt.cash_rate_path.empty())
    throw UsageError("backtest requires --cash-rate <file> (per-step accrual rates)");

  const PriceTable table = load_price_table(opt.input);
  const ReturnPanel panel = to_log_returns(table);
  const std::vector<double> rates = read_rate_series(opt.cash_rate_path);

  BacktestConfig config;
  config.window = opt.window;
  config.rebalance_every = opt.rebalance;
  config.bins = opt.bins;
  config.surrogates = opt.surrogates;
  config.seed = opt.seed;
  config.surrogate_mode = parse_mode(opt.surrogate_mode);
  config.sharpe = parse_sharpe(opt.sharpe);
  config.s2_strict_mean = opt.s2_strict;
  if (!opt.fixed_weights.empty()) config.fixed_weights = parse_weights(opt.fixed_weights);

  const BacktestResult result = run_backtest(panel, rates, config);
  for (const RebalanceRecord& r : result.rebalances) {
    if (r.carried_forward)
      std::cerr << "warning: optimizer infeasible at " << date_of(panel, r.date_index)
                << "; carried previous weights forward\n";
  }

  ensure_out_dir(opt.out_dir);
  OutputTracker out{opt.out_dir, {}};

  {
    std::vector<std::vector<std::string>> rows;
    rows.reserve(result.path.size());
    for (const PathPoint& p : result.path)
      rows.push_back({date_of(panel, p.date_index), format_double(p.value_fixed),
                      format_double(p.value_full), format_double(p.value_nlc)});
    write_csv(out.path("value_path.csv"), {"date", "value_fixed", "value_full", "value_nlc"},
              rows);
  }
  {
    std::vector<std::vector<std::string>> rows;
    for (const RebalanceRecord& r : result.rebalances) {
      const Eigen::VectorXd& weights =
          strategy == Strategy::FixedAllocation ? result.fixed_weights : r.weights;
      const double cash = strategy == Strategy::NlcScaled ? r.cash_weight : 0.0;
      for (int i = 0; i < panel.n_series(); ++i)
        rows.push_back({date_of(panel, r.date_index), panel.tickers[i],
                        format_double(weights(i)), format_double(cash)});
    }
    write_csv(out.path("weights.csv"), {"date", "ticker", "weight", "cash_weight"}, rows);
  }
  {
    auto opt_str = [](const std::optional<double>& v) {
      return v ? format_double(*v) : "nan";
    };
    std::vector<std::vector<std::string>> rows;
    for (const RebalanceRecord& r : result.rebalances) {
      rows.push_back({date_of(panel, r.date_index), opt_str(r.score.s1), opt_str(r.score.s2),
                      opt_str(r.score.s3), std::to_string(r.score.s1_score),
                      std::to_string(r.score.s2_score), std::to_string(r.score.s3_score),
                      format_double(r.score.s_nlc)});
    }
    write_csv(out.path("scores.csv"),
              {"date", "s1", "s2", "s3", "s_star_1", "s_star_2", "s_star_3", "s_nlc"}, rows);
  }

  Manifest manifest;
  manifest.command = "backtest";
  manifest.version = kVersion;
  manifest.seed = opt.seed;
  manifest.input_path = opt.input;
  manifest.input_checksum = file_checksum(opt.input);
  manifest.config = {{"window", std::to_string(opt.window)},
                     {"rebalance", std::to_string(opt.rebalance)},
                     {"bins", std::to_string(opt.bins)},
                     {"surrogates", std::to_string(opt.surrogates)},
                     {"surrogate-mode", opt.surrogate_mode},
                     {"strategy", opt.strategy},
                     {"sharpe", opt.sharpe},
                     {"s2-strict", opt.s2_strict ? "1" : "0"},
                     {"fixed-weights", opt.fixed_weights},
                     {"cash-rate", opt.cash_rate_path}};
  manifest.outputs = out.files;
  write_manifest(out.path("manifest.json"), manifest);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nonlinear market correlation toolkit"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  SynthOptions synth;
  CLI::App* synth_cmd = app.add_subcommand("synth", "generate a synthetic price table");
  synth_cmd->add_option("--out-dir", synth.out_dir, "output directory")->required();
  synth_cmd->add_option("--config", synth.config_path, "key=value config file");
  synth_cmd->add_option("--series", synth.series, "number of series");
  synth_cmd->add_option("--length", synth.length, "number of return steps");
  synth_cmd->add_option("--regime", synth.regime, "linear|nonlinear|switch");
  synth_cmd->add_option("--rho", synth.rho, "uniform pairwise correlation");
  synth_cmd->add_option("--coupling", synth.coupling, "quadratic coupling strength");
  synth_cmd->add_option("--vol", synth.vol, "per-step volatility");
  synth_cmd->add_option("--cash-rate-value", synth.cash_rate_value,
                        "constant per-step cash rate written to cashrate.csv");
  synth_cmd->add_option("--seed", synth.seed, "random seed");

  AnalyzeOptions analyze;
  CLI::App* analyze_cmd =
      app.add_subcommand("analyze", "dependency matrices, moments and network metrics");
  analyze_cmd->add_option("--input", analyze.input, "wide CSV price table")->required();
  analyze_cmd->add_option("--out-dir", analyze.out_dir, "output directory")->required();
  analyze_cmd->add_option("--window", analyze.window, "window length T");
  analyze_cmd->add_option("--step", analyze.step, "window stride deltaT");
  analyze_cmd->add_option("--bins", analyze.bins, "histogram bins (0 = ceil(sqrt(T/4)))");
  analyze_cmd->add_option("--measure", analyze.measure, "pearson|mi|both");
  analyze_cmd->add_option("--threshold-q", analyze.threshold_q, "threshold network quantile");
  analyze_cmd->add_flag("--emit-matrices", analyze.emit_matrices,
                        "write per-window dependency/distance matrices");
  analyze_cmd->add_flag("--emit-edges", analyze.emit_edges, "write per-window edge lists");
  analyze_cmd->add_flag("--phase-maps", analyze.phase_maps,
                        "write a full-series Fourier phase map per ticker");
  analyze_cmd->add_option("--phase-delay", analyze.phase_delay, "phase map mode delay");

  NonlinearityOptions nonlin;
  CLI::App* nonlin_cmd =
      app.add_subcommand("nonlinearity", "chi_sig and zeta_nlc from surrogate ensembles");
  nonlin_cmd->add_option("--input", nonlin.input, "wide CSV price table")->required();
  nonlin_cmd->add_option("--out-dir", nonlin.out_dir, "output directory")->required();
  nonlin_cmd->add_option("--window", nonlin.window, "window length T");
  nonlin_cmd->add_option("--step", nonlin.step, "window stride deltaT");
  nonlin_cmd->add_option("--bins", nonlin.bins, "histogram bins (0 = ceil(sqrt(T/4)))");
  nonlin_cmd->add_option("--surrogates", nonlin.surrogates, "ensemble size K");
  nonlin_cmd->add_option("--surrogate-mode", nonlin.surrogate_mode, "shared|independent");
  nonlin_cmd->add_option("--seed", nonlin.seed, "random seed");
  nonlin_cmd->add_flag("--emit-ensemble", nonlin.emit_ensemble,
                       "write per-window original/surrogate MI matrices");
  nonlin_cmd->add_option("--compare-windows", nonlin.compare_windows,
                         "two window indices a,b for a half-matrix comparison");

  BacktestOptions backtest;
  CLI::App* backtest_cmd =
      app.add_subcommand("backtest", "fixed / max-Sharpe / NLC strategy comparison");
  backtest_cmd->add_option("--input", backtest.input, "wide CSV price table")->required();
  backtest_cmd->add_option("--out-dir", backtest.out_dir, "output directory")->required();
  backtest_cmd->add_option("--cash-rate", backtest.cash_rate_path,
                           "CSV date,rate with one per-step accrual rate per return step");
  backtest_cmd->add_option("--config", backtest.config_path, "key=value config file");
  backtest_cmd->add_option("--window", backtest.window, "trailing window W");
  backtest_cmd->add_option("--rebalance", backtest.rebalance, "steps between rebalances");
  backtest_cmd->add_option("--bins", backtest.bins, "histogram bins (0 = ceil(sqrt(W/4)))");
  backtest_cmd->add_option("--surrogates", backtest.surrogates, "ensemble size K");
  backtest_cmd->add_option("--surrogate-mode", backtest.surrogate_mode, "shared|independent");
  backtest_cmd->add_option("--strategy", backtest.strategy,
                           "fixed|full|nlc: strategy written to weights.csv");
  backtest_cmd->add_option("--sharpe", backtest.sharpe, "paper|conventional ratio");
  backtest_cmd->add_option("--seed", backtest.seed, "random seed");
  backtest_cmd->add_flag("--s2-strict", backtest.s2_strict,
                         "use the strict 25-term mean for the s2 measure");
  backtest_cmd->add_option("--fixed-weights", backtest.fixed_weights,
                           "comma separated weights for the fixed allocation");

  try {
    try {
      app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
      return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
      return app.exit(e);
    } catch (const CLI::ParseError& e) {
      std::cerr << e.what() << "\n";
      return 2;
    }

    if (*synth_cmd) {
      if (!synth.config_path.empty()) {
        apply_config(
            synth.config_path, synth_cmd,
            {{"series", {"--series", [&](const std::string& v) {
                           synth.series = static_cast<int>(parse_int_value("series", v));
                         }}},
             {"length", {"--length", [&](const std::string& v) {
                           synth.length = static_cast<int>(parse_int_value("length", v));
                         }}},
             {"regime", {"--regime", [&](const std::string& v) { synth.regime = v; }}},
             {"rho", {"--rho", [&](const std::string& v) {
                        synth.rho = parse_double_value("rho", v);
                      }}},
             {"coupling", {"--coupling", [&](const std::string& v) {
                             synth.coupling = parse_double_value("coupling", v);
                           }}},
             {"vol", {"--vol", [&](const std::string& v) {
                        synth.vol = parse_double_value("vol", v);
                      }}},
             {"cash-rate-value", {"--cash-rate-value", [&](const std::string& v) {
                                    synth.cash_rate_value =
                                        parse_double_value("cash-rate-value", v);
                                  }}},
             {"seed", {"--seed", [&](const std::string& v) {
                         synth.seed = static_cast<std::uint64_t>(parse_int_value("seed", v));
                       }}}});
      }
      return cmd_synth(synth);
    }
    if (*analyze_cmd) return cmd_analyze(analyze);
    if (*nonlin_cmd) return cmd_nonlinearity(nonlin);
    if (*backtest_cmd) {
      if (!backtest.config_path.empty()) {
        apply_config(
            backtest.config_path, backtest_cmd,
            {{"window", {"--window", [&](const std::string& v) {
                           backtest.window = static_cast<int>(parse_int_value("window", v));
                         }}},
             {"rebalance", {"--rebalance", [&](const std::string& v) {
                              backtest.rebalance =
                                  static_cast<int>(parse_int_value("rebalance", v));
                            }}},
             {"bins", {"--bins", [&](const std::string& v) {
                         backtest.bins = static_cast<int>(parse_int_value("bins", v));
                       }}},
             {"surrogates", {"--surrogates", [&](const std::string& v) {
                               backtest.surrogates =
                                   static_cast<int>(parse_int_value("surrogates", v));
                             }}},
             {"surrogate-mode",
              {"--surrogate-mode", [&](const std::string& v) { backtest.surrogate_mode = v; }}},
             {"strategy", {"--strategy", [&](const std::string& v) { backtest.strategy = v; }}},
             {"sharpe", {"--sharpe", [&](const std::string& v) { backtest.sharpe = v; }}},
             {"seed", {"--seed", [&](const std::string& v) {
                         backtest.seed = static_cast<std::uint64_t>(parse_int_value("seed", v));
                       }}},
             {"s2-strict", {"--s2-strict", [&](const std::string& v) {
                              backtest.s2_strict = v == "1" || v == "true";
                            }}},
             {"fixed-weights",
              {"--fixed-weights", [&](const std::string& v) { backtest.fixed_weights = v; }}},
             {"cash-rate",
              {"--cash-rate", [&](const std::string& v) { backtest.cash_rate_path = v; }}}});
      }
      return cmd_backtest(backtest);
    }
    return 2;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 3;
  } catch (const ValidationError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 3;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
}

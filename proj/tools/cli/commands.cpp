#include "cli/commands.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "ocal/bench.hpp"
#include "ocal/error.hpp"
#include "ocal/folds.hpp"
#include "ocal/metrics.hpp"
#include "ocal/synthetic.hpp"

namespace ocal::cli {

namespace fs = std::filesystem;

namespace {

// Bad flag values detected after CLI11 parsing.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Budget {
  int iterations;
  std::size_t batch;
};

// Per-dataset query budgets of the reference benchmark.
const std::map<std::string, Budget>& known_budgets() {
  static const std::map<std::string, Budget> budgets{
      {"breastw", {40, 1}},    {"cardio", {40, 1}},    {"glass", {40, 1}},
      {"letter", {100, 5}},    {"lympho", {10, 1}},    {"mammography", {50, 30}},
      {"mnist", {40, 10}},     {"musk", {60, 1}},      {"optdigits", {50, 5}},
      {"pendigits", {50, 1}},  {"satellite", {50, 10}}, {"thyroid", {50, 1}},
      {"vowels", {50, 3}},     {"wbc", {20, 1}},       {"wine", {20, 1}},
  };
  return budgets;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::vector<double> parse_doubles(const std::string& text, const std::string& flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
      throw UsageError(flag + ": not a number: '" + tok + "'");
    }
    out.push_back(v);
  }
  if (out.empty()) throw UsageError(flag + ": empty list");
  return out;
}

std::vector<StrategyKind> parse_roster(const std::vector<std::string>& tokens, bool& with_initial) {
  std::vector<StrategyKind> out;
  with_initial = false;
  for (const auto& t : tokens) {
    if (t == "all") {
      out.assign(kAllStrategies.begin(), kAllStrategies.end());
      with_initial = true;
      continue;
    }
    if (t == "initial") {
      with_initial = true;
      continue;
    }
    const auto k = parse_strategy(t);
    if (!k) throw UsageError("unknown strategy '" + t + "'");
    if (std::find(out.begin(), out.end(), *k) == out.end()) out.push_back(*k);
  }
  if (out.empty() && !with_initial) throw UsageError("no strategy given");
  return out;
}

StoppingConfig parse_stop(const std::string& text) {
  StoppingConfig stop;
  if (text.empty()) return stop;
  const auto v = parse_doubles(text, "--stop-thresholds");
  if (v.size() != 2) throw UsageError("--stop-thresholds expects two values t,o");
  stop = {v[0], v[1], true};
  return stop;
}

void write_json(const fs::path& path, const nlohmann::json& j) {
  std::ofstream f(path);
  if (!f) throw Error("cannot write " + path.string());
  f << j.dump(2) << '\n';
}

nlohmann::json trace_json(std::span<const LabeledSample> queried) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& q : queried) arr.push_back({{"id", q.id}, {"label", to_string(q.label)}});
  return arr;
}

// Flags shared by several subcommands.
struct CommonFlags {
  std::string dataset;
  std::optional<double> nu;
  std::optional<double> gamma;
  std::uint64_t seed = 0;
  std::string out = ".";
  std::optional<std::string> nu_grid;
  std::optional<std::string> gamma_grid;
};

void add_hp_flags(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--nu", f.nu, "OCSVM nu (with --gamma, skips the grid search)");
  cmd->add_option("--gamma", f.gamma, "RBF gamma (with --nu, skips the grid search)");
  cmd->add_option("--nu-grid", f.nu_grid, "comma-separated nu grid");
  cmd->add_option("--gamma-grid", f.gamma_grid, "comma-separated gamma grid");
}

// Either both --nu and --gamma, or a grid search.
GridResult resolve_hyperparams(const Dataset& ds, const CommonFlags& f) {
  if (f.nu.has_value() != f.gamma.has_value()) {
    throw UsageError("--nu and --gamma must be given together");
  }
  if (f.nu) {
    GridResult r;
    r.best = {*f.nu, *f.gamma};
    r.best_bacc = std::numeric_limits<double>::quiet_NaN();
    return r;
  }
  const auto nus = f.nu_grid ? parse_doubles(*f.nu_grid, "--nu-grid")
                            : std::vector<double>(kDefaultNuGrid.begin(), kDefaultNuGrid.end());
  const auto gammas = f.gamma_grid ? parse_doubles(*f.gamma_grid, "--gamma-grid")
                                   : std::vector<double>(kDefaultGammaGrid.begin(), kDefaultGammaGrid.end());
  for (double nu : nus) {
    if (!(nu > 0.0 && nu <= 1.0)) throw UsageError("--nu-grid values must lie in (0, 1]");
  }
  for (double g : gammas) {
    if (!(g > 0.0)) throw UsageError("--gamma-grid values must be positive");
  }
  return grid_search(ds, nus, gammas, f.seed);
}

void check_hp(const Hyperparams& hp) {
  if (!(hp.nu > 0.0 && hp.nu <= 1.0)) throw UsageError("--nu must lie in (0, 1]");
  if (!(hp.gamma > 0.0)) throw UsageError("--gamma must be positive");
}

fs::path prepare_out(const std::string& dir) {
  fs::path p(dir);
  fs::create_directories(p);
  return p;
}

int cmd_check(const CommonFlags& f, std::ostream& out) {
  const Dataset ds = load_csv(f.dataset);
  out << ds.name() << ": n=" << ds.size() << " d=" << ds.dim()
      << " targets=" << ds.count(Label::target) << " outliers=" << ds.count(Label::outlier) << '\n';
  return kOk;
}

int cmd_grid(const CommonFlags& f, std::ostream& out) {
  const Dataset ds = load_csv(f.dataset);
  const GridResult g = resolve_hyperparams(ds, f);
  check_hp(g.best);
  nlohmann::json j{{"dataset", ds.name()},
                   {"seed", f.seed},
                   {"nu", g.best.nu},
                   {"gamma", g.best.gamma},
                   {"searched", !g.cells.empty()}};
  if (!g.cells.empty()) {
    j["validation_bacc"] = g.best_bacc;
    nlohmann::json cells = nlohmann::json::array();
    for (const auto& c : g.cells) cells.push_back({{"nu", c.nu}, {"gamma", c.gamma}, {"bacc", c.bacc}});
    j["cells"] = std::move(cells);
  }
  write_json(prepare_out(f.out) / (ds.name() + "_grid.json"), j);
  out << "nu=" << g.best.nu << " gamma=" << g.best.gamma;
  if (!g.cells.empty()) out << " validation_bacc=" << g.best_bacc;
  out << '\n';
  return kOk;
}

struct RunFlags {
  std::vector<std::string> strategies;
  std::optional<int> iterations;
  std::optional<std::size_t> batch;
  int rotation = 0;
  std::string stop;
  std::string oracle = "simulated";
  int lh_ensemble = 10;
  unsigned threads = 0;
};

Budget budget_for(const Dataset& ds, const RunFlags& r) {
  Budget b{40, 1};
  if (auto it = known_budgets().find(lower(ds.name())); it != known_budgets().end()) b = it->second;
  if (r.iterations) b.iterations = *r.iterations;
  if (r.batch) b.batch = *r.batch;
  if (b.iterations < 1) throw UsageError("--iterations must be at least 1");
  if (b.batch < 1) throw UsageError("--batch must be at least 1");
  return b;
}

int cmd_run(const CommonFlags& f, const RunFlags& r, std::istream& in, std::ostream& out) {
  bool with_initial = false;
  const auto roster = parse_roster(r.strategies, with_initial);
  if (roster.size() != 1) throw UsageError("run takes exactly one strategy");
  if (r.rotation < 0 || r.rotation >= kRotations) throw UsageError("--rotation must be in 0..9");
  const StoppingConfig stop = parse_stop(r.stop);
  const Dataset ds = load_csv(f.dataset);
  const Budget budget = budget_for(ds, r);
  const GridResult g = resolve_hyperparams(ds, f);
  check_hp(g.best);

  const FoldPlan plan = make_folds(ds, kRotations, f.seed);
  const SplitView split = rotate_roles(plan, ds, r.rotation);
  RunOptions opts;
  opts.strategy = {roster.front(), run_seed(f.seed, roster.front(), r.rotation), r.lh_ensemble};
  opts.iterations = budget.iterations;
  opts.batch = budget.batch;
  opts.stop = stop;

  std::unique_ptr<Oracle> oracle;
  if (r.oracle == "interactive") {
    oracle = std::make_unique<InteractiveOracle>(ds, in, out);
  } else {
    oracle = std::make_unique<SimulatedOracle>(ds);
  }
  const RunResult res = run(split, ds, g.best, opts, *oracle);

  const std::string token(to_token(roster.front()));
  nlohmann::json j{{"dataset", ds.name()},
                   {"strategy", token},
                   {"rotation", r.rotation},
                   {"nu", g.best.nu},
                   {"gamma", g.best.gamma},
                   {"batch", budget.batch},
                   {"iterations", budget.iterations},
                   {"seed", f.seed},
                   {"bacc_curve", res.bacc_per_iteration},
                   {"queried", trace_json(res.queried)},
                   {"outliers_shown", res.outliers_shown},
                   {"stopped_early", res.stopped_early},
                   {"complete", res.complete}};
  if (!res.complete) j["failure"] = res.failure;
  if (res.final_target_model) j["target_model"] = res.final_target_model->to_json();
  write_json(prepare_out(f.out) / (ds.name() + "_" + token + "_r" + std::to_string(r.rotation) + ".json"), j);
  out << ds.name() << " " << token << " r=" << r.rotation << " iterations=" << res.iterations()
      << " final_bacc=" << res.bacc_per_iteration.back() << " outliers_shown=" << res.outliers_shown
      << (res.stopped_early ? " (stopped early)" : "") << '\n';
  return res.complete ? kOk : kRuntimeFailure;
}

int cmd_bench(const CommonFlags& f, const RunFlags& r, std::ostream& out, std::ostream& err) {
  bool with_initial = false;
  const auto roster = parse_roster(r.strategies, with_initial);
  if (r.oracle != "simulated") throw UsageError("bench only supports the simulated oracle");
  if (!r.stop.empty()) throw UsageError("bench runs fixed budgets; --stop-thresholds applies to run/demo");
  const Dataset ds = load_csv(f.dataset);
  const Budget budget = budget_for(ds, r);
  const GridResult g = resolve_hyperparams(ds, f);
  check_hp(g.best);

  BenchConfig cfg;
  cfg.strategies = roster;
  cfg.include_initial = with_initial;
  cfg.iterations = budget.iterations;
  cfg.batch = budget.batch;
  cfg.hp = g.best;
  cfg.seed = f.seed;
  cfg.lh_ensemble_size = r.lh_ensemble;
  cfg.threads = r.threads;
  const FoldPlan plan = make_folds(ds, kRotations, f.seed);
  const BenchReport report = run_benchmark(ds, plan, cfg);

  const fs::path dir = prepare_out(f.out);
  for (const auto& e : report.entries) {
    write_json(dir / (ds.name() + "_" + e.strategy + ".json"), report_json(report, e));
  }
  {
    std::ofstream table(dir / (ds.name() + "_table.csv"));
    if (!table) throw Error("cannot write table CSV");
    write_table_csv(table, report);
  }
  for (const auto& w : report.warnings) err << "warning: " << w << '\n';
  out << ds.name() << " nu=" << g.best.nu << " gamma=" << g.best.gamma
      << " iterations=" << budget.iterations << " batch=" << budget.batch << '\n';
  write_table_csv(out, report);
  return report.complete() ? kOk : kRuntimeFailure;
}

struct DemoFlags {
  std::string snapshots = "1,12,27";
  std::optional<int> iterations;
  std::string stop;
  std::string oracle = "simulated";
  std::size_t resolution = 200;
};

int cmd_demo(const CommonFlags& f, const DemoFlags& d, std::istream& in, std::ostream& out) {
  std::vector<int> snaps;
  for (double v : parse_doubles(d.snapshots, "--snapshots")) {
    if (v < 1 || v != static_cast<int>(v)) throw UsageError("--snapshots takes positive integers");
    snaps.push_back(static_cast<int>(v));
  }
  std::sort(snaps.begin(), snaps.end());
  snaps.erase(std::unique(snaps.begin(), snaps.end()), snaps.end());
  const int iterations = d.iterations.value_or(snaps.back());
  if (iterations < 1) throw UsageError("--iterations must be at least 1");
  if (f.nu.has_value() != f.gamma.has_value()) throw UsageError("--nu and --gamma must be given together");
  const Hyperparams hp = f.nu ? Hyperparams{*f.nu, *f.gamma} : kDemoHyperparams;
  check_hp(hp);
  if (d.resolution < 2) throw UsageError("--resolution must be at least 2");

  const TwoClusterData demo = gen_two_cluster(f.seed);
  const SplitView split = demo_split(demo);
  RunOptions opts;
  opts.strategy = {StrategyKind::exploration, f.seed, 10};
  opts.iterations = iterations;
  opts.batch = 1;
  opts.stop = parse_stop(d.stop);

  std::unique_ptr<Oracle> oracle;
  if (d.oracle == "interactive") {
    oracle = std::make_unique<InteractiveOracle>(demo.data, in, out);
  } else if (d.oracle == "simulated") {
    oracle = std::make_unique<SimulatedOracle>(demo.data);
  } else {
    throw UsageError("--oracle must be simulated or interactive");
  }

  const fs::path dir = prepare_out(f.out);
  std::vector<LabeledSample> trace;
  std::vector<std::string> written;
  auto observer = [&](int it, const RunState& state, std::span<const LabeledSample> batch) {
    trace.insert(trace.end(), batch.begin(), batch.end());
    if (!std::binary_search(snaps.begin(), snaps.end(), it)) return;
    nlohmann::json j = to_json(boundary_grid(demo.data, state, it, trace, d.resolution));
    j["seed"] = f.seed;
    j["nu"] = hp.nu;
    j["gamma"] = hp.gamma;
    const std::string name = "two_cluster_iter" + std::to_string(it) + ".json";
    write_json(dir / name, j);
    written.push_back(name);
  };
  const RunResult res = run(split, demo.data, hp, opts, *oracle, observer);

  nlohmann::json summary{{"seed", f.seed},
                         {"nu", hp.nu},
                         {"gamma", hp.gamma},
                         {"initial_ids", split.init_ids},
                         {"queried", trace_json(res.queried)},
                         {"bacc_curve", res.bacc_per_iteration},
                         {"outliers_shown", res.outliers_shown},
                         {"stopped_early", res.stopped_early},
                         {"complete", res.complete},
                         {"snapshots", written}};
  write_json(dir / "two_cluster_demo.json", summary);
  out << "demo: iterations=" << res.iterations() << " final_bacc=" << res.bacc_per_iteration.back()
      << " outliers_shown=" << res.outliers_shown << " snapshots=" << written.size() << '\n';
  return res.complete ? kOk : kRuntimeFailure;
}

}  // namespace

BoundaryGrid boundary_grid(const Dataset& ds, const RunState& state, int iteration,
                           std::span<const LabeledSample> queried, std::size_t resolution) {
  if (ds.dim() != 2) throw ContractError("boundary grids need two-dimensional data");
  const Matrix& x = ds.features();
  BoundaryGrid g;
  g.iteration = iteration;
  for (int axis = 0; axis < 2; ++axis) {
    const double lo = x.col(axis).minCoeff();
    const double hi = x.col(axis).maxCoeff();
    const double pad = 0.1 * (hi - lo);
    auto& v = axis == 0 ? g.xs : g.ys;
    v.resize(resolution);
    for (std::size_t k = 0; k < resolution; ++k) {
      v[k] = (lo - pad) + (hi - lo + 2 * pad) * static_cast<double>(k) / static_cast<double>(resolution - 1);
    }
  }
  g.has_outlier_model = state.outlier_model.has_value();
  g.dvt.assign(resolution, std::vector<double>(resolution));
  g.dvo.assign(resolution, std::vector<double>(resolution, 1.0));
  for (std::size_t iy = 0; iy < resolution; ++iy) {
    for (std::size_t ix = 0; ix < resolution; ++ix) {
      const std::array<double, 2> p{g.xs[ix], g.ys[iy]};
      g.dvt[iy][ix] = state.target_model.decision_value(p);
      if (state.outlier_model) g.dvo[iy][ix] = state.outlier_model->decision_value(p);
    }
  }
  for (const auto& q : queried) {
    g.queried_ids.push_back(q.id);
    g.labels.push_back(q.label);
  }
  return g;
}

nlohmann::json to_json(const BoundaryGrid& grid) {
  std::vector<std::string> labels;
  for (Label l : grid.labels) labels.emplace_back(to_string(l));
  return {{"iteration", grid.iteration},
          {"xs", grid.xs},
          {"ys", grid.ys},
          {"dvt", grid.dvt},
          {"dvo", grid.dvo},
          {"outlier_model", grid.has_outlier_model},
          {"queried_ids", grid.queried_ids},
          {"labels", labels}};
}

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Active learning for one-class classification with two one-class SVMs"};
  app.require_subcommand(1);

  CommonFlags common;
  RunFlags runf;
  DemoFlags demof;

  auto* check = app.add_subcommand("check", "Load a dataset CSV and print its summary");
  check->add_option("--dataset", common.dataset, "dataset CSV")->required();

  auto* grid = app.add_subcommand("grid", "Hyperparameter grid search");
  grid->add_option("--dataset", common.dataset, "dataset CSV")->required();
  grid->add_option("--seed", common.seed, "split seed");
  grid->add_option("--out", common.out, "output directory");
  add_hp_flags(grid, common);

  auto add_run_flags = [&](CLI::App* cmd) {
    cmd->add_option("--dataset", common.dataset, "dataset CSV")->required();
    cmd->add_option("--strategy,--strategies", runf.strategies,
                    "random|lh|expected-margin|entropy|outlier|similarity|exploration|all")
        ->delimiter(',')
        ->required();
    cmd->add_option("--iterations", runf.iterations, "query iterations");
    cmd->add_option("--batch", runf.batch, "samples queried per iteration");
    cmd->add_option("--seed", common.seed, "master seed (folds, grid split, strategies)");
    cmd->add_option("--out", common.out, "output directory");
    cmd->add_option("--oracle", runf.oracle, "simulated|interactive")
        ->check(CLI::IsMember({"simulated", "interactive"}));
    cmd->add_option("--stop-thresholds", runf.stop, "enable the stopping rule with thresholds t,o");
    cmd->add_option("--lh-ensemble", runf.lh_ensemble, "ensemble size of the lh strategy");
    add_hp_flags(cmd, common);
  };
  auto* run_cmd = app.add_subcommand("run", "Single active-learning run on one fold rotation");
  add_run_flags(run_cmd);
  run_cmd->add_option("--rotation", runf.rotation, "fold rotation 0..9");

  auto* bench = app.add_subcommand("bench", "Benchmark strategies over all 10 fold rotations");
  add_run_flags(bench);
  bench->add_option("--threads", runf.threads, "worker threads (0 = all cores)");

  auto* demo = app.add_subcommand("demo", "Exploration sampling on the artificial 2-D dataset");
  demo->add_option("--seed", common.seed, "generator seed");
  demo->add_option("--out", common.out, "output directory");
  demo->add_option("--nu", common.nu, "OCSVM nu");
  demo->add_option("--gamma", common.gamma, "RBF gamma");
  demo->add_option("--snapshots", demof.snapshots, "iterations to snapshot, comma-separated");
  demo->add_option("--iterations", demof.iterations, "total iterations (default: last snapshot)");
  demo->add_option("--stop-thresholds", demof.stop, "enable the stopping rule with thresholds t,o");
  demo->add_option("--oracle", demof.oracle, "simulated|interactive")
      ->check(CLI::IsMember({"simulated", "interactive"}));
  demo->add_option("--resolution", demof.resolution, "grid points per axis");

  std::vector<const char*> argv{"ocal"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageError;
  }

  try {
    if (check->parsed()) return cmd_check(common, out);
    if (grid->parsed()) return cmd_grid(common, out);
    if (run_cmd->parsed()) return cmd_run(common, runf, in, out);
    if (bench->parsed()) return cmd_bench(common, runf, out, err);
    if (demo->parsed()) return cmd_demo(common, demof, in, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntimeFailure;
  }
  return kUsageError;
}

}  // namespace ocal::cli

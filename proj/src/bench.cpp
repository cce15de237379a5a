#include "ocal/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include "ocal/error.hpp"
#include "ocal/metrics.hpp"
#include "ocal/rng.hpp"

namespace ocal {

GridResult grid_search(const Dataset& ds, std::span<const double> nu_grid,
                       std::span<const double> gamma_grid, std::uint64_t seed) {
  if (nu_grid.empty() || gamma_grid.empty()) throw ConfigError("hyperparameter grids must be non-empty");
  std::vector<double> nus(nu_grid.begin(), nu_grid.end());
  std::vector<double> gammas(gamma_grid.begin(), gamma_grid.end());
  std::sort(nus.begin(), nus.end());
  std::sort(gammas.begin(), gammas.end());
  nus.erase(std::unique(nus.begin(), nus.end()), nus.end());
  gammas.erase(std::unique(gammas.begin(), gammas.end()), gammas.end());

  std::mt19937_64 rng(seed);
  std::vector<SampleId> train_targets;
  std::vector<SampleId> validation;
  for (Label stratum : {Label::target, Label::outlier}) {
    std::vector<SampleId> ids;
    for (SampleId i = 0; i < ds.size(); ++i) {
      if (ds.label(i) == stratum) ids.push_back(i);
    }
    std::shuffle(ids.begin(), ids.end(), rng);
    const auto cut = static_cast<std::size_t>(std::lround(0.7 * static_cast<double>(ids.size())));
    for (std::size_t k = 0; k < ids.size(); ++k) {
      if (k >= cut) {
        validation.push_back(ids[k]);
      } else if (stratum == Label::target) {
        train_targets.push_back(ids[k]);
      }
    }
  }
  std::sort(train_targets.begin(), train_targets.end());
  std::sort(validation.begin(), validation.end());
  const bool has_target = std::any_of(validation.begin(), validation.end(),
                                      [&](SampleId i) { return ds.label(i) == Label::target; });
  const bool has_outlier = std::any_of(validation.begin(), validation.end(),
                                       [&](SampleId i) { return ds.label(i) == Label::outlier; });
  if (!has_target || !has_outlier || train_targets.empty()) {
    throw ConfigError("grid search split of '" + ds.name() +
                      "' leaves a class missing from training or validation");
  }

  const Matrix x_train = ds.rows(train_targets);
  GridResult result;
  result.best_bacc = -1.0;
  for (double gamma : gammas) {
    for (double nu : nus) {
      const OcsvmModel m = train(x_train, nu, KernelParams(gamma));
      const double score = bacc(evaluate(m, ds, validation));
      result.cells.push_back({nu, gamma, score});
      if (score > result.best_bacc) {
        result.best_bacc = score;
        result.best = {nu, gamma};
      }
    }
  }
  return result;
}

Summary summarize(std::span<const double> values) {
  Summary s;
  double m2 = 0.0;
  for (double v : values) {
    ++s.count;
    const double delta = v - s.mean;
    s.mean += delta / static_cast<double>(s.count);
    m2 += delta * (v - s.mean);
  }
  if (s.count == 0) s.mean = std::numeric_limits<double>::quiet_NaN();
  s.stddev = s.count > 1 ? std::sqrt(m2 / static_cast<double>(s.count - 1)) : 0.0;
  return s;
}

bool StrategyReport::complete() const {
  return rotations.size() == static_cast<std::size_t>(kRotations) &&
         std::all_of(rotations.begin(), rotations.end(), [](const auto& r) { return r.ok; });
}

const StrategyReport* BenchReport::find(std::string_view strategy) const {
  for (const auto& e : entries) {
    if (e.strategy == strategy) return &e;
  }
  return nullptr;
}

bool BenchReport::complete() const {
  return std::all_of(entries.begin(), entries.end(), [](const auto& e) { return e.complete(); });
}

std::uint64_t run_seed(std::uint64_t master, StrategyKind kind, int rotation) {
  return derive_seed(derive_seed(master, static_cast<std::uint64_t>(kind) + 1),
                     static_cast<std::uint64_t>(rotation));
}

unsigned worker_count(unsigned requested) {
  unsigned n = requested != 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("OC_ACTIVE_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && cap >= 1) n = std::min(n, static_cast<unsigned>(cap));
  }
  return n;
}

namespace {

void finalize(StrategyReport& entry, std::vector<std::string>& warnings) {
  std::vector<double> finals;
  for (const auto& r : entry.rotations) {
    if (r.ok && !r.bacc_curve.empty()) {
      finals.push_back(r.bacc_curve.back());
    } else {
      warnings.push_back(entry.strategy + " rotation " + std::to_string(r.rotation) +
                         " excluded: " + r.error);
    }
  }
  entry.final_bacc = summarize(finals);
}

}  // namespace

BenchReport run_benchmark(const Dataset& ds, const FoldPlan& plan, const BenchConfig& cfg) {
  if (cfg.strategies.empty() && !cfg.include_initial) throw ConfigError("no strategies to run");
  if (cfg.iterations < 1) throw ConfigError("iterations must be at least 1");
  if (cfg.batch < 1) throw ConfigError("batch size must be at least 1");

  std::vector<SplitView> splits;
  for (int r = 0; r < kRotations; ++r) splits.push_back(rotate_roles(plan, ds, r));

  BenchReport report;
  report.dataset = ds.name();
  report.config = cfg;
  report.fold_seed = plan.seed;

  const std::size_t n_cols = cfg.strategies.size() + (cfg.include_initial ? 1 : 0);
  report.entries.resize(n_cols);
  std::size_t col = 0;
  if (cfg.include_initial) report.entries[col++].strategy = "initial";
  for (StrategyKind k : cfg.strategies) report.entries[col++].strategy = std::string(to_token(k));
  for (auto& e : report.entries) {
    e.rotations.resize(kRotations);
    for (int r = 0; r < kRotations; ++r) e.rotations[static_cast<std::size_t>(r)].rotation = r;
  }

  // Each task writes only its own slot, so results are schedule-independent.
  const std::size_t n_tasks = n_cols * kRotations;
  auto task = [&](std::size_t t) {
    const std::size_t c = t / kRotations;
    const int r = static_cast<int>(t % kRotations);
    RotationResult& slot = report.entries[c].rotations[static_cast<std::size_t>(r)];
    try {
      if (cfg.include_initial && c == 0) {
        const RunState init = init_run(splits[static_cast<std::size_t>(r)], ds, cfg.hp);
        slot.bacc_curve = {bacc(evaluate(init.target_model, ds, splits[static_cast<std::size_t>(r)].test_ids))};
        return;
      }
      const StrategyKind kind = cfg.strategies[c - (cfg.include_initial ? 1 : 0)];
      RunOptions opts;
      opts.strategy = {kind, run_seed(cfg.seed, kind, r), cfg.lh_ensemble_size};
      opts.iterations = cfg.iterations;
      opts.batch = cfg.batch;
      SimulatedOracle oracle(ds);
      RunResult res = run(splits[static_cast<std::size_t>(r)], ds, cfg.hp, opts, oracle);
      slot.bacc_curve = std::move(res.bacc_per_iteration);
      slot.outliers_shown = res.outliers_shown;
      if (!res.complete) {
        slot.ok = false;
        slot.error = res.failure;
      }
    } catch (const std::exception& e) {
      slot.ok = false;
      slot.error = e.what();
    }
  };

  const unsigned workers = std::min<unsigned>(worker_count(cfg.threads), static_cast<unsigned>(n_tasks));
  if (workers <= 1) {
    for (std::size_t t = 0; t < n_tasks; ++t) task(t);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t t = next++; t < n_tasks; t = next++) task(t);
      });
    }
    for (auto& th : pool) th.join();
  }

  for (auto& e : report.entries) finalize(e, report.warnings);
  return report;
}

nlohmann::json report_json(const BenchReport& report, const StrategyReport& entry) {
  nlohmann::json rotations = nlohmann::json::array();
  for (const auto& r : entry.rotations) {
    nlohmann::json jr{{"r", r.rotation}, {"bacc_curve", r.bacc_curve}, {"outliers_shown", r.outliers_shown}};
    if (!r.ok) jr["error"] = r.error;
    rotations.push_back(std::move(jr));
  }
  nlohmann::json j{{"dataset", report.dataset},
                   {"strategy", entry.strategy},
                   {"nu", report.config.hp.nu},
                   {"gamma", report.config.hp.gamma},
                   {"batch", report.config.batch},
                   {"iterations", report.config.iterations},
                   {"seed", report.config.seed},
                   {"fold_seed", report.fold_seed},
                   {"rotations", std::move(rotations)},
                   {"mean_bacc", entry.final_bacc.mean},
                   {"std_bacc", entry.final_bacc.stddev},
                   {"complete", entry.complete()}};
  if (entry.strategy == "lh") j["lh_ensemble_size"] = report.config.lh_ensemble_size;
  return j;
}

void write_table_csv(std::ostream& out, const BenchReport& report) {
  out << "dataset,strategy,mean_bacc,std_bacc,rotations\n";
  std::ostringstream cell;
  cell << std::fixed << std::setprecision(6);
  for (const auto& e : report.entries) {
    cell.str({});
    cell << e.final_bacc.mean << ',' << e.final_bacc.stddev;
    out << report.dataset << ',' << e.strategy << ',' << cell.str() << ',' << e.final_bacc.count
        << '\n';
  }
}

}  // namespace ocal

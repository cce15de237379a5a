#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "ocal/dataset.hpp"
#include "ocal/engine.hpp"
#include "ocal/folds.hpp"
#include "ocal/state.hpp"
#include "ocal/strategy.hpp"

namespace ocal {

inline constexpr std::array<double, 4> kDefaultNuGrid{0.01, 0.05, 0.1, 0.2};
inline constexpr std::array<double, 6> kDefaultGammaGrid{1.0 / 256, 1.0 / 64, 1.0 / 16,
                                                         1.0 / 4,   1.0,      4.0};

struct GridCell {
  double nu;
  double gamma;
  double bacc;
};

struct GridResult {
  Hyperparams best;
  double best_bacc = 0.0;
  std::vector<GridCell> cells;  // gamma-major, both axes ascending
};

// Stratified 70/30 split; each cell trains on the training part's targets and
// is scored by validation BACC. Ties prefer smaller gamma, then smaller nu.
GridResult grid_search(const Dataset& ds, std::span<const double> nu_grid,
                       std::span<const double> gamma_grid, std::uint64_t seed);

struct Summary {
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation, 0 for fewer than 2 values
  std::size_t count = 0;
};

// Single-pass (Welford) mean and sample standard deviation.
Summary summarize(std::span<const double> values);

struct RotationResult {
  int rotation = 0;
  std::vector<double> bacc_curve;
  std::size_t outliers_shown = 0;
  bool ok = true;
  std::string error;
};

// One report column. `initial` is the pseudo-strategy holding the BACC right
// after initialisation.
struct StrategyReport {
  std::string strategy;
  std::vector<RotationResult> rotations;
  Summary final_bacc;  // over rotations that completed

  bool complete() const;
};

struct BenchConfig {
  std::vector<StrategyKind> strategies;
  bool include_initial = true;
  int iterations = 40;
  std::size_t batch = 1;
  Hyperparams hp;
  std::uint64_t seed = 0;
  int lh_ensemble_size = 10;
  unsigned threads = 0;  // 0: hardware concurrency capped by OC_ACTIVE_THREADS
};

struct BenchReport {
  std::string dataset;
  BenchConfig config;
  std::uint64_t fold_seed = 0;
  std::vector<StrategyReport> entries;
  std::vector<std::string> warnings;

  const StrategyReport* find(std::string_view strategy) const;
  bool complete() const;
};

// Seed of the run for (strategy, rotation); independent of the roster.
std::uint64_t run_seed(std::uint64_t master, StrategyKind kind, int rotation);

// Worker count: `requested` if non-zero, else hardware concurrency; capped by
// the OC_ACTIVE_THREADS environment variable when set.
unsigned worker_count(unsigned requested);

// Every strategy over the 10 role rotations of the plan, with a simulated
// oracle. Failed runs are reported with a warning and left out of the
// summary statistics.
BenchReport run_benchmark(const Dataset& ds, const FoldPlan& plan, const BenchConfig& cfg);

// {dataset, strategy, nu, gamma, batch, iterations, seed, fold_seed,
//  rotations: [{r, bacc_curve, outliers_shown}], mean_bacc, std_bacc, complete}
nlohmann::json report_json(const BenchReport& report, const StrategyReport& entry);

// dataset,strategy,mean_bacc,std_bacc,rotations
void write_table_csv(std::ostream& out, const BenchReport& report);

}  // namespace ocal

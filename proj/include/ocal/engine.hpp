#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ocal/dataset.hpp"
#include "ocal/folds.hpp"
#include "ocal/ocsvm.hpp"
#include "ocal/oracle.hpp"
#include "ocal/state.hpp"
#include "ocal/strategy.hpp"

namespace ocal {

// Stop once every pool sample has DV^t < t_target or DV^o < t_outlier.
struct StoppingConfig {
  double t_target = 0.0;
  double t_outlier = 0.0;
  bool enabled = false;
};

struct LabeledSample {
  SampleId id;
  Label label;

  bool operator==(const LabeledSample&) const = default;
};

// Pools, stored decision values and the two OCCs of one active-learning run.
// The outlier OCC exists once the first outlier has been labeled.
struct RunState {
  PoolState pools;
  DecisionState state;
  OcsvmModel target_model;
  std::optional<OcsvmModel> outlier_model;
};

// T = initial targets, O = {}, U = pool; DV^o = 1 everywhere and DV^t the
// normalised decision values of a target OCC trained on T.
RunState init_run(const SplitView& split, const Dataset& ds, const Hyperparams& hp);

// Moves the batch out of U into T or O. An OCC is retrained (and its decision
// values recomputed on the remaining pool and renormalised) only if the batch
// added samples to its class; the other OCC and its stored values are left
// untouched. Throws ContractError, leaving `run` unchanged, for ids outside U
// or duplicated within the batch.
void apply_labels(RunState& run, std::span<const LabeledSample> batch, const Dataset& ds,
                  const Hyperparams& hp);

bool should_stop(const DecisionState& state, const StoppingConfig& cfg);

struct RunOptions {
  StrategyConfig strategy;
  int iterations = 40;
  std::size_t batch = 1;
  StoppingConfig stop;
};

struct RunResult {
  // Entry 0 is the test BACC before any query; entry i follows iteration i.
  std::vector<double> bacc_per_iteration;
  std::vector<LabeledSample> queried;
  std::size_t outliers_shown = 0;
  std::optional<OcsvmModel> final_target_model;
  bool complete = true;
  bool stopped_early = false;
  std::string failure;

  int iterations() const { return static_cast<int>(bacc_per_iteration.size()) - 1; }
};

// Called after every completed iteration with the updated state.
using IterationObserver =
    std::function<void(int iteration, const RunState& state, std::span<const LabeledSample> batch)>;

// The query loop: score -> select batch -> ask the oracle -> apply labels ->
// record test BACC of the target OCC. An OracleError ends the run with the
// result marked incomplete; other errors propagate.
RunResult run(const SplitView& split, const Dataset& ds, const Hyperparams& hp,
              const RunOptions& opts, Oracle& oracle, const IterationObserver& observer = {});

}  // namespace ocal

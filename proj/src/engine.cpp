#include "ocal/engine.hpp"

#include <algorithm>
#include <string>

#include "ocal/error.hpp"
#include "ocal/metrics.hpp"

namespace ocal {

namespace {

OcsvmModel train_on(const Dataset& ds, std::span<const SampleId> ids, const Hyperparams& hp) {
  return train(ds.rows(ids), hp.nu, KernelParams(hp.gamma));
}

std::vector<double> retest(const OcsvmModel& model, const Dataset& ds,
                           std::span<const SampleId> pool) {
  return normalize_dv(model.decision_values(ds.rows(pool)));
}

void insert_sorted(std::vector<SampleId>& v, SampleId id) {
  v.insert(std::upper_bound(v.begin(), v.end(), id), id);
}

}  // namespace

RunState init_run(const SplitView& split, const Dataset& ds, const Hyperparams& hp) {
  if (split.init_ids.empty()) throw ConfigError("initial training set has no targets");
  PoolState pools;
  pools.targets = split.init_ids;
  pools.unlabeled = split.pool_ids;
  std::sort(pools.targets.begin(), pools.targets.end());
  std::sort(pools.unlabeled.begin(), pools.unlabeled.end());

  OcsvmModel target = train_on(ds, pools.targets, hp);
  DecisionState state;
  state.dvt = retest(target, ds, pools.unlabeled);
  state.dvo.assign(pools.unlabeled.size(), 1.0);
  return RunState{std::move(pools), std::move(state), std::move(target), std::nullopt};
}

void apply_labels(RunState& run, std::span<const LabeledSample> batch, const Dataset& ds,
                  const Hyperparams& hp) {
  auto& pools = run.pools;
  std::vector<bool> leaving(pools.unlabeled.size(), false);
  for (const auto& s : batch) {
    auto it = std::lower_bound(pools.unlabeled.begin(), pools.unlabeled.end(), s.id);
    if (it == pools.unlabeled.end() || *it != s.id) {
      throw ContractError("sample " + std::to_string(s.id) + " is not in the unlabeled pool");
    }
    const auto k = static_cast<std::size_t>(it - pools.unlabeled.begin());
    if (leaving[k]) throw ContractError("sample " + std::to_string(s.id) + " appears twice in batch");
    leaving[k] = true;
  }

  bool new_target = false;
  bool new_outlier = false;
  for (const auto& s : batch) {
    if (s.label == Label::target) {
      insert_sorted(pools.targets, s.id);
      new_target = true;
    } else {
      insert_sorted(pools.outliers, s.id);
      new_outlier = true;
    }
  }
  std::size_t w = 0;
  for (std::size_t k = 0; k < pools.unlabeled.size(); ++k) {
    if (leaving[k]) continue;
    pools.unlabeled[w] = pools.unlabeled[k];
    run.state.dvt[w] = run.state.dvt[k];
    run.state.dvo[w] = run.state.dvo[k];
    ++w;
  }
  pools.unlabeled.resize(w);
  run.state.dvt.resize(w);
  run.state.dvo.resize(w);

  if (new_target) {
    run.target_model = train_on(ds, pools.targets, hp);
    run.state.dvt = retest(run.target_model, ds, pools.unlabeled);
  }
  if (new_outlier) {
    run.outlier_model = train_on(ds, pools.outliers, hp);
    run.state.dvo = retest(*run.outlier_model, ds, pools.unlabeled);
  }
}

bool should_stop(const DecisionState& state, const StoppingConfig& cfg) {
  for (std::size_t k = 0; k < state.dvt.size(); ++k) {
    if (!(state.dvt[k] < cfg.t_target || state.dvo[k] < cfg.t_outlier)) return false;
  }
  return true;
}

RunResult run(const SplitView& split, const Dataset& ds, const Hyperparams& hp,
              const RunOptions& opts, Oracle& oracle, const IterationObserver& observer) {
  if (opts.iterations < 1) throw ConfigError("iterations must be at least 1");
  if (opts.batch < 1) throw ConfigError("batch size must be at least 1");
  opts.strategy.validate();

  RunResult result;
  RunState state = init_run(split, ds, hp);
  result.bacc_per_iteration.push_back(bacc(evaluate(state.target_model, ds, split.test_ids)));

  for (int it = 1; it <= opts.iterations; ++it) {
    if (state.pools.unlabeled.empty()) break;
    if (opts.stop.enabled && should_stop(state.state, opts.stop)) {
      result.stopped_early = true;
      break;
    }
    const ScoringContext ctx{ds,
                             state.pools,
                             state.state,
                             state.target_model,
                             state.outlier_model ? &*state.outlier_model : nullptr,
                             hp,
                             static_cast<std::uint64_t>(it)};
    const auto ids = select_batch(score_pool(opts.strategy, ctx), opts.batch);

    std::vector<LabeledSample> labeled;
    labeled.reserve(ids.size());
    try {
      for (SampleId id : ids) labeled.push_back({id, oracle.label_of(id)});
    } catch (const OracleError& e) {
      result.complete = false;
      result.failure = e.what();
      break;
    }
    apply_labels(state, labeled, ds, hp);
    for (const auto& s : labeled) {
      result.queried.push_back(s);
      result.outliers_shown += s.label == Label::outlier;
    }
    result.bacc_per_iteration.push_back(bacc(evaluate(state.target_model, ds, split.test_ids)));
    if (observer) observer(it, state, labeled);
  }
  result.final_target_model = state.target_model;
  return result;
}

}  // namespace ocal

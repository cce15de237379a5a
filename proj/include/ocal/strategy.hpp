#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "ocal/dataset.hpp"
#include "ocal/ocsvm.hpp"
#include "ocal/state.hpp"

namespace ocal {

enum class StrategyKind { random, lh, expected_margin, entropy, outlier, similarity, exploration };

// Report column order.
inline constexpr std::array<StrategyKind, 7> kAllStrategies{
    StrategyKind::random,  StrategyKind::lh,         StrategyKind::expected_margin,
    StrategyKind::entropy, StrategyKind::outlier,    StrategyKind::similarity,
    StrategyKind::exploration};

// CLI tokens: random | lh | expected-margin | entropy | outlier | similarity | exploration.
std::string_view to_token(StrategyKind kind);
std::optional<StrategyKind> parse_strategy(std::string_view token);

struct StrategyConfig {
  StrategyKind kind = StrategyKind::exploration;
  std::uint64_t seed = 0;
  int lh_ensemble_size = 10;

  void validate() const;
};

struct ScoredPool {
  std::vector<SampleId> ids;
  std::vector<double> scores;
};

// Scales so the maximum is exactly 1. When no value is positive, divides by
// the largest magnitude instead; an all-zero vector is returned unchanged.
std::vector<double> normalize_dv(std::span<const double> dv);

// Exploration sampling: DV^t * DV^o.
inline double agg_exploration(double dvt, double dvo) { return dvt * dvo; }
// Similarity sampling: -|DV^t - DV^o| on normalised values.
inline double agg_similarity(double dvt, double dvo) { return -std::abs(dvt - dvo); }

// Everything a strategy may look at. Nothing here is modified by scoring.
struct ScoringContext {
  const Dataset& data;
  const PoolState& pools;
  const DecisionState& state;
  const OcsvmModel& target_model;
  const OcsvmModel* outlier_model = nullptr;
  Hyperparams hp;
  std::uint64_t round = 0;  // iteration counter, mixed into per-call random streams
};

// Higher score = queried earlier. Scores are aligned with pools.unlabeled.
ScoredPool score_pool(const StrategyConfig& cfg, const ScoringContext& ctx);

// The min(b, |pool|) highest-scoring ids, ties broken by lower id.
std::vector<SampleId> select_batch(const ScoredPool& sp, std::size_t b);

}  // namespace ocal

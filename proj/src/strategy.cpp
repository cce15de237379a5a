#include "ocal/strategy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "ocal/error.hpp"
#include "ocal/kde.hpp"
#include "ocal/rng.hpp"

namespace ocal {

namespace {

constexpr std::array<std::pair<StrategyKind, std::string_view>, 7> kTokens{{
    {StrategyKind::random, "random"},
    {StrategyKind::lh, "lh"},
    {StrategyKind::expected_margin, "expected-margin"},
    {StrategyKind::entropy, "entropy"},
    {StrategyKind::outlier, "outlier"},
    {StrategyKind::similarity, "similarity"},
    {StrategyKind::exploration, "exploration"},
}};

std::vector<double> random_scores(const StrategyConfig& cfg, const ScoringContext& ctx) {
  std::mt19937_64 rng(derive_seed(cfg.seed, ctx.round));
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> s(ctx.pools.unlabeled.size());
  for (double& v : s) v = u(rng);
  return s;
}

// Ensemble confidence: members are OCSVMs fit to bootstrap resamples of the
// labeled targets. The estimated label of a pool sample comes from the main
// target OCC; its confidence is the fraction of members that agree with it.
// Estimated targets score 1 - confidence, estimated outliers score confidence.
std::vector<double> lh_scores(const StrategyConfig& cfg, const ScoringContext& ctx) {
  const auto& targets = ctx.pools.targets;
  const auto& pool = ctx.pools.unlabeled;
  const Matrix pool_x = ctx.data.rows(pool);
  const KernelParams kp(ctx.hp.gamma);

  std::mt19937_64 rng(derive_seed(cfg.seed, ctx.round));
  std::uniform_int_distribution<std::size_t> pick(0, targets.size() - 1);
  std::vector<int> votes_outlier(pool.size(), 0);
  std::vector<SampleId> sample(targets.size());
  for (int m = 0; m < cfg.lh_ensemble_size; ++m) {
    for (auto& id : sample) id = targets[pick(rng)];
    const OcsvmModel member = train(ctx.data.rows(sample), ctx.hp.nu, kp);
    const auto dv = member.decision_values(pool_x);
    for (std::size_t k = 0; k < pool.size(); ++k) votes_outlier[k] += dv[k] > 0.0;
  }

  std::vector<double> s(pool.size());
  const double size = static_cast<double>(cfg.lh_ensemble_size);
  for (std::size_t k = 0; k < pool.size(); ++k) {
    const bool est_outlier = ctx.state.dvt[k] > 0.0;
    const double agree = est_outlier ? votes_outlier[k] / size : 1.0 - votes_outlier[k] / size;
    s[k] = est_outlier ? agree : 1.0 - agree;
  }
  return s;
}

// Density ratio p_t / p_u per pool sample, computed in log space so that the
// ratio survives when both densities underflow.
template <typename Score>
std::vector<double> kde_scores(const ScoringContext& ctx, Score&& score) {
  const auto& pool = ctx.pools.unlabeled;
  const KdeModel target_kde = fit_kde(ctx.data.rows(ctx.pools.targets));
  const KdeModel pool_kde = fit_kde(ctx.data.rows(pool));
  std::vector<double> s(pool.size());
  for (std::size_t k = 0; k < pool.size(); ++k) {
    const auto x = ctx.data.row(pool[k]);
    const double log_ratio = target_kde.log_density(x) - pool_kde.log_density(x);
    // Beyond e^30 the posterior is clipped to 1 for every prior in the grid.
    const double ratio = std::exp(std::min(log_ratio, 30.0));
    s[k] = score(ratio, 1.0);
  }
  return s;
}

}  // namespace

std::string_view to_token(StrategyKind kind) {
  for (const auto& [k, token] : kTokens) {
    if (k == kind) return token;
  }
  return "unknown";
}

std::optional<StrategyKind> parse_strategy(std::string_view token) {
  for (const auto& [k, t] : kTokens) {
    if (t == token) return k;
  }
  return std::nullopt;
}

void StrategyConfig::validate() const {
  if (kind == StrategyKind::lh && lh_ensemble_size < 2) {
    throw ConfigError("lh ensemble size must be at least 2, got " +
                      std::to_string(lh_ensemble_size));
  }
}

std::vector<double> normalize_dv(std::span<const double> dv) {
  std::vector<double> out(dv.begin(), dv.end());
  if (out.empty()) return out;
  const double top = *std::max_element(out.begin(), out.end());
  double scale = top;
  if (!(top > 0.0)) {
    scale = 0.0;
    for (double v : out) scale = std::max(scale, std::abs(v));
    if (!(scale > 0.0)) return out;
  }
  for (double& v : out) v /= scale;
  return out;
}

ScoredPool score_pool(const StrategyConfig& cfg, const ScoringContext& ctx) {
  cfg.validate();
  const auto& pool = ctx.pools.unlabeled;
  if (ctx.state.dvt.size() != pool.size() || ctx.state.dvo.size() != pool.size()) {
    throw ContractError("decision state is not aligned with the unlabeled pool");
  }
  ScoredPool sp;
  sp.ids = pool;
  if (pool.empty()) return sp;

  const auto& dvt = ctx.state.dvt;
  const auto& dvo = ctx.state.dvo;
  sp.scores.resize(pool.size());
  switch (cfg.kind) {
    case StrategyKind::exploration:
      for (std::size_t k = 0; k < pool.size(); ++k) sp.scores[k] = agg_exploration(dvt[k], dvo[k]);
      break;
    case StrategyKind::similarity:
      for (std::size_t k = 0; k < pool.size(); ++k) sp.scores[k] = agg_similarity(dvt[k], dvo[k]);
      break;
    case StrategyKind::outlier:
      sp.scores = dvt;
      break;
    case StrategyKind::random:
      sp.scores = random_scores(cfg, ctx);
      break;
    case StrategyKind::lh:
      sp.scores = lh_scores(cfg, ctx);
      break;
    case StrategyKind::expected_margin:
      sp.scores = kde_scores(ctx, [](double pt, double pu) { return -expected_margin_score(pt, pu); });
      break;
    case StrategyKind::entropy:
      sp.scores = kde_scores(ctx, [](double pt, double pu) { return entropy_score(pt, pu); });
      break;
  }
  for (double s : sp.scores) {
    if (!std::isfinite(s)) throw NumericError("non-finite query score");
  }
  return sp;
}

std::vector<SampleId> select_batch(const ScoredPool& sp, std::size_t b) {
  if (b == 0) throw ContractError("batch size must be at least 1");
  if (sp.ids.size() != sp.scores.size()) throw ContractError("scored pool is misaligned");
  std::vector<std::size_t> order(sp.ids.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const std::size_t take = std::min(b, order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take), order.end(),
                    [&](std::size_t a, std::size_t c) {
                      if (sp.scores[a] != sp.scores[c]) return sp.scores[a] > sp.scores[c];
                      return sp.ids[a] < sp.ids[c];
                    });
  std::vector<SampleId> out;
  out.reserve(take);
  for (std::size_t k = 0; k < take; ++k) out.push_back(sp.ids[order[k]]);
  return out;
}

}  // namespace ocal

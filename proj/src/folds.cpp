#include "ocal/folds.hpp"

#include <algorithm>
#include <random>

#include "ocal/error.hpp"

namespace ocal {

namespace {

// Folds receiving the `rem` leftover members of a stratum, evenly spaced
// around the ring from `offset`.
std::vector<int> spread(int rem, int k, int offset) {
  std::vector<int> folds;
  folds.reserve(static_cast<std::size_t>(rem));
  for (int j = 0; j < rem; ++j) folds.push_back((offset + j * k / rem) % k);
  return folds;
}

}  // namespace

FoldPlan make_folds(const Dataset& ds, int k, std::uint64_t seed) {
  if (k < 3) throw ConfigError("fold count must be at least 3, got " + std::to_string(k));
  if (static_cast<std::size_t>(k) > ds.size()) {
    throw ConfigError("fold count " + std::to_string(k) + " exceeds sample count " +
                      std::to_string(ds.size()));
  }

  FoldPlan plan;
  plan.k = k;
  plan.seed = seed;
  plan.fold_of.assign(ds.size(), 0);

  std::mt19937_64 rng(seed);
  std::vector<std::size_t> fold_size(static_cast<std::size_t>(k), 0);

  // Outliers go first so their leftovers can be spread around the ring; the
  // target leftovers then fill the smallest folds, keeping totals within one.
  for (Label stratum : {Label::outlier, Label::target}) {
    std::vector<SampleId> ids;
    for (SampleId i = 0; i < ds.size(); ++i) {
      if (ds.label(i) == stratum) ids.push_back(i);
    }
    if (ids.empty()) {
      throw ConfigError(std::string("no ") + to_string(stratum) + " samples to stratify");
    }
    std::shuffle(ids.begin(), ids.end(), rng);

    const std::size_t full = ids.size() / static_cast<std::size_t>(k) * static_cast<std::size_t>(k);
    for (std::size_t p = 0; p < full; ++p) {
      const int f = static_cast<int>(p % static_cast<std::size_t>(k));
      plan.fold_of[ids[p]] = f + 1;
      ++fold_size[static_cast<std::size_t>(f)];
    }

    const int rem = static_cast<int>(ids.size() - full);
    if (rem == 0) continue;
    std::vector<int> folds;
    if (stratum == Label::outlier) {
      folds = spread(rem, k, 0);
    } else {
      std::vector<int> order(static_cast<std::size_t>(k));
      for (int f = 0; f < k; ++f) order[static_cast<std::size_t>(f)] = f;
      std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return fold_size[static_cast<std::size_t>(a)] < fold_size[static_cast<std::size_t>(b)];
      });
      folds.assign(order.begin(), order.begin() + rem);
    }
    for (int j = 0; j < rem; ++j) {
      const int f = folds[static_cast<std::size_t>(j)];
      plan.fold_of[ids[full + static_cast<std::size_t>(j)]] = f + 1;
      ++fold_size[static_cast<std::size_t>(f)];
    }
  }
  return plan;
}

SplitView rotate_roles(const FoldPlan& plan, const Dataset& ds, int rotation) {
  if (rotation < 0 || rotation >= kRotations) {
    throw ConfigError("rotation must be in 0..9, got " + std::to_string(rotation));
  }
  if (plan.k != kRotations) {
    throw ConfigError("role rotation needs a 10-fold plan, got k=" + std::to_string(plan.k));
  }
  if (plan.fold_of.size() != ds.size()) {
    throw ContractError("fold plan does not match the dataset size");
  }

  // Inverse of sigma_r: real fold f plays role ((f - 1 - r) mod 10) + 1.
  SplitView view;
  view.rotation = rotation;
  for (SampleId i = 0; i < ds.size(); ++i) {
    const int role = ((plan.fold_of[i] - 1 - rotation) % kRotations + kRotations) % kRotations + 1;
    if (role == 1) {
      (ds.label(i) == Label::target ? view.init_ids : view.dropped_ids).push_back(i);
    } else if (role <= 6) {
      view.pool_ids.push_back(i);
    } else {
      view.test_ids.push_back(i);
    }
  }
  return view;
}

}  // namespace ocal

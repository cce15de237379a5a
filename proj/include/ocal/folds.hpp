#pragma once

#include <cstdint>
#include <vector>

#include "ocal/dataset.hpp"

namespace ocal {

// Fold index (1..k) for every sample of a dataset.
struct FoldPlan {
  std::vector<int> fold_of;
  int k = 10;
  std::uint64_t seed = 0;
};

// Role assignment for one circular shift of the fold numbering.
struct SplitView {
  int rotation = 0;
  std::vector<SampleId> init_ids;     // targets of the initial fold
  std::vector<SampleId> pool_ids;     // unlabeled pool
  std::vector<SampleId> test_ids;
  std::vector<SampleId> dropped_ids;  // outliers of the initial fold, ignored
};

inline constexpr int kRotations = 10;

// Stratified partition: each label stratum is shuffled with the seed and dealt
// out so that per-stratum fold sizes differ by at most one. Leftover samples
// of a stratum are spread evenly around the fold ring rather than packed into
// adjacent folds, so sparse outlier classes reach as many rotations' test and
// pool windows as possible.
FoldPlan make_folds(const Dataset& ds, int k, std::uint64_t seed);

// Fold j in 1..10 plays role j under the shift sigma_r(j) = ((j - 1 + r) mod 10) + 1:
// fold sigma_r(1) is the initial set, sigma_r(2..6) the pool, sigma_r(7..10) the test set.
SplitView rotate_roles(const FoldPlan& plan, const Dataset& ds, int rotation);

}  // namespace ocal

#pragma once

#include <cstddef>
#include <vector>

#include "ocal/dataset.hpp"

namespace ocal {

// Hyperparameters shared by the target and the outlier OCC.
struct Hyperparams {
  double nu = 0.1;
  double gamma = 1.0;
};

// Labeled targets, labeled outliers and the unlabeled pool. All three lists
// are kept sorted by id and are pairwise disjoint.
struct PoolState {
  std::vector<SampleId> targets;
  std::vector<SampleId> outliers;
  std::vector<SampleId> unlabeled;

  std::size_t total() const { return targets.size() + outliers.size() + unlabeled.size(); }
};

// Stored, normalised decision values of both OCCs; entry k belongs to
// PoolState::unlabeled[k].
struct DecisionState {
  std::vector<double> dvt;
  std::vector<double> dvo;
};

}  // namespace ocal

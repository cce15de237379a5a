#pragma once

#include <array>
#include <cstdint>

#include "ocal/dataset.hpp"
#include "ocal/folds.hpp"
#include "ocal/state.hpp"

namespace ocal {

// Artificial 2-D dataset: 60 targets in three Gaussian clusters centred at
// (0,0), (4,0), (2,3.5) and 60 outliers in three clusters at (2,-3), (6,2),
// (-2,2.5); 20 samples per cluster, standard deviation 0.6.
struct TwoClusterData {
  Dataset data;
  // One designated starting target per target cluster: the sample closest to
  // its cluster mean.
  std::array<SampleId, 3> initial_targets;
};

TwoClusterData gen_two_cluster(std::uint64_t seed);

// Demo protocol: the three designated targets start the run, every other
// sample forms the pool, and the whole dataset is the test set.
SplitView demo_split(const TwoClusterData& demo);

// OCSVM settings used for the demo unless overridden.
inline constexpr Hyperparams kDemoHyperparams{0.05, 0.1};

}  // namespace ocal

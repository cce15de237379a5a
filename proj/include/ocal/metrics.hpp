#pragma once

#include <cstddef>
#include <span>

#include "ocal/dataset.hpp"
#include "ocal/ocsvm.hpp"

namespace ocal {

// Outliers are the positive class: tn counts correctly classified targets,
// tp correctly classified outliers; n and p are the class totals.
struct ConfusionCounts {
  std::size_t tn = 0;
  std::size_t tp = 0;
  std::size_t n = 0;
  std::size_t p = 0;
};

// 0.5 * (tn/n + tp/p). Throws MetricError when either class is absent.
double bacc(const ConfusionCounts& c);

// Margin support vectors have DV = 0 only up to the solver's KKT tolerance,
// so a sample counts as outlier iff DV > kBoundaryTolerance; DV == 0 is a target.
inline constexpr double kBoundaryTolerance = 1e-6;

ConfusionCounts evaluate(const OcsvmModel& model, const Dataset& ds, std::span<const SampleId> ids);
ConfusionCounts evaluate(const OcsvmModel& model, const Dataset& ds);

}  // namespace ocal

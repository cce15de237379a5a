#include "ocal/metrics.hpp"

#include <numeric>
#include <vector>

#include "ocal/error.hpp"

namespace ocal {

double bacc(const ConfusionCounts& c) {
  if (c.n == 0 || c.p == 0) {
    throw MetricError("balanced accuracy needs both targets and outliers (n=" +
                      std::to_string(c.n) + ", p=" + std::to_string(c.p) + ")");
  }
  if (c.tn > c.n || c.tp > c.p) throw ContractError("confusion counts exceed class totals");
  return 0.5 * (static_cast<double>(c.tn) / static_cast<double>(c.n) +
                static_cast<double>(c.tp) / static_cast<double>(c.p));
}

ConfusionCounts evaluate(const OcsvmModel& model, const Dataset& ds, std::span<const SampleId> ids) {
  ConfusionCounts c;
  for (SampleId id : ids) {
    const bool flagged = model.decision_value(ds.row(id)) > kBoundaryTolerance;
    if (ds.label(id) == Label::target) {
      ++c.n;
      c.tn += !flagged;
    } else {
      ++c.p;
      c.tp += flagged;
    }
  }
  return c;
}

ConfusionCounts evaluate(const OcsvmModel& model, const Dataset& ds) {
  std::vector<SampleId> ids(ds.size());
  std::iota(ids.begin(), ids.end(), SampleId{0});
  return evaluate(model, ds, ids);
}

}  // namespace ocal

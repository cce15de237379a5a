#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "ocal/engine.hpp"
#include "ocal/ocsvm.hpp"

namespace ocal::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kRuntimeFailure = 1;
inline constexpr int kUsageError = 2;

// Entry point shared by the `ocal` binary and the tests. Subcommands:
// check, grid, run, bench, demo.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
            std::ostream& err);

// Decision values of both OCCs on a regular grid, plus the run trace up to
// the snapshot. dvt/dvo are indexed [y][x]; dvo is all 1 while no outlier OCC
// exists yet.
struct BoundaryGrid {
  int iteration = 0;
  std::vector<double> xs;
  std::vector<double> ys;
  std::vector<std::vector<double>> dvt;
  std::vector<std::vector<double>> dvo;
  bool has_outlier_model = false;
  std::vector<SampleId> queried_ids;
  std::vector<Label> labels;
};

// Evaluates the run state's models over an n x n grid spanning the data's
// bounding box widened by 10% on every side.
BoundaryGrid boundary_grid(const Dataset& ds, const RunState& state, int iteration,
                           std::span<const LabeledSample> queried, std::size_t resolution = 200);

nlohmann::json to_json(const BoundaryGrid& grid);

}  // namespace ocal::cli

#pragma once

#include <iosfwd>

#include "ocal/dataset.hpp"

namespace ocal {

// Label source for queried samples.
class Oracle {
 public:
  virtual ~Oracle() = default;
  virtual Label label_of(SampleId id) = 0;
};

// Answers from the dataset's ground truth.
class SimulatedOracle final : public Oracle {
 public:
  explicit SimulatedOracle(const Dataset& ds) : ds_(ds) {}
  Label label_of(SampleId id) override { return ds_.label(id); }

 private:
  const Dataset& ds_;
};

// Asks a human: prints the sample id and features, then reads one line, `t` or
// `o` (re-prompting on anything else). End of input raises OracleError.
class InteractiveOracle final : public Oracle {
 public:
  InteractiveOracle(const Dataset& ds, std::istream& in, std::ostream& out)
      : ds_(ds), in_(in), out_(out) {}
  Label label_of(SampleId id) override;

 private:
  const Dataset& ds_;
  std::istream& in_;
  std::ostream& out_;
};

}  // namespace ocal

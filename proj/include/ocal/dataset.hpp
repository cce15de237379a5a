#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace ocal {

// Samples are stored one per row.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using SampleId = std::size_t;

enum class Label : std::uint8_t { target = 0, outlier = 1 };

const char* to_string(Label label);

// Feature matrix plus one ground-truth label per row. Immutable once built;
// the constructor enforces n >= 2, d >= 1, at least one target, finite values.
class Dataset {
 public:
  Dataset(std::string name, Matrix features, std::vector<Label> labels);

  const std::string& name() const { return name_; }
  const Matrix& features() const { return features_; }
  const std::vector<Label>& labels() const { return labels_; }

  std::size_t size() const { return labels_.size(); }
  std::size_t dim() const { return static_cast<std::size_t>(features_.cols()); }
  std::size_t count(Label label) const;

  Label label(SampleId id) const { return labels_.at(id); }
  std::span<const double> row(SampleId id) const;

  // Copies the selected rows, in the given order.
  Matrix rows(std::span<const SampleId> ids) const;

 private:
  std::string name_;
  Matrix features_;
  std::vector<Label> labels_;
};

// CSV layout: header `f0,...,f{d-1},label`, label 0 = target, 1 = outlier.
Dataset parse_csv(std::istream& in, std::string name);
Dataset load_csv(const std::filesystem::path& path);

// Writes with 17 significant digits so that load_csv(save_csv(ds)) == ds.
void write_csv(std::ostream& out, const Dataset& ds);
void save_csv(const std::filesystem::path& path, const Dataset& ds);

}  // namespace ocal

#include "ocal/dataset.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string_view>

#include "ocal/error.hpp"

namespace ocal {

const char* to_string(Label label) {
  return label == Label::target ? "target" : "outlier";
}

Dataset::Dataset(std::string name, Matrix features, std::vector<Label> labels)
    : name_(std::move(name)), features_(std::move(features)), labels_(std::move(labels)) {
  if (static_cast<std::size_t>(features_.rows()) != labels_.size()) {
    throw ValidationError("dataset '" + name_ + "': " + std::to_string(features_.rows()) +
                          " feature rows but " + std::to_string(labels_.size()) + " labels");
  }
  if (features_.cols() < 1) {
    throw ValidationError("dataset '" + name_ + "': needs at least one feature column");
  }
  if (labels_.size() < 2) {
    throw ValidationError("dataset '" + name_ + "': needs at least 2 samples, got " +
                          std::to_string(labels_.size()));
  }
  if (count(Label::target) == 0) {
    throw ValidationError("dataset '" + name_ + "': contains no target samples");
  }
  if (!features_.allFinite()) {
    throw NumericError("dataset '" + name_ + "': non-finite feature value");
  }
}

std::size_t Dataset::count(Label label) const {
  std::size_t c = 0;
  for (Label l : labels_) c += (l == label);
  return c;
}

std::span<const double> Dataset::row(SampleId id) const {
  if (id >= size()) throw ContractError("sample id " + std::to_string(id) + " out of range");
  return {features_.data() + id * dim(), dim()};
}

Matrix Dataset::rows(std::span<const SampleId> ids) const {
  Matrix out(static_cast<Eigen::Index>(ids.size()), features_.cols());
  for (std::size_t k = 0; k < ids.size(); ++k) {
    if (ids[k] >= size()) {
      throw ContractError("sample id " + std::to_string(ids[k]) + " out of range");
    }
    out.row(static_cast<Eigen::Index>(k)) = features_.row(static_cast<Eigen::Index>(ids[k]));
  }
  return out;
}

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = line.find(',', start);
    std::string_view f = line.substr(start, comma == std::string_view::npos ? comma : comma - start);
    while (!f.empty() && (f.front() == ' ' || f.front() == '\t')) f.remove_prefix(1);
    while (!f.empty() && (f.back() == ' ' || f.back() == '\t')) f.remove_suffix(1);
    fields.push_back(f);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

std::string_view chomp(const std::string& line) {
  std::string_view v = line;
  if (!v.empty() && v.back() == '\r') v.remove_suffix(1);
  return v;
}

}  // namespace

Dataset parse_csv(std::istream& in, std::string name) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw ParseError("line 1: missing header row");
  ++line_no;
  std::string_view header = chomp(line);
  if (header.size() >= 3 && static_cast<unsigned char>(header[0]) == 0xEF) header.remove_prefix(3);
  const auto columns = split_fields(header);
  if (columns.size() < 2 || columns.back() != "label") {
    throw ParseError("line 1: header must list feature columns followed by 'label'");
  }
  const std::size_t d = columns.size() - 1;

  std::vector<double> values;
  std::vector<Label> labels;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view text = chomp(line);
    if (text.find_first_not_of(" \t") == std::string_view::npos) continue;
    const auto fields = split_fields(text);
    if (fields.size() != columns.size()) {
      throw ParseError("line " + std::to_string(line_no) + ": expected " +
                       std::to_string(columns.size()) + " fields, got " +
                       std::to_string(fields.size()));
    }
    for (std::size_t j = 0; j < d; ++j) {
      double v = 0.0;
      const char* first = fields[j].data();
      const char* last = first + fields[j].size();
      if (first != last && *first == '+') ++first;
      auto [ptr, ec] = std::from_chars(first, last, v);
      if (fields[j].empty() || ec != std::errc{} || ptr != last) {
        throw ParseError("line " + std::to_string(line_no) + ": column " + std::to_string(j) +
                         ": not a number: '" + std::string(fields[j]) + "'");
      }
      values.push_back(v);
    }
    std::string_view lab = fields.back();
    if (lab == "0") {
      labels.push_back(Label::target);
    } else if (lab == "1") {
      labels.push_back(Label::outlier);
    } else {
      throw SchemaError("line " + std::to_string(line_no) + ": label must be 0 or 1, got '" +
                        std::string(lab) + "'");
    }
  }

  Matrix features(static_cast<Eigen::Index>(labels.size()), static_cast<Eigen::Index>(d));
  std::copy(values.begin(), values.end(), features.data());
  return Dataset(std::move(name), std::move(features), std::move(labels));
}

Dataset load_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  return parse_csv(in, path.stem().string());
}

void write_csv(std::ostream& out, const Dataset& ds) {
  for (std::size_t j = 0; j < ds.dim(); ++j) out << 'f' << j << ',';
  out << "label\n";
  std::ostringstream cell;
  cell << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (SampleId i = 0; i < ds.size(); ++i) {
    for (double v : ds.row(i)) {
      cell.str({});
      cell << v;
      out << cell.str() << ',';
    }
    out << (ds.label(i) == Label::target ? '0' : '1') << '\n';
  }
}

void save_csv(const std::filesystem::path& path, const Dataset& ds) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  write_csv(out, ds);
}

}  // namespace ocal

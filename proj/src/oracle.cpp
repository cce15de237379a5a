#include "ocal/oracle.hpp"

#include <istream>
#include <ostream>
#include <string>

#include "ocal/error.hpp"

namespace ocal {

Label InteractiveOracle::label_of(SampleId id) {
  const auto x = ds_.row(id);
  std::string line;
  while (true) {
    out_ << "sample " << id << ": ";
    for (std::size_t j = 0; j < x.size(); ++j) out_ << (j ? "," : "") << x[j];
    out_ << " — label [t/o]? " << std::flush;
    if (!std::getline(in_, line)) throw OracleError("end of input while waiting for a label");
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    while (!line.empty() && line.front() == ' ') line.erase(line.begin());
    if (line == "t" || line == "T") return Label::target;
    if (line == "o" || line == "O") return Label::outlier;
    out_ << "please answer t (target) or o (outlier)\n";
  }
}

}  // namespace ocal

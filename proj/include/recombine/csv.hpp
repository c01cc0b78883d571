#pragma once

#include <Eigen/Core>
#include <stdexcept>
#include <string>
#include <vector>

namespace recombine {

struct csv_error : std::runtime_error {
  explicit csv_error(const std::string& what, long line)
      : std::runtime_error(what + " (line " + std::to_string(line) + ")"), line_number(line) {}
  long line_number;
};

struct csv_table {
  std::vector<std::string> columns;  // synthesized c0, c1, ... without a header
  Eigen::MatrixXd values;

  // Column index by name; falls back to parsing `name` as a 0-based index.
  Eigen::Index column_index(const std::string& name) const;
};

// Strictly numeric comma-separated values, one point per row; `header` reads
// the first line as column names. Throws csv_error with the offending line.
csv_table read_csv(const std::string& path, bool header);

}  // namespace recombine

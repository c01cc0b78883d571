#include "recombine/csv.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

namespace recombine {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream stream(line);
  while (std::getline(stream, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

double parse_number(const std::string& field, long line) {
  const std::string token = trim(field);
  if (token.empty()) throw csv_error("empty field", line);
  char* end = nullptr;
  const double value = std::strtod(token.c_str(), &end);
  if (end != token.c_str() + token.size()) throw csv_error("not a number: " + token, line);
  return value;
}

}  // namespace

Eigen::Index csv_table::column_index(const std::string& name) const {
  for (std::size_t c = 0; c < columns.size(); ++c)
    if (columns[c] == name) return static_cast<Eigen::Index>(c);
  char* end = nullptr;
  const long idx = std::strtol(name.c_str(), &end, 10);
  if (end == name.c_str() + name.size() && idx >= 0 &&
      idx < static_cast<long>(columns.size()))
    return static_cast<Eigen::Index>(idx);
  throw std::out_of_range("no such column: " + name);
}

csv_table read_csv(const std::string& path, bool header) {
  std::ifstream file(path);
  if (!file) throw csv_error("cannot open " + path, 0);

  csv_table table;
  std::vector<std::vector<double>> rows;
  std::string line;
  long line_number = 0;
  std::size_t width = 0;

  while (std::getline(file, line)) {
    ++line_number;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line);
    if (header && table.columns.empty()) {
      for (const auto& f : fields) table.columns.push_back(trim(f));
      width = fields.size();
      continue;
    }
    if (width == 0) width = fields.size();
    if (fields.size() != width)
      throw csv_error("expected " + std::to_string(width) + " fields, got " +
                          std::to_string(fields.size()),
                      line_number);
    std::vector<double> row;
    row.reserve(width);
    for (const auto& f : fields) row.push_back(parse_number(f, line_number));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw csv_error("no data rows", line_number);

  if (table.columns.empty())
    for (std::size_t c = 0; c < width; ++c) table.columns.push_back("c" + std::to_string(c));

  table.values.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(width));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < width; ++c)
      table.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
  return table;
}

}  // namespace recombine

#include "mvci/dataset.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "mvci/errors.hpp"

namespace mvci {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_cells(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      cells.push_back(trim(line.substr(start)));
      break;
    }
    cells.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return cells;
}

bool parse_double(std::string_view cell, double& out) {
  if (cell.empty()) return false;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace

Dataset::Dataset(std::size_t rows, std::size_t cols, std::vector<double> values,
                 std::vector<std::string> labels)
    : rows_(rows), cols_(cols), values_(std::move(values)), labels_(std::move(labels)) {
  if (rows_ == 0 || cols_ == 0)
    throw InvalidInputError("dataset must have at least one row and one column");
  if (values_.size() != rows_ * cols_)
    throw InvalidInputError("dataset value count does not match rows * cols");
  for (double v : values_)
    if (!std::isfinite(v))
      throw InvalidInputError("dataset entries must be finite");
  if (!labels_.empty()) {
    if (labels_.size() != cols_)
      throw InvalidInputError("label count does not match column count");
    std::unordered_set<std::string> seen;
    for (const auto& label : labels_)
      if (label.empty() || !seen.insert(label).second)
        throw InvalidInputError("column labels must be unique and non-empty");
  }
}

Dataset Dataset::from_csv(std::istream& in) {
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    lines.push_back(line);
  }
  if (lines.empty()) throw InvalidInputError("csv: no data");

  auto first_cells = split_cells(lines.front());
  const std::size_t cols = first_cells.size();

  // A single header row is allowed: any non-numeric cell in the first line.
  bool header = false;
  std::vector<std::string> labels;
  for (auto cell : first_cells) {
    double unused;
    if (!parse_double(cell, unused)) {
      header = true;
      break;
    }
  }
  if (header)
    for (auto cell : first_cells) labels.emplace_back(cell);

  const std::size_t first_data = header ? 1 : 0;
  if (lines.size() <= first_data) throw InvalidInputError("csv: header but no rows");

  std::vector<double> values;
  values.reserve((lines.size() - first_data) * cols);
  for (std::size_t r = first_data; r < lines.size(); ++r) {
    auto cells = split_cells(lines[r]);
    if (cells.size() != cols) {
      std::ostringstream msg;
      msg << "csv: line " << (r + 1) << " has " << cells.size()
          << " cells, expected " << cols;
      throw InvalidInputError(msg.str());
    }
    for (auto cell : cells) {
      double v;
      if (!parse_double(cell, v)) {
        std::ostringstream msg;
        msg << "csv: line " << (r + 1) << ": not a number: '" << std::string(cell) << "'";
        throw InvalidInputError(msg.str());
      }
      if (!std::isfinite(v)) {
        std::ostringstream msg;
        msg << "csv: line " << (r + 1) << ": non-finite value";
        throw InvalidInputError(msg.str());
      }
      values.push_back(v);
    }
  }
  return Dataset(lines.size() - first_data, cols, std::move(values), std::move(labels));
}

Dataset Dataset::from_csv_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInputError("cannot open file: " + path.string());
  return from_csv(in);
}

void Dataset::to_csv(std::ostream& out) const {
  if (!labels_.empty()) {
    for (std::size_t j = 0; j < cols_; ++j)
      out << (j ? "," : "") << labels_[j];
    out << '\n';
  }
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j)
      out << (j ? "," : "") << format_double((*this)(i, j));
    out << '\n';
  }
}

void Dataset::to_csv_file(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw InvalidInputError("cannot open file for writing: " + path.string());
  to_csv(out);
}

std::vector<double> Dataset::column(std::size_t j) const {
  std::vector<double> col(rows_);
  for (std::size_t i = 0; i < rows_; ++i) col[i] = (*this)(i, j);
  return col;
}

}  // namespace mvci

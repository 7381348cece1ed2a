#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace mvci {

// Row-major numeric matrix: n observations of an m-variate quantity.
// Every entry must be finite; column labels, when present, are unique.
class Dataset {
 public:
  Dataset(std::size_t rows, std::size_t cols, std::vector<double> values,
          std::vector<std::string> labels = {});

  // Comma-separated values, '.' decimal point, one observation per line.
  // A single header row is detected by non-numeric cells in the first line.
  static Dataset from_csv(std::istream& in);
  static Dataset from_csv_file(const std::filesystem::path& path);

  void to_csv(std::ostream& out) const;
  void to_csv_file(const std::filesystem::path& path) const;

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double operator()(std::size_t i, std::size_t j) const {
    return values_[i * cols_ + j];
  }

  std::span<const double> row(std::size_t i) const {
    return {values_.data() + i * cols_, cols_};
  }

  std::vector<double> column(std::size_t j) const;

  bool has_labels() const { return !labels_.empty(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<double>& values() const { return values_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
  std::vector<std::string> labels_;  // empty, or exactly cols_ entries
};

}  // namespace mvci

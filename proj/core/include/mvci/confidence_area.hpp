#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mvci/dataset.hpp"

namespace mvci {

// One closed interval per variable; size() is the summed width.
// lower <= upper holds coordinatewise, intervals may be degenerate.
class ConfidenceArea {
 public:
  ConfidenceArea(std::vector<double> lower, std::vector<double> upper);

  std::size_t dims() const { return lower_.size(); }
  double lower(std::size_t j) const { return lower_[j]; }
  double upper(std::size_t j) const { return upper_[j]; }
  double width(std::size_t j) const { return upper_[j] - lower_[j]; }
  double size() const;

  const std::vector<double>& lower_bounds() const { return lower_; }
  const std::vector<double>& upper_bounds() const { return upper_; }

 private:
  std::vector<double> lower_;
  std::vector<double> upper_;
};

// Solver request: discard up to k whole observations, allow at most l
// uncovered positions in every kept observation.
struct SolveParams {
  int k = 0;
  int l = 0;
};

// Throws InvalidInputError unless 0 <= k < n and 0 <= l <= m.
void validate_params(const Dataset& data, const SolveParams& params);

// 0/1 matrix marking the positions an area is required to cover.
// Discarded observations have all-zero rows; kept rows keep >= m - l ones.
class InclusionMask {
 public:
  InclusionMask(std::size_t rows, std::size_t cols, bool initially_included = true);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  bool included(std::size_t i, std::size_t j) const {
    return bits_[i * cols_ + j] != 0;
  }
  void set(std::size_t i, std::size_t j, bool included) {
    bits_[i * cols_ + j] = included ? 1 : 0;
  }

  std::size_t row_count(std::size_t i) const;   // included positions in row i
  bool row_all_zero(std::size_t i) const { return row_count(i) == 0; }

  const std::vector<std::uint8_t>& bits() const { return bits_; }

  friend bool operator==(const InclusionMask&, const InclusionMask&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::uint8_t> bits_;
};

// Row-major bit order, 0 sorts before 1.
bool lex_less(const InclusionMask& a, const InclusionMask& b);

// Positions of x strictly outside the area; boundary values count as inside.
int violation_count(std::span<const double> x, const ConfidenceArea& area);

// Coordinatewise min/max over all observations.
ConfidenceArea envelope(const Dataset& data);

// Fraction of observations with more than l positions outside the area.
double coverage_error(const Dataset& data, const ConfidenceArea& area, int l);

// Tightest area covering every included position. A column with no included
// position gets a degenerate interval at the column minimum.
ConfidenceArea area_from_mask(const Dataset& data, const InclusionMask& mask);

// Mask induced by an area: in-area positions are included, and observations
// with more than l violations are zeroed out entirely.
InclusionMask mask_from_area(const Dataset& data, const ConfidenceArea& area, int l);

}  // namespace mvci

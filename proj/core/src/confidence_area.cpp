#include "mvci/confidence_area.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mvci/errors.hpp"

namespace mvci {

ConfidenceArea::ConfidenceArea(std::vector<double> lower, std::vector<double> upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.empty() || lower_.size() != upper_.size())
    throw InvalidInputError("area bounds must be non-empty and equally sized");
  for (std::size_t j = 0; j < lower_.size(); ++j) {
    if (!std::isfinite(lower_[j]) || !std::isfinite(upper_[j]))
      throw InvalidInputError("area bounds must be finite");
    if (lower_[j] > upper_[j])
      throw InvalidInputError("area lower bound exceeds upper bound");
  }
}

double ConfidenceArea::size() const {
  double total = 0.0;
  for (std::size_t j = 0; j < lower_.size(); ++j) total += upper_[j] - lower_[j];
  return total;
}

void validate_params(const Dataset& data, const SolveParams& params) {
  if (params.k < 0 || static_cast<std::size_t>(params.k) >= data.rows())
    throw InvalidInputError("k must satisfy 0 <= k < n");
  if (params.l < 0 || static_cast<std::size_t>(params.l) > data.cols())
    throw InvalidInputError("l must satisfy 0 <= l <= m");
}

InclusionMask::InclusionMask(std::size_t rows, std::size_t cols, bool initially_included)
    : rows_(rows), cols_(cols), bits_(rows * cols, initially_included ? 1 : 0) {
  if (rows_ == 0 || cols_ == 0)
    throw InvalidInputError("mask must have at least one row and one column");
}

std::size_t InclusionMask::row_count(std::size_t i) const {
  std::size_t c = 0;
  for (std::size_t j = 0; j < cols_; ++j) c += bits_[i * cols_ + j];
  return c;
}

bool lex_less(const InclusionMask& a, const InclusionMask& b) {
  return std::lexicographical_compare(a.bits().begin(), a.bits().end(),
                                      b.bits().begin(), b.bits().end());
}

int violation_count(std::span<const double> x, const ConfidenceArea& area) {
  if (x.size() != area.dims())
    throw InvalidInputError("observation dimension does not match area");
  int v = 0;
  for (std::size_t j = 0; j < x.size(); ++j)
    if (x[j] < area.lower(j) || x[j] > area.upper(j)) ++v;
  return v;
}

ConfidenceArea envelope(const Dataset& data) {
  std::vector<double> lo(data.cols(), std::numeric_limits<double>::infinity());
  std::vector<double> hi(data.cols(), -std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < data.rows(); ++i)
    for (std::size_t j = 0; j < data.cols(); ++j) {
      lo[j] = std::min(lo[j], data(i, j));
      hi[j] = std::max(hi[j], data(i, j));
    }
  return ConfidenceArea(std::move(lo), std::move(hi));
}

double coverage_error(const Dataset& data, const ConfidenceArea& area, int l) {
  if (data.cols() != area.dims())
    throw InvalidInputError("dataset dimension does not match area");
  if (l < 0) throw InvalidInputError("l must be non-negative");
  std::size_t missed = 0;
  for (std::size_t i = 0; i < data.rows(); ++i)
    if (violation_count(data.row(i), area) > l) ++missed;
  return static_cast<double>(missed) / static_cast<double>(data.rows());
}

ConfidenceArea area_from_mask(const Dataset& data, const InclusionMask& mask) {
  if (mask.rows() != data.rows() || mask.cols() != data.cols())
    throw InvalidInputError("mask shape does not match dataset");
  const std::size_t m = data.cols();
  std::vector<double> lo(m, std::numeric_limits<double>::infinity());
  std::vector<double> hi(m, -std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < data.rows(); ++i)
    for (std::size_t j = 0; j < m; ++j)
      if (mask.included(i, j)) {
        lo[j] = std::min(lo[j], data(i, j));
        hi[j] = std::max(hi[j], data(i, j));
      }
  for (std::size_t j = 0; j < m; ++j)
    if (lo[j] > hi[j]) {
      // Column with nothing to cover: degenerate interval at the column minimum.
      double cmin = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < data.rows(); ++i) cmin = std::min(cmin, data(i, j));
      lo[j] = hi[j] = cmin;
    }
  return ConfidenceArea(std::move(lo), std::move(hi));
}

InclusionMask mask_from_area(const Dataset& data, const ConfidenceArea& area, int l) {
  if (data.cols() != area.dims())
    throw InvalidInputError("dataset dimension does not match area");
  InclusionMask mask(data.rows(), data.cols(), false);
  for (std::size_t i = 0; i < data.rows(); ++i) {
    if (violation_count(data.row(i), area) > l) continue;  // discarded: all zero
    for (std::size_t j = 0; j < data.cols(); ++j) {
      double v = data(i, j);
      if (v >= area.lower(j) && v <= area.upper(j)) mask.set(i, j, true);
    }
  }
  return mask;
}

}  // namespace mvci

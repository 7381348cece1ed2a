#pragma once

#include <span>
#include <vector>

#include "mvci/confidence_area.hpp"
#include "mvci/dataset.hpp"

namespace mvci::greedy {

// Doubly linked value orderings of the included rows, one per column.
// End queries and end removals are O(1); removing a row everywhere is O(m).
// Row indices always refer to the original dataset.
class OrderingStructure {
 public:
  // `rows` selects the included observations. `col_order`, when non-empty,
  // is the full-dataset per-column row ordering by (value, row) ascending;
  // passing it skips the per-call sort.
  OrderingStructure(const Dataset& data, std::span<const int> rows,
                    const std::vector<std::vector<int>>* col_order = nullptr);

  int size(int col) const { return count_[col]; }

  // Row at the extreme end of a column: b = false is the low end.
  int first(int col, bool upper) const {
    return upper ? tail_[col] : head_[col];
  }
  // Next row inward from the end; -1 when fewer than two rows remain.
  int second(int col, bool upper) const;

  double value(int row, int col) const { return (*data_)(row, col); }
  // Gap closed by removing the end row: |value(first) - value(second)|.
  double end_gain(int col, bool upper) const;

  bool contains(int row, int col) const {
    return present_[static_cast<std::size_t>(col) * n_ + row] != 0;
  }
  void remove_point(int row, int col);  // unlink in a single column
  void remove_row(int row);             // unlink wherever still present

  std::span<const int> included_rows() const { return rows_; }
  std::size_t n_cols() const { return m_; }

 private:
  const Dataset* data_;
  std::size_t n_ = 0, m_ = 0;
  std::vector<int> next_, prev_;        // (col * n + row), -1 past the ends
  std::vector<int> head_, tail_;        // per column
  std::vector<int> count_;              // per column
  std::vector<std::uint8_t> present_;   // per (col, row)
  std::vector<int> rows_;
};

struct EnvelopeResult {
  ConfidenceArea area;
  InclusionMask mask;                // over the full dataset; excluded rows all-zero
  std::vector<int> removals_per_row; // uncovered positions granted to each row
  bool hit_global_cap = false;       // total removals reached |rows| * l
  OrderingStructure ordering;        // final state, feeds exclude_observation
};

// Shrink the envelope of `rows` by repeatedly cutting the largest end gap.
// Each row gives up at most l positions, a column is never drained below two
// rows, and total removals are capped at |rows| * l. Equal gains pop in
// (column, low-before-high) order; gains are compared at 40-bit mantissa
// precision so representation noise cannot bypass that order.
EnvelopeResult find_envelope(const Dataset& data, std::span<const int> rows, int l);

// Row whose removal shrinks the current area the most: argmax over rows
// occupying column ends of the summed end gains; ties go to the smallest
// row index. Requires at least two included rows.
int exclude_observation(const OrderingStructure& ordering);

struct FitResult {
  ConfidenceArea area;
  InclusionMask mask;
  std::vector<int> excluded_rows;  // in exclusion order
  bool hit_global_cap = false;     // any envelope pass hit its cap
};

// k rounds of envelope shrinking + exclusion, then a final shrink.
FitResult fit(const Dataset& data, const SolveParams& params);

}  // namespace mvci::greedy

#include "mvci/greedy.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <unordered_map>

#include "mvci/errors.hpp"

namespace mvci::greedy {

OrderingStructure::OrderingStructure(const Dataset& data, std::span<const int> rows,
                                     const std::vector<std::vector<int>>* col_order)
    : data_(&data),
      n_(data.rows()),
      m_(data.cols()),
      next_(m_ * n_, -1),
      prev_(m_ * n_, -1),
      head_(m_, -1),
      tail_(m_, -1),
      count_(m_, 0),
      present_(m_ * n_, 0),
      rows_(rows.begin(), rows.end()) {
  if (rows_.empty()) throw InvalidInputError("ordering: need at least one row");
  std::vector<std::uint8_t> in_rows(n_, 0);
  for (int r : rows_) {
    if (r < 0 || static_cast<std::size_t>(r) >= n_)
      throw InvalidInputError("ordering: row index out of range");
    if (in_rows[r]) throw InvalidInputError("ordering: duplicate row index");
    in_rows[r] = 1;
  }
  if (col_order && col_order->size() != m_)
    throw InvalidInputError("ordering: precomputed order has wrong shape");

  std::vector<int> ord;
  ord.reserve(rows_.size());
  for (std::size_t j = 0; j < m_; ++j) {
    ord.clear();
    if (col_order) {
      for (int r : (*col_order)[j])
        if (in_rows[r]) ord.push_back(r);
    } else {
      ord.assign(rows_.begin(), rows_.end());
      std::stable_sort(ord.begin(), ord.end(), [&](int a, int b) {
        double va = data(a, j), vb = data(b, j);
        return va < vb || (va == vb && a < b);
      });
    }
    const std::size_t base = j * n_;
    head_[j] = ord.front();
    tail_[j] = ord.back();
    count_[j] = static_cast<int>(ord.size());
    for (std::size_t t = 0; t < ord.size(); ++t) {
      present_[base + ord[t]] = 1;
      prev_[base + ord[t]] = t > 0 ? ord[t - 1] : -1;
      next_[base + ord[t]] = t + 1 < ord.size() ? ord[t + 1] : -1;
    }
  }
}

int OrderingStructure::second(int col, bool upper) const {
  int f = first(col, upper);
  if (f < 0) return -1;
  const std::size_t idx = static_cast<std::size_t>(col) * n_ + f;
  return upper ? prev_[idx] : next_[idx];
}

double OrderingStructure::end_gain(int col, bool upper) const {
  int f = first(col, upper);
  int s = second(col, upper);
  if (f < 0 || s < 0) throw InvalidInputError("end gain: fewer than two rows");
  return std::abs(value(f, col) - value(s, col));
}

void OrderingStructure::remove_point(int row, int col) {
  const std::size_t idx = static_cast<std::size_t>(col) * n_ + row;
  if (!present_[idx]) throw InvalidInputError("remove: point not present");
  present_[idx] = 0;
  --count_[col];
  int p = prev_[idx], nx = next_[idx];
  if (p >= 0)
    next_[static_cast<std::size_t>(col) * n_ + p] = nx;
  else
    head_[col] = nx;
  if (nx >= 0)
    prev_[static_cast<std::size_t>(col) * n_ + nx] = p;
  else
    tail_[col] = p;
  prev_[idx] = next_[idx] = -1;
}

void OrderingStructure::remove_row(int row) {
  for (std::size_t j = 0; j < m_; ++j)
    if (contains(row, static_cast<int>(j))) remove_point(row, static_cast<int>(j));
  rows_.erase(std::remove(rows_.begin(), rows_.end(), row), rows_.end());
}

namespace {

struct GainEntry {
  double gain;
  int col;
  int upper;  // 0 = low end, 1 = high end
};

// Pop order: gain descending, then column ascending, then low before high.
struct GainLess {
  bool operator()(const GainEntry& a, const GainEntry& b) const {
    if (a.gain != b.gain) return a.gain < b.gain;
    if (a.col != b.col) return a.col > b.col;
    return a.upper > b.upper;
  }
};

// Gains enter the queue rounded to 40 mantissa bits. Mathematically equal
// gaps can differ by a few ulps once decimal inputs are parsed; without the
// rounding that noise would silently override the (column, end) tie order.
// Rounding to a fixed grid is monotone, so distinct gains never swap.
double quantized_gain(double g) {
  if (g <= 0.0) return 0.0;
  int e = 0;
  const double f = std::frexp(g, &e);
  return std::ldexp(std::round(std::ldexp(f, 40)), e - 40);
}

EnvelopeResult shrink_envelope(const Dataset& data, OrderingStructure ord, int l) {
  const std::size_t n = data.rows();
  const std::size_t m = data.cols();
  const long included = static_cast<long>(ord.included_rows().size());
  const long cap = included * l;

  std::vector<int> rmd(n, 0);
  long total = 0;

  std::priority_queue<GainEntry, std::vector<GainEntry>, GainLess> queue;
  for (std::size_t j = 0; j < m; ++j)
    if (ord.size(static_cast<int>(j)) >= 2) {
      queue.push({quantized_gain(ord.end_gain(static_cast<int>(j), false)),
                  static_cast<int>(j), 0});
      queue.push({quantized_gain(ord.end_gain(static_cast<int>(j), true)),
                  static_cast<int>(j), 1});
    }

  while (!queue.empty() && total < cap) {
    GainEntry e = queue.top();
    queue.pop();
    if (ord.size(e.col) < 3) continue;  // keep at least two rows per column
    int row = ord.first(e.col, e.upper != 0);
    if (rmd[row] >= l) continue;  // row budget spent; this end stays frozen
    ord.remove_point(row, e.col);
    ++rmd[row];
    ++total;
    queue.push({quantized_gain(ord.end_gain(e.col, e.upper != 0)), e.col, e.upper});
  }
  const bool cap_hit = cap > 0 && total >= cap;

  std::vector<double> lo(m), hi(m);
  for (std::size_t j = 0; j < m; ++j) {
    lo[j] = ord.value(ord.first(static_cast<int>(j), false), static_cast<int>(j));
    hi[j] = ord.value(ord.first(static_cast<int>(j), true), static_cast<int>(j));
  }
  InclusionMask mask(n, m, false);
  for (int r : ord.included_rows())
    for (std::size_t j = 0; j < m; ++j)
      if (ord.contains(r, static_cast<int>(j))) mask.set(r, j, true);

  return {ConfidenceArea(std::move(lo), std::move(hi)), std::move(mask),
          std::move(rmd), cap_hit, std::move(ord)};
}

}  // namespace

EnvelopeResult find_envelope(const Dataset& data, std::span<const int> rows, int l) {
  if (l < 0 || static_cast<std::size_t>(l) > data.cols())
    throw InvalidInputError("find envelope: l must satisfy 0 <= l <= m");
  return shrink_envelope(data, OrderingStructure(data, rows), l);
}

int exclude_observation(const OrderingStructure& ordering) {
  if (ordering.included_rows().size() < 2)
    throw InvalidInputError("exclude: need at least two included rows");
  const int m = static_cast<int>(ordering.n_cols());

  // Summed end gains per row currently occupying a column end. Accumulation
  // runs in column order, so the sums are reproducible.
  std::unordered_map<int, double> gain;
  for (int j = 0; j < m; ++j) {
    if (ordering.size(j) < 2) continue;
    gain[ordering.first(j, false)] += ordering.end_gain(j, false);
    gain[ordering.first(j, true)] += ordering.end_gain(j, true);
  }
  int best_row = -1;
  double best_gain = -1.0;
  for (const auto& [row, g] : gain)
    if (g > best_gain || (g == best_gain && row < best_row)) {
      best_row = row;
      best_gain = g;
    }
  if (best_row < 0) throw InvalidInputError("exclude: no removable end row");
  return best_row;
}

FitResult fit(const Dataset& data, const SolveParams& params) {
  validate_params(data, params);
  const std::size_t n = data.rows();
  const std::size_t m = data.cols();

  // One global sort; every round filters it by the surviving rows.
  std::vector<std::vector<int>> col_order(m);
  for (std::size_t j = 0; j < m; ++j) {
    col_order[j].resize(n);
    for (std::size_t i = 0; i < n; ++i) col_order[j][i] = static_cast<int>(i);
    std::stable_sort(col_order[j].begin(), col_order[j].end(), [&](int a, int b) {
      double va = data(a, j), vb = data(b, j);
      return va < vb || (va == vb && a < b);
    });
  }

  std::vector<int> included(n);
  for (std::size_t i = 0; i < n; ++i) included[i] = static_cast<int>(i);
  std::vector<int> excluded;
  excluded.reserve(params.k);
  bool cap_hit = false;

  for (int round = 0; round < params.k; ++round) {
    EnvelopeResult env =
        shrink_envelope(data, OrderingStructure(data, included, &col_order), params.l);
    cap_hit = cap_hit || env.hit_global_cap;
    int victim = exclude_observation(env.ordering);
    included.erase(std::find(included.begin(), included.end(), victim));
    excluded.push_back(victim);
  }

  EnvelopeResult env =
      shrink_envelope(data, OrderingStructure(data, included, &col_order), params.l);
  cap_hit = cap_hit || env.hit_global_cap;
  return {std::move(env.area), std::move(env.mask), std::move(excluded), cap_hit};
}

}  // namespace mvci::greedy

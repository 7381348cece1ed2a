#include "mvci/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "mvci/errors.hpp"

namespace mvci::oracle {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double log_choose(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

// Exhaustive state shared by the pruned and unpruned paths.
struct Search {
  const Dataset& data;
  int n, m, k, l;
  bool prune;

  std::vector<int> keep;              // kept rows, ascending
  std::vector<std::uint32_t> choice;  // excluded-position bitmask per kept row
  std::vector<std::uint32_t> emasks;  // all bitmasks with popcount <= l, ascending

  std::vector<double> col_lo, col_hi;
  std::vector<int> col_cnt;
  double partial = 0.0;  // summed widths of currently non-empty columns

  double best_cost = kInf;
  double tie_tol = 0.0;
  bool have_best = false;
  InclusionMask best_mask;
  std::uint64_t nodes = 0;

  Search(const Dataset& d, const SolveParams& p, bool do_prune)
      : data(d),
        n(static_cast<int>(d.rows())),
        m(static_cast<int>(d.cols())),
        k(p.k),
        l(p.l),
        prune(do_prune),
        col_lo(m),
        col_hi(m),
        col_cnt(m),
        best_mask(d.rows(), d.cols(), false) {
    if (l == 0) {
      emasks.push_back(0);
    } else {
      if (m > 30)
        throw InvalidInputError("exhaustive solver supports at most 30 columns");
      for (std::uint32_t mask = 0; mask < (1u << m); ++mask)
        if (std::popcount(mask) <= l) emasks.push_back(mask);
    }
  }

  struct Change {
    int col;
    double lo, hi;
    int cnt;
    double partial;
  };

  void run_subset() {
    std::fill(col_cnt.begin(), col_cnt.end(), 0);
    partial = 0.0;
    choice.assign(keep.size(), 0);
    dfs(0);
  }

  void dfs(std::size_t level) {
    ++nodes;
    // Strictly worse than the incumbent even before completing: no
    // completion can tie, so pruning preserves the lexicographic tie rule.
    if (prune && have_best && partial > best_cost + tie_tol) return;
    if (level == keep.size()) {
      finish_leaf();
      return;
    }
    const int row = keep[level];
    std::vector<Change> undo;
    undo.reserve(m);
    for (std::uint32_t em : emasks) {
      undo.clear();
      for (int j = 0; j < m; ++j) {
        if (em & (1u << j)) continue;
        const double v = data(row, j);
        if (col_cnt[j] == 0) {
          undo.push_back({j, col_lo[j], col_hi[j], 0, partial});
          col_lo[j] = col_hi[j] = v;
          col_cnt[j] = 1;
        } else if (v < col_lo[j] || v > col_hi[j]) {
          undo.push_back({j, col_lo[j], col_hi[j], col_cnt[j], partial});
          partial += std::max(0.0, col_lo[j] - v) + std::max(0.0, v - col_hi[j]);
          col_lo[j] = std::min(col_lo[j], v);
          col_hi[j] = std::max(col_hi[j], v);
          ++col_cnt[j];
        } else {
          undo.push_back({j, col_lo[j], col_hi[j], col_cnt[j], partial});
          ++col_cnt[j];
        }
      }
      choice[level] = em;
      dfs(level + 1);
      for (auto it = undo.rbegin(); it != undo.rend(); ++it) {
        col_lo[it->col] = it->lo;
        col_hi[it->col] = it->hi;
        col_cnt[it->col] = it->cnt;
        partial = it->partial;
      }
    }
  }

  void finish_leaf() {
    const double cost = partial;
    if (have_best) {
      if (cost > best_cost + tie_tol) return;
      if (cost >= best_cost - tie_tol) {
        InclusionMask mask = current_mask();
        if (lex_less(mask, best_mask)) best_mask = std::move(mask);
        return;
      }
    }
    best_cost = cost;
    tie_tol = 1e-12 * (1.0 + std::abs(cost));
    best_mask = current_mask();
    have_best = true;
  }

  InclusionMask current_mask() const {
    InclusionMask mask(data.rows(), data.cols(), false);
    for (std::size_t t = 0; t < keep.size(); ++t)
      for (int j = 0; j < m; ++j)
        if (!(choice[t] & (1u << j))) mask.set(keep[t], j, true);
    return mask;
  }
};

FitResult exhaustive_fit(const Dataset& data, const SolveParams& params, bool prune) {
  const int n = static_cast<int>(data.rows());
  const int k = params.k;
  Search search(data, params, prune);

  // k-subsets of discarded rows in lexicographic order.
  std::vector<int> subset(k);
  for (int i = 0; i < k; ++i) subset[i] = i;
  std::vector<std::uint8_t> discarded(n, 0);
  while (true) {
    std::fill(discarded.begin(), discarded.end(), 0);
    for (int r : subset) discarded[r] = 1;
    search.keep.clear();
    for (int i = 0; i < n; ++i)
      if (!discarded[i]) search.keep.push_back(i);
    search.run_subset();

    int i = k - 1;
    while (i >= 0 && subset[i] == n - k + i) --i;
    if (i < 0) break;
    ++subset[i];
    for (int j = i + 1; j < k; ++j) subset[j] = subset[j - 1] + 1;
  }

  ConfidenceArea area = area_from_mask(data, search.best_mask);
  return {std::move(area), std::move(search.best_mask), search.best_cost,
          search.nodes};
}

// (k + 1)-smallest and (k + 1)-largest summaries of an insert-only multiset;
// both stay sorted ascending. With t elements inserted and t > k, the
// shortest window keeping t - k of them is min_j (top[j] - bot[j]).
struct CappedSelection {
  std::size_t cap;
  std::vector<double> bot, top;

  explicit CappedSelection(std::size_t c) : cap(c) {
    bot.reserve(cap);
    top.reserve(cap + 1);
  }

  void insert(double x) {
    if (bot.size() < cap) {
      bot.insert(std::upper_bound(bot.begin(), bot.end(), x), x);
    } else if (x < bot.back()) {
      bot.insert(std::upper_bound(bot.begin(), bot.end(), x), x);
      bot.pop_back();
    }
    if (top.size() < cap) {
      top.insert(std::upper_bound(top.begin(), top.end(), x), x);
    } else if (x > top.front()) {
      top.insert(std::upper_bound(top.begin(), top.end(), x), x);
      top.erase(top.begin());
    }
  }

  double shortest_window_width() const {
    double best = kInf;
    for (std::size_t j = 0; j < cap; ++j)
      best = std::min(best, top[j] - bot[j]);
    return best;
  }
};

}  // namespace

double estimated_nodes(int n, int m, int k, int l) {
  if (n < 1 || m < 1 || k < 0 || k >= n || l < 0)
    throw InvalidInputError("estimate: need n >= 1, m >= 1, 0 <= k < n, l >= 0");
  double subsets_per_row = 0.0;
  double comb = 1.0;
  for (int s = 0; s <= std::min(l, m); ++s) {
    subsets_per_row += comb;
    comb = comb * (m - s) / (s + 1);
  }
  double log_total = log_choose(n, k) + (n - k) * std::log(subsets_per_row);
  if (log_total > 700.0) return kInf;
  return std::exp(log_total);
}

FitResult fit(const Dataset& data, const SolveParams& params, const Limits& limits) {
  validate_params(data, params);
  const int n = static_cast<int>(data.rows());
  const int m = static_cast<int>(data.cols());
  if (estimated_nodes(n, m, params.k, params.l) > limits.node_budget) {
    if (m == 2 && params.l == 1) return fit_two_col_l1(data, params.k);
    throw BudgetExceededError("exhaustive search exceeds node budget");
  }
  return exhaustive_fit(data, params, true);
}

FitResult fit_unpruned(const Dataset& data, const SolveParams& params,
                       const Limits& limits) {
  validate_params(data, params);
  const int n = static_cast<int>(data.rows());
  const int m = static_cast<int>(data.cols());
  if (estimated_nodes(n, m, params.k, params.l) > limits.node_budget)
    throw BudgetExceededError("exhaustive search exceeds node budget");
  return exhaustive_fit(data, params, false);
}

FitResult fit_two_col_l1(const Dataset& data, int k) {
  if (data.cols() != 2)
    throw InvalidInputError("two-column solver: dataset must have two columns");
  validate_params(data, SolveParams{k, 1});
  const int n = static_cast<int>(data.rows());

  // Rows sorted by the first column; vsu is the second column in that order.
  std::vector<int> sigma(n);
  for (int i = 0; i < n; ++i) sigma[i] = i;
  std::stable_sort(sigma.begin(), sigma.end(), [&](int a, int b) {
    double va = data(a, 0), vb = data(b, 0);
    return va < vb || (va == vb && a < b);
  });
  std::vector<double> us(n), vsu(n);
  for (int i = 0; i < n; ++i) {
    us[i] = data(sigma[i], 0);
    vsu[i] = data(sigma[i], 1);
  }

  // A first-column window keeps rows sigma[p .. n-1-s]; the p + s rows
  // outside it must fit the second column's shortest window after discarding
  // at most k of them entirely.
  double best_cost = kInf;
  int best_p = 0, best_s = 0;
  std::uint64_t nodes = 0;
  CappedSelection prefix(static_cast<std::size_t>(k) + 1);
  for (int p = 0; p <= n; ++p) {
    CappedSelection state = prefix;
    for (int s = 0; s <= n - p; ++s) {
      const int t = p + s;
      const double uw = (t <= n - 1) ? us[n - 1 - s] - us[p] : 0.0;
      double cost;
      if (t <= k)
        cost = uw;  // every misfit can be discarded outright
      else
        cost = uw + state.shortest_window_width();
      ++nodes;
      if (cost < best_cost) {
        best_cost = cost;
        best_p = p;
        best_s = s;
      }
      if (s < n - p) state.insert(vsu[n - 1 - s]);
    }
    if (p < n) prefix.insert(vsu[p]);
  }

  const int t = best_p + best_s;
  double lo0, hi0;
  if (t <= n - 1) {
    lo0 = us[best_p];
    hi0 = us[n - 1 - best_s];
  } else {
    lo0 = hi0 = us[0];  // empty first-column window: degenerate at the minimum
  }
  double lo1, hi1;
  if (t <= k) {
    double cmin = kInf;
    for (int i = 0; i < n; ++i) cmin = std::min(cmin, data(i, 1));
    lo1 = hi1 = cmin;
  } else {
    std::vector<double> misfits;
    misfits.reserve(t);
    for (int i = 0; i < best_p; ++i) misfits.push_back(vsu[i]);
    for (int i = n - best_s; i < n; ++i) misfits.push_back(vsu[i]);
    std::sort(misfits.begin(), misfits.end());
    const int kept = t - k;
    int start = 0;
    double width = misfits[kept - 1] - misfits[0];
    for (int c = 1; c <= t - kept; ++c)
      if (misfits[c + kept - 1] - misfits[c] < width) {
        width = misfits[c + kept - 1] - misfits[c];
        start = c;
      }
    lo1 = misfits[start];
    hi1 = misfits[start + kept - 1];
  }

  ConfidenceArea area({lo0, lo1}, {hi0, hi1});
  InclusionMask mask = mask_from_area(data, area, 1);
  return {std::move(area), std::move(mask), best_cost, nodes};
}

OneSidedResult fit_one_sided(const Dataset& data, int l,
                             std::span<const double> lower,
                             const Limits& limits) {
  const int n = static_cast<int>(data.rows());
  const int m = static_cast<int>(data.cols());
  if (lower.size() != static_cast<std::size_t>(m))
    throw InvalidInputError("one-sided oracle: lower bound size mismatch");
  if (l < 0 || l > m) throw InvalidInputError("one-sided oracle: 0 <= l <= m");

  // Candidate uppers per column: distinct values above the lower bound,
  // widest first, then the lower bound itself.
  std::vector<std::vector<double>> cands(m);
  double search_space = 1.0;
  for (int j = 0; j < m; ++j) {
    std::vector<double> vals;
    for (int i = 0; i < n; ++i)
      if (data(i, j) > lower[j]) vals.push_back(data(i, j));
    std::sort(vals.begin(), vals.end(), std::greater<>());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    vals.push_back(lower[j]);
    search_space *= static_cast<double>(vals.size());
    cands[j] = std::move(vals);
  }
  if (search_space > limits.node_budget)
    throw BudgetExceededError("one-sided search exceeds node budget");

  // Rows pushed above their allowance by choosing candidate c in column j.
  auto rows_above = [&](int j, double c) {
    std::vector<int> rows;
    for (int i = 0; i < n; ++i)
      if (data(i, j) > c) rows.push_back(i);
    return rows;
  };

  std::vector<int> viol(n, 0);
  std::vector<double> upper(m, 0.0), best_upper;
  double best_cost = kInf;
  std::uint64_t nodes = 0;

  auto dfs = [&](auto&& self, int j, double cost) -> void {
    if (cost >= best_cost) return;  // first optimum in scan order is kept
    if (j == m) {
      best_cost = cost;
      best_upper = upper;
      return;
    }
    for (double c : cands[j]) {
      ++nodes;
      auto rows = rows_above(j, c);
      bool ok = true;
      for (int r : rows)
        if (++viol[r] > l) ok = false;
      if (ok) {
        upper[j] = c;
        self(self, j + 1, cost + (c - lower[j]));
      }
      for (int r : rows) --viol[r];
    }
  };
  dfs(dfs, 0, 0.0);

  std::vector<double> lo(lower.begin(), lower.end());
  ConfidenceArea area(std::move(lo), std::move(best_upper));
  return {std::move(area), best_cost, nodes};
}

}  // namespace mvci::oracle

#pragma once

#include <cstdint>
#include <span>

#include "mvci/confidence_area.hpp"
#include "mvci/dataset.hpp"

namespace mvci::oracle {

struct Limits {
  double node_budget = 1e7;
};

// Search-space estimate for the exhaustive solver:
//   C(n, k) * (sum_{s<=l} C(m, s))^(n - k), saturating at infinity.
double estimated_nodes(int n, int m, int k, int l);

struct FitResult {
  ConfidenceArea area;
  InclusionMask mask;
  double cost = 0.0;
  std::uint64_t nodes = 0;
};

// Exhaustive minimum: every k-subset of discarded observations crossed with
// every way to leave at most l positions of each kept observation uncovered.
// Ties resolve to the lexicographically smallest inclusion mask. Instances
// whose estimate exceeds the budget are refused with BudgetExceededError,
// except m == 2, l == 1 which falls through to the polynomial solver below.
FitResult fit(const Dataset& data, const SolveParams& params,
              const Limits& limits = {});

// Same search without cost pruning; validates the pruned path.
FitResult fit_unpruned(const Dataset& data, const SolveParams& params,
                       const Limits& limits = {});

// Exact m == 2, l == 1 solver, polynomial in n: enumerate the first column's
// kept window; rows outside it must be caught by the second column, whose
// best response is the shortest window over their values after discarding at
// most k rows entirely. Ties keep the first optimum in scan order, so the
// mask tie rule of fit() does not apply here.
FitResult fit_two_col_l1(const Dataset& data, int k);

struct OneSidedResult {
  ConfidenceArea area;
  double cost = 0.0;
  std::uint64_t nodes = 0;
};

// Exact one-sided minimum (k = 0): depth-first search over per-column upper
// thresholds drawn from the data values above the fixed lower bounds.
OneSidedResult fit_one_sided(const Dataset& data, int l,
                             std::span<const double> lower,
                             const Limits& limits = {});

}  // namespace mvci::oracle

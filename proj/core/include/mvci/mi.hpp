#pragma once

#include <span>
#include <utility>

#include "mvci/confidence_area.hpp"
#include "mvci/dataset.hpp"

namespace mvci::mi {

// Per-column trimming level shared by all variables.
struct RetentionLevel {
  int drop = 0;  // observations excluded per column
  int kept = 0;  // n - drop
};

// Shortest window over all but `drop` of the sorted values; leftmost window
// on ties. `sorted_values` must be ascending.
std::pair<double, double> shortest_window(std::span<const double> sorted_values,
                                          int drop);

struct FitResult {
  ConfidenceArea area;
  InclusionMask mask;
  RetentionLevel retention;
};

// Largest common drop count r such that at most k observations end up with
// more than l uncovered positions. Feasibility is verified at every probe of
// the binary search, so the returned level is always feasible even when
// feasibility happens to be non-monotone in r.
FitResult fit(const Dataset& data, const SolveParams& params);

// Fixed drop count r = k in every column; no joint feasibility guarantee.
FitResult naive_fit(const Dataset& data, const SolveParams& params);

}  // namespace mvci::mi

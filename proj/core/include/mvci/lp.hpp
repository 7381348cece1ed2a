#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "mvci/confidence_area.hpp"
#include "mvci/dataset.hpp"
#include "mvci/simplex.hpp"

namespace mvci::lp {

enum class LowerBoundRule { ColumnMin, Zero };

// Fixed lower bounds: per-column minimum, or all zeros.
std::vector<double> lower_bounds(const Dataset& data, LowerBoundRule rule);

// One indicator per position strictly above its column's lower bound.
// Within a column, positions are ordered by value descending (ties by row
// ascending); delta is the value gap to the next position down (the lower
// bound after the last), so a monotone 0/1 assignment telescopes to the
// covered width.
struct OneSidedInstance {
  struct Variable {
    int row = 0;
    int col = 0;
    double delta = 0.0;
  };

  std::size_t n = 0, m = 0;
  std::vector<double> lower;
  std::vector<Variable> vars;             // grouped by column, order position
  std::vector<std::vector<int>> order;    // per column: var indices, value desc
  std::vector<int> participation;         // per row: positions above the bound

  static OneSidedInstance build(const Dataset& data, std::vector<double> lower);
};

// min sum(delta * q), q in [0, 1]:
//   cover_i : sum_j q_i(j) >= participation(i) - l    (rows needing coverage)
//   mono    : q is non-decreasing down each column's value order,
//             with equality chained across tied values.
// Warm start q = 1 is always feasible.
LpModel build_model(const OneSidedInstance& inst, int l);

struct FractionalSolution {
  std::vector<double> q;  // by variable index
  double objective = 0.0;
};

FractionalSolution solve_relaxation(const LpModel& model);

// Threshold q* >= 1 / (l + 1): each column keeps the suffix of its value
// order from the first variable at or above the threshold, so the rounded
// set never has holes and every row retains >= m - l positions.
InclusionMask round_solution(const OneSidedInstance& inst,
                             std::span<const double> q, int l);

struct FitResult {
  ConfidenceArea area;
  InclusionMask mask;
  double lp_objective = 0.0;       // fractional optimum
  double rounded_objective = 0.0;  // equals area size above the lower bounds
};

// One-sided area (upper bounds only; k = 0). Rounded cost is at most
// (l + 1) times the fractional optimum.
FitResult fit_one_sided(const Dataset& data, int l,
                        LowerBoundRule rule = LowerBoundRule::ColumnMin);

// CPLEX-LP style text, 12 significant digits.
void write_lp(const LpModel& model, std::ostream& out);

}  // namespace mvci::lp

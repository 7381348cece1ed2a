#include "mvci/calibrate.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "mvci/errors.hpp"

namespace mvci::calibrate {

Result choose_k(const Dataset& train, const Dataset& test, Algorithm solver,
                int l, double alpha) {
  if (solver != Algorithm::Mi && solver != Algorithm::Gr)
    throw InvalidInputError("calibration supports mi and gr only");
  if (train.cols() != test.cols())
    throw InvalidInputError("train and test column counts differ");
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw InvalidInputError("alpha must lie in (0, 1]");
  if (l < 0 || static_cast<std::size_t>(l) > train.cols())
    throw InvalidInputError("l must satisfy 0 <= l <= m");

  const int n = static_cast<int>(train.rows());
  std::map<int, double> evaluated;  // k -> observed miss rate, kept sorted
  auto observe = [&](int k) {
    auto it = evaluated.find(k);
    if (it != evaluated.end()) return it->second;
    FitOutput out = run_fit(solver, train, SolveParams{k, l});
    double a = coverage_error(test, out.area, l);
    evaluated.emplace(k, a);
    return a;
  };
  auto feasible = [&](double a) { return a <= alpha + 1e-12; };

  // Coarse pass: about twenty evenly spread k values including 0 and n - 1.
  std::vector<int> grid;
  for (int i = 0; i < 20; ++i) {
    int k = static_cast<int>(std::lround(i * (n - 1) / 19.0));
    if (grid.empty() || grid.back() != k) grid.push_back(k);
  }
  for (int k : grid) observe(k);

  Result result;
  result.solver = solver;
  result.l = l;
  result.target_alpha = alpha;
  result.n_train = train.rows();
  result.n_test = test.rows();

  if (!feasible(evaluated.at(0))) {
    result.attainable = false;
    result.chosen_k = 0;
  } else {
    int best_grid = 0;
    int next_grid = -1;
    for (int k : grid)
      if (feasible(evaluated.at(k))) best_grid = std::max(best_grid, k);
    for (int k : grid)
      if (k > best_grid && (next_grid < 0 || k < next_grid)) next_grid = k;
    if (next_grid >= 0)
      for (int k = best_grid + 1; k < next_grid; ++k) observe(k);
    int chosen = 0;
    for (const auto& [k, a] : evaluated)
      if (feasible(a)) chosen = std::max(chosen, k);
    result.chosen_k = chosen;
  }
  result.chosen_k_over_n = static_cast<double>(result.chosen_k) / n;
  result.observed_alpha = evaluated.at(result.chosen_k);
  for (const auto& [k, a] : evaluated) {
    result.trace_k.push_back(k);
    result.trace_alpha.push_back(a);
  }
  return result;
}

std::vector<double> alpha_for_allowances(const ConfidenceArea& area,
                                         const Dataset& test,
                                         std::span<const int> ls) {
  std::vector<double> out;
  out.reserve(ls.size());
  for (int l : ls) {
    if (l < 0) throw InvalidInputError("allowance must be non-negative");
    out.push_back(coverage_error(test, area, l));
  }
  return out;
}

}  // namespace mvci::calibrate

#pragma once

#include <span>
#include <vector>

#include "mvci/algorithms.hpp"
#include "mvci/confidence_area.hpp"
#include "mvci/dataset.hpp"

namespace mvci::calibrate {

struct Result {
  Algorithm solver = Algorithm::Mi;
  int l = 0;
  double target_alpha = 0.0;
  int chosen_k = 0;
  double chosen_k_over_n = 0.0;
  double observed_alpha = 0.0;  // at chosen_k, on the test split
  bool attainable = true;       // false: even k = 0 misses the target
  std::vector<int> trace_k;     // every evaluated k, ascending
  std::vector<double> trace_alpha;
  std::size_t n_train = 0, n_test = 0;
};

// Conservative train/test calibration of k for Mi or Gr: coarse grid of
// about 20 k values over [0, n - 1], then a linear refinement above the
// largest feasible grid point. Chosen k is the largest evaluated k whose
// observed miss rate on the test split stays at or below the target.
Result choose_k(const Dataset& train, const Dataset& test, Algorithm solver,
                int l, double alpha);

// Observed miss rate of a fixed area on a test split, one entry per
// requested allowance l.
std::vector<double> alpha_for_allowances(const ConfidenceArea& area,
                                         const Dataset& test,
                                         std::span<const int> ls);

}  // namespace mvci::calibrate

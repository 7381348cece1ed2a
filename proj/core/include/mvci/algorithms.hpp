#pragma once

#include <string>

#include "mvci/confidence_area.hpp"
#include "mvci/dataset.hpp"
#include "mvci/lp.hpp"

namespace mvci {

enum class Algorithm { Mi, Gr, Lp1, Naive, Oracle };

std::string to_string(Algorithm a);
Algorithm algorithm_from_string(const std::string& name);

struct FitOptions {
  lp::LowerBoundRule lp_lower = lp::LowerBoundRule::ColumnMin;
  double oracle_budget = 1e7;
};

struct FitOutput {
  ConfidenceArea area;
  InclusionMask mask;
};

// Uniform dispatch used by the command line tool and the calibration loop.
// Lp1 requires k == 0.
FitOutput run_fit(Algorithm algorithm, const Dataset& data,
                  const SolveParams& params, const FitOptions& options = {});

}  // namespace mvci

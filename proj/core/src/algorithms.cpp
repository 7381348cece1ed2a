#include "mvci/algorithms.hpp"

#include "mvci/errors.hpp"
#include "mvci/greedy.hpp"
#include "mvci/mi.hpp"
#include "mvci/oracle.hpp"

namespace mvci {

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::Mi: return "mi";
    case Algorithm::Gr: return "gr";
    case Algorithm::Lp1: return "lp1";
    case Algorithm::Naive: return "naive";
    case Algorithm::Oracle: return "oracle";
  }
  throw InvalidInputError("unknown algorithm value");
}

Algorithm algorithm_from_string(const std::string& name) {
  if (name == "mi") return Algorithm::Mi;
  if (name == "gr") return Algorithm::Gr;
  if (name == "lp1") return Algorithm::Lp1;
  if (name == "naive") return Algorithm::Naive;
  if (name == "oracle") return Algorithm::Oracle;
  throw InvalidInputError("unknown algorithm: " + name);
}

FitOutput run_fit(Algorithm algorithm, const Dataset& data,
                  const SolveParams& params, const FitOptions& options) {
  switch (algorithm) {
    case Algorithm::Mi: {
      auto r = mi::fit(data, params);
      return {std::move(r.area), std::move(r.mask)};
    }
    case Algorithm::Naive: {
      auto r = mi::naive_fit(data, params);
      return {std::move(r.area), std::move(r.mask)};
    }
    case Algorithm::Gr: {
      auto r = greedy::fit(data, params);
      return {std::move(r.area), std::move(r.mask)};
    }
    case Algorithm::Oracle: {
      auto r = oracle::fit(data, params, {options.oracle_budget});
      return {std::move(r.area), std::move(r.mask)};
    }
    case Algorithm::Lp1: {
      if (params.k != 0)
        throw InvalidInputError("lp1 solves the k = 0 one-sided problem only");
      auto r = lp::fit_one_sided(data, params.l, options.lp_lower);
      return {std::move(r.area), std::move(r.mask)};
    }
  }
  throw InvalidInputError("unknown algorithm value");
}

}  // namespace mvci

#pragma once

#include <string>
#include <vector>

namespace mvci {

// Minimization over box-bounded variables subject to linear rows.
struct LpModel {
  enum class Sense : char { Le, Ge, Eq };

  struct Constraint {
    std::vector<std::pair<int, double>> terms;  // (variable, coefficient)
    Sense sense = Sense::Ge;
    double rhs = 0.0;
    std::string name;
  };

  int num_vars = 0;
  std::vector<double> objective;
  std::vector<double> var_lower, var_upper;  // finite box bounds
  std::vector<Constraint> constraints;
  std::vector<std::string> var_names;
  std::vector<double> warm_start;  // optional feasible point, empty if none
};

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

struct LpSolution {
  LpStatus status = LpStatus::IterationLimit;
  std::vector<double> x;
  double objective = 0.0;
  long iterations = 0;
};

// Dense bounded-variable primal simplex. Sized for the models this library
// builds (up to a few thousand variables); no sparsity exploitation.
// A valid warm start skips phase 1 entirely.
class DenseSimplex {
 public:
  struct Options {
    double tol = 1e-9;
    long max_iterations = 500000;
  };

  DenseSimplex() = default;
  explicit DenseSimplex(Options opts) : opts_(opts) {}
  LpSolution solve(const LpModel& model) const;

 private:
  Options opts_{};
};

}  // namespace mvci

#include "mvci/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mvci/errors.hpp"

namespace mvci {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum VarState : int { kAtLower = 0, kAtUpper = 1, kBasic = 2 };

// Bounded-variable primal simplex on a dense tableau. Rows are equalities
// a.x + s = rhs with one slack each; '>=' slacks live in (-inf, 0], '<=' in
// [0, inf), '=' in [0, 0]. Infeasible starts get one artificial per violated
// row and a phase-1 objective.
struct Tableau {
  int nr = 0;
  int nc = 0;
  std::vector<double> T;     // nr x nc, B^{-1} A
  std::vector<double> xb;    // basic values
  std::vector<int> basic;    // variable per row
  std::vector<int> state;    // per variable
  std::vector<double> lo, hi, cost, d;

  double& at(int r, int c) { return T[static_cast<std::size_t>(r) * nc + c]; }
  double get(int r, int c) const { return T[static_cast<std::size_t>(r) * nc + c]; }

  double nonbasic_value(int j) const { return state[j] == kAtUpper ? hi[j] : lo[j]; }

  void refresh_reduced_costs() {
    d = cost;
    for (int r = 0; r < nr; ++r) {
      const double cb = cost[basic[r]];
      if (cb == 0.0) continue;
      for (int c = 0; c < nc; ++c) d[c] -= cb * get(r, c);
    }
  }
};

struct PivotResult {
  bool optimal = false;
  bool unbounded = false;
};

PivotResult run_simplex(Tableau& t, double tol, long& iterations, long max_iterations) {
  int degenerate_streak = 0;
  bool bland = false;
  while (iterations < max_iterations) {
    // Entering variable: Dantzig rule, Bland's rule while degenerate.
    int enter = -1;
    double best_viol = tol;
    for (int j = 0; j < t.nc; ++j) {
      if (t.state[j] == kBasic) continue;
      if (t.hi[j] - t.lo[j] <= 0.0) continue;  // pinned, never enters
      const double viol = t.state[j] == kAtLower ? -t.d[j] : t.d[j];
      if (viol > best_viol) {
        enter = j;
        best_viol = viol;
        if (bland) break;
      }
    }
    if (enter < 0) return {true, false};

    ++iterations;
    const int dir = t.state[enter] == kAtLower ? 1 : -1;

    // Ratio test: the entering variable moves by delta >= 0 toward its other
    // bound; basic variables move by -dir * T(r, enter) * delta.
    double delta = t.hi[enter] - t.lo[enter];
    int limit_row = -1;
    int leave_state = kAtLower;
    double best_piv = 0.0;
    for (int r = 0; r < t.nr; ++r) {
      const double coef = dir * t.get(r, enter);
      double ratio;
      int to_state;
      if (coef > tol) {
        const double floor = t.lo[t.basic[r]];
        if (floor == -kInf) continue;
        ratio = (t.xb[r] - floor) / coef;
        to_state = kAtLower;
      } else if (coef < -tol) {
        const double ceil = t.hi[t.basic[r]];
        if (ceil == kInf) continue;
        ratio = (ceil - t.xb[r]) / (-coef);
        to_state = kAtUpper;
      } else {
        continue;
      }
      if (ratio < 0.0) ratio = 0.0;  // tolerate slightly out-of-bound basics
      const double mag = std::abs(coef);
      if (ratio < delta - 1e-12) {
        delta = ratio;
        limit_row = r;
        leave_state = to_state;
        best_piv = mag;
      } else if (limit_row >= 0 && ratio <= delta + 1e-12) {
        // Tied step length: stablest pivot normally, smallest leaving
        // variable index under Bland's rule (anti-cycling).
        const bool better = bland ? t.basic[r] < t.basic[limit_row] : mag > best_piv;
        if (better) {
          limit_row = r;
          leave_state = to_state;
          best_piv = mag;
        }
      }
    }

    if (limit_row < 0 && delta == kInf) return {false, true};

    if (delta <= 1e-11) {
      if (++degenerate_streak > 64) bland = true;
    } else {
      degenerate_streak = 0;
      bland = false;
    }

    if (limit_row < 0) {
      // Bound flip, basis unchanged.
      for (int r = 0; r < t.nr; ++r)
        t.xb[r] -= dir * delta * t.get(r, enter);
      t.state[enter] = t.state[enter] == kAtLower ? kAtUpper : kAtLower;
      continue;
    }

    const int leave = t.basic[limit_row];
    const double enter_value = t.nonbasic_value(enter) + dir * delta;
    for (int r = 0; r < t.nr; ++r) {
      if (r == limit_row) continue;
      t.xb[r] -= dir * delta * t.get(r, enter);
    }
    t.xb[limit_row] = enter_value;
    t.basic[limit_row] = enter;
    t.state[enter] = kBasic;
    t.state[leave] = leave_state;

    const double piv = t.at(limit_row, enter);
    const double inv_piv = 1.0 / piv;
    for (int c = 0; c < t.nc; ++c) t.at(limit_row, c) *= inv_piv;
    t.at(limit_row, enter) = 1.0;
    for (int r = 0; r < t.nr; ++r) {
      if (r == limit_row) continue;
      const double f = t.get(r, enter);
      if (f == 0.0) continue;
      for (int c = 0; c < t.nc; ++c) t.at(r, c) -= f * t.get(limit_row, c);
      t.at(r, enter) = 0.0;
    }
    const double dj = t.d[enter];
    if (dj != 0.0) {
      for (int c = 0; c < t.nc; ++c) t.d[c] -= dj * t.get(limit_row, c);
      t.d[enter] = 0.0;
    }

    if (iterations % 512 == 0) t.refresh_reduced_costs();
  }
  return {false, false};
}

}  // namespace

LpSolution DenseSimplex::solve(const LpModel& model) const {
  const int nv = model.num_vars;
  const int nr = static_cast<int>(model.constraints.size());
  if (nv <= 0) throw InvalidInputError("lp: model has no variables");
  if (static_cast<int>(model.objective.size()) != nv ||
      static_cast<int>(model.var_lower.size()) != nv ||
      static_cast<int>(model.var_upper.size()) != nv)
    throw InvalidInputError("lp: objective/bounds size mismatch");
  for (int j = 0; j < nv; ++j) {
    if (!std::isfinite(model.var_lower[j]) || !std::isfinite(model.var_upper[j]))
      throw InvalidInputError("lp: structural bounds must be finite");
    if (model.var_lower[j] > model.var_upper[j])
      throw InvalidInputError("lp: empty variable bound");
  }
  for (const auto& row : model.constraints)
    for (const auto& [v, coef] : row.terms) {
      if (v < 0 || v >= nv) throw InvalidInputError("lp: constraint term out of range");
      if (!std::isfinite(coef) || !std::isfinite(row.rhs))
        throw InvalidInputError("lp: constraint coefficients must be finite");
    }

  const double tol = opts_.tol;
  Tableau t;
  t.nr = nr;
  t.nc = nv + nr;
  t.T.assign(static_cast<std::size_t>(nr) * t.nc, 0.0);
  t.lo.assign(t.nc, 0.0);
  t.hi.assign(t.nc, 0.0);
  t.state.assign(t.nc, kAtLower);
  t.basic.resize(nr);
  t.xb.assign(nr, 0.0);

  for (int j = 0; j < nv; ++j) {
    t.lo[j] = model.var_lower[j];
    t.hi[j] = model.var_upper[j];
  }
  std::vector<double> rhs(nr, 0.0);
  for (int r = 0; r < nr; ++r) {
    const auto& row = model.constraints[r];
    for (const auto& [v, coef] : row.terms) t.at(r, v) += coef;
    const int s = nv + r;
    t.at(r, s) = 1.0;
    switch (row.sense) {
      case LpModel::Sense::Le: t.lo[s] = 0.0; t.hi[s] = kInf; break;
      case LpModel::Sense::Ge: t.lo[s] = -kInf; t.hi[s] = 0.0; break;
      case LpModel::Sense::Eq: t.lo[s] = 0.0; t.hi[s] = 0.0; break;
    }
    rhs[r] = row.rhs;
  }

  // Nonbasic structurals: warm-start bound when the hint sits on one,
  // otherwise the lower bound. Slacks start basic.
  const bool hint = static_cast<int>(model.warm_start.size()) == nv;
  for (int j = 0; j < nv; ++j) {
    if (hint && std::abs(model.warm_start[j] - t.hi[j]) <= 1e-7)
      t.state[j] = kAtUpper;
    else
      t.state[j] = kAtLower;
  }
  for (int r = 0; r < nr; ++r) {
    const int s = nv + r;
    // '>=' slacks are nonbasic at 0 only conceptually; they start basic here.
    t.basic[r] = s;
    t.state[s] = kBasic;
    double v = rhs[r];
    for (int j = 0; j < nv; ++j)
      if (t.at(r, j) != 0.0) v -= t.at(r, j) * t.nonbasic_value(j);
    t.xb[r] = v;
  }

  // Artificials for rows whose basic slack starts out of bounds.
  std::vector<int> artificial_rows;
  for (int r = 0; r < nr; ++r) {
    const int s = nv + r;
    if (t.xb[r] < t.lo[s] - tol || t.xb[r] > t.hi[s] + tol)
      artificial_rows.push_back(r);
  }

  LpSolution sol;
  long iterations = 0;

  if (!artificial_rows.empty()) {
    const int na = static_cast<int>(artificial_rows.size());
    const int old_nc = t.nc;
    Tableau t2;
    t2.nr = nr;
    t2.nc = old_nc + na;
    t2.T.assign(static_cast<std::size_t>(nr) * t2.nc, 0.0);
    for (int r = 0; r < nr; ++r)
      for (int c = 0; c < old_nc; ++c) t2.at(r, c) = t.get(r, c);
    t2.lo = t.lo;
    t2.hi = t.hi;
    t2.state = t.state;
    t2.basic = t.basic;
    t2.xb = t.xb;
    t2.lo.resize(t2.nc, 0.0);
    t2.hi.resize(t2.nc, kInf);
    t2.state.resize(t2.nc, kAtLower);

    for (int a = 0; a < na; ++a) {
      const int r = artificial_rows[a];
      const int s = nv + r;
      const int z = old_nc + a;
      // Park the slack at its nearest bound; the artificial absorbs the rest.
      const double bound = t2.xb[r] < t2.lo[s] ? t2.lo[s] : t2.hi[s];
      const double resid = t2.xb[r] - bound;
      const double sigma = resid > 0.0 ? 1.0 : -1.0;
      t2.state[s] = bound == t2.lo[s] ? kAtLower : kAtUpper;
      t2.at(r, z) = sigma;
      if (sigma < 0.0)
        for (int c = 0; c < t2.nc; ++c) t2.at(r, c) = -t2.at(r, c);
      t2.basic[r] = z;
      t2.xb[r] = std::abs(resid);
    }

    t2.cost.assign(t2.nc, 0.0);
    for (int a = 0; a < na; ++a) t2.cost[old_nc + a] = 1.0;
    t2.refresh_reduced_costs();
    PivotResult p1 = run_simplex(t2, tol, iterations, opts_.max_iterations);
    if (!p1.optimal) {
      sol.status = p1.unbounded ? LpStatus::Unbounded : LpStatus::IterationLimit;
      sol.iterations = iterations;
      return sol;
    }
    double infeasibility = 0.0;
    for (int r = 0; r < nr; ++r)
      if (t2.basic[r] >= old_nc) infeasibility += t2.xb[r];
    if (infeasibility > 1e-7) {
      sol.status = LpStatus::Infeasible;
      sol.iterations = iterations;
      return sol;
    }
    // Pin artificials at zero and switch to the real objective.
    for (int z = old_nc; z < t2.nc; ++z) {
      t2.lo[z] = t2.hi[z] = 0.0;
      if (t2.state[z] != kBasic) t2.state[z] = kAtLower;
    }
    t = std::move(t2);
  }

  t.cost.assign(t.nc, 0.0);
  for (int j = 0; j < nv; ++j) t.cost[j] = model.objective[j];
  t.refresh_reduced_costs();
  PivotResult p2 = run_simplex(t, tol, iterations, opts_.max_iterations);
  sol.iterations = iterations;
  if (!p2.optimal) {
    sol.status = p2.unbounded ? LpStatus::Unbounded : LpStatus::IterationLimit;
    return sol;
  }

  sol.x.assign(nv, 0.0);
  std::vector<int> row_of(t.nc, -1);
  for (int r = 0; r < nr; ++r) row_of[t.basic[r]] = r;
  for (int j = 0; j < nv; ++j) {
    double v = t.state[j] == kBasic ? t.xb[row_of[j]] : t.nonbasic_value(j);
    sol.x[j] = std::clamp(v, model.var_lower[j], model.var_upper[j]);
  }
  sol.objective = 0.0;
  for (int j = 0; j < nv; ++j) sol.objective += model.objective[j] * sol.x[j];
  sol.status = LpStatus::Optimal;
  return sol;
}

}  // namespace mvci

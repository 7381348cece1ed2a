#include "mvci/lp.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <ostream>

#include "mvci/errors.hpp"

namespace mvci::lp {

std::vector<double> lower_bounds(const Dataset& data, LowerBoundRule rule) {
  const std::size_t m = data.cols();
  if (rule == LowerBoundRule::Zero) return std::vector<double>(m, 0.0);
  std::vector<double> lo(m, std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < data.rows(); ++i)
    for (std::size_t j = 0; j < m; ++j) lo[j] = std::min(lo[j], data(i, j));
  return lo;
}

OneSidedInstance OneSidedInstance::build(const Dataset& data,
                                         std::vector<double> lower) {
  if (lower.size() != data.cols())
    throw InvalidInputError("one-sided instance: lower bound size mismatch");
  OneSidedInstance inst;
  inst.n = data.rows();
  inst.m = data.cols();
  inst.lower = std::move(lower);
  inst.order.resize(inst.m);
  inst.participation.assign(inst.n, 0);

  for (std::size_t j = 0; j < inst.m; ++j) {
    std::vector<int> rows;
    for (std::size_t i = 0; i < inst.n; ++i)
      if (data(i, j) > inst.lower[j]) rows.push_back(static_cast<int>(i));
    std::stable_sort(rows.begin(), rows.end(), [&](int a, int b) {
      double va = data(a, j), vb = data(b, j);
      return va > vb || (va == vb && a < b);
    });
    for (std::size_t t = 0; t < rows.size(); ++t) {
      const int i = rows[t];
      const double v = data(i, j);
      const double next =
          t + 1 < rows.size() ? data(rows[t + 1], j) : inst.lower[j];
      inst.order[j].push_back(static_cast<int>(inst.vars.size()));
      inst.vars.push_back({i, static_cast<int>(j), v - next});
      ++inst.participation[i];
    }
  }
  return inst;
}

LpModel build_model(const OneSidedInstance& inst, int l) {
  if (l < 0 || static_cast<std::size_t>(l) > inst.m)
    throw InvalidInputError("one-sided model: 0 <= l <= m");
  LpModel model;
  model.num_vars = static_cast<int>(inst.vars.size());
  model.objective.reserve(inst.vars.size());
  for (const auto& v : inst.vars) model.objective.push_back(v.delta);
  model.var_lower.assign(inst.vars.size(), 0.0);
  model.var_upper.assign(inst.vars.size(), 1.0);
  model.var_names.reserve(inst.vars.size());
  for (const auto& v : inst.vars)
    model.var_names.push_back("q_" + std::to_string(v.row) + "_" +
                              std::to_string(v.col));

  // Coverage: rows with more participating positions than the allowance.
  std::vector<std::vector<int>> row_vars(inst.n);
  for (std::size_t v = 0; v < inst.vars.size(); ++v)
    row_vars[inst.vars[v].row].push_back(static_cast<int>(v));
  for (std::size_t i = 0; i < inst.n; ++i) {
    if (inst.participation[i] <= l) continue;
    LpModel::Constraint c;
    c.sense = LpModel::Sense::Ge;
    c.rhs = inst.participation[i] - l;
    c.name = "cover_" + std::to_string(i);
    for (int v : row_vars[i]) c.terms.push_back({v, 1.0});
    model.constraints.push_back(std::move(c));
  }

  // Monotone down each column's value order; tied values are forced equal.
  for (std::size_t j = 0; j < inst.m; ++j) {
    const auto& ord = inst.order[j];
    for (std::size_t t = 0; t + 1 < ord.size(); ++t) {
      LpModel::Constraint c;
      c.sense = LpModel::Sense::Ge;
      c.rhs = 0.0;
      c.name = "mono_" + std::to_string(j) + "_" + std::to_string(t);
      c.terms = {{ord[t + 1], 1.0}, {ord[t], -1.0}};
      model.constraints.push_back(std::move(c));
      if (inst.vars[ord[t]].delta == 0.0) {
        LpModel::Constraint eq;
        eq.sense = LpModel::Sense::Ge;
        eq.rhs = 0.0;
        eq.name = "tie_" + std::to_string(j) + "_" + std::to_string(t);
        eq.terms = {{ord[t], 1.0}, {ord[t + 1], -1.0}};
        model.constraints.push_back(std::move(eq));
      }
    }
  }

  model.warm_start.assign(inst.vars.size(), 1.0);
  return model;
}

FractionalSolution solve_relaxation(const LpModel& model) {
  if (model.num_vars == 0) return {{}, 0.0};
  DenseSimplex solver;
  LpSolution sol = solver.solve(model);
  if (sol.status != LpStatus::Optimal)
    throw std::runtime_error("lp relaxation did not reach an optimum");
  return {std::move(sol.x), sol.objective};
}

InclusionMask round_solution(const OneSidedInstance& inst,
                             std::span<const double> q, int l) {
  if (q.size() != inst.vars.size())
    throw InvalidInputError("rounding: solution size mismatch");
  if (l < 0) throw InvalidInputError("rounding: l must be non-negative");
  const double threshold = 1.0 / (l + 1) - 1e-9;

  // Non-participating positions sit at or below the lower bound: included.
  InclusionMask mask(inst.n, inst.m, true);
  for (std::size_t j = 0; j < inst.m; ++j) {
    const auto& ord = inst.order[j];
    std::size_t keep_from = ord.size();
    for (std::size_t t = 0; t < ord.size(); ++t)
      if (q[ord[t]] >= threshold) {
        keep_from = t;
        break;
      }
    // Suffix of the value order: never a hole between kept positions.
    for (std::size_t t = 0; t < ord.size(); ++t)
      mask.set(inst.vars[ord[t]].row, j, t >= keep_from);
  }
  return mask;
}

FitResult fit_one_sided(const Dataset& data, int l, LowerBoundRule rule) {
  if (l < 0 || static_cast<std::size_t>(l) > data.cols())
    throw InvalidInputError("one-sided fit: 0 <= l <= m");
  OneSidedInstance inst = OneSidedInstance::build(data, lower_bounds(data, rule));
  LpModel model = build_model(inst, l);
  FractionalSolution frac = solve_relaxation(model);
  InclusionMask mask = round_solution(inst, frac.q, l);

  std::vector<double> upper = inst.lower;
  for (std::size_t j = 0; j < inst.m; ++j)
    for (int v : inst.order[j]) {
      const auto& var = inst.vars[v];
      if (mask.included(var.row, j)) {
        // First kept variable carries the column's largest kept value.
        upper[j] = data(var.row, j);
        break;
      }
    }
  ConfidenceArea area(inst.lower, std::move(upper));
  double rounded = 0.0;
  for (std::size_t j = 0; j < inst.m; ++j) rounded += area.width(j);
  return {std::move(area), std::move(mask), frac.objective, rounded};
}

void write_lp(const LpModel& model, std::ostream& out) {
  auto fmt = [](double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return std::string(buf);
  };
  auto var_name = [&](int v) {
    return model.var_names.size() == static_cast<std::size_t>(model.num_vars)
               ? model.var_names[v]
               : "x" + std::to_string(v);
  };

  out << "Minimize\n obj:";
  bool first = true;
  for (int j = 0; j < model.num_vars; ++j) {
    const double c = model.objective[j];
    if (c == 0.0) continue;
    if (first) {
      out << ' ' << (c < 0 ? "- " : "") << fmt(std::abs(c)) << ' ' << var_name(j);
      first = false;
    } else {
      out << (c < 0 ? " - " : " + ") << fmt(std::abs(c)) << ' ' << var_name(j);
    }
  }
  if (first) out << " 0 " << var_name(0);
  out << "\nSubject To\n";
  for (const auto& row : model.constraints) {
    out << ' ' << row.name << ':';
    bool f = true;
    for (const auto& [v, coef] : row.terms) {
      const double a = std::abs(coef);
      out << (f ? (coef < 0 ? " - " : " ") : (coef < 0 ? " - " : " + "));
      if (a != 1.0) out << fmt(a) << ' ';
      out << var_name(v);
      f = false;
    }
    const char* rel = row.sense == LpModel::Sense::Le
                          ? "<="
                          : row.sense == LpModel::Sense::Ge ? ">=" : "=";
    out << ' ' << rel << ' ' << fmt(row.rhs) << '\n';
  }
  out << "Bounds\n";
  for (int j = 0; j < model.num_vars; ++j)
    out << ' ' << fmt(model.var_lower[j]) << " <= " << var_name(j) << " <= "
        << fmt(model.var_upper[j]) << '\n';
  out << "End\n";
}

}  // namespace mvci::lp

#pragma once

// Independent reference implementations used to validate the library. These
// deliberately avoid the library's own code paths wherever the value under
// test is non-trivial.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "mvci/confidence_area.hpp"
#include "mvci/dataset.hpp"
#include "mvci/rng.hpp"
#include "mvci/simplex.hpp"

namespace testutil {

inline mvci::Dataset make_uniform(std::size_t n, std::size_t m, std::uint64_t seed,
                                  double lo = 0.0, double hi = 1.0) {
  mvci::SeededRng rng(seed);
  std::vector<double> v(n * m);
  for (auto& x : v) x = lo + (hi - lo) * rng.uniform01();
  return mvci::Dataset(n, m, std::move(v));
}

inline mvci::Dataset make_normal(std::size_t n, std::size_t m, std::uint64_t seed) {
  mvci::SeededRng rng(seed);
  std::vector<double> v(n * m);
  for (auto& x : v) x = rng.normal();
  return mvci::Dataset(n, m, std::move(v));
}

// Plain per-column min/max scan.
inline std::pair<std::vector<double>, std::vector<double>> brute_envelope(
    const mvci::Dataset& d) {
  std::vector<double> lo(d.cols(), std::numeric_limits<double>::infinity());
  std::vector<double> hi(d.cols(), -std::numeric_limits<double>::infinity());
  for (std::size_t j = 0; j < d.cols(); ++j)
    for (std::size_t i = 0; i < d.rows(); ++i) {
      lo[j] = std::min(lo[j], d(i, j));
      hi[j] = std::max(hi[j], d(i, j));
    }
  return {lo, hi};
}

// Direct scan over every contiguous window of n - drop sorted values.
inline std::pair<double, double> exhaustive_window(std::vector<double> values,
                                                   int drop) {
  std::sort(values.begin(), values.end());
  const int n = static_cast<int>(values.size());
  const int kept = n - drop;
  double best = std::numeric_limits<double>::infinity();
  int best_start = -1;
  for (int s = 0; s + kept <= n; ++s) {
    double w = values[s + kept - 1] - values[s];
    if (w < best) {
      best = w;
      best_start = s;
    }
  }
  return {values[best_start], values[best_start + kept - 1]};
}

// Summed end gains of a row over sorted column copies: for every column end
// the row occupies, the gap to the second-most-extreme value.
inline double end_gain_by_sorting(const mvci::Dataset& d,
                                  const std::vector<int>& rows, int row) {
  double gain = 0.0;
  for (std::size_t j = 0; j < d.cols(); ++j) {
    std::vector<std::pair<double, int>> vals;
    for (int r : rows) vals.push_back({d(r, j), r});
    std::sort(vals.begin(), vals.end());
    if (vals.size() < 2) continue;
    if (vals.front().second == row) gain += vals[1].first - vals[0].first;
    if (vals.back().second == row)
      gain += vals.back().first - vals[vals.size() - 2].first;
  }
  return gain;
}

// Brute-force LP minimum by vertex enumeration: every choice of num_vars
// active constraints (rows as equalities plus variable bounds) is solved and
// checked. Exponential; tiny models only.
inline std::optional<double> brute_force_lp_min(const mvci::LpModel& m) {
  const int nv = m.num_vars;
  struct Plane {
    std::vector<double> a;
    double b;
  };
  std::vector<Plane> planes;
  for (const auto& row : m.constraints) {
    Plane p{std::vector<double>(nv, 0.0), row.rhs};
    for (auto [v, c] : row.terms) p.a[v] += c;
    planes.push_back(std::move(p));
  }
  for (int j = 0; j < nv; ++j) {
    Plane lo{std::vector<double>(nv, 0.0), m.var_lower[j]};
    lo.a[j] = 1.0;
    planes.push_back(lo);
    Plane hi{std::vector<double>(nv, 0.0), m.var_upper[j]};
    hi.a[j] = 1.0;
    planes.push_back(hi);
  }

  auto feasible = [&](const std::vector<double>& x) {
    for (int j = 0; j < nv; ++j)
      if (x[j] < m.var_lower[j] - 1e-7 || x[j] > m.var_upper[j] + 1e-7) return false;
    for (const auto& row : m.constraints) {
      double lhs = 0.0;
      for (auto [v, c] : row.terms) lhs += c * x[v];
      switch (row.sense) {
        case mvci::LpModel::Sense::Le:
          if (lhs > row.rhs + 1e-7) return false;
          break;
        case mvci::LpModel::Sense::Ge:
          if (lhs < row.rhs - 1e-7) return false;
          break;
        case mvci::LpModel::Sense::Eq:
          if (std::abs(lhs - row.rhs) > 1e-7) return false;
          break;
      }
    }
    return true;
  };

  std::optional<double> best;
  std::vector<int> pick(nv);
  std::function<void(int, int)> rec = [&](int start, int depth) {
    if (depth == nv) {
      // Solve the nv x nv system with partial pivoting.
      std::vector<std::vector<double>> a(nv, std::vector<double>(nv + 1));
      for (int r = 0; r < nv; ++r) {
        for (int c = 0; c < nv; ++c) a[r][c] = planes[pick[r]].a[c];
        a[r][nv] = planes[pick[r]].b;
      }
      for (int c = 0; c < nv; ++c) {
        int piv = -1;
        double mag = 1e-10;
        for (int r = c; r < nv; ++r)
          if (std::abs(a[r][c]) > mag) {
            mag = std::abs(a[r][c]);
            piv = r;
          }
        if (piv < 0) return;  // singular pick
        std::swap(a[c], a[piv]);
        for (int r = 0; r < nv; ++r) {
          if (r == c) continue;
          double f = a[r][c] / a[c][c];
          if (f == 0.0) continue;
          for (int cc = c; cc <= nv; ++cc) a[r][cc] -= f * a[c][cc];
        }
      }
      std::vector<double> x(nv);
      for (int r = 0; r < nv; ++r) x[r] = a[r][nv] / a[r][r];
      if (!feasible(x)) return;
      double obj = 0.0;
      for (int j = 0; j < nv; ++j) obj += m.objective[j] * x[j];
      if (!best || obj < *best) best = obj;
      return;
    }
    for (int p = start; p <= static_cast<int>(planes.size()) - (nv - depth); ++p) {
      pick[depth] = p;
      rec(p + 1, depth + 1);
    }
  };
  rec(0, 0);
  return best;
}

// Exact one-sided integral optimum by direct enumeration: per column, keep a
// suffix of the value order (equivalently choose an upper bound among the
// column's values or the lower bound); a row may lose at most l positions.
inline double enumerate_one_sided_optimum(const mvci::Dataset& d, int l,
                                          const std::vector<double>& lower) {
  const int n = static_cast<int>(d.rows());
  const int m = static_cast<int>(d.cols());
  std::vector<std::vector<double>> uppers(m);
  for (int j = 0; j < m; ++j) {
    std::vector<double> vals;
    for (int i = 0; i < n; ++i)
      if (d(i, j) > lower[j]) vals.push_back(d(i, j));
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    vals.push_back(lower[j]);
    uppers[j] = std::move(vals);
  }
  double best = std::numeric_limits<double>::infinity();
  std::vector<double> u(m);
  std::function<void(int)> rec = [&](int j) {
    if (j == m) {
      for (int i = 0; i < n; ++i) {
        int miss = 0;
        for (int c = 0; c < m; ++c)
          if (d(i, c) > u[c]) ++miss;
        if (miss > l) return;
      }
      double cost = 0.0;
      for (int c = 0; c < m; ++c) cost += u[c] - lower[c];
      best = std::min(best, cost);
      return;
    }
    for (double cand : uppers[j]) {
      u[j] = cand;
      rec(j + 1);
    }
  };
  rec(0);
  return best;
}

// Minimal structural JSON-schema check: type, properties, required, items,
// enum. Enough to pin the shipped schemas to the emitted documents.
inline bool matches_schema(const nlohmann::json& schema, const nlohmann::json& v,
                           std::string* why = nullptr) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  if (schema.contains("enum")) {
    for (const auto& e : schema["enum"])
      if (e == v) return true;
    return fail("value not in enum");
  }
  if (schema.contains("type")) {
    const std::string t = schema["type"].get<std::string>();
    if (t == "object" && !v.is_object()) return fail("expected object");
    if (t == "array" && !v.is_array()) return fail("expected array");
    if (t == "string" && !v.is_string()) return fail("expected string");
    if (t == "number" && !v.is_number()) return fail("expected number");
    if (t == "integer" && !v.is_number_integer()) return fail("expected integer");
    if (t == "boolean" && !v.is_boolean()) return fail("expected boolean");
  }
  if (schema.contains("required"))
    for (const auto& key : schema["required"])
      if (!v.contains(key.get<std::string>()))
        return fail("missing required key: " + key.get<std::string>());
  if (schema.contains("properties") && v.is_object())
    for (auto it = schema["properties"].begin(); it != schema["properties"].end();
         ++it)
      if (v.contains(it.key()) && !matches_schema(it.value(), v.at(it.key()), why))
        return false;
  if (schema.contains("items") && v.is_array())
    for (const auto& item : v)
      if (!matches_schema(schema["items"], item, why)) return false;
  return true;
}

}  // namespace testutil

#include "mvci/mi.hpp"

#include <algorithm>

#include "mvci/errors.hpp"

namespace mvci::mi {
namespace {

std::vector<std::vector<double>> sorted_columns(const Dataset& data) {
  std::vector<std::vector<double>> cols(data.cols());
  for (std::size_t j = 0; j < data.cols(); ++j) {
    cols[j] = data.column(j);
    std::sort(cols[j].begin(), cols[j].end());
  }
  return cols;
}

ConfidenceArea area_at_drop(const Dataset& data,
                            const std::vector<std::vector<double>>& cols,
                            int drop) {
  std::vector<double> lo(data.cols()), hi(data.cols());
  for (std::size_t j = 0; j < data.cols(); ++j) {
    auto [l, u] = shortest_window(cols[j], drop);
    lo[j] = l;
    hi[j] = u;
  }
  return ConfidenceArea(std::move(lo), std::move(hi));
}

int misfit_count(const Dataset& data, const ConfidenceArea& area, int l) {
  int misses = 0;
  for (std::size_t i = 0; i < data.rows(); ++i)
    if (violation_count(data.row(i), area) > l) ++misses;
  return misses;
}

}  // namespace

std::pair<double, double> shortest_window(std::span<const double> sorted_values,
                                          int drop) {
  const int n = static_cast<int>(sorted_values.size());
  if (n == 0) throw InvalidInputError("shortest window: empty values");
  if (drop < 0 || drop >= n)
    throw InvalidInputError("shortest window: drop must satisfy 0 <= drop < n");
  for (int i = 1; i < n; ++i)
    if (sorted_values[i] < sorted_values[i - 1])
      throw InvalidInputError("shortest window: values must be ascending");

  const int kept = n - drop;
  int best_start = 0;
  double best_width = sorted_values[kept - 1] - sorted_values[0];
  for (int start = 1; start <= drop; ++start) {
    double width = sorted_values[start + kept - 1] - sorted_values[start];
    if (width < best_width) {  // strict: leftmost window wins ties
      best_width = width;
      best_start = start;
    }
  }
  return {sorted_values[best_start], sorted_values[best_start + kept - 1]};
}

FitResult fit(const Dataset& data, const SolveParams& params) {
  validate_params(data, params);
  const int n = static_cast<int>(data.rows());
  auto cols = sorted_columns(data);

  auto feasible = [&](int r) {
    return misfit_count(data, area_at_drop(data, cols, r), params.l) <= params.k;
  };

  // r = 0 is the envelope and always feasible. Every probe is verified, so
  // the result is feasible even if feasibility is not monotone in r.
  int lo = 0, hi = n - 1;
  while (lo < hi) {
    int mid = lo + (hi - lo + 1) / 2;
    if (feasible(mid))
      lo = mid;
    else
      hi = mid - 1;
  }

  ConfidenceArea area = area_at_drop(data, cols, lo);
  InclusionMask mask = mask_from_area(data, area, params.l);
  return {std::move(area), std::move(mask), RetentionLevel{lo, n - lo}};
}

FitResult naive_fit(const Dataset& data, const SolveParams& params) {
  validate_params(data, params);
  const int n = static_cast<int>(data.rows());
  auto cols = sorted_columns(data);
  ConfidenceArea area = area_at_drop(data, cols, params.k);
  InclusionMask mask = mask_from_area(data, area, params.l);
  return {std::move(area), std::move(mask), RetentionLevel{params.k, n - params.k}};
}

}  // namespace mvci::mi

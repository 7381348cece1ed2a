#include "mvci/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "mvci/errors.hpp"
#include "mvci/rng.hpp"

namespace mvci::datagen {

Dataset generate(const DistributionSpec& spec) {
  if (spec.rows == 0 || spec.cols == 0)
    throw InvalidInputError("generate: rows and cols must be positive");
  if (spec.family == Family::Cauchy && !(spec.cauchy_scale > 0.0))
    throw InvalidInputError("generate: cauchy scale must be positive");
  SeededRng rng(spec.seed);
  std::vector<double> values(spec.rows * spec.cols);
  for (double& v : values) {
    switch (spec.family) {
      case Family::Uniform01: v = rng.uniform01(); break;
      case Family::StandardNormal: v = rng.normal(); break;
      case Family::Cauchy: v = rng.cauchy(0.0, spec.cauchy_scale); break;
    }
  }
  return Dataset(spec.rows, spec.cols, std::move(values));
}

double default_bandwidth(std::span<const double> x) {
  if (x.empty()) throw InvalidInputError("bandwidth: empty sample");
  if (x.size() == 1) return 1.0;
  double mean = std::accumulate(x.begin(), x.end(), 0.0) / x.size();
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  double sd = std::sqrt(ss / (x.size() - 1));
  if (sd == 0.0) return 1.0;
  return 1.06 * sd * std::pow(static_cast<double>(x.size()), -0.2);
}

std::vector<double> nadaraya_watson(std::span<const double> x,
                                    std::span<const double> y,
                                    std::span<const double> grid,
                                    double bandwidth) {
  if (x.empty() || x.size() != y.size())
    throw InvalidInputError("kernel regression: x and y must be non-empty and equal");
  if (!(bandwidth > 0.0))
    throw InvalidInputError("kernel regression: bandwidth must be positive");
  std::vector<double> out(grid.size());
  const double inv_h2 = 1.0 / (2.0 * bandwidth * bandwidth);
  for (std::size_t g = 0; g < grid.size(); ++g) {
    // Shift by the smallest squared distance so the largest weight is exactly
    // one; the estimate is scale-free in the weights and never underflows to 0/0.
    double min_d2 = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < x.size(); ++i) {
      double d = grid[g] - x[i];
      min_d2 = std::min(min_d2, d * d);
    }
    double wsum = 0.0, wysum = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      double d = grid[g] - x[i];
      double w = std::exp(-(d * d - min_d2) * inv_h2);
      wsum += w;
      wysum += w * y[i];
    }
    out[g] = wysum / wsum;
  }
  return out;
}

Dataset bootstrap_curves(const KernelRegressionSpec& spec,
                         std::span<const double> x,
                         std::span<const double> y) {
  if (spec.curves == 0 || spec.grid_points == 0)
    throw InvalidInputError("bootstrap: curves and grid_points must be positive");
  if (x.empty() || x.size() != y.size())
    throw InvalidInputError("bootstrap: x and y must be non-empty and equal");

  auto [mn_it, mx_it] = std::minmax_element(x.begin(), x.end());
  std::vector<double> grid(spec.grid_points);
  if (spec.grid_points == 1) {
    grid[0] = 0.5 * (*mn_it + *mx_it);
  } else {
    double step = (*mx_it - *mn_it) / static_cast<double>(spec.grid_points - 1);
    for (std::size_t g = 0; g < spec.grid_points; ++g) grid[g] = *mn_it + step * g;
  }

  // One bandwidth for every resample keeps curves exchangeable.
  double h = spec.bandwidth > 0.0 ? spec.bandwidth : default_bandwidth(x);

  std::vector<double> values;
  values.reserve(spec.curves * spec.grid_points);
  std::vector<double> rx(x.size()), ry(y.size());
  for (std::size_t b = 0; b < spec.curves; ++b) {
    SeededRng rng(derive_seed(spec.seed, b));
    for (std::size_t i = 0; i < x.size(); ++i) {
      std::size_t pick = rng.index(x.size());
      rx[i] = x[pick];
      ry[i] = y[pick];
    }
    auto curve = nadaraya_watson(rx, ry, grid, h);
    values.insert(values.end(), curve.begin(), curve.end());
  }
  return Dataset(spec.curves, spec.grid_points, std::move(values));
}

Dataset normalize_relative(const Dataset& data, std::size_t baseline) {
  if (baseline == 0) throw InvalidInputError("normalize: baseline must be positive");
  const std::size_t b = std::min(baseline, data.cols());
  std::vector<double> values(data.rows() * data.cols());
  for (std::size_t i = 0; i < data.rows(); ++i) {
    double mean = 0.0;
    for (std::size_t j = 0; j < b; ++j) mean += data(i, j);
    mean /= static_cast<double>(b);
    for (std::size_t j = 0; j < data.cols(); ++j)
      values[i * data.cols() + j] = data(i, j) - mean;
  }
  return Dataset(data.rows(), data.cols(), std::move(values),
                 data.has_labels() ? data.labels() : std::vector<std::string>{});
}

Dataset random_walk(std::size_t rows, std::size_t cols, double step_sd,
                    std::uint64_t seed) {
  if (rows == 0 || cols == 0)
    throw InvalidInputError("random walk: rows and cols must be positive");
  if (!(step_sd > 0.0)) throw InvalidInputError("random walk: step_sd must be positive");
  SeededRng rng(seed);
  std::vector<double> values(rows * cols);
  for (std::size_t i = 0; i < rows; ++i) {
    double level = 0.0;
    for (std::size_t j = 0; j < cols; ++j) {
      level += step_sd * rng.normal();
      values[i * cols + j] = level;
    }
  }
  return Dataset(rows, cols, std::move(values));
}

}  // namespace mvci::datagen

#pragma once

#include <cstdint>
#include <span>

#include "mvci/dataset.hpp"

namespace mvci::datagen {

enum class Family { Uniform01, StandardNormal, Cauchy };

struct DistributionSpec {
  Family family = Family::Uniform01;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::uint64_t seed = 0;
  double cauchy_scale = 2.0;  // location fixed at 0
};

// iid matrix, drawn row-major so the layout is part of the contract.
Dataset generate(const DistributionSpec& spec);

// 1.06 * sd(x) * n^(-1/5); falls back to 1.0 for degenerate samples.
double default_bandwidth(std::span<const double> x);

// Gaussian-kernel locally weighted mean of (x, y), evaluated at each grid
// point. Weights are renormalized against the nearest observation, so a
// single source point yields an exactly constant curve.
std::vector<double> nadaraya_watson(std::span<const double> x,
                                    std::span<const double> y,
                                    std::span<const double> grid,
                                    double bandwidth);

struct KernelRegressionSpec {
  std::size_t curves = 0;       // bootstrap resamples, one output row each
  std::size_t grid_points = 0;  // output columns, equispaced over [min x, max x]
  double bandwidth = 0.0;       // <= 0: default_bandwidth of the source sample
  std::uint64_t seed = 0;
};

// Rows are smoothed curves fitted to resamples (with replacement) of the
// source scatter. Resample b uses the derived seed (seed, b).
Dataset bootstrap_curves(const KernelRegressionSpec& spec,
                         std::span<const double> x,
                         std::span<const double> y);

// Subtract from every row the mean of its first `baseline` entries.
Dataset normalize_relative(const Dataset& data, std::size_t baseline = 5);

// Cumulative sums of iid N(0, step_sd^2) increments, one walk per row.
Dataset random_walk(std::size_t rows, std::size_t cols, double step_sd,
                    std::uint64_t seed);

}  // namespace mvci::datagen

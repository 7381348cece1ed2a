#pragma once

#include <optional>

namespace mvci::theory {

// P(at most l of m positions miss) when each position independently lands
// inside its interval with probability w:
//   sum_{j=0}^{min(l,m)} C(m, j) (1 - w)^j w^(m - j).
double cumulative_binomial(int l, int m, double w);

// Miss rate of the equal-width product area: 1 - cumulative_binomial(l, m, w).
double alpha_equal_width(int m, int l, double w);

// Inverse of alpha_equal_width in w (monotone, bisected to ~1e-14).
double width_for_alpha(int m, int l, double alpha);

// E[max - min] of n iid U(0, 1) draws: (n - 1) / (n + 1).
double expected_envelope_width_uniform(int n);

// Smallest sample size at which the requested slack becomes meaningful:
// about 2 m / alpha without beta (l = 0), about 2 / beta with it.
long required_samples(int m, double alpha,
                      std::optional<double> beta = std::nullopt);

}  // namespace mvci::theory

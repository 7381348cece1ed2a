#include "mvci/theory.hpp"

#include <cmath>

#include "mvci/errors.hpp"

namespace mvci::theory {

double cumulative_binomial(int l, int m, double w) {
  if (m < 1) throw InvalidInputError("m must be positive");
  if (l < 0) throw InvalidInputError("l must be non-negative");
  if (!(w >= 0.0 && w <= 1.0)) throw InvalidInputError("w must lie in [0, 1]");
  if (l >= m) return 1.0;
  if (w == 0.0) return 0.0;  // all m positions miss; l < m here
  if (w == 1.0) return 1.0;

  // Log-space terms keep this stable for large m.
  double sum = 0.0;
  const double log_w = std::log(w);
  const double log_miss = std::log1p(-w);
  for (int j = 0; j <= l; ++j) {
    double log_comb = std::lgamma(m + 1.0) - std::lgamma(j + 1.0) -
                      std::lgamma(m - j + 1.0);
    sum += std::exp(log_comb + j * log_miss + (m - j) * log_w);
  }
  return sum < 1.0 ? sum : 1.0;
}

double alpha_equal_width(int m, int l, double w) {
  return 1.0 - cumulative_binomial(l, m, w);
}

double width_for_alpha(int m, int l, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw InvalidInputError("alpha must lie in (0, 1)");
  if (l >= m) throw InvalidInputError("l >= m: every width achieves alpha 0");
  // alpha_equal_width is decreasing in w.
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    double mid = 0.5 * (lo + hi);
    if (alpha_equal_width(m, l, mid) > alpha)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double expected_envelope_width_uniform(int n) {
  if (n < 1) throw InvalidInputError("n must be positive");
  return static_cast<double>(n - 1) / static_cast<double>(n + 1);
}

long required_samples(int m, double alpha, std::optional<double> beta) {
  if (beta.has_value()) {
    if (!(*beta > 0.0 && *beta <= 1.0))
      throw InvalidInputError("beta must lie in (0, 1]");
    return static_cast<long>(std::ceil(2.0 / *beta));
  }
  if (m < 1) throw InvalidInputError("m must be positive");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw InvalidInputError("alpha must lie in (0, 1)");
  return static_cast<long>(std::ceil(2.0 * m / alpha));
}

}  // namespace mvci::theory

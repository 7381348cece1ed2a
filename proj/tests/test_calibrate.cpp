#include <doctest.h>

#include <algorithm>

#include "helpers.hpp"
#include "mvci/calibrate.hpp"
#include "mvci/errors.hpp"
#include "mvci/mi.hpp"

using namespace mvci;

TEST_SUITE_BEGIN("calibration");

TEST_CASE("inputs are validated") {
  auto train = testutil::make_normal(20, 3, 1);
  auto test = testutil::make_normal(20, 3, 2);
  auto wrong = testutil::make_normal(20, 4, 3);
  CHECK_THROWS_AS(calibrate::choose_k(train, wrong, Algorithm::Mi, 0, 0.1),
                  InvalidInputError);
  CHECK_THROWS_AS(calibrate::choose_k(train, test, Algorithm::Oracle, 0, 0.1),
                  InvalidInputError);
  CHECK_THROWS_AS(calibrate::choose_k(train, test, Algorithm::Mi, 0, 0.0),
                  InvalidInputError);
  CHECK_THROWS_AS(calibrate::choose_k(train, test, Algorithm::Mi, 0, 1.5),
                  InvalidInputError);
  CHECK_THROWS_AS(calibrate::choose_k(train, test, Algorithm::Mi, 4, 0.1),
                  InvalidInputError);
}

TEST_CASE("a full error budget drives k to the top of the grid") {
  auto train = testutil::make_normal(40, 2, 7);
  auto test = testutil::make_normal(40, 2, 8);
  auto res = calibrate::choose_k(train, test, Algorithm::Mi, 0, 1.0);
  // alpha = 1 accepts everything, so the largest evaluated k wins.
  CHECK(res.chosen_k == 39);
  CHECK(res.attainable);
  CHECK(res.observed_alpha <= 1.0);
}

TEST_CASE("trace is sorted, deduplicated, and consistent") {
  auto train = testutil::make_normal(60, 3, 17);
  auto test = testutil::make_normal(120, 3, 18);
  auto res = calibrate::choose_k(train, test, Algorithm::Gr, 1, 0.15);
  REQUIRE(res.trace_k.size() == res.trace_alpha.size());
  REQUIRE(!res.trace_k.empty());
  CHECK(std::is_sorted(res.trace_k.begin(), res.trace_k.end()));
  CHECK(std::adjacent_find(res.trace_k.begin(), res.trace_k.end()) ==
        res.trace_k.end());
  CHECK(res.trace_k.front() == 0);
  for (int k : res.trace_k) {
    CHECK(k >= 0);
    CHECK(k < 60);
  }
  CHECK(res.n_train == 60);
  CHECK(res.n_test == 120);
  CHECK(res.l == 1);
  CHECK(res.target_alpha == 0.15);
  CHECK(res.solver == Algorithm::Gr);
  CHECK(res.chosen_k_over_n ==
        doctest::Approx(res.chosen_k / 60.0).epsilon(1e-12));

  // The reported miss rate re-derives from a fresh fit at chosen_k.
  auto refit = mvci::run_fit(Algorithm::Gr, train, {res.chosen_k, 1});
  CHECK(coverage_error(test, refit.area, 1) ==
        doctest::Approx(res.observed_alpha).epsilon(1e-12));
}

TEST_CASE("chosen k is feasible and maximal among evaluated ks") {
  auto train = testutil::make_normal(50, 2, 27);
  auto test = testutil::make_normal(200, 2, 28);
  const double alpha = 0.2;
  auto res = calibrate::choose_k(train, test, Algorithm::Mi, 0, alpha);
  REQUIRE(res.attainable);
  for (std::size_t t = 0; t < res.trace_k.size(); ++t) {
    if (res.trace_k[t] == res.chosen_k)
      CHECK(res.trace_alpha[t] <= alpha + 1e-12);
    if (res.trace_k[t] > res.chosen_k)
      CHECK(res.trace_alpha[t] > alpha + 1e-12);
  }
}

TEST_CASE("unattainable targets are flagged") {
  // Train and test are disjoint clusters: even the plain envelope misses.
  Dataset train(10, 1, {0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9});
  Dataset test(10, 1, {5, 5.1, 5.2, 5.3, 5.4, 5.5, 5.6, 5.7, 5.8, 5.9});
  auto res = calibrate::choose_k(train, test, Algorithm::Mi, 0, 0.1);
  CHECK_FALSE(res.attainable);
  CHECK(res.chosen_k == 0);
  CHECK(res.observed_alpha == doctest::Approx(1.0));
}

TEST_CASE("observed miss rates per allowance are non-increasing") {
  auto fitted = mi::fit(testutil::make_normal(80, 4, 91), {8, 0});
  auto test = testutil::make_normal(300, 4, 92);
  std::vector<int> ls{0, 1, 2, 3, 4};
  auto alphas = calibrate::alpha_for_allowances(fitted.area, test, ls);
  REQUIRE(alphas.size() == 5);
  for (std::size_t t = 0; t < 5; ++t) {
    CHECK(alphas[t] ==
          doctest::Approx(coverage_error(test, fitted.area, ls[t])));
    if (t > 0) CHECK(alphas[t] <= alphas[t - 1] + 1e-15);
  }
  CHECK(alphas[4] == 0.0);
}

TEST_SUITE_END();

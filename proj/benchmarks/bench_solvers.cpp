// Scaling sanity for the fit paths. Data generation happens outside the
// timed loop; every benchmark is deterministic given its range arguments.

#include <benchmark/benchmark.h>

#include <cstddef>

#include "mvci/confidence_area.hpp"
#include "mvci/datagen.hpp"
#include "mvci/dataset.hpp"
#include "mvci/greedy.hpp"
#include "mvci/lp.hpp"
#include "mvci/mi.hpp"

namespace {

mvci::Dataset normal_matrix(std::size_t n, std::size_t m, std::uint64_t seed) {
  mvci::datagen::DistributionSpec spec;
  spec.family = mvci::datagen::Family::StandardNormal;
  spec.rows = n;
  spec.cols = m;
  spec.seed = seed;
  return mvci::datagen::generate(spec);
}

void BM_Envelope(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const mvci::Dataset d = normal_matrix(n, 10, 42);
  for (auto _ : state) benchmark::DoNotOptimize(mvci::envelope(d).size());
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Envelope)->RangeMultiplier(4)->Range(1 << 10, 1 << 16)
    ->Complexity(benchmark::oN);

void BM_SharedTrimFit(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const mvci::Dataset d = normal_matrix(n, 10, 43);
  const mvci::SolveParams params{static_cast<int>(n / 10), 1};
  for (auto _ : state) benchmark::DoNotOptimize(mvci::mi::fit(d, params).area.size());
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SharedTrimFit)->RangeMultiplier(2)->Range(1 << 9, 1 << 13)
    ->Complexity(benchmark::oNLogN);

void BM_EndTrimFit(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const mvci::Dataset d = normal_matrix(n, 10, 44);
  const mvci::SolveParams params{static_cast<int>(n / 20), 1};
  for (auto _ : state) benchmark::DoNotOptimize(mvci::greedy::fit(d, params).area.size());
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_EndTrimFit)->RangeMultiplier(2)->Range(1 << 9, 1 << 12)
    ->Complexity(benchmark::oNSquared);

// Discard count is the greedy solver's dominant factor at fixed n.
void BM_EndTrimFitByK(benchmark::State& state) {
  const mvci::Dataset d = normal_matrix(2048, 10, 45);
  const mvci::SolveParams params{static_cast<int>(state.range(0)), 1};
  for (auto _ : state) benchmark::DoNotOptimize(mvci::greedy::fit(d, params).area.size());
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_EndTrimFitByK)->RangeMultiplier(4)->Range(8, 512)
    ->Complexity(benchmark::oN);

void BM_OneSidedLpFit(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const mvci::Dataset d = normal_matrix(n, 4, 46);
  for (auto _ : state)
    benchmark::DoNotOptimize(mvci::lp::fit_one_sided(d, 1).rounded_objective);
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_OneSidedLpFit)->RangeMultiplier(2)->Range(8, 64);

}  // namespace

BENCHMARK_MAIN();

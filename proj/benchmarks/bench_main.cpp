#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "gibbsrate/bounds.hpp"
#include "gibbsrate/families.hpp"
#include "gibbsrate/geometric.hpp"
#include "gibbsrate/sampler.hpp"
#include "gibbsrate/scan_compare.hpp"
#include "gibbsrate/stochastic.hpp"
#include "gibbsrate/words.hpp"

using namespace gibbsrate;

namespace {

void BM_RosenthalMinSteps(benchmark::State& state) {
  const DriftMinorization cert(100.0 / 102.0, 100.0 / 102.0, LogMagnitude::from_log(-100.0 * std::log(2.0)), 0.0);
  for (auto _ : state) benchmark::DoNotOptimize(rosenthal_min_steps(cert, {1000.0, 0.001}, 0.01));
}
BENCHMARK(BM_RosenthalMinSteps);

void BM_TwoTermMinSteps(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(two_term_min_steps(0.99986, 0.998497, 2.0, 0.01));
}
BENCHMARK(BM_TwoTermMinSteps);

void BM_BetaBinomialXChain(benchmark::State& state) {
  const BetaBinomialFamily family(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(bb_xchain(family));
}
BENCHMARK(BM_BetaBinomialXChain)->Arg(10)->Arg(100)->Arg(400);

void BM_ReversibleSpectrum(benchmark::State& state) {
  const auto chain = bb_xchain(BetaBinomialFamily(static_cast<int>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(reversible_spectrum(chain.kernel, chain.stationary));
}
BENCHMARK(BM_ReversibleSpectrum)->Arg(10)->Arg(100)->Arg(400);

void BM_StationaryDistribution(benchmark::State& state) {
  const auto chain = pg_xchain(PoissonGammaFamily(1.0, 1.0, static_cast<int>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(stationary_distribution(chain.kernel));
}
BENCHMARK(BM_StationaryDistribution)->Arg(100)->Arg(200);

void BM_CollapseCensus(benchmark::State& state) {
  const int length = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(collapse_census(length));
}
BENCHMARK(BM_CollapseCensus)->DenseRange(8, 16, 4);

void BM_RebuildRandomScanUpper(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const StepCount steps(static_cast<std::uint64_t>(state.range(1)));
  // The first call at a short length builds the census for it.
  rebuild_random_scan_upper(n, steps);
  for (auto _ : state) benchmark::DoNotOptimize(rebuild_random_scan_upper(n, steps));
}
BENCHMARK(BM_RebuildRandomScanUpper)->Args({10, 20})->Args({100, 400});

void BM_RandomScanSteps(benchmark::State& state) {
  const ConjugateFamily family = BetaBinomialFamily(100);
  const auto strategy = ScanStrategy::random(0.5);
  SplitMix64 rng(1);
  JointState s{0, 1.0};
  for (auto _ : state) {
    s = step(family, s, strategy, rng);
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_RandomScanSteps);

void BM_ScanCompare(benchmark::State& state) {
  CompareOptions options;
  options.rosenthal.reset();
  for (auto _ : state) benchmark::DoNotOptimize(compare(static_cast<int>(state.range(0)), 300, 0.01, options));
}
BENCHMARK(BM_ScanCompare)->Arg(10)->Arg(50)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

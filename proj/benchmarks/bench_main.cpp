#include <benchmark/benchmark.h>

#include "isac/alloc.hpp"
#include "isac/detector.hpp"
#include "isac/estimator.hpp"
#include "isac/radar_chain.hpp"
#include "isac/rate.hpp"

using namespace isac;

namespace {

const TargetPrior kPrior{0.5, {1.0, 0.0}, 1e-2};

Snr snr_arg(const benchmark::State& state) { return Snr::from_db(static_cast<double>(state.range(0))); }

void BM_MmseEstimate(benchmark::State& state) {
  const Snr s = Snr::from_db(10.0);
  Complex y{1.3, -0.4};
  for (auto _ : state) {
    benchmark::DoNotOptimize(mmse_estimate(y, kPrior, s));
    y += Complex{1e-9, 0.0};
  }
}
BENCHMARK(BM_MmseEstimate);

void BM_Mmse(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(mmse(kPrior, snr_arg(state)));
}
BENCHMARK(BM_Mmse)->Arg(0)->Arg(10)->Arg(20);

void BM_RateExact(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(sensing_rate_exact(kPrior, snr_arg(state)));
}
BENCHMARK(BM_RateExact)->Arg(0)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_RateApprox(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(sensing_rate_approx(kPrior, snr_arg(state)));
}
BENCHMARK(BM_RateApprox)->Arg(0)->Arg(10)->Arg(20);

void BM_RateMonteCarlo(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(mc_mutual_information(kPrior, Snr::from_db(10.0), n, 1));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n));
}
BENCHMARK(BM_RateMonteCarlo)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_ErrorProbsMap(benchmark::State& state) {
  const Snr s = snr_arg(state);
  const auto t = DetectorThreshold::map(kPrior);
  for (auto _ : state) benchmark::DoNotOptimize(error_probs(kPrior, s, t));
}
BENCHMARK(BM_ErrorProbsMap)->Arg(5);

void BM_Optimize(benchmark::State& state) {
  AllocationBudget b;
  const auto backend = state.range(0) == 0 ? Backend::approx : Backend::exact;
  for (auto _ : state) benchmark::DoNotOptimize(optimize(b, 1e-6, backend));
}
BENCHMARK(BM_Optimize)->Arg(0)->Unit(benchmark::kMillisecond);

void BM_SlowTimeDft(benchmark::State& state) {
  radar::RadarConfig c;
  c.num_pulses = static_cast<int>(state.range(0));
  c.num_range_bins = 64;
  const auto x = radar::synthesize_slow_time(c, {}, true, 3);
  for (auto _ : state) benchmark::DoNotOptimize(radar::slow_time_dft(x));
}
BENCHMARK(BM_SlowTimeDft)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();

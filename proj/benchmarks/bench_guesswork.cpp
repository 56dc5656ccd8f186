#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "guesswork/oracle.hpp"
#include "guesswork/rate.hpp"
#include "guesswork/scgf.hpp"
#include "guesswork/sources.hpp"

namespace {

using namespace guesswork;

IidSource three_letter() { return IidSource::from_probs({0.4, 0.4, 0.2}); }

MarkovSource golden_chain() {
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  return MarkovSource::from_probs({1.0 / phi, 1.0 / (phi * phi), 1.0, 0.0},
                                  {0.5, 0.5});
}

void BM_TypeclassTableK100(benchmark::State& state) {
  IidSource s = three_letter();
  for (auto _ : state) {
    benchmark::DoNotOptimize(typeclass_table(s, 100));
  }
}
BENCHMARK(BM_TypeclassTableK100);

void BM_EnumerateK16(benchmark::State& state) {
  Source s = golden_chain();
  for (auto _ : state) {
    benchmark::DoNotOptimize(enumerate_table(s, 16));
  }
}
BENCHMARK(BM_EnumerateK16);

void BM_ScaledMomentK100(benchmark::State& state) {
  GuessworkTable t = typeclass_table(three_letter(), 100);
  for (auto _ : state) {
    benchmark::DoNotOptimize(scaled_log_moment(t, 2.0).scaled_log_moment);
    benchmark::DoNotOptimize(scaled_log_moment(t, 0.37).scaled_log_moment);
  }
}
BENCHMARK(BM_ScaledMomentK100);

void BM_SpectralRadius4x4(benchmark::State& state) {
  // support-irreducible 4-state ring with chords, tilted mid-curve
  std::vector<double> p = {0.5, 0.3, 0.2, 0.0, 0.0, 0.6, 0.4, 0.0,
                           0.1, 0.0, 0.4, 0.5, 0.7, 0.0, 0.0, 0.3};
  std::vector<double> logs(p.size());
  for (std::size_t i = 0; i < p.size(); ++i)
    logs[i] = p[i] == 0.0 ? kNegInf : 0.5 * std::log(p[i]);
  for (auto _ : state) {
    benchmark::DoNotOptimize(detail::log_spectral_radius(logs, 4));
  }
}
BENCHMARK(BM_SpectralRadius4x4);

void BM_RateAtConvex(benchmark::State& state) {
  RateFunction rf{ScgfCurve::analyze(three_letter())};
  double x = 0.5 * (rf.turn_x() + rf.support_rate());
  for (auto _ : state) {
    benchmark::DoNotOptimize(rf.rate_at(x).value);
  }
}
BENCHMARK(BM_RateAtConvex);

}  // namespace

BENCHMARK_MAIN();

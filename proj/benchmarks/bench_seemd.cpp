// Microbenchmarks for the decomposition methods and the diagnostic chain.
// The alpha-stable fixtures exist so heavy-tailed contamination can be
// exercised here without making any acceptance-level claim about it: the
// reported kurtosis/ENVSI counters show how the single-pass method behaves,
// nothing more.

#include <benchmark/benchmark.h>

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <vector>

#include "seemd/analysis.hpp"
#include "seemd/decompose.hpp"
#include "seemd/emd.hpp"
#include "seemd/noise.hpp"
#include "seemd/rng.hpp"
#include "seemd/signal.hpp"
#include "seemd/simulator.hpp"

using namespace seemd;

namespace {

Signal tone_mix(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  const double f1 = rng.uniform(0.01, 0.08);
  const double f2 = rng.uniform(0.12, 0.35);
  Signal x;
  x.sample_rate = 1000.0;
  x.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i);
    x.samples[i] = std::sin(2.0 * std::numbers::pi * f1 * t) +
                   0.7 * std::sin(2.0 * std::numbers::pi * f2 * t) +
                   0.3 * rng.normal();
  }
  return x;
}

Signal bearing_signal(double duration_s, std::uint64_t seed) {
  SimConfig cfg;
  cfg.duration_s = duration_s;
  cfg.seed = seed;
  return simulate_bearing(cfg).signal;
}

// Symmetric alpha-stable deviate by the Chambers-Mallows-Stuck transform
// (beta = 0, unit scale). Valid for alpha in (0, 2], alpha != 1; the
// benchmarks only ask for 1.2 and 1.7.
double stable_deviate(Rng& rng, double alpha) {
  const double v =
      rng.uniform(-std::numbers::pi / 2.0, std::numbers::pi / 2.0);
  double u;
  do {
    u = rng.uniform01();
  } while (u == 0.0);
  const double w = -std::log(u);
  const double a = alpha * v;
  return std::sin(a) / std::pow(std::cos(v), 1.0 / alpha) *
         std::pow(std::cos(v - a) / w, (1.0 - alpha) / alpha);
}

// Bearing signal with heavy-tailed contamination replacing the Gaussian
// noise floor: impulsive outliers that a kurtosis-based selector has to
// cope with.
Signal alpha_stable_contaminated(double alpha, double scale,
                                 std::uint64_t seed) {
  SimConfig cfg;
  cfg.seed = seed;
  cfg.snr_db = std::numeric_limits<double>::infinity();  // clean mechanics
  Signal x = simulate_bearing(cfg).signal;
  Rng rng(seed + 101);
  for (auto& v : x.samples) v += scale * stable_deviate(rng, alpha);
  return x;
}

void BM_Emd(benchmark::State& state) {
  const Signal x = tone_mix(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(emd(x));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Emd)->RangeMultiplier(4)->Range(1024, 16384)
    ->Unit(benchmark::kMillisecond)->Complexity(benchmark::oNLogN);

void BM_Seemd(benchmark::State& state) {
  const Signal x = tone_mix(static_cast<std::size_t>(state.range(0)), 2);
  const SeemdConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(seemd::seemd(x, cfg));
}
BENCHMARK(BM_Seemd)->RangeMultiplier(4)->Range(1024, 16384)
    ->Unit(benchmark::kMillisecond);

// Ensemble size x worker threads; the output is thread-count invariant, so
// this is purely a wall-time scaling view.
void BM_Eemd(benchmark::State& state) {
  const Signal x = tone_mix(4096, 3);
  EemdConfig cfg;
  cfg.ensemble_size = static_cast<int>(state.range(0));
  cfg.num_threads = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(eemd(x, cfg));
}
BENCHMARK(BM_Eemd)
    ->Args({8, 1})->Args({32, 1})->Args({32, 4})->Args({100, 4})
    ->Unit(benchmark::kMillisecond);

void BM_Vmd(benchmark::State& state) {
  const Signal x = tone_mix(static_cast<std::size_t>(state.range(0)), 4);
  VmdConfig cfg;
  cfg.num_modes = 4;
  for (auto _ : state) benchmark::DoNotOptimize(vmd(x, cfg));
}
BENCHMARK(BM_Vmd)->RangeMultiplier(4)->Range(1024, 16384)
    ->Unit(benchmark::kMillisecond);

void BM_Fgn(benchmark::State& state) {
  FgnParams p;
  p.hurst = 0.1;
  p.length = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(generate_fgn(p));
    ++p.seed;
  }
}
BENCHMARK(BM_Fgn)->RangeMultiplier(4)->Range(4096, 262144)
    ->Unit(benchmark::kMicrosecond);

void BM_ConvolutedWgn(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state)
    benchmark::DoNotOptimize(convoluted_wgn(n, ++seed));
}
BENCHMARK(BM_ConvolutedWgn)->RangeMultiplier(4)->Range(4096, 262144)
    ->Unit(benchmark::kMicrosecond);

void BM_SimulateBearing(benchmark::State& state) {
  SimConfig cfg;
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate_bearing(cfg));
    ++cfg.seed;
  }
}
BENCHMARK(BM_SimulateBearing)->Unit(benchmark::kMillisecond);

// Envelope spectrum plus ENVSI on a one-second bearing record: the cost of
// scoring one candidate IMF.
void BM_EnvelopePipeline(benchmark::State& state) {
  const Signal x = bearing_signal(1.0, 7);
  const double f0 =
      fault_frequencies(BearingGeometry{}, 20.0).bsf;
  for (auto _ : state) {
    const EnvelopeSpectrum es = envelope_spectrum(x);
    benchmark::DoNotOptimize(envsi(es, f0));
  }
}
BENCHMARK(BM_EnvelopePipeline)->Unit(benchmark::kMillisecond);

// Full single-pass diagnosis on a heavy-tailed record. Counters expose the
// selected IMF's kurtosis and ENVSI next to the timing.
void BM_SeemdDiagnosisAlphaStable(benchmark::State& state) {
  const double alpha = static_cast<double>(state.range(0)) / 10.0;
  const Signal x = alpha_stable_contaminated(alpha, 0.05, 11);
  const double f0 = fault_frequencies(BearingGeometry{}, 20.0).bsf;
  SeemdConfig cfg;
  double kurt = 0.0, score = 0.0;
  for (auto _ : state) {
    const Decomposition d = seemd::seemd(x, cfg);
    const auto [idx, k] = select_informative_imf(d);
    kurt = k;
    score = envsi(envelope_spectrum(Signal{d.imfs[idx], x.sample_rate}), f0)
                .value;
    benchmark::DoNotOptimize(score);
  }
  state.counters["imf_kurtosis"] = kurt;
  state.counters["envsi"] = score;
}
BENCHMARK(BM_SeemdDiagnosisAlphaStable)->Arg(12)->Arg(17)->Arg(20)
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "seemd/decompose.hpp"
#include "seemd/noise.hpp"
#include "seemd/signal.hpp"
#include "seemd/simulator.hpp"
#include "test_util.hpp"

using namespace seemd;

namespace {

Signal two_tone(std::size_t n, double fs, double f1, double f2) {
  Signal x{std::vector<double>(n), fs};
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / fs;
    x.samples[i] = std::sin(2.0 * std::numbers::pi * f1 * t) +
                   std::sin(2.0 * std::numbers::pi * f2 * t);
  }
  return x;
}

double energy(const std::vector<double>& x) {
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return acc;
}

}  // namespace

TEST_CASE("seemd_apply with zero noise and zero modulator is plain EMD") {
  const auto x = util::random_mix(1024, 2);
  const Signal sig{x, 1.0};
  const std::vector<double> zeros(x.size(), 0.0);
  const auto hooked =
      detail::seemd_apply(sig, zeros, zeros, Modulation::one_plus_m, {});
  const auto plain = emd(sig);
  REQUIRE(hooked.imfs.size() == plain.imfs.size());
  for (std::size_t k = 0; k < plain.imfs.size(); ++k)
    CHECK(hooked.imfs[k] == plain.imfs[k]);
  CHECK(hooked.residue == plain.residue);
  CHECK(hooked.method == Method::seemd);
}

TEST_CASE("seemd_apply rejects mismatched lengths") {
  const Signal sig{std::vector<double>(64, 0.0), 1.0};
  const std::vector<double> wrong(32, 0.0), right(64, 0.0);
  CHECK_THROWS_AS((void)detail::seemd_apply(sig, wrong, right,
                                            Modulation::one_plus_m, {}),
                  ConfigInvalid);
  CHECK_THROWS_AS((void)detail::seemd_apply(sig, right, wrong,
                                            Modulation::one_plus_m, {}),
                  ConfigInvalid);
}

TEST_CASE("seemd refuses a constant signal") {
  Signal flat{std::vector<double>(256, 1.0), 1.0};
  CHECK_THROWS_AS((void)seemd::seemd(flat, {}), ZeroVariance);
}

TEST_CASE("seemd is deterministic and costs exactly one emd call") {
  const Signal sig{util::random_mix(2048, 5), 1.0};
  SeemdConfig cfg;
  const auto a = seemd::seemd(sig, cfg);
  const auto b = seemd::seemd(sig, cfg);
  CHECK(a.emd_calls == 1);
  CHECK(a.method == Method::seemd);
  REQUIRE(a.imfs.size() == b.imfs.size());
  for (std::size_t k = 0; k < a.imfs.size(); ++k)
    CHECK(a.imfs[k] == b.imfs[k]);
  CHECK(a.residue == b.residue);

  cfg.fgn_seed = 77;
  const auto c = seemd::seemd(sig, cfg);
  bool differs = c.imfs.size() != a.imfs.size();
  if (!differs) differs = c.imfs[0] != a.imfs[0];
  CHECK(differs);
}

TEST_CASE("seemd reconstructs the modified signal") {
  const Signal sig{util::random_mix(2048, 8), 1.0};
  SeemdConfig cfg;
  const auto d = seemd::seemd(sig, cfg);

  // rebuild x2 = (x + a*FGN) .* (1 + m) from the documented construction
  const std::size_t n = sig.samples.size();
  FgnParams fp;
  fp.hurst = cfg.hurst;
  fp.variance = 1.0;
  fp.length = n;
  fp.seed = cfg.fgn_seed;
  const auto fgn = generate_fgn(fp, sig.sample_rate);
  const auto mod = convoluted_wgn(n, cfg.modulator_seed, sig.sample_rate);
  const double scale = cfg.fgn_amplitude * std::sqrt(variance(sig.samples));
  std::vector<double> x2(n);
  for (std::size_t i = 0; i < n; ++i)
    x2[i] = (sig.samples[i] + scale * fgn.samples[i]) * (1.0 + mod.samples[i]);

  std::vector<double> sum = d.residue;
  for (const auto& imf : d.imfs)
    for (std::size_t i = 0; i < n; ++i) sum[i] += imf[i];
  CHECK(util::rel_l2(sum, x2) < 1e-10);
}

TEST_CASE("seemd with zero fgn amplitude skips the additive step") {
  const Signal sig{util::random_mix(1024, 3), 1.0};
  SeemdConfig cfg;
  cfg.fgn_amplitude = 0.0;
  const auto d = seemd::seemd(sig, cfg);

  const auto mod = convoluted_wgn(sig.samples.size(), cfg.modulator_seed, 1.0);
  std::vector<double> x2(sig.samples.size());
  for (std::size_t i = 0; i < x2.size(); ++i)
    x2[i] = sig.samples[i] * (1.0 + mod.samples[i]);
  std::vector<double> sum = d.residue;
  for (const auto& imf : d.imfs)
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += imf[i];
  CHECK(util::rel_l2(sum, x2) < 1e-10);
}

TEST_CASE("seemd boosts kurtosis on the simulated fault signal") {
  SimConfig sim;
  sim.duration_s = 0.5;
  sim.seed = 4;
  const auto r = simulate_bearing(sim);
  const double raw_kurt = kurtosis(r.signal.samples);
  const auto d = seemd::seemd(r.signal, {});
  const auto [idx, score] = select_informative_imf(d);
  CHECK(score > raw_kurt);
  CHECK(idx < d.imfs.size());
}

TEST_CASE("eemd with one noiseless trial equals emd bit for bit") {
  const Signal sig{util::random_mix(1024, 13), 1.0};
  EemdConfig cfg;
  cfg.ensemble_size = 1;
  cfg.noise_std_ratio = 0.0;
  const auto a = eemd(sig, cfg);
  const auto b = emd(sig);
  REQUIRE(a.imfs.size() == b.imfs.size());
  for (std::size_t k = 0; k < a.imfs.size(); ++k)
    CHECK(a.imfs[k] == b.imfs[k]);
  CHECK(a.residue == b.residue);
  CHECK(a.emd_calls == 1);
  CHECK(a.method == Method::eemd);
}

TEST_CASE("eemd reconstruction holds by construction") {
  const Signal sig{util::random_mix(1024, 21), 1.0};
  EemdConfig cfg;
  cfg.ensemble_size = 10;
  const auto d = eemd(sig, cfg);
  CHECK(d.emd_calls == 10);
  CHECK(d.sift_invocations >= 10);
  std::vector<double> sum = d.residue;
  for (const auto& imf : d.imfs)
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += imf[i];
  CHECK(util::rel_l2(sum, sig.samples) < 1e-10);
}

TEST_CASE("eemd separates the two-tone signal") {
  const auto sig = two_tone(4096, 1000.0, 5.0, 50.0);
  EemdConfig cfg;
  cfg.ensemble_size = 50;
  const auto d = eemd(sig, cfg);
  REQUIRE(d.imfs.size() >= 2);
  const double bin = 1000.0 / 4096.0;
  CHECK(std::abs(util::dominant_freq_hz(d.imfs[0], 1000.0) - 50.0) <= bin);
  bool found_low = false;
  for (std::size_t k = 1; k < d.imfs.size() && !found_low; ++k)
    found_low =
        std::abs(util::dominant_freq_hz(d.imfs[k], 1000.0) - 5.0) <= bin;
  CHECK(found_low);
}

TEST_CASE("eemd results do not depend on the thread count") {
  const Signal sig{util::random_mix(512, 17), 1.0};
  EemdConfig cfg;
  cfg.ensemble_size = 20;
  cfg.num_threads = 1;
  const auto a = eemd(sig, cfg);
  cfg.num_threads = 4;
  const auto b = eemd(sig, cfg);
  REQUIRE(a.imfs.size() == b.imfs.size());
  for (std::size_t k = 0; k < a.imfs.size(); ++k)
    CHECK(a.imfs[k] == b.imfs[k]);
  CHECK(a.residue == b.residue);
}

TEST_CASE("eemd validates its configuration") {
  const Signal sig{util::random_mix(256, 1), 1.0};
  EemdConfig cfg;
  cfg.ensemble_size = 0;
  CHECK_THROWS_AS((void)eemd(sig, cfg), ConfigInvalid);
  cfg = {};
  cfg.noise_std_ratio = -0.1;
  CHECK_THROWS_AS((void)eemd(sig, cfg), ConfigInvalid);
  cfg = {};
  cfg.num_threads = 0;
  CHECK_THROWS_AS((void)eemd(sig, cfg), ConfigInvalid);
}

TEST_CASE("vmd recovers two tone frequencies within one percent") {
  const auto sig = two_tone(4096, 1000.0, 50.0, 120.0);
  VmdConfig cfg;
  cfg.num_modes = 2;
  const auto d = vmd(sig, cfg);
  REQUIRE(d.center_freqs.size() == 2);
  CHECK(d.center_freqs[0] == doctest::Approx(50.0).epsilon(0.01));
  CHECK(d.center_freqs[1] == doctest::Approx(120.0).epsilon(0.01));
  CHECK(d.center_freqs[0] < d.center_freqs[1]);
  CHECK(d.converged);
  CHECK(d.iterations >= 1);
  CHECK(d.method == Method::vmd);
  CHECK(d.emd_calls == 0);
  CHECK(d.sift_invocations == 0);

  // residue is defined as the remainder, so the identity is structural
  std::vector<double> sum = d.residue;
  for (const auto& m : d.imfs)
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += m[i];
  CHECK(util::rel_l2(sum, sig.samples) < 1e-10);

  // each mode should carry one tone: dominant frequencies near 50 and 120
  CHECK(std::abs(util::dominant_freq_hz(d.imfs[0], 1000.0) - 50.0) < 1.0);
  CHECK(std::abs(util::dominant_freq_hz(d.imfs[1], 1000.0) - 120.0) < 1.0);
}

TEST_CASE("single-mode vmd does not expand energy") {
  const auto sig = two_tone(2048, 1000.0, 80.0, 85.0);
  VmdConfig cfg;
  cfg.num_modes = 1;
  cfg.alpha = 5000.0;
  const auto d = vmd(sig, cfg);
  REQUIRE(d.imfs.size() == 1);
  CHECK(energy(d.residue) < energy(sig.samples));
  CHECK(energy(d.imfs[0]) <= energy(sig.samples) * (1.0 + 1e-9));
}

TEST_CASE("vmd validates mode count and solver knobs") {
  const Signal sig{util::random_mix(256, 6), 1.0};
  VmdConfig cfg;
  cfg.num_modes = 0;
  CHECK_THROWS_AS((void)vmd(sig, cfg), InvalidK);
  cfg.num_modes = 200;  // more than n/2
  CHECK_THROWS_AS((void)vmd(sig, cfg), InvalidK);
  cfg = {};
  cfg.num_modes = 2;
  cfg.alpha = 0.0;
  CHECK_THROWS_AS((void)vmd(sig, cfg), ConfigInvalid);
  cfg = {};
  cfg.num_modes = 2;
  cfg.tol = 0.0;
  CHECK_THROWS_AS((void)vmd(sig, cfg), ConfigInvalid);
  cfg = {};
  cfg.num_modes = 2;
  cfg.tau = -1.0;
  CHECK_THROWS_AS((void)vmd(sig, cfg), ConfigInvalid);
  cfg = {};
  cfg.num_modes = 2;
  cfg.max_iters = 0;
  CHECK_THROWS_AS((void)vmd(sig, cfg), ConfigInvalid);
}

TEST_CASE("vmd is deterministic") {
  const auto sig = two_tone(1024, 1000.0, 60.0, 200.0);
  VmdConfig cfg;
  cfg.num_modes = 2;
  const auto a = vmd(sig, cfg);
  const auto b = vmd(sig, cfg);
  CHECK(a.imfs == b.imfs);
  CHECK(a.center_freqs == b.center_freqs);
}

TEST_CASE("select_informative_imf picks the kurtosis argmax") {
  Decomposition d;
  // near-Gaussian, impulsive, and alternating rows with known ordering
  Rng rng(31);
  std::vector<double> gauss(512);
  for (auto& v : gauss) v = rng.normal();
  std::vector<double> spike(512, 0.0);
  spike[100] = 1.0;
  spike[300] = -1.0;
  std::vector<double> alt(512);
  for (std::size_t i = 0; i < alt.size(); ++i) alt[i] = (i % 2) ? 1.0 : -1.0;
  d.imfs = {gauss, spike, alt};

  const auto [idx, score] = select_informative_imf(d);
  CHECK(idx == 1);
  CHECK(score == doctest::Approx(summarize(spike).kurtosis));

  // positive scaling never changes the winner
  for (auto& imf : d.imfs)
    for (auto& v : imf) v *= 3.5;
  CHECK(select_informative_imf(d).first == 1);
}

TEST_CASE("select_informative_imf breaks ties toward the lower index") {
  Decomposition d;
  std::vector<double> alt(128);
  for (std::size_t i = 0; i < alt.size(); ++i) alt[i] = (i % 2) ? 1.0 : -1.0;
  d.imfs = {alt, alt, alt};
  CHECK(select_informative_imf(d).first == 0);
}

TEST_CASE("select_informative_imf scores degenerate IMFs lowest") {
  Decomposition d;
  std::vector<double> flat(64, 0.0);
  std::vector<double> alt(64);
  for (std::size_t i = 0; i < alt.size(); ++i) alt[i] = (i % 2) ? 1.0 : -1.0;
  d.imfs = {flat, alt};
  const auto [idx, score] = select_informative_imf(d);
  CHECK(idx == 1);
  CHECK(score == doctest::Approx(1.0));
}

TEST_CASE("select_informative_imf requires at least one IMF") {
  Decomposition d;
  CHECK_THROWS_AS((void)select_informative_imf(d), EmptyDecomposition);
}

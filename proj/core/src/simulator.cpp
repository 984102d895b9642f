#include "seemd/simulator.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "seemd/errors.hpp"
#include "seemd/rng.hpp"

namespace seemd {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_config(const SimConfig& cfg) {
  if (!(cfg.fs > 0.0)) throw ConfigInvalid("sample rate must be positive");
  if (!(cfg.duration_s > 0.0)) throw ConfigInvalid("duration must be positive");
  if (!(cfg.carrier_freq > 0.0))
    throw ConfigInvalid("carrier (shaft) frequency must be positive");
  if (cfg.modulation_freq < 0.0)
    throw ConfigInvalid("modulation frequency must be >= 0");
  if (cfg.freq_deviation < 0.0)
    throw ConfigInvalid("frequency deviation must be >= 0");
  if (cfg.points_per_rev < 1)
    throw ConfigInvalid("points_per_rev must be >= 1");
  if (!(cfg.resonance_freq > 0.0))
    throw ConfigInvalid("resonance frequency must be positive");
  if (cfg.fs <= 2.0 * cfg.resonance_freq)
    throw ConfigInvalid("sample rate must exceed twice the resonance "
                        "frequency, got fs=" + std::to_string(cfg.fs) +
                        " with resonance " +
                        std::to_string(cfg.resonance_freq));
  if (!(cfg.resonance_damping > 0.0))
    throw ConfigInvalid("damping ratio must be positive");
  if (cfg.q_fault < 0.0 || cfg.q_stiffness < 0.0 || cfg.q_rotation < 0.0)
    throw ConfigInvalid("signal amplitudes must be >= 0");
  if (std::isnan(cfg.snr_db))
    throw ConfigInvalid("snr_db must be a number or +infinity");
}

}  // namespace

std::vector<double> rotation_profile(const SimConfig& cfg,
                                     std::size_t num_samples) {
  check_config(cfg);
  std::vector<double> fr(num_samples, cfg.carrier_freq);
  if (cfg.freq_deviation == 0.0) return fr;

  // Slow drift around the carrier: the running mean of cos(fm * theta) over
  // an angle grid with points_per_rev steps per revolution.
  const double np = static_cast<double>(cfg.points_per_rev);
  double csum = 0.0;
  for (std::size_t i = 0; i < num_samples; ++i) {
    const double theta = kTwoPi * static_cast<double>(i) / np;
    csum += std::cos(cfg.modulation_freq * theta);
    fr[i] += std::numbers::pi * cfg.freq_deviation * csum / np;
  }
  return fr;
}

SimResult simulate_bearing(const SimConfig& cfg) {
  check_config(cfg);
  const std::size_t n = static_cast<std::size_t>(
      std::llround(cfg.fs * cfg.duration_s));
  if (n < 2) throw ConfigInvalid("configuration yields fewer than 2 samples");

  const FaultFrequencies ff =
      fault_frequencies(cfg.geometry, cfg.carrier_freq);

  // Fault orders per shaft revolution; zero means no impulse train.
  double fault_ratio = 0.0;
  double am_freq = 0.0;  // amplitude modulation of the impulse train
  switch (cfg.fault_type) {
    case FaultType::ball:
      fault_ratio = ff.bsf / cfg.carrier_freq;
      am_freq = ff.ftf;
      break;
    case FaultType::inner:
      fault_ratio = ff.bpfi / cfg.carrier_freq;
      am_freq = cfg.carrier_freq;
      break;
    case FaultType::outer:
      fault_ratio = ff.bpfo / cfg.carrier_freq;
      am_freq = 0.0;
      break;
    case FaultType::none:
      break;
  }

  const std::vector<double> fr = rotation_profile(cfg, n);

  SimResult res;
  res.signal.sample_rate = cfg.fs;
  res.signal.samples.assign(n, 0.0);
  res.fault_freq =
      cfg.fault_type == FaultType::none ? 0.0 : fault_ratio * cfg.carrier_freq;

  Rng rng(cfg.seed);
  auto& out = res.signal.samples;

  if (cfg.fault_type != FaultType::none && cfg.q_fault > 0.0) {
    // Integrate the instantaneous fault rate; impulse k fires when the
    // accumulated fault phase crosses phi0 + k revolutions.
    std::vector<double> phase(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      phase[i + 1] = phase[i] + fault_ratio * fr[i] / cfg.fs;

    const double phi0 = rng.uniform(0.0, 1.0);

    const double zeta = cfg.resonance_damping;
    const double tau = 1.0 / (zeta * kTwoPi * cfg.resonance_freq);
    const std::size_t ring_len = static_cast<std::size_t>(
        std::llround(6.0 * tau * cfg.fs));
    std::vector<double> ring(ring_len);
    for (std::size_t j = 0; j < ring_len; ++j) {
      const double t = static_cast<double>(j) / cfg.fs;
      ring[j] = std::exp(-t / tau) * std::sin(kTwoPi * cfg.resonance_freq * t);
    }

    std::size_t seg = 0;
    for (std::size_t k = 0;; ++k) {
      const double target = phi0 + static_cast<double>(k);
      if (target >= phase[n]) break;
      while (seg + 1 < n && phase[seg + 1] <= target) ++seg;
      const double frac =
          (target - phase[seg]) / (phase[seg + 1] - phase[seg]);
      double t_k = (static_cast<double>(seg) + frac) / cfg.fs;

      if (cfg.jitter) {
        // Each impulse lands within +-1% of its local period, independently.
        const double local_rate = fault_ratio * fr[seg];
        const double u = rng.uniform(-0.01, 0.01);
        t_k += u / local_rate;
      }
      if (t_k < 0.0 || t_k >= cfg.duration_s) continue;
      res.impulse_times.push_back(t_k);

      const double depth_term =
          am_freq > 0.0 ? 1.0 + 0.3 * std::cos(kTwoPi * am_freq * t_k) : 1.0;
      const double amp = cfg.q_fault * depth_term;
      const std::size_t i0 =
          static_cast<std::size_t>(std::llround(t_k * cfg.fs));
      for (std::size_t j = 0; j < ring_len && i0 + j < n; ++j)
        out[i0 + j] += amp * ring[j];
    }
  }

  // Shaft-locked tones: 1x rotation and 2x stiffness components.
  if (cfg.q_rotation > 0.0 || cfg.q_stiffness > 0.0) {
    double rot_phase = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      rot_phase += kTwoPi * fr[i] / cfg.fs;
      out[i] += cfg.q_rotation * std::sin(rot_phase) +
                cfg.q_stiffness * std::sin(2.0 * rot_phase);
    }
  }

  if (std::isfinite(cfg.snr_db)) {
    double power = 0.0;
    for (const double v : out) power += v * v;
    power /= static_cast<double>(n);
    const double sigma =
        std::sqrt(power / std::pow(10.0, cfg.snr_db / 10.0));
    for (auto& v : out) v += sigma * rng.normal();
  }

  return res;
}

}  // namespace seemd

#pragma once

#include <cstdint>
#include <vector>

#include "seemd/analysis.hpp"
#include "seemd/signal.hpp"

namespace seemd {

enum class FaultType { ball, inner, outer, none };

// Synthetic ball-bearing vibration generator: a fault impulse train driving
// a decaying single-degree-of-freedom resonance, amplitude-modulated at the
// cage rate, plus deterministic stiffness (2x shaft) and rotation (1x shaft)
// sinusoids and additive white noise at a target SNR.
struct SimConfig {
  BearingGeometry geometry;
  FaultType fault_type = FaultType::ball;
  double fs = 20000.0;        // Hz
  double duration_s = 1.0;
  double carrier_freq = 20.0;   // fc, shaft Hz
  double modulation_freq = 2.0; // fm = 0.1 * fc
  double freq_deviation = 0.0;  // fd
  int points_per_rev = 500;     // N of the rotation profile's angle grid
  double snr_db = 20.0;         // +infinity is the no-noise test hook
  double q_fault = 10.0;
  double q_stiffness = 0.1;
  double q_rotation = 0.1;
  double resonance_freq = 4000.0;   // Hz
  double resonance_damping = 0.024; // viscous damping ratio; ~5 ms ring-down
  bool jitter = true;               // +-1% of period per impulse
  std::uint64_t seed = 0;
};

// Instantaneous shaft frequency: fc + pi*fd*(cumsum(cos(fm*theta))/N) with
// theta_i = 2*pi*i/N over the output sample index i. With fd = 0 the profile
// is the constant fc. Throws ConfigInvalid.
std::vector<double> rotation_profile(const SimConfig& cfg, std::size_t num_samples);

struct SimResult {
  Signal signal;
  double fault_freq = 0.0;            // ground truth, Hz (0 for fault none)
  std::vector<double> impulse_times;  // seconds, after jitter
};

// Deterministic per seed. Throws ConfigInvalid when the configuration
// violates its invariants (fs <= 2*resonance_freq, duration <= 0, ...).
SimResult simulate_bearing(const SimConfig& cfg);

}  // namespace seemd

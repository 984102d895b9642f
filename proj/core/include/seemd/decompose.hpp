#pragma once

#include <cstdint>
#include <utility>

#include "seemd/emd.hpp"
#include "seemd/signal.hpp"

namespace seemd {

// How the modulator enters the product step. one_plus_m multiplies by
// (1 + m) so the zero-noise limit degenerates to plain EMD continuously;
// raw_m multiplies by m alone (kept for sensitivity studies).
enum class Modulation { one_plus_m, raw_m };

struct SeemdConfig {
  double hurst = 0.1;
  double fgn_amplitude = 0.1;  // scales std(x); 0 disables the FGN step
  std::uint64_t fgn_seed = 1;
  std::uint64_t modulator_seed = 2;
  Modulation modulation = Modulation::one_plus_m;
  SiftConfig sift;
};

// Single-pass decomposition: x1 = x + fgn_amplitude*std(x)*FGN(hurst),
// x2 = x1 * (1 + m) with m the unit-variance self-convolved WGN, then one
// emd() over x2. No ensemble loop; emd_calls is exactly 1.
// Throws ZeroVariance on a constant signal.
Decomposition seemd(const Signal& x, const SeemdConfig& cfg);

struct EemdConfig {
  int ensemble_size = 100;      // N_e
  double noise_std_ratio = 0.2; // scales std(x); 0 is the noiseless test hook
  std::uint64_t base_seed = 1;  // trial t uses base_seed + t
  int num_threads = 1;
  SiftConfig sift;
};

// Classical ensemble EMD: N_e trials of emd(x + noise), IMFs aligned by
// order (missing higher orders padded with zeros), per-order means returned.
// residue = x - sum(mean IMFs), so reconstruction holds by construction.
// Results are bit-identical for any num_threads (fixed-chunk accumulation).
Decomposition eemd(const Signal& x, const EemdConfig& cfg);

enum class VmdInit { zero, uniform };

struct VmdConfig {
  int num_modes = 0;      // K; required, must be >= 1
  double alpha = 2000.0;  // bandwidth penalty
  double tau = 0.0;       // dual ascent step; 0 disables the multiplier
  double tol = 1e-7;      // convergence threshold on relative mode change
  int max_iters = 500;
  VmdInit init = VmdInit::uniform;
};

// Variational mode decomposition by ADMM in the frequency domain: Wiener
// update of each mode spectrum around its center frequency, power-centroid
// update of the centers, optional dual ascent. Modes are returned sorted by
// ascending center frequency with residue = x - sum(modes). Non-convergence
// within max_iters is reported via converged=false, not an error.
// Throws InvalidK when num_modes < 1 or too large for the signal.
Decomposition vmd(const Signal& x, const VmdConfig& cfg);

// Index and kurtosis of the most impulsive IMF (argmax of kurtosis, ties to
// the lower index; residue not considered; degenerate zero-variance IMFs
// score lowest). Throws EmptyDecomposition.
std::pair<std::size_t, double> select_informative_imf(const Decomposition& d);

namespace detail {

// Core of seemd() with the injected sequences made explicit, so tests can
// substitute zero noise / zero modulator and assert equality with emd().
Decomposition seemd_apply(const Signal& x, std::span<const double> fgn_scaled,
                          std::span<const double> modulator, Modulation mode,
                          const SiftConfig& sift);

}  // namespace detail

}  // namespace seemd

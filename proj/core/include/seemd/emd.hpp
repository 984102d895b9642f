#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "seemd/signal.hpp"

namespace seemd {

struct SiftConfig {
  // Cauchy-type stopping ratio: sift until
  // sum((h_prev - h)^2) / sum(h_prev^2) < sd_threshold.
  double sd_threshold = 0.2;
  int max_sift_iters = 100;
  // Cap on extracted IMFs; 0 means automatic, floor(log2(N)).
  int max_imfs = 0;
  enum class Boundary { mirror } boundary = Boundary::mirror;
};

enum class Method { emd, eemd, seemd, vmd };

// Ordered IMFs plus residue. For emd/seemd the telescoping construction
// makes sum(imfs) + residue reproduce the decomposed signal to rounding;
// eemd defines residue = x - sum(mean IMFs) so the same identity holds.
struct Decomposition {
  std::vector<std::vector<double>> imfs;
  std::vector<double> residue;
  Method method = Method::emd;
  double sample_rate = 1.0;
  std::vector<SummaryStats> imf_stats;  // one entry per IMF

  // Instrumentation: how many emd() runs and how many sift_one_imf()
  // extractions this decomposition cost (the single-pass vs ensemble story).
  std::size_t emd_calls = 0;
  std::size_t sift_invocations = 0;

  // VMD reporting; emd-family decompositions leave these at the defaults.
  bool converged = true;
  int iterations = 0;
  std::vector<double> center_freqs;  // Hz, ascending (vmd only)
};

struct Extrema {
  std::vector<std::pair<std::size_t, double>> maxima;
  std::vector<std::pair<std::size_t, double>> minima;
};

// Strict three-point local extrema. A plateau of equal values bounded by
// strictly lower (resp. higher) neighbors contributes its center index,
// rounding down on even plateaus. Endpoints are never extrema.
// Throws TooShort (length < 3).
Extrema find_extrema(std::span<const double> x);

// Natural cubic spline through the points, evaluated at indices 0..length-1.
// Before fitting, up to two extrema are mirrored across each signal edge
// (index 0 and index length-1) as boundary knots. Points must be sorted by
// index with no duplicates. Throws InsufficientExtrema when fewer than 2
// knots are available.
std::vector<double> spline_envelope(
    std::span<const std::pair<std::size_t, double>> points, std::size_t length);

struct SiftResult {
  std::vector<double> imf;
  std::vector<double> proto_residue;  // x - imf
  bool converged = false;
  int iterations = 0;
};

// One IMF extraction: h <- h - mean(upper_env, lower_env) until the SD stop
// fires or max_sift_iters is reached. Throws InsufficientExtrema when the
// input has fewer than 2 maxima or minima (caller treats it as the residue),
// and TooShort below 3 samples.
SiftResult sift_one_imf(std::span<const double> x, const SiftConfig& cfg);

// Full decomposition: extract IMFs from successive residues until the
// residue has no oscillation left or max_imfs is reached.
Decomposition emd(const Signal& x, const SiftConfig& cfg = {});

}  // namespace seemd

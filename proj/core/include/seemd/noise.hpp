#pragma once

#include <cstdint>
#include <vector>

#include "seemd/rng.hpp"
#include "seemd/signal.hpp"

namespace seemd {

// Parameters of a fractional Gaussian noise process: the stationary
// increment sequence of fractional Brownian motion with Hurst exponent
// `hurst` and marginal variance `variance`.
struct FgnParams {
  double hurst = 0.5;
  double variance = 1.0;
  std::size_t length = 0;
  std::uint64_t seed = 0;
};

// Theoretical FGN autocovariance at lag k:
//   (sigma^2 / 2) * (|k-1|^(2H) - 2|k|^(2H) + |k+1|^(2H)).
// Throws InvalidHurst outside (0,1) and InvalidStd for sigma2 <= 0.
double fgn_autocovariance(double hurst, double sigma2, std::size_t k);

// Exact FGN synthesis by circulant embedding of the covariance sequence.
// The generated sequence is zero-mean Gaussian with theoretical
// autocovariance equal to fgn_autocovariance at every lag; deterministic per
// seed. Falls back to a Cholesky factorization of the covariance matrix if
// the embedding is not nonnegative definite at the requested length (does
// not happen for FGN in (0,1), but the fallback keeps the contract honest).
// Throws InvalidHurst, InvalidStd, LengthTooShort (length < 2).
Signal generate_fgn(const FgnParams& p, double sample_rate = 1.0);

// I.i.d. zero-mean Gaussian samples with standard deviation std_dev.
// Throws InvalidStd (std_dev <= 0) and LengthTooShort (length < 1).
Signal generate_wgn(double std_dev, std::size_t length, double sample_rate,
                    std::uint64_t seed);

// The self-convolution modulator: two independent white Gaussian sequences
// of the given length, convolved (mode=same) and rescaled to unit sample
// variance. Throws LengthTooShort (length < 2).
Signal convoluted_wgn(std::size_t length, std::uint64_t seed,
                      double sample_rate = 1.0);

namespace detail {

// Dense-matrix fallback used by generate_fgn; exposed so tests can exercise
// it directly (the embedding never rejects FGN covariances in practice).
// O(n^2) memory, so lengths above a few thousand are refused.
std::vector<double> fgn_cholesky(const FgnParams& p);

}  // namespace detail

}  // namespace seemd

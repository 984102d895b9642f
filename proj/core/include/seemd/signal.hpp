#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "seemd/errors.hpp"

namespace seemd {

// Uniformly sampled real-valued time series.
struct Signal {
  std::vector<double> samples;
  double sample_rate = 1.0;  // Hz
};

// Throws ConfigInvalid if the signal is empty, has a nonpositive sample rate,
// or contains non-finite samples.
void validate(const Signal& x);

struct SummaryStats {
  double mean = 0.0;
  double variance = 0.0;      // population (biased) estimator
  double kurtosis = 0.0;      // Pearson, non-excess: E[(x-mu)^4] / sigma^4
  double peak_to_peak = 0.0;
};

double mean(std::span<const double> x);

// Population variance (divide by N). Throws EmptyInput.
double variance(std::span<const double> x);

// Population moment-ratio kurtosis m4 / m2^2. A Gaussian sequence gives ~3.
// Throws TooShort (length < 4) and ZeroVariance (all samples equal).
double kurtosis(std::span<const double> x);

// All four statistics in one pass over the data. kurtosis is set to 0 when
// the variance is zero (callers that need the strict error use kurtosis()).
SummaryStats summarize(std::span<const double> x);

enum class ConvolveMode { full, same };

// Discrete convolution y[n] = sum_t x[t] * h[n-t].
// full: length len(x)+len(h)-1. same: the central len(x) samples, starting at
// offset floor((len(h)-1)/2) of the full result. Long inputs (both > 4096)
// go through an FFT path that matches direct summation to 1e-9 relative.
// Throws EmptyInput.
std::vector<double> convolve(std::span<const double> x,
                             std::span<const double> h,
                             ConvolveMode mode);

// Returns a copy with zero mean and unit population standard deviation.
// Throws ZeroVariance.
Signal standardize(const Signal& x);

}  // namespace seemd

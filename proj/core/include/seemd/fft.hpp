#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace seemd::fft {

// Thin facade over the FFT backend. Conventions match the usual DFT:
// forward is unnormalized, inverse carries the 1/N factor, so
// inverse(forward(x)) == x. All lengths >= 1 are supported, not only powers
// of two (the circulant embedding in the noise module needs length 2N for
// arbitrary N). Thread-safe; plans are cached per size internally.

std::vector<std::complex<double>> forward(std::span<const std::complex<double>> x);
std::vector<std::complex<double>> inverse(std::span<const std::complex<double>> x);

// Real-input helpers. rfft returns the N/2+1 nonnegative-frequency bins;
// irfft inverts it back to n real samples (n must match the original length).
std::vector<std::complex<double>> rfft(std::span<const double> x);
std::vector<double> irfft(std::span<const std::complex<double>> spectrum, std::size_t n);

}  // namespace seemd::fft

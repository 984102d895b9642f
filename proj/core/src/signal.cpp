#include "seemd/signal.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "seemd/fft.hpp"

namespace seemd {

void validate(const Signal& x) {
  if (x.samples.empty()) throw ConfigInvalid("signal has no samples");
  if (!(x.sample_rate > 0.0))
    throw ConfigInvalid("sample_rate must be positive, got " +
                        std::to_string(x.sample_rate));
  for (double v : x.samples)
    if (!std::isfinite(v)) throw ConfigInvalid("signal contains a non-finite sample");
}

double mean(std::span<const double> x) {
  if (x.empty()) throw EmptyInput("mean of empty sequence");
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

double variance(std::span<const double> x) {
  const double mu = mean(x);
  double s2 = 0.0;
  for (double v : x) {
    const double c = v - mu;
    s2 += c * c;
  }
  return s2 / static_cast<double>(x.size());
}

double kurtosis(std::span<const double> x) {
  if (x.size() < 4)
    throw TooShort("kurtosis needs at least 4 samples, got " +
                   std::to_string(x.size()));
  const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
  if (*lo == *hi) throw ZeroVariance("kurtosis undefined on a constant signal");
  const double mu = mean(x);
  double m2 = 0.0, m4 = 0.0;
  for (double v : x) {
    const double c = v - mu;
    const double c2 = c * c;
    m2 += c2;
    m4 += c2 * c2;
  }
  const double n = static_cast<double>(x.size());
  m2 /= n;
  m4 /= n;
  if (m2 <= 0.0) throw ZeroVariance("kurtosis undefined on a constant signal");
  return m4 / (m2 * m2);
}

SummaryStats summarize(std::span<const double> x) {
  SummaryStats s;
  if (x.empty()) throw EmptyInput("summarize of empty sequence");
  const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
  s.peak_to_peak = *hi - *lo;
  s.mean = mean(x);
  double m2 = 0.0, m4 = 0.0;
  for (double v : x) {
    const double c = v - s.mean;
    const double c2 = c * c;
    m2 += c2;
    m4 += c2 * c2;
  }
  const double n = static_cast<double>(x.size());
  s.variance = m2 / n;
  s.kurtosis = (s.variance > 0.0 && *lo != *hi)
                   ? (m4 / n) / (s.variance * s.variance)
                   : 0.0;
  return s;
}

namespace {

std::vector<double> convolve_direct(std::span<const double> x,
                                    std::span<const double> h) {
  std::vector<double> y(x.size() + h.size() - 1, 0.0);
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < h.size(); ++j) y[i + j] += x[i] * h[j];
  return y;
}

std::vector<double> convolve_fft(std::span<const double> x,
                                 std::span<const double> h) {
  const std::size_t full_len = x.size() + h.size() - 1;
  std::size_t n = 1;
  while (n < full_len) n <<= 1;
  std::vector<std::complex<double>> a(n), b(n);
  for (std::size_t i = 0; i < x.size(); ++i) a[i] = x[i];
  for (std::size_t i = 0; i < h.size(); ++i) b[i] = h[i];
  auto fa = fft::forward(a);
  auto fb = fft::forward(b);
  for (std::size_t i = 0; i < n; ++i) fa[i] *= fb[i];
  auto y = fft::inverse(fa);
  std::vector<double> out(full_len);
  for (std::size_t i = 0; i < full_len; ++i) out[i] = y[i].real();
  return out;
}

}  // namespace

std::vector<double> convolve(std::span<const double> x,
                             std::span<const double> h, ConvolveMode mode) {
  if (x.empty() || h.empty()) throw EmptyInput("convolve with an empty operand");
  // The FFT path only pays off for long operands; the threshold also bounds
  // the direct path's worst-case cost.
  std::vector<double> full = (x.size() > 4096 && h.size() > 4096)
                                 ? convolve_fft(x, h)
                                 : convolve_direct(x, h);
  if (mode == ConvolveMode::full) return full;
  const std::size_t offset = (h.size() - 1) / 2;
  return std::vector<double>(full.begin() + static_cast<std::ptrdiff_t>(offset),
                             full.begin() + static_cast<std::ptrdiff_t>(offset + x.size()));
}

Signal standardize(const Signal& x) {
  validate(x);
  const double mu = mean(x.samples);
  const double var = variance(x.samples);
  if (var <= 0.0) throw ZeroVariance("standardize of a constant signal");
  const double inv_sd = 1.0 / std::sqrt(var);
  Signal out;
  out.sample_rate = x.sample_rate;
  out.samples.resize(x.samples.size());
  for (std::size_t i = 0; i < x.samples.size(); ++i)
    out.samples[i] = (x.samples[i] - mu) * inv_sd;
  return out;
}

}  // namespace seemd

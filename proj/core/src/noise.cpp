#include "seemd/noise.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include "seemd/fft.hpp"

namespace seemd {

namespace {

void check_hurst(double h) {
  if (!(h > 0.0 && h < 1.0))
    throw InvalidHurst("Hurst exponent must lie in (0,1), got " +
                       std::to_string(h));
}

void check_sigma2(double s2) {
  if (!(s2 > 0.0))
    throw InvalidStd("variance must be positive, got " + std::to_string(s2));
}

}  // namespace

double fgn_autocovariance(double hurst, double sigma2, std::size_t k) {
  check_hurst(hurst);
  check_sigma2(sigma2);
  const double kd = static_cast<double>(k);
  const double e = 2.0 * hurst;
  return 0.5 * sigma2 *
         (std::pow(std::abs(kd - 1.0), e) - 2.0 * std::pow(kd, e) +
          std::pow(kd + 1.0, e));
}

Signal generate_fgn(const FgnParams& p, double sample_rate) {
  check_hurst(p.hurst);
  check_sigma2(p.variance);
  if (p.length < 2)
    throw LengthTooShort("FGN length must be >= 2, got " +
                         std::to_string(p.length));

  const std::size_t n = p.length;
  const std::size_t m = 2 * n;

  // Circulant embedding: the covariance sequence r(0..n) mirrored into a
  // length-2n circulant whose eigenvalues are the FFT of its first row.
  std::vector<double> r(n + 1);
  for (std::size_t k = 0; k <= n; ++k)
    r[k] = fgn_autocovariance(p.hurst, p.variance, k);

  std::vector<std::complex<double>> c(m);
  for (std::size_t k = 0; k <= n; ++k) c[k] = r[k];
  for (std::size_t k = 1; k < n; ++k) c[m - k] = r[k];

  auto lam_c = fft::forward(c);
  std::vector<double> lam(m);
  double lam_max = 0.0, lam_min = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    lam[i] = lam_c[i].real();
    lam_max = std::max(lam_max, lam[i]);
    lam_min = std::min(lam_min, lam[i]);
  }

  if (lam_min < -1e-9 * lam_max) {
    // Embedding rejected: exact dense fallback (never reached for FGN, the
    // embedding is nonnegative definite across (0,1), but contracts first).
    Signal s;
    s.sample_rate = sample_rate;
    s.samples = detail::fgn_cholesky(p);
    return s;
  }
  for (auto& v : lam) v = std::max(v, 0.0);

  // Complex Gaussian weights with conjugate symmetry; the real part of the
  // transform then has exactly the embedded covariance.
  Rng rng(p.seed);
  std::vector<std::complex<double>> w(m);
  const double md = static_cast<double>(m);
  w[0] = std::sqrt(lam[0] / md) * rng.normal();
  w[n] = std::sqrt(lam[n] / md) * rng.normal();
  for (std::size_t j = 1; j < n; ++j) {
    const double a = rng.normal();
    const double b = rng.normal();
    const double s = std::sqrt(lam[j] / (2.0 * md));
    w[j] = {s * a, s * b};
    w[m - j] = std::conj(w[j]);
  }

  auto z = fft::forward(w);
  Signal out;
  out.sample_rate = sample_rate;
  out.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.samples[i] = z[i].real();
  return out;
}

namespace detail {

std::vector<double> fgn_cholesky(const FgnParams& p) {
  check_hurst(p.hurst);
  check_sigma2(p.variance);
  const std::size_t n = p.length;
  if (n < 2) throw LengthTooShort("FGN length must be >= 2");
  if (n > 4096)
    throw Error("Cholesky FGN fallback limited to 4096 samples, requested " +
                std::to_string(n));

  // Lower-triangular factor of the Toeplitz covariance matrix.
  std::vector<double> r(n);
  for (std::size_t k = 0; k < n; ++k)
    r[k] = fgn_autocovariance(p.hurst, p.variance, k);

  std::vector<double> L(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double s = r[i - j];
      for (std::size_t k = 0; k < j; ++k) s -= L[i * n + k] * L[j * n + k];
      if (i == j) {
        if (s <= 0.0) throw Error("FGN covariance not positive definite");
        L[i * n + j] = std::sqrt(s);
      } else {
        L[i * n + j] = s / L[j * n + j];
      }
    }
  }

  Rng rng(p.seed);
  std::vector<double> g(n);
  for (auto& v : g) v = rng.normal();
  std::vector<double> x(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t k = 0; k <= i; ++k) s += L[i * n + k] * g[k];
    x[i] = s;
  }
  return x;
}

}  // namespace detail

Signal generate_wgn(double std_dev, std::size_t length, double sample_rate,
                    std::uint64_t seed) {
  if (!(std_dev > 0.0))
    throw InvalidStd("WGN standard deviation must be positive, got " +
                     std::to_string(std_dev));
  if (length < 1) throw LengthTooShort("WGN length must be >= 1");
  Rng rng(seed);
  Signal out;
  out.sample_rate = sample_rate;
  out.samples.resize(length);
  for (auto& v : out.samples) v = std_dev * rng.normal();
  return out;
}

Signal convoluted_wgn(std::size_t length, std::uint64_t seed,
                      double sample_rate) {
  if (length < 2)
    throw LengthTooShort("convoluted WGN length must be >= 2, got " +
                         std::to_string(length));
  Rng rng(seed);
  std::vector<double> w1(length), w2(length);
  for (auto& v : w1) v = rng.normal();
  for (auto& v : w2) v = rng.normal();
  auto y = convolve(w1, w2, ConvolveMode::same);
  const double var = variance(y);
  if (var <= 0.0) throw ZeroVariance("degenerate convolved noise");
  const double inv_sd = 1.0 / std::sqrt(var);
  for (auto& v : y) v *= inv_sd;
  Signal out;
  out.sample_rate = sample_rate;
  out.samples = std::move(y);
  return out;
}

}  // namespace seemd

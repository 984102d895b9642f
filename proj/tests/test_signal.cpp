#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "seemd/fft.hpp"
#include "seemd/rng.hpp"
#include "seemd/signal.hpp"
#include "test_util.hpp"

using namespace seemd;

namespace {

std::vector<double> gaussian_draw(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> x(n);
  for (auto& v : x) v = rng.normal();
  return x;
}

// Brute-force full convolution, the oracle for both convolve paths.
std::vector<double> direct_full_conv(const std::vector<double>& x,
                                     const std::vector<double>& h) {
  std::vector<double> y(x.size() + h.size() - 1, 0.0);
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < h.size(); ++j) y[i + j] += x[i] * h[j];
  return y;
}

}  // namespace

TEST_CASE("kurtosis of an alternating two-point sequence is exactly 1") {
  std::vector<double> x(1000);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = (i % 2 == 0) ? 1.0 : -1.0;
  CHECK(kurtosis(x) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("kurtosis of a long Gaussian draw is near 3") {
  // se of sample kurtosis is sqrt(24/N) ~ 0.0049 at N=1e6; 0.05 is a 10 sigma
  // band, so a pass is overwhelmingly stable for a fixed seed.
  const auto x = gaussian_draw(1'000'000, 42);
  CHECK(std::abs(kurtosis(x) - 3.0) < 0.05);
}

TEST_CASE("kurtosis rejects degenerate inputs") {
  std::vector<double> flat(100, 5.0);
  CHECK_THROWS_AS((void)kurtosis(flat), ZeroVariance);
  std::vector<double> three{1.0, 2.0, 3.0};
  CHECK_THROWS_AS((void)kurtosis(three), TooShort);
}

TEST_CASE("kurtosis is invariant under affine maps") {
  const auto x = gaussian_draw(5000, 7);
  const double base = kurtosis(x);
  std::vector<double> y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = -3.25 * x[i] + 17.0;
  CHECK(std::abs(kurtosis(y) - base) < 1e-9);
}

TEST_CASE("mean and variance basics") {
  std::vector<double> x{1.0, 2.0, 3.0, 4.0, 5.0};
  CHECK(mean(x) == doctest::Approx(3.0));
  CHECK(variance(x) == doctest::Approx(2.0));  // population estimator
  std::vector<double> empty;
  CHECK_THROWS_AS((void)variance(empty), EmptyInput);
}

TEST_CASE("summarize agrees with the individual statistics") {
  const auto x = gaussian_draw(4096, 11);
  const auto s = summarize(x);
  CHECK(s.mean == doctest::Approx(mean(x)).epsilon(1e-12));
  CHECK(s.variance == doctest::Approx(variance(x)).epsilon(1e-12));
  CHECK(s.kurtosis == doctest::Approx(kurtosis(x)).epsilon(1e-9));
  const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
  CHECK(s.peak_to_peak == doctest::Approx(*hi - *lo));
}

TEST_CASE("summarize reports kurtosis 0 on a constant sequence") {
  std::vector<double> flat(64, 2.5);
  const auto s = summarize(flat);
  CHECK(s.variance == 0.0);
  CHECK(s.kurtosis == 0.0);
  CHECK(s.peak_to_peak == 0.0);
}

TEST_CASE("standardize two points") {
  Signal x{{0.0, 2.0}, 1.0};
  const auto y = standardize(x);
  CHECK(y.samples[0] == doctest::Approx(-1.0));
  CHECK(y.samples[1] == doctest::Approx(1.0));
  CHECK(y.sample_rate == 1.0);
}

TEST_CASE("standardize produces exact unit moments and is idempotent") {
  Signal x{gaussian_draw(10000, 3), 100.0};
  for (auto& v : x.samples) v = 4.0 * v + 2.0;
  const auto y = standardize(x);
  CHECK(std::abs(mean(y.samples)) < 1e-12);
  CHECK(std::abs(std::sqrt(variance(y.samples)) - 1.0) < 1e-12);
  const auto z = standardize(y);
  for (std::size_t i = 0; i < y.samples.size(); ++i)
    CHECK(std::abs(z.samples[i] - y.samples[i]) < 1e-12);

  Signal flat{std::vector<double>(10, 1.0), 1.0};
  CHECK_THROWS_AS((void)standardize(flat), ZeroVariance);
}

TEST_CASE("convolve identity, delay and triangle") {
  std::vector<double> a{1.0, 0.0, 0.0}, id{1.0};
  auto y = convolve(a, id, ConvolveMode::full);
  CHECK(y == std::vector<double>{1.0, 0.0, 0.0});

  std::vector<double> b{1.0, 2.0, 3.0}, delay{0.0, 1.0};
  y = convolve(b, delay, ConvolveMode::full);
  CHECK(y == std::vector<double>{0.0, 1.0, 2.0, 3.0});

  std::vector<double> ones{1.0, 1.0, 1.0};
  y = convolve(ones, ones, ConvolveMode::full);
  CHECK(y == std::vector<double>{1.0, 2.0, 3.0, 2.0, 1.0});
}

TEST_CASE("convolve same mode keeps the central window") {
  std::vector<double> x{1.0, 2.0, 3.0};
  // even kernel: offset floor((2-1)/2) = 0 into the full result
  auto y = convolve(x, std::vector<double>{0.0, 1.0}, ConvolveMode::same);
  CHECK(y == std::vector<double>{0.0, 1.0, 2.0});
  // odd kernel: offset 1
  auto z = convolve(x, std::vector<double>{1.0, 1.0, 1.0}, ConvolveMode::same);
  CHECK(z == std::vector<double>{3.0, 6.0, 5.0});
}

TEST_CASE("convolve is commutative and bilinear") {
  Rng rng(19);
  std::vector<double> x(37), h(12);
  for (auto& v : x) v = rng.normal();
  for (auto& v : h) v = rng.normal();

  const auto xy = convolve(x, h, ConvolveMode::full);
  const auto yx = convolve(h, x, ConvolveMode::full);
  REQUIRE(xy.size() == yx.size());
  for (std::size_t i = 0; i < xy.size(); ++i)
    CHECK(std::abs(xy[i] - yx[i]) < 1e-12);

  std::vector<double> ax(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) ax[i] = -2.5 * x[i];
  const auto scaled = convolve(ax, h, ConvolveMode::full);
  for (std::size_t i = 0; i < xy.size(); ++i)
    CHECK(std::abs(scaled[i] - (-2.5) * xy[i]) < 1e-12);
}

TEST_CASE("convolve FFT path matches direct summation") {
  // both operands above 4096 samples force the transform path
  const std::size_t n = 4100;
  Rng rng(23);
  std::vector<double> x(n), h(n);
  for (auto& v : x) v = rng.normal();
  for (auto& v : h) v = rng.normal();

  const auto fast = convolve(x, h, ConvolveMode::full);
  const auto slow = direct_full_conv(x, h);
  REQUIRE(fast.size() == slow.size());
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < fast.size(); ++i) {
    num += (fast[i] - slow[i]) * (fast[i] - slow[i]);
    den += slow[i] * slow[i];
  }
  CHECK(std::sqrt(num / den) < 1e-9);

  const auto same = convolve(x, h, ConvolveMode::same);
  REQUIRE(same.size() == n);
  const std::size_t off = (n - 1) / 2;
  for (std::size_t i = 0; i < n; i += 97)
    CHECK(same[i] == doctest::Approx(slow[off + i]).epsilon(1e-9));
}

TEST_CASE("convolve rejects empty operands") {
  std::vector<double> x{1.0}, empty;
  CHECK_THROWS_AS((void)convolve(empty, x, ConvolveMode::full), EmptyInput);
  CHECK_THROWS_AS((void)convolve(x, empty, ConvolveMode::full), EmptyInput);
}

TEST_CASE("validate rejects malformed signals") {
  CHECK_THROWS_AS(validate(Signal{{}, 1.0}), ConfigInvalid);
  CHECK_THROWS_AS(validate(Signal{{1.0}, 0.0}), ConfigInvalid);
  CHECK_THROWS_AS(validate(Signal{{1.0, std::nan("")}, 1.0}), ConfigInvalid);
  CHECK_NOTHROW(validate(Signal{{1.0, 2.0}, 48000.0}));
}

TEST_SUITE("fft facade") {
  TEST_CASE("forward matches the naive DFT at non-power-of-two lengths") {
    for (std::size_t n : {17u, 64u, 100u}) {
      const auto x = gaussian_draw(n, 100 + n);
      std::vector<std::complex<double>> cx(x.begin(), x.end());
      const auto fast = fft::forward(cx);
      const auto slow = util::naive_dft(x);
      REQUIRE(fast.size() == n);
      for (std::size_t k = 0; k < n; ++k)
        CHECK(std::abs(fast[k] - slow[k]) < 1e-9);
    }
  }

  TEST_CASE("inverse(forward(x)) returns x") {
    const auto x = gaussian_draw(333, 5);
    std::vector<std::complex<double>> cx(x.begin(), x.end());
    const auto back = fft::inverse(fft::forward(cx));
    for (std::size_t i = 0; i < x.size(); ++i) {
      CHECK(std::abs(back[i].real() - x[i]) < 1e-12);
      CHECK(std::abs(back[i].imag()) < 1e-12);
    }
  }

  TEST_CASE("rfft agrees with forward and irfft inverts it") {
    for (std::size_t n : {32u, 33u}) {  // even and odd lengths
      const auto x = gaussian_draw(n, 200 + n);
      const auto half = fft::rfft(x);
      REQUIRE(half.size() == n / 2 + 1);
      std::vector<std::complex<double>> cx(x.begin(), x.end());
      const auto full = fft::forward(cx);
      for (std::size_t k = 0; k < half.size(); ++k)
        CHECK(std::abs(half[k] - full[k]) < 1e-10);
      const auto back = fft::irfft(half, n);
      REQUIRE(back.size() == n);
      for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(back[i] - x[i]) < 1e-12);
    }
  }
}

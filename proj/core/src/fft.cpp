#include "seemd/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <mutex>
#include <stdexcept>

namespace seemd::fft {
namespace {

// FFTW's planner is not thread-safe, so plan creation is serialized. Plans
// are cached per (size, direction) and executed through the new-array
// interface, which is re-entrant. FFTW_UNALIGNED keeps the plans valid for
// any caller-provided buffers.
class PlanCache {
 public:
  fftw_plan get(std::size_t n, int sign) {
    std::lock_guard<std::mutex> lock(mu_);
    auto key = std::make_pair(n, sign);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    fftw_complex* buf = fftw_alloc_complex(n);
    fftw_plan p = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, sign,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(buf);
    if (!p) throw std::runtime_error("fftw plan creation failed");
    plans_.emplace(key, p);
    return p;
  }

 private:
  std::mutex mu_;
  std::map<std::pair<std::size_t, int>, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

std::vector<std::complex<double>> transform(
    std::span<const std::complex<double>> x, int sign) {
  const std::size_t n = x.size();
  std::vector<std::complex<double>> out(n);
  if (n == 0) return out;
  if (n == 1) {
    out[0] = x[0];
    return out;
  }
  std::vector<std::complex<double>> in(x.begin(), x.end());
  fftw_plan p = cache().get(n, sign);
  fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(in.data()),
                   reinterpret_cast<fftw_complex*>(out.data()));
  return out;
}

}  // namespace

std::vector<std::complex<double>> forward(std::span<const std::complex<double>> x) {
  return transform(x, FFTW_FORWARD);
}

std::vector<std::complex<double>> inverse(std::span<const std::complex<double>> x) {
  auto out = transform(x, FFTW_BACKWARD);
  const double scale = x.empty() ? 1.0 : 1.0 / static_cast<double>(x.size());
  for (auto& v : out) v *= scale;
  return out;
}

std::vector<std::complex<double>> rfft(std::span<const double> x) {
  std::vector<std::complex<double>> cx(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) cx[i] = x[i];
  auto full = transform(cx, FFTW_FORWARD);
  full.resize(x.size() / 2 + 1);
  return full;
}

std::vector<double> irfft(std::span<const std::complex<double>> spectrum,
                          std::size_t n) {
  if (spectrum.size() != n / 2 + 1)
    throw std::invalid_argument("irfft: spectrum size does not match n");
  std::vector<std::complex<double>> full(n);
  for (std::size_t i = 0; i < spectrum.size(); ++i) full[i] = spectrum[i];
  for (std::size_t i = spectrum.size(); i < n; ++i)
    full[i] = std::conj(full[n - i]);
  auto cx = inverse(full);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = cx[i].real();
  return out;
}

}  // namespace seemd::fft

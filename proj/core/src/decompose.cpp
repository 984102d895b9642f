#include "seemd/decompose.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <exception>
#include <limits>
#include <mutex>
#include <string>
#include <thread>

#include "seemd/errors.hpp"
#include "seemd/fft.hpp"
#include "seemd/noise.hpp"

namespace seemd {

namespace detail {

Decomposition seemd_apply(const Signal& x, std::span<const double> fgn_scaled,
                          std::span<const double> modulator, Modulation mode,
                          const SiftConfig& sift) {
  const std::size_t n = x.samples.size();
  if (fgn_scaled.size() != n || modulator.size() != n)
    throw ConfigInvalid("noise and modulator must match the signal length");

  Signal mixed;
  mixed.sample_rate = x.sample_rate;
  mixed.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double perturbed = x.samples[i] + fgn_scaled[i];
    const double gain =
        mode == Modulation::one_plus_m ? 1.0 + modulator[i] : modulator[i];
    mixed.samples[i] = perturbed * gain;
  }

  Decomposition d = emd(mixed, sift);
  d.method = Method::seemd;
  return d;
}

}  // namespace detail

Decomposition seemd(const Signal& x, const SeemdConfig& cfg) {
  validate(x);
  const std::size_t n = x.samples.size();
  const double sd = std::sqrt(variance(x.samples));
  if (sd == 0.0) throw ZeroVariance("cannot decompose a constant signal");

  std::vector<double> fgn_scaled(n, 0.0);
  if (cfg.fgn_amplitude != 0.0) {
    FgnParams fp;
    fp.hurst = cfg.hurst;
    fp.variance = 1.0;
    fp.length = n;
    fp.seed = cfg.fgn_seed;
    const Signal fgn = generate_fgn(fp, x.sample_rate);
    const double scale = cfg.fgn_amplitude * sd;
    for (std::size_t i = 0; i < n; ++i) fgn_scaled[i] = scale * fgn.samples[i];
  }

  const Signal mod = convoluted_wgn(n, cfg.modulator_seed, x.sample_rate);
  return detail::seemd_apply(x, fgn_scaled, mod.samples, cfg.modulation,
                             cfg.sift);
}

namespace {

struct EemdChunk {
  std::vector<std::vector<double>> imf_sums;  // per order, length n
  std::size_t sift_count = 0;
};

// One contiguous block of ensemble trials, accumulated in trial order.
EemdChunk run_eemd_chunk(const Signal& x, const EemdConfig& cfg,
                         double noise_scale, int first_trial,
                         int last_trial) {
  const std::size_t n = x.samples.size();
  EemdChunk chunk;
  Signal trial;
  trial.sample_rate = x.sample_rate;
  for (int t = first_trial; t < last_trial; ++t) {
    trial.samples = x.samples;
    if (noise_scale > 0.0) {
      const Signal wgn =
          generate_wgn(noise_scale, n, x.sample_rate,
                       cfg.base_seed + static_cast<std::uint64_t>(t));
      for (std::size_t i = 0; i < n; ++i) trial.samples[i] += wgn.samples[i];
    }
    const Decomposition d = emd(trial, cfg.sift);
    chunk.sift_count += d.sift_invocations;
    if (d.imfs.size() > chunk.imf_sums.size())
      chunk.imf_sums.resize(d.imfs.size(), std::vector<double>(n, 0.0));
    for (std::size_t k = 0; k < d.imfs.size(); ++k)
      for (std::size_t i = 0; i < n; ++i)
        chunk.imf_sums[k][i] += d.imfs[k][i];
  }
  return chunk;
}

}  // namespace

Decomposition eemd(const Signal& x, const EemdConfig& cfg) {
  validate(x);
  if (cfg.ensemble_size < 1)
    throw ConfigInvalid("ensemble_size must be >= 1, got " +
                        std::to_string(cfg.ensemble_size));
  if (cfg.noise_std_ratio < 0.0)
    throw ConfigInvalid("noise_std_ratio must be >= 0");
  if (cfg.num_threads < 1)
    throw ConfigInvalid("num_threads must be >= 1");

  const std::size_t n = x.samples.size();
  const double noise_scale =
      cfg.noise_std_ratio * std::sqrt(variance(x.samples));
  const int ne = cfg.ensemble_size;

  // Trials are grouped into fixed blocks of 8 and each block's partial sums
  // are merged in block order, so the summed doubles are bit-identical no
  // matter how many threads execute the blocks.
  constexpr int kChunkTrials = 8;
  const int num_chunks = (ne + kChunkTrials - 1) / kChunkTrials;
  std::vector<EemdChunk> chunks(static_cast<std::size_t>(num_chunks));

  const int workers = std::max(
      1, std::min(cfg.num_threads,
                  std::min(num_chunks,
                           static_cast<int>(
                               std::thread::hardware_concurrency() > 0
                                   ? std::thread::hardware_concurrency()
                                   : 1))));

  auto worker_body = [&](int worker_id) {
    for (int c = worker_id; c < num_chunks; c += workers) {
      const int first = c * kChunkTrials;
      const int last = std::min(first + kChunkTrials, ne);
      chunks[static_cast<std::size_t>(c)] =
          run_eemd_chunk(x, cfg, noise_scale, first, last);
    }
  };

  if (workers == 1) {
    worker_body(0);
  } else {
    std::vector<std::thread> pool;
    std::exception_ptr failure;
    std::mutex failure_mu;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          worker_body(w);
        } catch (...) {
          const std::lock_guard<std::mutex> lock(failure_mu);
          if (!failure) failure = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
  }

  std::size_t max_orders = 0;
  for (const auto& c : chunks) max_orders = std::max(max_orders, c.imf_sums.size());

  Decomposition d;
  d.method = Method::eemd;
  d.sample_rate = x.sample_rate;
  d.emd_calls = static_cast<std::size_t>(ne);
  d.imfs.assign(max_orders, std::vector<double>(n, 0.0));
  for (const auto& c : chunks) {
    d.sift_invocations += c.sift_count;
    for (std::size_t k = 0; k < c.imf_sums.size(); ++k)
      for (std::size_t i = 0; i < n; ++i) d.imfs[k][i] += c.imf_sums[k][i];
  }
  const double inv_ne = 1.0 / static_cast<double>(ne);
  for (auto& imf : d.imfs)
    for (auto& v : imf) v *= inv_ne;

  d.residue = x.samples;
  for (const auto& imf : d.imfs)
    for (std::size_t i = 0; i < n; ++i) d.residue[i] -= imf[i];

  d.imf_stats.reserve(d.imfs.size());
  for (const auto& imf : d.imfs) d.imf_stats.push_back(summarize(imf));
  return d;
}

Decomposition vmd(const Signal& x, const VmdConfig& cfg) {
  validate(x);
  const std::size_t n = x.samples.size();
  const int k_modes = cfg.num_modes;
  if (k_modes < 1)
    throw InvalidK("num_modes must be >= 1, got " + std::to_string(k_modes));
  if (static_cast<std::size_t>(k_modes) > n / 2)
    throw InvalidK("num_modes " + std::to_string(k_modes) +
                   " too large for " + std::to_string(n) + " samples");
  if (!(cfg.alpha > 0.0)) throw ConfigInvalid("alpha must be positive");
  if (!(cfg.tol > 0.0)) throw ConfigInvalid("tol must be positive");
  if (cfg.tau < 0.0) throw ConfigInvalid("tau must be >= 0");
  if (cfg.max_iters < 1) throw ConfigInvalid("max_iters must be >= 1");

  const std::size_t kk = static_cast<std::size_t>(k_modes);
  const auto f_hat = fft::rfft(x.samples);
  const std::size_t bins = f_hat.size();  // n/2 + 1

  std::vector<double> omega_grid(bins);
  for (std::size_t i = 0; i < bins; ++i)
    omega_grid[i] = static_cast<double>(i) / static_cast<double>(n);

  std::vector<double> omega(kk, 0.0);
  if (cfg.init == VmdInit::uniform)
    for (std::size_t k = 0; k < kk; ++k)
      omega[k] = (static_cast<double>(k) + 0.5) /
                 static_cast<double>(kk) * 0.25;

  using cvec = std::vector<std::complex<double>>;
  std::vector<cvec> u(kk, cvec(bins, {0.0, 0.0}));
  cvec sum_u(bins, {0.0, 0.0});
  cvec lambda(bins, {0.0, 0.0});

  Decomposition d;
  d.method = Method::vmd;
  d.sample_rate = x.sample_rate;
  d.converged = false;

  std::vector<cvec> u_prev = u;
  int iter = 0;
  while (iter < cfg.max_iters) {
    ++iter;
    u_prev = u;

    for (std::size_t k = 0; k < kk; ++k) {
      // Wiener filter of what the other modes have not claimed yet,
      // concentrated around this mode's current center frequency.
      double power = 0.0, weighted = 0.0;
      for (std::size_t i = 0; i < bins; ++i) {
        sum_u[i] -= u[k][i];
        const double dw = omega_grid[i] - omega[k];
        const std::complex<double> target =
            f_hat[i] - sum_u[i] + 0.5 * lambda[i];
        u[k][i] = target / (1.0 + 2.0 * cfg.alpha * dw * dw);
        sum_u[i] += u[k][i];
        const double p = std::norm(u[k][i]);
        power += p;
        weighted += omega_grid[i] * p;
      }
      if (power > 0.0) omega[k] = weighted / power;
    }

    if (cfg.tau > 0.0)
      for (std::size_t i = 0; i < bins; ++i)
        lambda[i] += cfg.tau * (f_hat[i] - sum_u[i]);

    double diff = 0.0;
    for (std::size_t k = 0; k < kk; ++k) {
      double num = 0.0, den = 0.0;
      for (std::size_t i = 0; i < bins; ++i) {
        num += std::norm(u[k][i] - u_prev[k][i]);
        den += std::norm(u_prev[k][i]);
      }
      diff += num / (den + std::numeric_limits<double>::epsilon());
    }
    if (diff < cfg.tol) {
      d.converged = true;
      break;
    }
  }
  d.iterations = iter;

  std::vector<std::size_t> order(kk);
  for (std::size_t k = 0; k < kk; ++k) order[k] = k;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return omega[a] < omega[b]; });

  d.imfs.reserve(kk);
  d.center_freqs.reserve(kk);
  for (const std::size_t k : order) {
    d.imfs.push_back(fft::irfft(u[k], n));
    d.center_freqs.push_back(omega[k] * x.sample_rate);
  }

  d.residue = x.samples;
  for (const auto& mode : d.imfs)
    for (std::size_t i = 0; i < n; ++i) d.residue[i] -= mode[i];

  d.imf_stats.reserve(kk);
  for (const auto& mode : d.imfs) d.imf_stats.push_back(summarize(mode));
  return d;
}

std::pair<std::size_t, double> select_informative_imf(const Decomposition& d) {
  if (d.imfs.empty())
    throw EmptyDecomposition("decomposition holds no IMFs to select from");
  std::size_t best = 0;
  double best_kurt = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < d.imfs.size(); ++k) {
    // summarize() reports 0 for flat IMFs; genuine kurtosis is >= 1, so
    // degenerate modes can never win the argmax.
    const double kurt = summarize(d.imfs[k]).kurtosis;
    if (kurt > best_kurt) {
      best_kurt = kurt;
      best = k;
    }
  }
  return {best, best_kurt};
}

}  // namespace seemd

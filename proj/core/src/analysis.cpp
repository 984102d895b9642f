#include "seemd/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "seemd/errors.hpp"
#include "seemd/fft.hpp"

namespace seemd {

Spectrogram spectrogram(const Signal& x, std::size_t window_len,
                        std::size_t hop) {
  validate(x);
  if (window_len < 2)
    throw ConfigInvalid("window_len must be >= 2, got " +
                        std::to_string(window_len));
  if (hop < 1) throw ConfigInvalid("hop must be >= 1");
  const std::size_t n = x.samples.size();
  if (window_len > n)
    throw WindowTooLong("window_len " + std::to_string(window_len) +
                        " exceeds signal length " + std::to_string(n));

  const std::size_t w = window_len;
  std::vector<double> win(w);
  double win_energy = 0.0;
  for (std::size_t i = 0; i < w; ++i) {
    win[i] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi *
                                   static_cast<double>(i) /
                                   static_cast<double>(w)));
    win_energy += win[i] * win[i];
  }
  const double scale =
      1.0 / std::sqrt(static_cast<double>(w) * win_energy);

  const std::size_t frames = 1 + (n - w) / hop;
  const std::size_t bins = w / 2 + 1;

  Spectrogram sg;
  sg.window_len = w;
  sg.hop = hop;
  sg.times.resize(frames);
  sg.freqs.resize(bins);
  for (std::size_t j = 0; j < bins; ++j)
    sg.freqs[j] = static_cast<double>(j) * x.sample_rate /
                  static_cast<double>(w);
  sg.magnitudes.assign(bins, std::vector<double>(frames, 0.0));

  std::vector<double> frame(w);
  for (std::size_t t = 0; t < frames; ++t) {
    const std::size_t start = t * hop;
    sg.times[t] = (static_cast<double>(start) +
                   0.5 * static_cast<double>(w - 1)) /
                  x.sample_rate;
    for (std::size_t i = 0; i < w; ++i)
      frame[i] = x.samples[start + i] * win[i];
    const auto spec = fft::rfft(frame);
    for (std::size_t j = 0; j < bins; ++j)
      sg.magnitudes[j][t] = std::abs(spec[j]) * scale;
  }
  return sg;
}

EnvelopeSpectrum envelope_spectrum(const Signal& x) {
  validate(x);
  const std::size_t n = x.samples.size();
  if (n < 16)
    throw TooShort("envelope spectrum needs at least 16 samples, got " +
                   std::to_string(n));

  // Analytic signal by one-sided doubling of the spectrum.
  std::vector<std::complex<double>> spec(n);
  for (std::size_t i = 0; i < n; ++i) spec[i] = x.samples[i];
  spec = fft::forward(spec);
  // Double the positive frequencies; DC (and Nyquist, for even lengths)
  // stay untouched and the negative half is zeroed.
  const std::size_t half = n / 2;
  for (std::size_t i = 1; i < (n + 1) / 2; ++i) spec[i] *= 2.0;
  for (std::size_t i = half + 1; i < n; ++i) spec[i] = 0.0;
  const auto analytic = fft::inverse(spec);

  std::vector<double> env(n);
  double env_mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    env[i] = std::abs(analytic[i]);
    env_mean += env[i];
  }
  env_mean /= static_cast<double>(n);
  for (auto& v : env) v -= env_mean;

  const auto env_spec = fft::rfft(env);
  const std::size_t bins = env_spec.size();

  EnvelopeSpectrum es;
  es.freqs.resize(bins);
  es.amplitudes.resize(bins);
  const double nd = static_cast<double>(n);
  for (std::size_t j = 0; j < bins; ++j) {
    es.freqs[j] = static_cast<double>(j) * x.sample_rate / nd;
    const bool interior = j > 0 && !(n % 2 == 0 && j == bins - 1);
    es.amplitudes[j] = std::abs(env_spec[j]) * (interior ? 2.0 : 1.0) / nd;
  }
  return es;
}

EnvsiReport envsi(const EnvelopeSpectrum& es, double fault_freq,
                  std::size_t m1, std::size_t m2, double band_halfwidth,
                  bool literal_squaring) {
  if (es.freqs.size() < 2 || es.amplitudes.size() != es.freqs.size())
    throw ConfigInvalid("envelope spectrum must hold at least 2 bins");
  if (!(fault_freq > 0.0))
    throw ConfigInvalid("fault frequency must be positive");
  if (m1 < 1) throw ConfigInvalid("m1 must be >= 1");

  const double df = es.freqs[1] - es.freqs[0];
  const std::size_t bins = es.freqs.size();

  double hw = band_halfwidth;
  if (hw == 0.0) hw = 0.025 * fault_freq;
  if (!(hw > 0.0) || hw >= 0.5 * fault_freq)
    throw BadBandwidth("band halfwidth " + std::to_string(hw) +
                       " must lie in (0, fault_freq/2)");

  std::size_t window = m2;
  if (window == 0) {
    const double span = 10.0 * static_cast<double>(m1) * fault_freq;
    window = std::min(bins,
                      static_cast<std::size_t>(std::floor(span / df)) + 1);
  } else if (window > bins) {
    throw ConfigInvalid("m2 window of " + std::to_string(window) +
                        " bins exceeds the spectrum's " +
                        std::to_string(bins));
  }
  if (window <= m1)
    throw ConfigInvalid("m2 must exceed m1");

  EnvsiReport rep;
  rep.fault_freq = fault_freq;
  rep.m1 = m1;
  rep.m2 = window;
  rep.band_halfwidth = hw;

  std::vector<double> ses(window);
  double ses_max = 0.0;
  for (std::size_t j = 0; j < window; ++j) {
    ses[j] = es.amplitudes[j] * es.amplitudes[j];
    ses_max = std::max(ses_max, ses[j]);
  }
  if (ses_max == 0.0) {
    // Nothing in the window at all; the indicator is defined as 0.
    rep.harmonic_amplitudes.assign(m1, 0.0);
    return rep;
  }
  double ses_sum = 0.0;
  for (auto& v : ses) {
    v /= ses_max;
    ses_sum += v;
  }
  rep.ses_sum = ses_sum;

  double ais_sum = 0.0;
  rep.harmonic_amplitudes.reserve(m1);
  for (std::size_t h = 1; h <= m1; ++h) {
    const double target = static_cast<double>(h) * fault_freq;
    const auto lo_guess = (target - hw) / df;
    const auto hi_guess = (target + hw) / df;
    const std::size_t lo =
        lo_guess <= 2.0 ? 0 : static_cast<std::size_t>(lo_guess) - 2;
    const std::size_t hi = std::min(
        window - 1, static_cast<std::size_t>(std::max(0.0, hi_guess)) + 2);
    double band_max = -1.0;
    for (std::size_t j = lo; j <= hi; ++j) {
      if (std::abs(es.freqs[j] - target) <= hw)
        band_max = std::max(band_max, ses[j]);
    }
    if (band_max < 0.0)
      throw HarmonicOutOfRange("harmonic " + std::to_string(h) + " at " +
                               std::to_string(target) +
                               " Hz has no bins inside the energy window");
    rep.harmonic_amplitudes.push_back(band_max);
    ais_sum += literal_squaring ? band_max * band_max : band_max;
  }

  rep.ais_sum = ais_sum;
  rep.value = ais_sum / ses_sum;
  return rep;
}

FaultFrequencies fault_frequencies(const BearingGeometry& geom,
                                   double shaft_hz) {
  if (!(geom.roller_diameter_mm > 0.0) ||
      !(geom.pitch_diameter_mm > geom.roller_diameter_mm))
    throw InvalidGeometry("roller diameter must be positive and smaller "
                          "than the pitch diameter");
  if (geom.num_rollers < 1)
    throw InvalidGeometry("bearing needs at least one rolling element");
  if (!(geom.contact_angle_rad >= 0.0) ||
      geom.contact_angle_rad >= std::numbers::pi / 2.0)
    throw InvalidGeometry("contact angle must lie in [0, pi/2)");
  if (!(shaft_hz > 0.0))
    throw InvalidGeometry("shaft frequency must be positive");

  const double ratio = geom.roller_diameter_mm / geom.pitch_diameter_mm *
                       std::cos(geom.contact_angle_rad);
  const double nf = static_cast<double>(geom.num_rollers) * shaft_hz;

  FaultFrequencies ff;
  ff.ftf = 0.5 * shaft_hz * (1.0 - ratio);
  ff.bpfo = 0.5 * nf * (1.0 - ratio);
  ff.bpfi = 0.5 * nf * (1.0 + ratio);
  ff.bsf = geom.pitch_diameter_mm / (2.0 * geom.roller_diameter_mm) *
           shaft_hz * (1.0 - ratio * ratio);
  return ff;
}

}  // namespace seemd

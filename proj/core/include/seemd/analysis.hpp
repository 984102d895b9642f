#pragma once

#include <cstddef>
#include <vector>

#include "seemd/signal.hpp"

namespace seemd {

struct Spectrogram {
  std::vector<double> times;  // frame centers, seconds
  std::vector<double> freqs;  // Hz, one-sided
  // magnitudes[f][t], nonnegative; scaled by 1/sqrt(W * sum(w^2)) so that
  // the per-frame magnitude energy never exceeds the frame's sample energy.
  std::vector<std::vector<double>> magnitudes;
  std::size_t window_len = 0;
  std::size_t hop = 0;
};

// Magnitude STFT with a periodic Hann window, one-sided frequency axis,
// frame count 1 + floor((N - window_len)/hop).
// Throws WindowTooLong and ConfigInvalid (hop < 1, window_len < 2).
Spectrogram spectrogram(const Signal& x, std::size_t window_len, std::size_t hop);

struct EnvelopeSpectrum {
  std::vector<double> freqs;       // Hz, starting at 0
  std::vector<double> amplitudes;  // nonnegative
};

// One-sided amplitude spectrum of the demeaned Hilbert envelope. The
// analytic signal comes from frequency-domain one-sided doubling at the
// natural length (no padding), so bins are exact multiples of fs/N.
// Scaling: interior bins 2/N, DC and Nyquist 1/N.
// Throws TooShort (length < 16).
EnvelopeSpectrum envelope_spectrum(const Signal& x);

struct EnvsiReport {
  double value = 0.0;      // in [0,1]
  double fault_freq = 0.0;
  std::size_t m1 = 0;      // harmonics scored
  std::size_t m2 = 0;      // bins in the energy window
  double band_halfwidth = 0.0;  // Hz
  std::vector<double> harmonic_amplitudes;  // per-harmonic band max of SES
  double ais_sum = 0.0;    // numerator as summed
  double ses_sum = 0.0;    // denominator: total SES over the window
};

// Envelope-spectrum indicator: SES = squared amplitudes normalized by their
// maximum over the first m2 bins; AIS(i) = max SES within +-band_halfwidth
// of i*fault_freq; value = sum(AIS) / sum(SES over the first m2 bins).
// Defaults (passed as 0): band_halfwidth = 2.5% of fault_freq, m2 = bins
// covering [0, 10*m1*fault_freq]. literal_squaring switches the numerator to
// sum(AIS^2) for sensitivity comparison (the printed-formula variant).
// Throws HarmonicOutOfRange (a harmonic band has no bins inside the window),
// BadBandwidth (halfwidth <= 0 after defaulting, or >= fault_freq/2 so
// neighboring bands would touch), ConfigInvalid (m1 < 1 or m2 <= m1).
EnvsiReport envsi(const EnvelopeSpectrum& es, double fault_freq,
                  std::size_t m1 = 3, std::size_t m2 = 0,
                  double band_halfwidth = 0.0, bool literal_squaring = false);

struct BearingGeometry {
  double roller_diameter_mm = 8.4;   // d
  double pitch_diameter_mm = 71.5;   // D
  double contact_angle_rad = 0.2740166925631097;  // 15.7 degrees
  int num_rollers = 16;              // n
};

struct FaultFrequencies {
  double bpfo = 0.0;  // outer race
  double bpfi = 0.0;  // inner race
  double bsf = 0.0;   // ball spin
  double ftf = 0.0;   // cage (fundamental train)
};

// Standard bearing kinematics with r = (d/D)cos(phi):
//   FTF = (f/2)(1-r), BPFO = (n f/2)(1-r), BPFI = (n f/2)(1+r),
//   BSF = (D f / 2d)(1-r^2).
// Throws InvalidGeometry when the geometry invariants fail or shaft_hz <= 0.
FaultFrequencies fault_frequencies(const BearingGeometry& geom, double shaft_hz);

}  // namespace seemd

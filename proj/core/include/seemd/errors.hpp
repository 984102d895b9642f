#pragma once

#include <stdexcept>
#include <string>

namespace seemd {

// Base class of every error thrown by this library. Callers that want a
// single catch-all can catch seemd::Error; the subclasses exist so tests and
// the CLI can react to specific failure modes.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define SEEMD_ERROR_TYPE(Name)                                   \
  class Name : public Error {                                    \
   public:                                                       \
    explicit Name(const std::string& what) : Error(what) {}      \
  }

SEEMD_ERROR_TYPE(EmptyInput);           // an operand sequence is empty
SEEMD_ERROR_TYPE(TooShort);             // input shorter than the operation needs
SEEMD_ERROR_TYPE(ZeroVariance);         // statistic undefined on a constant signal
SEEMD_ERROR_TYPE(InvalidStd);           // nonpositive standard deviation / variance
SEEMD_ERROR_TYPE(InvalidHurst);         // Hurst exponent outside (0,1)
SEEMD_ERROR_TYPE(LengthTooShort);       // generator length below its minimum
SEEMD_ERROR_TYPE(InsufficientExtrema);  // sifting target has no oscillation left
SEEMD_ERROR_TYPE(WindowTooLong);        // STFT window exceeds the signal
SEEMD_ERROR_TYPE(HarmonicOutOfRange);   // requested harmonic outside the spectrum
SEEMD_ERROR_TYPE(BadBandwidth);         // harmonic bands empty or overlapping
SEEMD_ERROR_TYPE(InvalidGeometry);      // bearing geometry violates its invariants
SEEMD_ERROR_TYPE(ConfigInvalid);        // configuration violates an invariant
SEEMD_ERROR_TYPE(InvalidK);             // mode count for VMD out of range
SEEMD_ERROR_TYPE(EmptyDecomposition);   // no IMFs to select from
SEEMD_ERROR_TYPE(UnsupportedFormat);    // file format not recognized / not mono
SEEMD_ERROR_TYPE(IoError);              // filesystem read/write failure

#undef SEEMD_ERROR_TYPE

}  // namespace seemd

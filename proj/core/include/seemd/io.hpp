#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>

#include "seemd/signal.hpp"

namespace seemd {

// Supported signal file formats, chosen by extension:
//   .wav          RIFF WAVE, mono; PCM16, PCM32 or IEEE float32 on read,
//                 IEEE float32 on write.
//   .csv          one sample per line, "# sample_rate=<Hz>" comment header,
//                 17 significant digits on write (lossless round trip).
//   .f64 / .bin   headerless little-endian float64 with a JSON sidecar
//                 "<file>.json" carrying {"sample_rate": <Hz>} (lossless).
// Reads throw UnsupportedFormat (unknown extension, malformed content,
// channels != 1) or IoError (filesystem problems, missing sidecar).

Signal read_signal(const std::filesystem::path& path);
void write_signal(const std::filesystem::path& path, const Signal& x);

// Write PCM16 WAV specifically (the reader handles all three WAV layouts;
// the default writer emits float32).
void write_wav_pcm16(const std::filesystem::path& path, const Signal& x);

// FNV-1a 64-bit content hash, as used in run manifests.
std::uint64_t fnv1a64(std::span<const unsigned char> bytes);
std::uint64_t file_digest(const std::filesystem::path& path);

// Whole-file write via a temp file in the same directory plus rename, so
// readers never observe a partial file. Throws IoError.
void write_file_atomic(const std::filesystem::path& path, std::string_view bytes);

// Locale-independent float formatting at 17 significant digits (round-trip
// exact for IEEE doubles) and strict parsing.
std::string format_double(double v);
double parse_double(std::string_view s);

}  // namespace seemd

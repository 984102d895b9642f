#include "seemd/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <system_error>
#include <vector>

#include <nlohmann/json.hpp>

namespace seemd {

namespace {

namespace fs = std::filesystem;

std::string lower_extension(const fs::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return ext;
}

std::vector<unsigned char> read_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  in.seekg(0, std::ios::end);
  const std::streamoff size = in.tellg();
  if (size < 0) throw IoError("cannot stat " + path.string());
  in.seekg(0, std::ios::beg);
  std::vector<unsigned char> bytes(static_cast<std::size_t>(size));
  if (size > 0 &&
      !in.read(reinterpret_cast<char*>(bytes.data()), size))
    throw IoError("cannot read " + path.string());
  return bytes;
}

std::uint16_t le16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t le32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) |
         (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

void put16(std::string& s, std::uint16_t v) {
  s.push_back(static_cast<char>(v & 0xff));
  s.push_back(static_cast<char>((v >> 8) & 0xff));
}

void put32(std::string& s, std::uint32_t v) {
  put16(s, static_cast<std::uint16_t>(v & 0xffff));
  put16(s, static_cast<std::uint16_t>(v >> 16));
}

Signal read_wav(const fs::path& path) {
  const auto bytes = read_bytes(path);
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
    throw UnsupportedFormat(path.string() + " is not a RIFF WAVE file");

  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  bool have_fmt = false;
  const unsigned char* data = nullptr;
  std::size_t data_len = 0;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::uint32_t chunk_len = le32(bytes.data() + pos + 4);
    const unsigned char* body = bytes.data() + pos + 8;
    if (pos + 8 + chunk_len > bytes.size())
      throw UnsupportedFormat(path.string() + ": truncated chunk");
    if (std::memcmp(bytes.data() + pos, "fmt ", 4) == 0) {
      if (chunk_len < 16)
        throw UnsupportedFormat(path.string() + ": malformed fmt chunk");
      format = le16(body);
      channels = le16(body + 2);
      rate = le32(body + 4);
      bits = le16(body + 14);
      have_fmt = true;
    } else if (std::memcmp(bytes.data() + pos, "data", 4) == 0) {
      data = body;
      data_len = chunk_len;
    }
    pos += 8 + chunk_len + (chunk_len % 2);  // chunks are word-aligned
  }

  if (!have_fmt || data == nullptr)
    throw UnsupportedFormat(path.string() + ": missing fmt or data chunk");
  if (channels != 1)
    throw UnsupportedFormat(path.string() + ": only mono is supported, file has " +
                            std::to_string(channels) + " channels");

  Signal out;
  out.sample_rate = static_cast<double>(rate);
  if (format == 1 && bits == 16) {
    out.samples.resize(data_len / 2);
    for (std::size_t i = 0; i < out.samples.size(); ++i) {
      const auto v = static_cast<std::int16_t>(le16(data + 2 * i));
      out.samples[i] = static_cast<double>(v) / 32768.0;
    }
  } else if (format == 1 && bits == 32) {
    out.samples.resize(data_len / 4);
    for (std::size_t i = 0; i < out.samples.size(); ++i) {
      const auto v = static_cast<std::int32_t>(le32(data + 4 * i));
      out.samples[i] = static_cast<double>(v) / 2147483648.0;
    }
  } else if (format == 3 && bits == 32) {
    out.samples.resize(data_len / 4);
    for (std::size_t i = 0; i < out.samples.size(); ++i) {
      const std::uint32_t raw = le32(data + 4 * i);
      float f;
      std::memcpy(&f, &raw, 4);
      out.samples[i] = static_cast<double>(f);
    }
  } else {
    throw UnsupportedFormat(path.string() + ": unsupported WAV layout (format " +
                            std::to_string(format) + ", " +
                            std::to_string(bits) + " bits)");
  }
  if (out.samples.empty())
    throw UnsupportedFormat(path.string() + " holds no samples");
  return out;
}

std::string wav_header(std::uint16_t format, std::uint16_t bits,
                       std::uint32_t rate, std::uint32_t data_len) {
  std::string h;
  h.reserve(44);
  h += "RIFF";
  put32(h, 36 + data_len);
  h += "WAVE";
  h += "fmt ";
  put32(h, 16);
  put16(h, format);
  put16(h, 1);  // mono
  put32(h, rate);
  const std::uint32_t bytes_per_sample = bits / 8;
  put32(h, rate * bytes_per_sample);
  put16(h, static_cast<std::uint16_t>(bytes_per_sample));
  put16(h, bits);
  h += "data";
  put32(h, data_len);
  return h;
}

void write_wav_float32(const fs::path& path, const Signal& x) {
  const auto rate = static_cast<std::uint32_t>(std::llround(x.sample_rate));
  const auto data_len = static_cast<std::uint32_t>(x.samples.size() * 4);
  std::string body = wav_header(3, 32, rate, data_len);
  body.reserve(body.size() + data_len);
  for (const double v : x.samples) {
    const auto f = static_cast<float>(v);
    std::uint32_t raw;
    std::memcpy(&raw, &f, 4);
    put32(body, raw);
  }
  write_file_atomic(path, body);
}

Signal read_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  Signal out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string_view sv(line);
    while (!sv.empty() && (sv.front() == ' ' || sv.front() == '\t'))
      sv.remove_prefix(1);
    if (sv.empty()) continue;
    if (sv.front() == '#') {
      constexpr std::string_view key = "# sample_rate=";
      if (line.rfind(key, 0) == 0)
        out.sample_rate = parse_double(line.substr(key.size()));
      continue;
    }
    if (sv.find(',') != std::string_view::npos)
      throw UnsupportedFormat(path.string() + ":" + std::to_string(lineno) +
                              ": expected a single column");
    try {
      out.samples.push_back(parse_double(sv));
    } catch (const Error&) {
      throw UnsupportedFormat(path.string() + ":" + std::to_string(lineno) +
                              ": not a number: " + std::string(sv));
    }
  }
  if (out.samples.empty())
    throw UnsupportedFormat(path.string() + " holds no samples");
  return out;
}

void write_csv(const fs::path& path, const Signal& x) {
  std::string body = "# sample_rate=" + format_double(x.sample_rate) + "\n";
  for (const double v : x.samples) {
    body += format_double(v);
    body += '\n';
  }
  write_file_atomic(path, body);
}

fs::path sidecar_path(const fs::path& path) {
  return fs::path(path.string() + ".json");
}

Signal read_raw(const fs::path& path) {
  const auto bytes = read_bytes(path);
  if (bytes.size() % 8 != 0)
    throw UnsupportedFormat(path.string() +
                            ": size is not a multiple of 8 bytes");
  Signal out;
  out.samples.resize(bytes.size() / 8);
  if (!out.samples.empty())
    std::memcpy(out.samples.data(), bytes.data(), bytes.size());
  if (out.samples.empty())
    throw UnsupportedFormat(path.string() + " holds no samples");

  const fs::path side = sidecar_path(path);
  if (!fs::exists(side))
    throw IoError("missing sidecar " + side.string());
  const auto side_bytes = read_bytes(side);
  nlohmann::json j = nlohmann::json::parse(
      side_bytes.begin(), side_bytes.end(), nullptr, false);
  if (j.is_discarded() || !j.contains("sample_rate") ||
      !j["sample_rate"].is_number())
    throw UnsupportedFormat(side.string() +
                            ": sidecar must carry a numeric sample_rate");
  out.sample_rate = j["sample_rate"].get<double>();
  return out;
}

void write_raw(const fs::path& path, const Signal& x) {
  std::string body(x.samples.size() * 8, '\0');
  if (!x.samples.empty())
    std::memcpy(body.data(), x.samples.data(), body.size());
  write_file_atomic(path, body);
  write_file_atomic(sidecar_path(path),
                    "{\"sample_rate\": " + format_double(x.sample_rate) +
                        "}\n");
}

}  // namespace

Signal read_signal(const fs::path& path) {
  const std::string ext = lower_extension(path);
  if (ext == ".wav") return read_wav(path);
  if (ext == ".csv") return read_csv(path);
  if (ext == ".f64" || ext == ".bin") return read_raw(path);
  throw UnsupportedFormat("unknown signal format: " + path.string());
}

void write_signal(const fs::path& path, const Signal& x) {
  const std::string ext = lower_extension(path);
  if (ext == ".wav") return write_wav_float32(path, x);
  if (ext == ".csv") return write_csv(path, x);
  if (ext == ".f64" || ext == ".bin") return write_raw(path, x);
  throw UnsupportedFormat("unknown signal format: " + path.string());
}

void write_wav_pcm16(const fs::path& path, const Signal& x) {
  const auto rate = static_cast<std::uint32_t>(std::llround(x.sample_rate));
  const auto data_len = static_cast<std::uint32_t>(x.samples.size() * 2);
  std::string body = wav_header(1, 16, rate, data_len);
  body.reserve(body.size() + data_len);
  for (const double v : x.samples) {
    const double scaled = std::clamp(v, -1.0, 1.0) * 32767.0;
    put16(body, static_cast<std::uint16_t>(
                    static_cast<std::int16_t>(std::llround(scaled))));
  }
  write_file_atomic(path, body);
}

std::uint64_t fnv1a64(std::span<const unsigned char> bytes) {
  std::uint64_t hash = 14695981039346656037ull;
  for (const unsigned char b : bytes) {
    hash ^= b;
    hash *= 1099511628211ull;
  }
  return hash;
}

std::uint64_t file_digest(const fs::path& path) {
  const auto bytes = read_bytes(path);
  return fnv1a64(bytes);
}

void write_file_atomic(const fs::path& path, std::string_view bytes) {
  fs::path dir = path.parent_path();
  if (dir.empty()) dir = ".";
  std::error_code ec;
  fs::create_directories(dir, ec);  // best effort; the open below reports

  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot create " + tmp.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("short write to " + tmp.string());
  }
  fs::rename(tmp, path, ec);
  if (ec)
    throw IoError("cannot move " + tmp.string() + " into place: " +
                  ec.message());
}

std::string format_double(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v,
                                 std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' ||
                        s.back() == '\r'))
    s.remove_suffix(1);
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw ConfigInvalid("not a number: '" + std::string(s) + "'");
  return v;
}

}  // namespace seemd

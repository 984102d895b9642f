#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <string>
#include <vector>

#include "seemd/io.hpp"
#include "seemd/signal.hpp"

using namespace seemd;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() /
           ("seemd_io_test_" + std::to_string(counter++));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

void write_raw_bytes(const fs::path& p, const std::string& bytes) {
  std::ofstream out(p, std::ios::binary);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

void push_u16(std::string& s, std::uint16_t v) {
  s.push_back(static_cast<char>(v & 0xff));
  s.push_back(static_cast<char>((v >> 8) & 0xff));
}

void push_u32(std::string& s, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) s.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

// Minimal RIFF/WAVE builder for reader tests.
std::string wav_bytes(std::uint16_t format, std::uint16_t channels,
                      std::uint32_t rate, std::uint16_t bits,
                      const std::string& data) {
  std::string s = "RIFF";
  push_u32(s, static_cast<std::uint32_t>(36 + data.size()));
  s += "WAVEfmt ";
  push_u32(s, 16);
  push_u16(s, format);
  push_u16(s, channels);
  push_u32(s, rate);
  push_u32(s, rate * channels * bits / 8);
  push_u16(s, static_cast<std::uint16_t>(channels * bits / 8));
  push_u16(s, bits);
  s += "data";
  push_u32(s, static_cast<std::uint32_t>(data.size()));
  s += data;
  return s;
}

}  // namespace

TEST_CASE("float64 files round trip bit-exactly with their sidecar") {
  TempDir tmp;
  Signal x{{1.0, -2.5, std::numbers::pi, 1e-300, 0.0}, 19200.0};
  for (const char* name : {"sig.f64", "sig.bin"}) {
    const auto p = tmp.path / name;
    write_signal(p, x);
    CHECK(fs::exists(p));
    CHECK(fs::exists(tmp.path / (std::string(name) + ".json")));
    const auto y = read_signal(p);
    CHECK(y.samples == x.samples);
    CHECK(y.sample_rate == 19200.0);
  }
}

TEST_CASE("raw reads reject missing sidecars and bad sizes") {
  TempDir tmp;
  const auto p = tmp.path / "orphan.f64";
  write_raw_bytes(p, std::string(16, '\0'));  // two doubles, no sidecar
  CHECK_THROWS_AS((void)read_signal(p), IoError);

  const auto q = tmp.path / "ragged.f64";
  write_raw_bytes(q, std::string(12, '\0'));  // not a multiple of 8
  write_raw_bytes(tmp.path / "ragged.f64.json", "{\"sample_rate\": 100}");
  CHECK_THROWS_AS((void)read_signal(q), UnsupportedFormat);

  const auto r = tmp.path / "badrate.f64";
  write_raw_bytes(r, std::string(16, '\0'));
  write_raw_bytes(tmp.path / "badrate.f64.json", "{\"sample_rate\": \"fast\"}");
  CHECK_THROWS_AS((void)read_signal(r), UnsupportedFormat);
}

TEST_CASE("csv files round trip bit-exactly") {
  TempDir tmp;
  Signal x{{0.1, -0.30000000000000004, 1e17, -2.2250738585072014e-308}, 48000.0};
  const auto p = tmp.path / "sig.csv";
  write_signal(p, x);
  const auto y = read_signal(p);
  CHECK(y.samples == x.samples);
  CHECK(y.sample_rate == 48000.0);
}

TEST_CASE("csv reader handles comments, blanks and a missing rate header") {
  TempDir tmp;
  const auto p = tmp.path / "hand.csv";
  write_raw_bytes(p,
                  "# a comment line\n"
                  "1.5\n"
                  "\n"
                  "  -2.25  \n"
                  "# trailing comment\n"
                  "3\n");
  const auto y = read_signal(p);
  CHECK(y.samples == std::vector<double>{1.5, -2.25, 3.0});
  CHECK(y.sample_rate == 1.0);  // default when no header is present

  const auto q = tmp.path / "rated.csv";
  write_raw_bytes(q, "# sample_rate=250\n0.5\r\n0.25\n");
  const auto z = read_signal(q);
  CHECK(z.sample_rate == 250.0);
  CHECK(z.samples == std::vector<double>{0.5, 0.25});
}

TEST_CASE("csv reader rejects multi-column and malformed rows") {
  TempDir tmp;
  const auto p = tmp.path / "two.csv";
  write_raw_bytes(p, "1.0,2.0\n");
  CHECK_THROWS_AS((void)read_signal(p), UnsupportedFormat);

  const auto q = tmp.path / "junk.csv";
  write_raw_bytes(q, "1.0\nnot-a-number\n");
  CHECK_THROWS_AS((void)read_signal(q), UnsupportedFormat);
}

TEST_CASE("float32 wav round trips float-representable samples") {
  TempDir tmp;
  Signal x{{0.5, -0.25, 1.5, 0.0, -1.0}, 44100.0};
  const auto p = tmp.path / "sig.wav";
  write_signal(p, x);
  const auto y = read_signal(p);
  CHECK(y.samples == x.samples);
  CHECK(y.sample_rate == 44100.0);
}

TEST_CASE("pcm16 wav writes quantize within half a step") {
  TempDir tmp;
  Signal x{{0.123456, -0.98765, 0.5, -1.0, 1.0}, 20000.0};
  const auto p = tmp.path / "sig16.wav";
  write_wav_pcm16(p, x);
  const auto y = read_signal(p);
  REQUIRE(y.samples.size() == x.samples.size());
  for (std::size_t i = 0; i < x.samples.size(); ++i)
    CHECK(std::abs(y.samples[i] - x.samples[i]) < 1.0 / 16384.0);

  Signal loud{{2.0, -2.0}, 8000.0};
  const auto q = tmp.path / "clip.wav";
  write_wav_pcm16(q, loud);
  const auto z = read_signal(q);
  CHECK(z.samples[0] == doctest::Approx(32767.0 / 32768.0));
  CHECK(z.samples[1] == doctest::Approx(-32767.0 / 32768.0));
}

TEST_CASE("wav reader decodes hand-built pcm frames") {
  TempDir tmp;
  std::string data;
  push_u16(data, 0x4000);                   // 16384 -> 0.5
  push_u16(data, static_cast<std::uint16_t>(-16384));  // -0.5
  const auto p = tmp.path / "hand16.wav";
  write_raw_bytes(p, wav_bytes(1, 1, 12345, 16, data));
  const auto y = read_signal(p);
  CHECK(y.sample_rate == 12345.0);
  REQUIRE(y.samples.size() == 2);
  CHECK(y.samples[0] == doctest::Approx(0.5));
  CHECK(y.samples[1] == doctest::Approx(-0.5));

  std::string d32;
  push_u32(d32, 0x40000000);  // 2^30 -> 0.5
  const auto q = tmp.path / "hand32.wav";
  write_raw_bytes(q, wav_bytes(1, 1, 1000, 32, d32));
  const auto z = read_signal(q);
  REQUIRE(z.samples.size() == 1);
  CHECK(z.samples[0] == doctest::Approx(0.5));
}

TEST_CASE("wav reader rejects what it cannot represent") {
  TempDir tmp;
  std::string data;
  push_u16(data, 0);
  push_u16(data, 0);
  const auto stereo = tmp.path / "stereo.wav";
  write_raw_bytes(stereo, wav_bytes(1, 2, 8000, 16, data));
  CHECK_THROWS_AS((void)read_signal(stereo), UnsupportedFormat);

  const auto pcm24 = tmp.path / "deep.wav";
  write_raw_bytes(pcm24, wav_bytes(1, 1, 8000, 24, std::string(3, '\0')));
  CHECK_THROWS_AS((void)read_signal(pcm24), UnsupportedFormat);

  const auto empty = tmp.path / "empty.wav";
  write_raw_bytes(empty, "");
  CHECK_THROWS_AS((void)read_signal(empty), UnsupportedFormat);

  const auto notriff = tmp.path / "text.wav";
  write_raw_bytes(notriff, "this is not a wave file at all........");
  CHECK_THROWS_AS((void)read_signal(notriff), UnsupportedFormat);
}

TEST_CASE("unknown extensions and missing files fail loudly") {
  TempDir tmp;
  write_raw_bytes(tmp.path / "sig.xyz", "123");
  CHECK_THROWS_AS((void)read_signal(tmp.path / "sig.xyz"), UnsupportedFormat);
  CHECK_THROWS_AS((void)read_signal(tmp.path / "absent.f64"), IoError);
  CHECK_THROWS_AS(write_signal(tmp.path / "out.xyz", Signal{{1.0}, 1.0}),
                  UnsupportedFormat);
}

TEST_CASE("fnv1a64 known vectors") {
  CHECK(fnv1a64({}) == 14695981039346656037ull);
  const unsigned char a[] = {'a'};
  CHECK(fnv1a64({a, 1}) == 12638187200555641996ull);  // 0xaf63dc4c8601ec8c
  const unsigned char abc[] = {'a', 'b', 'c'};
  CHECK(fnv1a64({abc, 3}) == 16654208175385433931ull);
}

TEST_CASE("file_digest hashes file contents") {
  TempDir tmp;
  const auto p = tmp.path / "blob";
  write_raw_bytes(p, "abc");
  const unsigned char abc[] = {'a', 'b', 'c'};
  CHECK(file_digest(p) == fnv1a64({abc, 3}));
}

TEST_CASE("atomic writes land complete and clean up their temp file") {
  TempDir tmp;
  const auto p = tmp.path / "nested" / "report.json";
  write_file_atomic(p, "{\"k\": 1}\n");
  std::ifstream in(p);
  std::string content((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
  CHECK(content == "{\"k\": 1}\n");

  write_file_atomic(p, "replaced");
  std::ifstream in2(p);
  std::string content2((std::istreambuf_iterator<char>(in2)),
                       std::istreambuf_iterator<char>());
  CHECK(content2 == "replaced");

  bool leftover = false;
  for (const auto& e : fs::directory_iterator(p.parent_path()))
    if (e.path().extension() == ".tmp") leftover = true;
  CHECK_FALSE(leftover);

  // parent is a regular file, so the write cannot succeed
  CHECK_THROWS_AS(write_file_atomic(p / "impossible.txt", "x"), IoError);
}

TEST_CASE("format_double and parse_double round trip exactly") {
  for (double v : {std::numbers::pi, 1.0 / 3.0, 1e-300, -12345.6789, 0.0,
                   2.2250738585072014e-308}) {
    const std::string s = format_double(v);
    CHECK(parse_double(s) == v);
  }
  CHECK(parse_double("  1.5  ") == 1.5);
  CHECK(parse_double("1e5") == 100000.0);
  CHECK_THROWS_AS((void)parse_double(""), ConfigInvalid);
  CHECK_THROWS_AS((void)parse_double("abc"), ConfigInvalid);
  CHECK_THROWS_AS((void)parse_double("1.5stuff"), ConfigInvalid);
}

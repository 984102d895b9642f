// seemd: signal decomposition and bearing-fault diagnosis from the command
// line. Five subcommands (simulate, decompose, analyze, compare, replay),
// JSON configs with flag overrides, and a manifest per run that captures
// everything needed to reproduce the outputs bit for bit.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "seemd/analysis.hpp"
#include "seemd/decompose.hpp"
#include "seemd/emd.hpp"
#include "seemd/errors.hpp"
#include "seemd/io.hpp"
#include "seemd/signal.hpp"
#include "seemd/simulator.hpp"
#include "seemd/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace seemd;

namespace {

bool verbose_enabled() {
  const char* v = std::getenv("SEEMD_VERBOSE");
  return v != nullptr && *v != '\0' && std::string_view(v) != "0";
}

void note(const std::string& msg) {
  if (verbose_enabled()) std::cerr << "seemd: " << msg << '\n';
}

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::string digest_string(std::uint64_t h) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "fnv1a64:%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

void write_json_atomic(const fs::path& path, const json& j) {
  write_file_atomic(path, j.dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// Config plumbing: defaults -> config file -> explicit CLI flags, with the
// merged document snapshotted into the manifest so replay sees exactly what
// this run saw.

json sift_defaults() {
  return {{"sd_threshold", 0.2}, {"max_sift_iters", 100}, {"max_imfs", 0}};
}

json method_defaults() {
  return {
      {"method", "seemd"},
      {"sift", sift_defaults()},
      {"seemd",
       {{"hurst", 0.1},
        {"fgn_amplitude", 0.1},
        {"fgn_seed", 1},
        {"modulator_seed", 2},
        {"modulation", "one_plus_m"}}},
      {"eemd",
       {{"ensemble_size", 100},
        {"noise_std_ratio", 0.2},
        {"base_seed", 1},
        {"num_threads", 1}}},
      {"vmd",
       {{"num_modes", 8},
        {"alpha", 2000.0},
        {"tau", 0.0},
        {"tol", 1e-7},
        {"max_iters", 500},
        {"init", "uniform"}}},
  };
}

json simulate_defaults() {
  return {
      {"fault_type", "ball"},
      {"fs", 20000.0},
      {"duration_s", 1.0},
      {"carrier_freq", 20.0},
      {"modulation_freq", 2.0},
      {"freq_deviation", 0.0},
      {"points_per_rev", 500},
      {"snr_db", 20.0},
      {"q_fault", 10.0},
      {"q_stiffness", 0.1},
      {"q_rotation", 0.1},
      {"resonance_freq", 4000.0},
      {"resonance_damping", 0.024},
      {"jitter", true},
      {"seed", 0},
      {"geometry",
       {{"roller_diameter_mm", 8.4},
        {"pitch_diameter_mm", 71.5},
        {"contact_angle_deg", 15.7},
        {"num_rollers", 16}}},
      {"format", "f64"},
      {"emit_plot_data", false},
  };
}

json decompose_defaults() {
  json d = method_defaults();
  d["emit_plot_data"] = false;
  return d;
}

json analyze_defaults() {
  return {
      {"ops", json::array({"kurtosis", "envelope"})},
      {"fault_freq", 0.0},
      {"m1", 3},
      {"m2", 0},
      {"band_halfwidth", 0.0},
      {"literal_squaring", false},
      {"window_len", 1024},
      {"hop", 0},
      {"emit_plot_data", false},
  };
}

json compare_defaults() {
  json d = method_defaults();
  d.erase("method");
  d["methods"] = json::array({"seemd", "eemd"});
  d["fault_freq"] = 0.0;
  d["m1"] = 3;
  d["m2"] = 0;
  d["band_halfwidth"] = 0.0;
  d["literal_squaring"] = false;
  d["emit_plot_data"] = false;
  return d;
}

void check_keys(const json& allowed, const json& given,
                const std::string& prefix) {
  for (const auto& [key, value] : given.items()) {
    if (!allowed.contains(key))
      throw ConfigInvalid("unknown config key: " + prefix + key);
    if (value.is_object() && allowed[key].is_object())
      check_keys(allowed[key], value, prefix + key + ".");
  }
}

json load_merged_config(const std::string& config_path, json defaults) {
  if (config_path.empty()) return defaults;
  std::ifstream in(config_path);
  if (!in) throw IoError("cannot open config file " + config_path);
  json file = json::parse(in, nullptr, false);
  if (file.is_discarded())
    throw ConfigInvalid("config file " + config_path + " is not valid JSON");
  if (!file.is_object())
    throw ConfigInvalid("config file " + config_path +
                        " must hold a JSON object");
  check_keys(defaults, file, "");
  defaults.merge_patch(file);
  return defaults;
}

double as_number(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number())
    throw ConfigInvalid(std::string("config key '") + key +
                        "' must be a number");
  return j[key].get<double>();
}

// ---------------------------------------------------------------------------
// Typed configs out of the merged JSON.

FaultType fault_type_from(const std::string& s) {
  if (s == "ball") return FaultType::ball;
  if (s == "inner") return FaultType::inner;
  if (s == "outer") return FaultType::outer;
  if (s == "none") return FaultType::none;
  throw ConfigInvalid("unknown fault_type '" + s +
                      "' (expected ball|inner|outer|none)");
}

SimConfig sim_config_from(const json& c) {
  SimConfig cfg;
  try {
    cfg.fault_type = fault_type_from(c.at("fault_type").get<std::string>());
    cfg.fs = as_number(c, "fs");
    cfg.duration_s = as_number(c, "duration_s");
    cfg.carrier_freq = as_number(c, "carrier_freq");
    cfg.modulation_freq = as_number(c, "modulation_freq");
    cfg.freq_deviation = as_number(c, "freq_deviation");
    cfg.points_per_rev = c.at("points_per_rev").get<int>();
    cfg.snr_db = as_number(c, "snr_db");
    cfg.q_fault = as_number(c, "q_fault");
    cfg.q_stiffness = as_number(c, "q_stiffness");
    cfg.q_rotation = as_number(c, "q_rotation");
    cfg.resonance_freq = as_number(c, "resonance_freq");
    cfg.resonance_damping = as_number(c, "resonance_damping");
    cfg.jitter = c.at("jitter").get<bool>();
    cfg.seed = c.at("seed").get<std::uint64_t>();
    const json& g = c.at("geometry");
    cfg.geometry.roller_diameter_mm = as_number(g, "roller_diameter_mm");
    cfg.geometry.pitch_diameter_mm = as_number(g, "pitch_diameter_mm");
    cfg.geometry.contact_angle_rad =
        as_number(g, "contact_angle_deg") * std::numbers::pi / 180.0;
    cfg.geometry.num_rollers = g.at("num_rollers").get<int>();
  } catch (const json::exception& e) {
    throw ConfigInvalid(std::string("bad simulate config: ") + e.what());
  }
  if (!std::isfinite(cfg.snr_db))
    throw ConfigInvalid("snr_db must be finite in CLI runs");
  return cfg;
}

SiftConfig sift_config_from(const json& c) {
  SiftConfig s;
  try {
    s.sd_threshold = as_number(c, "sd_threshold");
    s.max_sift_iters = c.at("max_sift_iters").get<int>();
    s.max_imfs = c.at("max_imfs").get<int>();
  } catch (const json::exception& e) {
    throw ConfigInvalid(std::string("bad sift config: ") + e.what());
  }
  return s;
}

SeemdConfig seemd_config_from(const json& c) {
  SeemdConfig s;
  try {
    const json& m = c.at("seemd");
    s.hurst = as_number(m, "hurst");
    s.fgn_amplitude = as_number(m, "fgn_amplitude");
    s.fgn_seed = m.at("fgn_seed").get<std::uint64_t>();
    s.modulator_seed = m.at("modulator_seed").get<std::uint64_t>();
    const auto mod = m.at("modulation").get<std::string>();
    if (mod == "one_plus_m") s.modulation = Modulation::one_plus_m;
    else if (mod == "raw_m") s.modulation = Modulation::raw_m;
    else throw ConfigInvalid("unknown modulation '" + mod + "'");
    s.sift = sift_config_from(c.at("sift"));
  } catch (const json::exception& e) {
    throw ConfigInvalid(std::string("bad seemd config: ") + e.what());
  }
  return s;
}

EemdConfig eemd_config_from(const json& c) {
  EemdConfig s;
  try {
    const json& m = c.at("eemd");
    s.ensemble_size = m.at("ensemble_size").get<int>();
    s.noise_std_ratio = as_number(m, "noise_std_ratio");
    s.base_seed = m.at("base_seed").get<std::uint64_t>();
    s.num_threads = m.at("num_threads").get<int>();
    s.sift = sift_config_from(c.at("sift"));
  } catch (const json::exception& e) {
    throw ConfigInvalid(std::string("bad eemd config: ") + e.what());
  }
  return s;
}

VmdConfig vmd_config_from(const json& c) {
  VmdConfig s;
  try {
    const json& m = c.at("vmd");
    s.num_modes = m.at("num_modes").get<int>();
    s.alpha = as_number(m, "alpha");
    s.tau = as_number(m, "tau");
    s.tol = as_number(m, "tol");
    s.max_iters = m.at("max_iters").get<int>();
    const auto init = m.at("init").get<std::string>();
    if (init == "uniform") s.init = VmdInit::uniform;
    else if (init == "zero") s.init = VmdInit::zero;
    else throw ConfigInvalid("unknown vmd init '" + init + "'");
  } catch (const json::exception& e) {
    throw ConfigInvalid(std::string("bad vmd config: ") + e.what());
  }
  return s;
}

// ---------------------------------------------------------------------------
// Manifest assembly.

struct Manifest {
  json doc;
  fs::path out_dir;

  Manifest(const std::string& command, const json& config,
           const std::vector<std::string>& argv, const fs::path& dir)
      : out_dir(dir) {
    doc["tool_version"] = std::string(kVersion);
    doc["command"] = command;
    doc["argv"] = argv;
    doc["config"] = config;
    doc["input"] = nullptr;
    doc["seeds"] = json::object();
    doc["timings_ms"] = json::object();
    doc["outputs"] = json::array();
  }

  void set_input(const fs::path& path) {
    doc["input"] = {
        {"path", path.string()},
        {"digest", digest_string(file_digest(path))},
        {"bytes", static_cast<std::uint64_t>(fs::file_size(path))},
    };
  }

  void add_output(const std::string& name) {
    const fs::path p = out_dir / name;
    doc["outputs"].push_back({
        {"path", name},
        {"digest", digest_string(file_digest(p))},
        {"bytes", static_cast<std::uint64_t>(fs::file_size(p))},
    });
  }

  void time(const std::string& stage, double ms) {
    doc["timings_ms"][stage] = ms;
  }

  void write() {
    write_json_atomic(out_dir / "manifest.json", doc);
    note("wrote " + (out_dir / "manifest.json").string());
  }
};

// ---------------------------------------------------------------------------
// Shared output helpers.

void write_plot_xy(const fs::path& path, std::span<const double> xs,
                   std::span<const double> ys) {
  std::string body;
  body.reserve(xs.size() * 24);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    body += format_double(xs[i]);
    body += ' ';
    body += format_double(ys[i]);
    body += '\n';
  }
  write_file_atomic(path, body);
}

json stats_json(const SummaryStats& s) {
  return {{"mean", s.mean},
          {"variance", s.variance},
          {"kurtosis", s.kurtosis},
          {"peak_to_peak", s.peak_to_peak}};
}

std::string method_name(Method m) {
  switch (m) {
    case Method::emd: return "emd";
    case Method::eemd: return "eemd";
    case Method::seemd: return "seemd";
    case Method::vmd: return "vmd";
  }
  return "?";
}

Decomposition run_method(const std::string& method, const Signal& x,
                         const json& cfg, json& seeds_out) {
  if (method == "emd") {
    return emd(x, sift_config_from(cfg.at("sift")));
  }
  if (method == "seemd") {
    const SeemdConfig sc = seemd_config_from(cfg);
    seeds_out = {{"fgn_seed", sc.fgn_seed},
                 {"modulator_seed", sc.modulator_seed}};
    return seemd::seemd(x, sc);
  }
  if (method == "eemd") {
    const EemdConfig ec = eemd_config_from(cfg);
    json trials = json::array();
    for (int t = 0; t < ec.ensemble_size; ++t)
      trials.push_back(ec.base_seed + static_cast<std::uint64_t>(t));
    seeds_out = {{"base_seed", ec.base_seed}, {"trial_seeds", trials}};
    return eemd(x, ec);
  }
  if (method == "vmd") {
    return vmd(x, vmd_config_from(cfg));
  }
  throw ConfigInvalid("unknown method '" + method +
                      "' (expected emd|eemd|seemd|vmd)");
}

// ---------------------------------------------------------------------------
// Subcommand bodies. Each one takes the merged config snapshot and writes
// its artifacts plus a manifest into out_dir; replay calls the same bodies.

void cmd_simulate(const json& cfg, const fs::path& out_dir,
                  const std::vector<std::string>& argv) {
  const SimConfig sc = sim_config_from(cfg);
  const std::string format = cfg.at("format").get<std::string>();
  if (format != "f64" && format != "wav" && format != "csv" &&
      format != "bin")
    throw ConfigInvalid("unknown output format '" + format +
                        "' (expected f64|bin|wav|csv)");

  Manifest man("simulate", cfg, argv, out_dir);
  man.doc["seeds"] = {{"seed", sc.seed}};

  const auto t0 = Clock::now();
  const SimResult res = simulate_bearing(sc);
  man.time("simulate", ms_since(t0));
  note("simulated " + std::to_string(res.signal.samples.size()) +
       " samples, " + std::to_string(res.impulse_times.size()) + " impulses");

  const auto t1 = Clock::now();
  const std::string signal_name = "signal." + format;
  write_signal(out_dir / signal_name, res.signal);
  man.add_output(signal_name);
  if (format == "f64" || format == "bin")
    man.add_output(signal_name + ".json");

  json truth = {
      {"fault_type", cfg.at("fault_type")},
      {"fault_freq", res.fault_freq},
      {"sample_rate", res.signal.sample_rate},
      {"num_samples", res.signal.samples.size()},
      {"impulse_count", res.impulse_times.size()},
      {"impulse_times", res.impulse_times},
  };
  write_json_atomic(out_dir / "truth.json", truth);
  man.add_output("truth.json");

  if (cfg.at("emit_plot_data").get<bool>()) {
    std::vector<double> ts(res.signal.samples.size());
    for (std::size_t i = 0; i < ts.size(); ++i)
      ts[i] = static_cast<double>(i) / res.signal.sample_rate;
    write_plot_xy(out_dir / "signal.dat", ts, res.signal.samples);
    man.add_output("signal.dat");
  }
  man.time("write", ms_since(t1));
  man.write();
}

void cmd_decompose(const json& cfg, const fs::path& input,
                   const fs::path& out_dir,
                   const std::vector<std::string>& argv) {
  Manifest man("decompose", cfg, argv, out_dir);

  const auto t0 = Clock::now();
  const Signal x = read_signal(input);
  man.set_input(input);
  man.time("read", ms_since(t0));

  const std::string method = cfg.at("method").get<std::string>();
  json seeds = json::object();
  const auto t1 = Clock::now();
  const Decomposition d = run_method(method, x, cfg, seeds);
  man.time("method", ms_since(t1));
  man.doc["seeds"] = seeds;
  man.doc["counters"] = {{"emd_calls", d.emd_calls},
                         {"sift_invocations", d.sift_invocations}};
  note(method + " produced " + std::to_string(d.imfs.size()) + " IMFs");

  const auto t2 = Clock::now();
  json imf_entries = json::array();
  for (std::size_t k = 0; k < d.imfs.size(); ++k) {
    char name[32];
    std::snprintf(name, sizeof(name), "imf_%02zu.f64", k);
    Signal imf{d.imfs[k], d.sample_rate};
    write_signal(out_dir / name, imf);
    man.add_output(name);
    man.add_output(std::string(name) + ".json");
    json entry = stats_json(d.imf_stats[k]);
    entry["index"] = k;
    entry["file"] = name;
    imf_entries.push_back(entry);
  }
  write_signal(out_dir / "residue.f64", Signal{d.residue, d.sample_rate});
  man.add_output("residue.f64");
  man.add_output("residue.f64.json");

  std::string stats_csv = "imf,mean,variance,kurtosis,peak_to_peak\n";
  for (std::size_t k = 0; k < d.imfs.size(); ++k) {
    const auto& s = d.imf_stats[k];
    stats_csv += std::to_string(k) + ',' + format_double(s.mean) + ',' +
                 format_double(s.variance) + ',' + format_double(s.kurtosis) +
                 ',' + format_double(s.peak_to_peak) + '\n';
  }
  const SummaryStats rs = summarize(d.residue);
  stats_csv += "residue," + format_double(rs.mean) + ',' +
               format_double(rs.variance) + ',' + format_double(rs.kurtosis) +
               ',' + format_double(rs.peak_to_peak) + '\n';
  write_file_atomic(out_dir / "stats.csv", stats_csv);
  man.add_output("stats.csv");

  json dec = {
      {"method", method_name(d.method)},
      {"sample_rate", d.sample_rate},
      {"length", x.samples.size()},
      {"num_imfs", d.imfs.size()},
      {"emd_calls", d.emd_calls},
      {"sift_invocations", d.sift_invocations},
      {"converged", d.converged},
      {"iterations", d.iterations},
      {"center_freqs", d.center_freqs},
      {"imfs", imf_entries},
      {"residue_file", "residue.f64"},
  };
  if (d.imfs.empty()) {
    dec["selected"] = nullptr;
  } else {
    const auto [idx, kurt] = select_informative_imf(d);
    dec["selected"] = {{"index", idx}, {"kurtosis", kurt}};
  }
  write_json_atomic(out_dir / "decomposition.json", dec);
  man.add_output("decomposition.json");

  if (cfg.at("emit_plot_data").get<bool>()) {
    std::string body;
    const std::size_t n = x.samples.size();
    body.reserve(n * (d.imfs.size() + 2) * 20);
    for (std::size_t i = 0; i < n; ++i) {
      body += format_double(static_cast<double>(i) / d.sample_rate);
      for (const auto& imf : d.imfs) {
        body += ' ';
        body += format_double(imf[i]);
      }
      body += ' ';
      body += format_double(d.residue[i]);
      body += '\n';
    }
    write_file_atomic(out_dir / "imfs.dat", body);
    man.add_output("imfs.dat");
  }
  man.time("write", ms_since(t2));
  man.write();
}

void cmd_analyze(const json& cfg, const fs::path& input,
                 const fs::path& out_dir,
                 const std::vector<std::string>& argv) {
  Manifest man("analyze", cfg, argv, out_dir);

  std::vector<std::string> ops;
  for (const auto& op : cfg.at("ops")) {
    const auto name = op.get<std::string>();
    if (name != "spectrogram" && name != "envelope" && name != "envsi" &&
        name != "kurtosis")
      throw ConfigInvalid("unknown analyze op '" + name + "'");
    ops.push_back(name);
  }
  if (ops.empty()) throw ConfigInvalid("analyze needs at least one op");
  const auto wants = [&](const char* op) {
    return std::find(ops.begin(), ops.end(), op) != ops.end();
  };

  const double fault_freq = as_number(cfg, "fault_freq");
  if (wants("envsi") && !(fault_freq > 0.0))
    throw ConfigInvalid("envsi requires a positive fault_freq");
  const bool plot = cfg.at("emit_plot_data").get<bool>();

  const auto t0 = Clock::now();
  const Signal x = read_signal(input);
  man.set_input(input);
  man.time("read", ms_since(t0));

  const auto t1 = Clock::now();
  if (wants("kurtosis")) {
    const SummaryStats s = summarize(x.samples);
    json rep = stats_json(s);
    rep["kurtosis"] = kurtosis(x.samples);  // strict: errors over silent 0
    rep["length"] = x.samples.size();
    rep["sample_rate"] = x.sample_rate;
    write_json_atomic(out_dir / "kurtosis.json", rep);
    man.add_output("kurtosis.json");
  }

  if (wants("spectrogram")) {
    const auto window = cfg.at("window_len").get<std::size_t>();
    auto hop = cfg.at("hop").get<std::size_t>();
    if (hop == 0) hop = window / 2;
    const Spectrogram sg = spectrogram(x, window, hop);

    std::string csv = "freq_hz";
    for (const double t : sg.times) csv += ',' + format_double(t);
    csv += '\n';
    for (std::size_t f = 0; f < sg.freqs.size(); ++f) {
      csv += format_double(sg.freqs[f]);
      for (const double v : sg.magnitudes[f]) csv += ',' + format_double(v);
      csv += '\n';
    }
    write_file_atomic(out_dir / "spectrogram.csv", csv);
    man.add_output("spectrogram.csv");

    if (plot) {
      // gnuplot nonuniform matrix: leading count, then the time axis.
      std::string dat = std::to_string(sg.times.size());
      for (const double t : sg.times) dat += ' ' + format_double(t);
      dat += '\n';
      for (std::size_t f = 0; f < sg.freqs.size(); ++f) {
        dat += format_double(sg.freqs[f]);
        for (const double v : sg.magnitudes[f]) dat += ' ' + format_double(v);
        dat += '\n';
      }
      write_file_atomic(out_dir / "spectrogram.dat", dat);
      man.add_output("spectrogram.dat");
    }
  }

  if (wants("envelope") || wants("envsi")) {
    const EnvelopeSpectrum es = envelope_spectrum(x);
    if (wants("envelope")) {
      std::string csv = "freq_hz,amplitude\n";
      for (std::size_t i = 0; i < es.freqs.size(); ++i)
        csv += format_double(es.freqs[i]) + ',' +
               format_double(es.amplitudes[i]) + '\n';
      write_file_atomic(out_dir / "envelope_spectrum.csv", csv);
      man.add_output("envelope_spectrum.csv");
      if (plot) {
        write_plot_xy(out_dir / "envelope_spectrum.dat", es.freqs,
                      es.amplitudes);
        man.add_output("envelope_spectrum.dat");
      }
    }
    if (wants("envsi")) {
      const EnvsiReport rep = envsi(
          es, fault_freq, cfg.at("m1").get<std::size_t>(),
          cfg.at("m2").get<std::size_t>(), as_number(cfg, "band_halfwidth"),
          cfg.at("literal_squaring").get<bool>());
      const json out = {
          {"value", rep.value},
          {"fault_freq", rep.fault_freq},
          {"m1", rep.m1},
          {"m2", rep.m2},
          {"band_halfwidth_hz", rep.band_halfwidth},
          {"harmonic_ais", rep.harmonic_amplitudes},
          {"ais_sum", rep.ais_sum},
          {"ses_sum", rep.ses_sum},
          {"literal_squaring", cfg.at("literal_squaring").get<bool>()},
          {"bin_width_hz", es.freqs[1] - es.freqs[0]},
      };
      write_json_atomic(out_dir / "envsi.json", out);
      man.add_output("envsi.json");
      if (plot) {
        std::vector<double> hf(rep.m1);
        for (std::size_t i = 0; i < rep.m1; ++i)
          hf[i] = static_cast<double>(i + 1) * fault_freq;
        write_plot_xy(out_dir / "envsi_harmonics.dat", hf,
                      rep.harmonic_amplitudes);
        man.add_output("envsi_harmonics.dat");
      }
    }
  }
  man.time("analyze", ms_since(t1));
  man.write();
}

void cmd_compare(const json& cfg, const fs::path& input,
                 const fs::path& out_dir,
                 const std::vector<std::string>& argv) {
  Manifest man("compare", cfg, argv, out_dir);

  std::vector<std::string> methods;
  for (const auto& m : cfg.at("methods"))
    methods.push_back(m.get<std::string>());
  if (methods.size() < 2)
    throw ConfigInvalid("compare needs at least 2 methods");
  for (const auto& m : methods)
    if (std::count(methods.begin(), methods.end(), m) > 1)
      throw ConfigInvalid("duplicate method '" + m + "' in compare");

  const double fault_freq = as_number(cfg, "fault_freq");
  if (!(fault_freq > 0.0))
    throw ConfigInvalid("compare requires a positive fault_freq for ENVSI");

  const auto t0 = Clock::now();
  const Signal x = read_signal(input);
  man.set_input(input);
  man.time("read", ms_since(t0));

  json seeds = json::object();
  json counters = json::object();
  json rows = json::array();
  std::string csv =
      "method,selected_imf,kurtosis,envsi,wall_ms,emd_calls,"
      "sift_invocations,num_imfs\n";

  for (const auto& method : methods) {
    json method_seeds = json::object();
    const auto tm = Clock::now();
    const Decomposition d = run_method(method, x, cfg, method_seeds);
    const double wall = ms_since(tm);
    seeds[method] = method_seeds;
    counters[method] = {{"emd_calls", d.emd_calls},
                        {"sift_invocations", d.sift_invocations}};

    const auto [idx, kurt] = select_informative_imf(d);
    const EnvelopeSpectrum es =
        envelope_spectrum(Signal{d.imfs[idx], d.sample_rate});
    const EnvsiReport rep = envsi(
        es, fault_freq, cfg.at("m1").get<std::size_t>(),
        cfg.at("m2").get<std::size_t>(), as_number(cfg, "band_halfwidth"),
        cfg.at("literal_squaring").get<bool>());
    note(method + ": kurtosis " + format_double(kurt) + ", envsi " +
         format_double(rep.value));

    rows.push_back({
        {"method", method},
        {"selected_imf", idx},
        {"kurtosis", kurt},
        {"envsi", rep.value},
        {"wall_ms", wall},
        {"emd_calls", d.emd_calls},
        {"sift_invocations", d.sift_invocations},
        {"num_imfs", d.imfs.size()},
    });
    csv += method + ',' + std::to_string(idx) + ',' + format_double(kurt) +
           ',' + format_double(rep.value) + ',' + format_double(wall) + ',' +
           std::to_string(d.emd_calls) + ',' +
           std::to_string(d.sift_invocations) + ',' +
           std::to_string(d.imfs.size()) + '\n';
  }

  man.doc["seeds"] = seeds;
  man.doc["counters"] = counters;

  write_file_atomic(out_dir / "scoreboard.csv", csv);
  man.add_output("scoreboard.csv");
  write_json_atomic(out_dir / "scoreboard.json",
                    json{{"fault_freq", fault_freq}, {"rows", rows}});
  man.add_output("scoreboard.json");

  if (cfg.at("emit_plot_data").get<bool>()) {
    std::string dat;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      dat += std::to_string(i) + ' ' +
             rows[i]["method"].get<std::string>() + ' ' +
             format_double(rows[i]["kurtosis"].get<double>()) + ' ' +
             format_double(rows[i]["envsi"].get<double>()) + ' ' +
             format_double(rows[i]["wall_ms"].get<double>()) + '\n';
    }
    write_file_atomic(out_dir / "scoreboard.dat", dat);
    man.add_output("scoreboard.dat");
  }
  man.write();
}

void cmd_replay(const fs::path& manifest_path, const fs::path& out_dir,
                const std::vector<std::string>& argv) {
  std::ifstream in(manifest_path);
  if (!in) throw IoError("cannot open manifest " + manifest_path.string());
  json man = json::parse(in, nullptr, false);
  if (man.is_discarded() || !man.is_object())
    throw ConfigInvalid(manifest_path.string() + " is not a JSON manifest");
  if (!man.contains("command") || !man.contains("config"))
    throw ConfigInvalid(manifest_path.string() +
                        " lacks command/config fields");

  const auto command = man["command"].get<std::string>();
  const json cfg = man["config"];

  fs::path input;
  if (man.contains("input") && man["input"].is_object()) {
    input = man["input"]["path"].get<std::string>();
    const std::string want = man["input"]["digest"].get<std::string>();
    const std::string have = digest_string(file_digest(input));
    if (want != have)
      throw ConfigInvalid("input " + input.string() +
                          " changed since the original run (digest " + have +
                          ", manifest says " + want + ")");
  }

  note("replaying " + command + " from " + manifest_path.string());
  if (command == "simulate") return cmd_simulate(cfg, out_dir, argv);
  if (command == "decompose") return cmd_decompose(cfg, input, out_dir, argv);
  if (command == "analyze") return cmd_analyze(cfg, input, out_dir, argv);
  if (command == "compare") return cmd_compare(cfg, input, out_dir, argv);
  throw ConfigInvalid("manifest command '" + command + "' is not replayable");
}

int run(int argc, char** argv) {
  const std::vector<std::string> raw_argv(argv, argv + argc);

  CLI::App app{"signal decomposition and bearing-fault diagnosis"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  // --- simulate ------------------------------------------------------------
  auto* sim = app.add_subcommand(
      "simulate", "Generate a synthetic bearing vibration signal");
  std::string sim_config, sim_out = ".", sim_fault, sim_format;
  double sim_fs = 0, sim_dur = 0, sim_carrier = 0, sim_fmod = 0, sim_fdev = 0;
  double sim_snr = 0, sim_qf = 0, sim_qs = 0, sim_qr = 0, sim_fres = 0;
  double sim_zeta = 0;
  int sim_ppr = 0;
  std::uint64_t sim_seed = 0;
  bool sim_jitter = true, sim_plot = false;
  sim->add_option("--config", sim_config, "JSON config file");
  sim->add_option("-o,--out-dir", sim_out, "Output directory");
  auto* o_fault = sim->add_option("--fault-type", sim_fault,
                                  "ball|inner|outer|none");
  auto* o_fs = sim->add_option("--fs", sim_fs, "Sample rate, Hz");
  auto* o_dur = sim->add_option("--duration", sim_dur, "Duration, s");
  auto* o_carrier =
      sim->add_option("--carrier-freq", sim_carrier, "Shaft frequency, Hz");
  auto* o_fmod = sim->add_option("--modulation-freq", sim_fmod,
                                 "Speed modulation frequency");
  auto* o_fdev = sim->add_option("--freq-deviation", sim_fdev,
                                 "Speed deviation amplitude");
  auto* o_ppr = sim->add_option("--points-per-rev", sim_ppr,
                                "Angle grid points per revolution");
  auto* o_snr = sim->add_option("--snr-db", sim_snr, "Additive noise SNR, dB");
  auto* o_qf = sim->add_option("--q-fault", sim_qf, "Impulse amplitude");
  auto* o_qs =
      sim->add_option("--q-stiffness", sim_qs, "2x shaft tone amplitude");
  auto* o_qr =
      sim->add_option("--q-rotation", sim_qr, "1x shaft tone amplitude");
  auto* o_fres =
      sim->add_option("--resonance-freq", sim_fres, "Ring frequency, Hz");
  auto* o_zeta = sim->add_option("--resonance-damping", sim_zeta,
                                 "Viscous damping ratio");
  auto* o_jitter =
      sim->add_flag("--jitter,!--no-jitter", sim_jitter, "Impulse jitter");
  auto* o_seed = sim->add_option("--seed", sim_seed, "RNG seed");
  auto* o_format =
      sim->add_option("--format", sim_format, "Signal format: f64|bin|wav|csv");
  auto* o_sim_plot =
      sim->add_flag("--emit-plot-data", sim_plot, "Write gnuplot data files");

  // --- decompose -----------------------------------------------------------
  auto* dec = app.add_subcommand("decompose",
                                 "Decompose a signal into IMFs or modes");
  std::string dec_input, dec_config, dec_out = ".", dec_method, dec_mod;
  std::string dec_init;
  double dec_sd = 0, dec_hurst = 0, dec_amp = 0, dec_ratio = 0, dec_alpha = 0;
  double dec_tau = 0, dec_tol = 0;
  int dec_iters = 0, dec_maximfs = 0, dec_ne = 0, dec_threads = 0, dec_k = 0;
  int dec_vmd_iters = 0;
  std::uint64_t dec_fgn_seed = 0, dec_mod_seed = 0, dec_base_seed = 0;
  bool dec_plot = false;
  dec->add_option("input", dec_input, "Signal file (.wav .csv .f64 .bin)")
      ->required();
  dec->add_option("--config", dec_config, "JSON config file");
  dec->add_option("-o,--out-dir", dec_out, "Output directory");
  auto* o_method =
      dec->add_option("--method", dec_method, "emd|eemd|seemd|vmd");
  auto* o_sd = dec->add_option("--sd-threshold", dec_sd, "Sift stop ratio");
  auto* o_siters =
      dec->add_option("--max-sift-iters", dec_iters, "Sift iteration cap");
  auto* o_mimfs =
      dec->add_option("--max-imfs", dec_maximfs, "IMF cap (0 = auto)");
  auto* o_hurst = dec->add_option("--hurst", dec_hurst, "FGN Hurst exponent");
  auto* o_amp = dec->add_option("--fgn-amplitude", dec_amp,
                                "FGN amplitude as a fraction of std(x)");
  auto* o_fgn_seed = dec->add_option("--fgn-seed", dec_fgn_seed, "FGN seed");
  auto* o_mod_seed =
      dec->add_option("--modulator-seed", dec_mod_seed, "Modulator seed");
  auto* o_mod =
      dec->add_option("--modulation", dec_mod, "one_plus_m|raw_m");
  auto* o_ne =
      dec->add_option("--ensemble-size", dec_ne, "EEMD trial count");
  auto* o_ratio = dec->add_option("--noise-std-ratio", dec_ratio,
                                  "EEMD noise std as a fraction of std(x)");
  auto* o_base =
      dec->add_option("--base-seed", dec_base_seed, "EEMD base seed");
  auto* o_threads =
      dec->add_option("--num-threads", dec_threads, "EEMD worker threads");
  auto* o_k = dec->add_option("--num-modes", dec_k, "VMD mode count");
  auto* o_alpha = dec->add_option("--alpha", dec_alpha, "VMD bandwidth penalty");
  auto* o_tau = dec->add_option("--tau", dec_tau, "VMD dual ascent step");
  auto* o_tol = dec->add_option("--tol", dec_tol, "VMD stop threshold");
  auto* o_vmd_iters =
      dec->add_option("--max-iters", dec_vmd_iters, "VMD iteration cap");
  auto* o_init = dec->add_option("--init", dec_init, "VMD centers: uniform|zero");
  auto* o_dec_plot =
      dec->add_flag("--emit-plot-data", dec_plot, "Write gnuplot data files");

  // --- analyze ---------------------------------------------------------- --
  auto* ana = app.add_subcommand(
      "analyze", "Spectrogram, envelope spectrum, ENVSI, kurtosis");
  std::string ana_input, ana_config, ana_out = ".";
  std::vector<std::string> ana_ops;
  double ana_ff = 0, ana_hw = 0;
  std::size_t ana_m1 = 0, ana_m2 = 0, ana_window = 0, ana_hop = 0;
  bool ana_literal = false, ana_plot = false;
  ana->add_option("input", ana_input, "Signal file")->required();
  ana->add_option("--config", ana_config, "JSON config file");
  ana->add_option("-o,--out-dir", ana_out, "Output directory");
  auto* o_ops = ana->add_option(
      "--ops", ana_ops, "spectrogram|envelope|envsi|kurtosis (repeatable)");
  o_ops->delimiter(',');
  auto* o_ff = ana->add_option("--fault-freq", ana_ff,
                               "Fault frequency, Hz (required for envsi)");
  auto* o_m1 = ana->add_option("--m1", ana_m1, "ENVSI harmonics scored");
  auto* o_m2 =
      ana->add_option("--m2", ana_m2, "ENVSI window bins (0 = auto)");
  auto* o_hw = ana->add_option("--band-halfwidth", ana_hw,
                               "ENVSI band halfwidth, Hz (0 = 2.5% of f0)");
  auto* o_lit = ana->add_flag("--literal-squaring", ana_literal,
                              "Square the per-harmonic terms");
  auto* o_window =
      ana->add_option("--window-len", ana_window, "Spectrogram window");
  auto* o_hop =
      ana->add_option("--hop", ana_hop, "Spectrogram hop (0 = window/2)");
  auto* o_ana_plot =
      ana->add_flag("--emit-plot-data", ana_plot, "Write gnuplot data files");

  // --- compare ---------------------------------------------------------- --
  auto* cmp = app.add_subcommand(
      "compare", "Run several methods and tabulate kurtosis/ENVSI/cost");
  std::string cmp_input, cmp_config, cmp_out = ".";
  std::vector<std::string> cmp_methods;
  double cmp_ff = 0;
  bool cmp_plot = false;
  cmp->add_option("input", cmp_input, "Signal file")->required();
  cmp->add_option("--config", cmp_config, "JSON config file");
  cmp->add_option("-o,--out-dir", cmp_out, "Output directory");
  auto* o_methods = cmp->add_option("--methods", cmp_methods,
                                    "Two or more of emd|eemd|seemd|vmd");
  o_methods->delimiter(',');
  auto* o_cff =
      cmp->add_option("--fault-freq", cmp_ff, "Fault frequency, Hz");
  auto* o_cmp_plot =
      cmp->add_flag("--emit-plot-data", cmp_plot, "Write gnuplot data files");

  // --- replay ---------------------------------------------------------- ---
  auto* rep = app.add_subcommand(
      "replay", "Re-run a recorded manifest and reproduce its outputs");
  std::string rep_manifest, rep_out = ".";
  rep->add_option("manifest", rep_manifest, "manifest.json from a prior run")
      ->required();
  rep->add_option("-o,--out-dir", rep_out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const auto set_if = [](const CLI::Option* opt, json& slot, auto value) {
    if (opt->count() > 0) slot = value;
  };

  if (sim->parsed()) {
    json cfg = load_merged_config(sim_config, simulate_defaults());
    set_if(o_fault, cfg["fault_type"], sim_fault);
    set_if(o_fs, cfg["fs"], sim_fs);
    set_if(o_dur, cfg["duration_s"], sim_dur);
    set_if(o_carrier, cfg["carrier_freq"], sim_carrier);
    set_if(o_fmod, cfg["modulation_freq"], sim_fmod);
    set_if(o_fdev, cfg["freq_deviation"], sim_fdev);
    set_if(o_ppr, cfg["points_per_rev"], sim_ppr);
    set_if(o_snr, cfg["snr_db"], sim_snr);
    set_if(o_qf, cfg["q_fault"], sim_qf);
    set_if(o_qs, cfg["q_stiffness"], sim_qs);
    set_if(o_qr, cfg["q_rotation"], sim_qr);
    set_if(o_fres, cfg["resonance_freq"], sim_fres);
    set_if(o_zeta, cfg["resonance_damping"], sim_zeta);
    set_if(o_jitter, cfg["jitter"], sim_jitter);
    set_if(o_seed, cfg["seed"], sim_seed);
    set_if(o_format, cfg["format"], sim_format);
    set_if(o_sim_plot, cfg["emit_plot_data"], sim_plot);
    cmd_simulate(cfg, sim_out, raw_argv);
  } else if (dec->parsed()) {
    json cfg = load_merged_config(dec_config, decompose_defaults());
    set_if(o_method, cfg["method"], dec_method);
    set_if(o_sd, cfg["sift"]["sd_threshold"], dec_sd);
    set_if(o_siters, cfg["sift"]["max_sift_iters"], dec_iters);
    set_if(o_mimfs, cfg["sift"]["max_imfs"], dec_maximfs);
    set_if(o_hurst, cfg["seemd"]["hurst"], dec_hurst);
    set_if(o_amp, cfg["seemd"]["fgn_amplitude"], dec_amp);
    set_if(o_fgn_seed, cfg["seemd"]["fgn_seed"], dec_fgn_seed);
    set_if(o_mod_seed, cfg["seemd"]["modulator_seed"], dec_mod_seed);
    set_if(o_mod, cfg["seemd"]["modulation"], dec_mod);
    set_if(o_ne, cfg["eemd"]["ensemble_size"], dec_ne);
    set_if(o_ratio, cfg["eemd"]["noise_std_ratio"], dec_ratio);
    set_if(o_base, cfg["eemd"]["base_seed"], dec_base_seed);
    set_if(o_threads, cfg["eemd"]["num_threads"], dec_threads);
    set_if(o_k, cfg["vmd"]["num_modes"], dec_k);
    set_if(o_alpha, cfg["vmd"]["alpha"], dec_alpha);
    set_if(o_tau, cfg["vmd"]["tau"], dec_tau);
    set_if(o_tol, cfg["vmd"]["tol"], dec_tol);
    set_if(o_vmd_iters, cfg["vmd"]["max_iters"], dec_vmd_iters);
    set_if(o_init, cfg["vmd"]["init"], dec_init);
    set_if(o_dec_plot, cfg["emit_plot_data"], dec_plot);
    cmd_decompose(cfg, dec_input, dec_out, raw_argv);
  } else if (ana->parsed()) {
    json cfg = load_merged_config(ana_config, analyze_defaults());
    set_if(o_ops, cfg["ops"], ana_ops);
    set_if(o_ff, cfg["fault_freq"], ana_ff);
    set_if(o_m1, cfg["m1"], ana_m1);
    set_if(o_m2, cfg["m2"], ana_m2);
    set_if(o_hw, cfg["band_halfwidth"], ana_hw);
    set_if(o_lit, cfg["literal_squaring"], ana_literal);
    set_if(o_window, cfg["window_len"], ana_window);
    set_if(o_hop, cfg["hop"], ana_hop);
    set_if(o_ana_plot, cfg["emit_plot_data"], ana_plot);
    cmd_analyze(cfg, ana_input, ana_out, raw_argv);
  } else if (cmp->parsed()) {
    json cfg = load_merged_config(cmp_config, compare_defaults());
    set_if(o_methods, cfg["methods"], cmp_methods);
    set_if(o_cff, cfg["fault_freq"], cmp_ff);
    set_if(o_cmp_plot, cfg["emit_plot_data"], cmp_plot);
    cmd_compare(cfg, cmp_input, cmp_out, raw_argv);
  } else if (rep->parsed()) {
    cmd_replay(rep_manifest, rep_out, raw_argv);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ConfigInvalid& e) {
    std::cerr << "seemd: config error: " << e.what() << '\n';
    return 2;
  } catch (const UnsupportedFormat& e) {
    std::cerr << "seemd: format error: " << e.what() << '\n';
    return 2;
  } catch (const IoError& e) {
    std::cerr << "seemd: io error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    std::cerr << "seemd: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "seemd: " << e.what() << '\n';
    return 1;
  }
}

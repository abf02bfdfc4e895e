#pragma once

// Experiment configuration: a flat key=value text format with '#' comments.
// Unknown keys are rejected. See README.md for the key reference.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "simplex_game/errors.hpp"
#include "simplex_game/game_core.hpp"
#include "simplex_game/learning_dynamics.hpp"
#include "simplex_game/random.hpp"

namespace sgame {

enum class MeasurementMode { final_profile, windowed_trace };

inline std::string to_string(MeasurementMode m) {
  return m == MeasurementMode::final_profile ? "final-profile" : "windowed-trace";
}

inline MeasurementMode parse_measurement_mode(const std::string& text) {
  if (text == "final-profile") return MeasurementMode::final_profile;
  if (text == "windowed-trace") return MeasurementMode::windowed_trace;
  throw ValidationError("unknown measurement mode '" + text + "' (expected final-profile or windowed-trace)");
}

enum class OutputFormat { csv, json, all };

inline std::string to_string(OutputFormat f) {
  switch (f) {
    case OutputFormat::csv: return "csv";
    case OutputFormat::json: return "json";
    default: return "all";
  }
}

inline OutputFormat parse_output_format(const std::string& text) {
  if (text == "csv") return OutputFormat::csv;
  if (text == "json") return OutputFormat::json;
  if (text == "all") return OutputFormat::all;
  throw ValidationError("unknown output format '" + text + "' (expected csv, json or all)");
}

struct ExperimentConfig {
  int players = 50;
  int nodes = 2;
  int strategies = 2;
  /// Fixed signal count for single runs; sweeps use lambda_grid instead.
  std::optional<int> signals;
  /// Explicit strengths (normalized on load); empty means uniform over `nodes`.
  std::vector<double> strengths;
  /// Raw spectral efficiencies; normalized into strengths when given.
  std::vector<double> spectral_efficiencies;
  /// Redraw a proper random strength vector for every realization.
  bool random_strengths = false;
  PayoffMode payoff_mode = PayoffMode::linear;

  std::vector<double> lambda_grid;

  double learning_rate = kDefaultLearningRate;
  std::int64_t max_iterations = 5000;
  std::int64_t window = 200;
  std::int64_t check_every = 100;
  std::int64_t snapshot_stride = 0;

  int realizations = 1;
  std::uint64_t master_seed = 0;
  MeasurementMode measurement = MeasurementMode::final_profile;

  std::string output;
  OutputFormat format = OutputFormat::csv;

  /// Node strengths implied by the config (explicit, from efficiencies, or uniform).
  StrengthDistribution strength_distribution() const {
    if (!spectral_efficiencies.empty()) return StrengthDistribution::from_weights(spectral_efficiencies);
    if (!strengths.empty()) return StrengthDistribution::from_weights(strengths);
    return StrengthDistribution::uniform(static_cast<std::size_t>(nodes));
  }

  int node_count() const {
    if (!spectral_efficiencies.empty()) return static_cast<int>(spectral_efficiencies.size());
    if (!strengths.empty()) return static_cast<int>(strengths.size());
    return nodes;
  }

  void validate() const {
    if (players < 1) throw ValidationError("players must be >= 1");
    if (node_count() < 2) throw ValidationError("nodes must be >= 2");
    if (static_cast<std::size_t>(node_count()) > kMaxNodes) throw ValidationError("at most 255 nodes");
    if (!strengths.empty() && !spectral_efficiencies.empty())
      throw ValidationError("give either strengths or spectral_efficiencies, not both");
    if (strategies < 1) throw ValidationError("strategies must be >= 1");
    if (signals && *signals < 1) throw ValidationError("signals must be >= 1");
    if (realizations < 1) throw ValidationError("realizations must be >= 1");
    if (!(learning_rate >= 0.0)) throw ValidationError("learning_rate must be >= 0");
    if (window < 1) throw ValidationError("window must be >= 1");
    if (max_iterations < window) throw ValidationError("max_iterations must be >= window");
    if (check_every < 1) throw ValidationError("check_every must be >= 1");
    if (snapshot_stride < 0) throw ValidationError("snapshot_stride must be >= 0");
    for (double l : lambda_grid) {
      if (!(l > 0.0)) throw ValidationError("lambda grid values must be positive");
      if (std::lround(l * players) < 1) throw ValidationError("lambda grid value gives M < 1");
    }
    (void)strength_distribution();
  }

  /// Game config at a given signal count.
  GameConfig game(int signal_count) const {
    GameConfig g;
    g.players = players;
    g.signals = signal_count;
    g.strategies = strategies;
    g.strengths = strength_distribution();
    g.payoff_mode = payoff_mode;
    if (!spectral_efficiencies.empty()) g.spectral_efficiencies = spectral_efficiencies;
    return g;
  }

  LearningConfig learning() const {
    LearningConfig l;
    l.learning_rate = learning_rate;
    l.iterations = max_iterations;
    l.snapshot_stride = snapshot_stride;
    return l;
  }
};

/// One point of a sweep: the realized lambda = M / N and its signal count.
struct SweepPoint {
  double lambda;
  int signals;
};

/// M = round(lambda N), clamped to >= 1; the stored lambda is M / N.
inline SweepPoint sweep_point(double lambda, int players) {
  const int m = std::max<long>(1, std::lround(lambda * players));
  return {static_cast<double>(m) / players, m};
}

inline std::vector<SweepPoint> grid_points(const ExperimentConfig& cfg) {
  std::vector<SweepPoint> pts;
  if (cfg.lambda_grid.empty()) {
    if (!cfg.signals) throw ValidationError("config needs lambda_grid or signals");
    pts.push_back({static_cast<double>(*cfg.signals) / cfg.players, *cfg.signals});
    return pts;
  }
  for (double l : cfg.lambda_grid) pts.push_back(sweep_point(l, cfg.players));
  return pts;
}

namespace detail {

inline std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

inline double parse_double(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ValidationError("key '" + key + "': '" + text + "' is not a number");
  }
}

inline std::int64_t parse_int(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ValidationError("key '" + key + "': '" + text + "' is not an integer");
  }
}

inline std::uint64_t parse_u64(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(text, &used);
    if (used != text.size() || text.front() == '-') throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ValidationError("key '" + key + "': '" + text + "' is not an unsigned integer");
  }
}

inline bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ValidationError("key '" + key + "': '" + text + "' is not a boolean");
}

inline std::vector<double> parse_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(key, trim(item)));
  if (out.empty()) throw ValidationError("key '" + key + "': empty list");
  return out;
}

}  // namespace detail

/// "a:b:n" -> n evenly spaced values from a to b inclusive; otherwise a comma list.
inline std::vector<double> parse_lambda_grid(const std::string& text) {
  if (text.find(':') == std::string::npos) return detail::parse_list("lambda_grid", text);
  std::stringstream ss(text);
  std::string a, b, n;
  if (!std::getline(ss, a, ':') || !std::getline(ss, b, ':') || !std::getline(ss, n, ':'))
    throw ValidationError("lambda grid range must look like start:stop:count");
  const double lo = detail::parse_double("lambda_grid", detail::trim(a));
  const double hi = detail::parse_double("lambda_grid", detail::trim(b));
  const auto count = detail::parse_int("lambda_grid", detail::trim(n));
  if (count < 1) throw ValidationError("lambda grid count must be >= 1");
  std::vector<double> out(static_cast<std::size_t>(count));
  for (std::int64_t k = 0; k < count; ++k)
    out[static_cast<std::size_t>(k)] = count == 1 ? lo : lo + (hi - lo) * static_cast<double>(k) / (count - 1);
  return out;
}

inline void apply_config_key(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  using namespace detail;
  if (key == "players") cfg.players = static_cast<int>(parse_int(key, value));
  else if (key == "nodes") cfg.nodes = static_cast<int>(parse_int(key, value));
  else if (key == "strategies") cfg.strategies = static_cast<int>(parse_int(key, value));
  else if (key == "signals") cfg.signals = static_cast<int>(parse_int(key, value));
  else if (key == "strengths") cfg.strengths = parse_list(key, value);
  else if (key == "spectral_efficiencies") cfg.spectral_efficiencies = parse_list(key, value);
  else if (key == "random_strengths") cfg.random_strengths = parse_bool(key, value);
  else if (key == "payoff_mode") cfg.payoff_mode = parse_payoff_mode(value);
  else if (key == "lambda_grid") cfg.lambda_grid = parse_lambda_grid(value);
  else if (key == "learning_rate") cfg.learning_rate = parse_double(key, value);
  else if (key == "max_iterations") cfg.max_iterations = parse_int(key, value);
  else if (key == "window") cfg.window = parse_int(key, value);
  else if (key == "check_every") cfg.check_every = parse_int(key, value);
  else if (key == "snapshot_stride") cfg.snapshot_stride = parse_int(key, value);
  else if (key == "realizations") cfg.realizations = static_cast<int>(parse_int(key, value));
  else if (key == "seed") cfg.master_seed = parse_u64(key, value);
  else if (key == "measurement") cfg.measurement = parse_measurement_mode(value);
  else if (key == "output") cfg.output = value;
  else if (key == "format") cfg.format = parse_output_format(value);
  else throw ValidationError("unknown config key '" + key + "'");
}

inline ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ValidationError("config line " + std::to_string(lineno) + ": expected key=value");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    try {
      apply_config_key(cfg, key, value);
    } catch (const ValidationError& e) {
      throw ValidationError("config line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  cfg.validate();
  return cfg;
}

inline ExperimentConfig parse_config(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

inline ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path.string() + "'");
  return parse_config(in);
}

namespace detail {
inline std::string join(const std::vector<double>& v) {
  std::string out;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (k) out += ',';
    std::array<char, 32> buf{};
    std::snprintf(buf.data(), buf.size(), "%.17g", v[k]);
    out += buf.data();
  }
  return out;
}
}  // namespace detail

/// Sorted key=value lines over every field that affects results (output path and
/// format excluded). Unset optional fields are omitted, so the text parses back.
inline std::string canonical_config(const ExperimentConfig& cfg) {
  std::map<std::string, std::string> kv;
  kv["players"] = std::to_string(cfg.players);
  kv["nodes"] = std::to_string(cfg.node_count());
  kv["strategies"] = std::to_string(cfg.strategies);
  if (cfg.signals) kv["signals"] = std::to_string(*cfg.signals);
  if (!cfg.strengths.empty()) kv["strengths"] = detail::join(cfg.strengths);
  if (!cfg.spectral_efficiencies.empty()) kv["spectral_efficiencies"] = detail::join(cfg.spectral_efficiencies);
  kv["random_strengths"] = cfg.random_strengths ? "true" : "false";
  kv["payoff_mode"] = to_string(cfg.payoff_mode);
  if (!cfg.lambda_grid.empty()) kv["lambda_grid"] = detail::join(cfg.lambda_grid);
  kv["learning_rate"] = detail::join({cfg.learning_rate});
  kv["max_iterations"] = std::to_string(cfg.max_iterations);
  kv["window"] = std::to_string(cfg.window);
  kv["check_every"] = std::to_string(cfg.check_every);
  kv["snapshot_stride"] = std::to_string(cfg.snapshot_stride);
  kv["realizations"] = std::to_string(cfg.realizations);
  kv["seed"] = std::to_string(cfg.master_seed);
  kv["measurement"] = to_string(cfg.measurement);
  std::string out;
  for (const auto& [k, v] : kv) out += k + "=" + v + "\n";
  return out;
}

/// 64-bit FNV-1a over the canonical config, as 16 hex digits.
inline std::string config_hash(const ExperimentConfig& cfg) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canonical_config(cfg)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  std::array<char, 17> buf{};
  std::snprintf(buf.data(), buf.size(), "%016llx", static_cast<unsigned long long>(h));
  return buf.data();
}

/// Proper random strengths: weights uniform on [0.5, 1.5], normalized.
inline StrengthDistribution random_proper_strengths(int nodes, Rng& rng) {
  std::vector<double> w(static_cast<std::size_t>(nodes));
  for (auto& v : w) v = 0.5 + uniform01(rng);
  return StrengthDistribution::from_weights(w);
}

}  // namespace sgame

#pragma once

// File formats for reproducibility audits.
//
// Strategy matrix, JSON:
//   {"players": N, "strategies": S, "signals": M, "nodes": B, "entries": [...]}
//   with N*S*M zero-based node indices, row-major in (player, strategy, signal).
// Strategy matrix, binary (little endian):
//   4 bytes magic "SGSM", u32 version (1), u32 N, u32 S, u32 M, u32 B,
//   then N*S*M bytes of node indices in the same order.

#include <array>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "simplex_game/errors.hpp"
#include "simplex_game/game_core.hpp"
#include "simplex_game/learning_dynamics.hpp"
#include "simplex_game/simplex_geometry.hpp"

namespace sgame {

/// %.17g text, which reads back to the same double.
inline std::string format_double(double v) {
  std::array<char, 32> buf{};
  std::snprintf(buf.data(), buf.size(), "%.17g", v);
  return buf.data();
}

inline std::ofstream open_for_write(const std::filesystem::path& path, bool binary = false) {
  std::ofstream out(path, binary ? std::ios::binary | std::ios::trunc : std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

inline std::ifstream open_for_read(const std::filesystem::path& path, bool binary = false) {
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return in;
}

inline void finish_write(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

inline nlohmann::json simplex_to_json(const YSimplex& s) {
  nlohmann::json j;
  j["strengths"] = std::vector<double>(s.strengths().weights().begin(), s.strengths().weights().end());
  auto& verts = j["vertices"] = nlohmann::json::array();
  for (std::size_t r = 0; r < s.node_count(); ++r) {
    std::vector<double> row(s.dimension());
    for (std::size_t k = 0; k < s.dimension(); ++k) row[k] = s.vertices()(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(k));
    verts.push_back(row);
  }
  j["gram_defect"] = gram_defect(s);
  const auto mom = weighted_moments(s);
  j["centroid_norm"] = mom.centroid_norm;
  j["norm_sum"] = mom.norm_sum;
  return j;
}

inline nlohmann::json strategy_matrix_to_json(const StrategyMatrix& c) {
  return {{"players", c.players()},
          {"strategies", c.strategies()},
          {"signals", c.signals()},
          {"nodes", c.nodes()},
          {"entries", std::vector<int>(c.entries().begin(), c.entries().end())}};
}

inline StrategyMatrix strategy_matrix_from_json(const nlohmann::json& j) {
  try {
    const auto raw = j.at("entries").get<std::vector<int>>();
    std::vector<std::uint8_t> entries(raw.size());
    for (std::size_t k = 0; k < raw.size(); ++k) {
      if (raw[k] < 0 || raw[k] > 255) throw ValidationError("strategy matrix entry out of byte range");
      entries[k] = static_cast<std::uint8_t>(raw[k]);
    }
    return StrategyMatrix(j.at("players").get<int>(), j.at("strategies").get<int>(), j.at("signals").get<int>(),
                          j.at("nodes").get<int>(), std::move(entries));
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed strategy matrix JSON: ") + e.what());
  }
}

namespace detail {
inline constexpr std::array<char, 4> kMatrixMagic{'S', 'G', 'S', 'M'};

inline void put_u32(std::ostream& out, std::uint32_t v) {
  const std::array<unsigned char, 4> b{static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                                       static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
  out.write(reinterpret_cast<const char*>(b.data()), 4);
}

inline std::uint32_t get_u32(std::istream& in) {
  std::array<unsigned char, 4> b{};
  in.read(reinterpret_cast<char*>(b.data()), 4);
  if (!in) throw ValidationError("truncated strategy matrix header");
  return b[0] | (b[1] << 8) | (b[2] << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}
}  // namespace detail

inline std::vector<char> strategy_matrix_to_binary(const StrategyMatrix& c) {
  std::ostringstream out(std::ios::binary);
  out.write(detail::kMatrixMagic.data(), 4);
  detail::put_u32(out, 1);
  detail::put_u32(out, static_cast<std::uint32_t>(c.players()));
  detail::put_u32(out, static_cast<std::uint32_t>(c.strategies()));
  detail::put_u32(out, static_cast<std::uint32_t>(c.signals()));
  detail::put_u32(out, static_cast<std::uint32_t>(c.nodes()));
  out.write(reinterpret_cast<const char*>(c.entries().data()), static_cast<std::streamsize>(c.entries().size()));
  const std::string s = out.str();
  return {s.begin(), s.end()};
}

inline StrategyMatrix strategy_matrix_from_binary(const std::vector<char>& bytes) {
  std::istringstream in(std::string(bytes.begin(), bytes.end()), std::ios::binary);
  std::array<char, 4> magic{};
  in.read(magic.data(), 4);
  if (!in || magic != detail::kMatrixMagic) throw ValidationError("not a strategy matrix file (bad magic)");
  if (detail::get_u32(in) != 1) throw ValidationError("unsupported strategy matrix version");
  const auto n = detail::get_u32(in), s = detail::get_u32(in), m = detail::get_u32(in), b = detail::get_u32(in);
  const std::size_t count = static_cast<std::size_t>(n) * s * m;
  std::vector<std::uint8_t> entries(count);
  in.read(reinterpret_cast<char*>(entries.data()), static_cast<std::streamsize>(count));
  if (static_cast<std::size_t>(in.gcount()) != count) throw ValidationError("truncated strategy matrix body");
  return StrategyMatrix(static_cast<int>(n), static_cast<int>(s), static_cast<int>(m), static_cast<int>(b),
                        std::move(entries));
}

/// Writes JSON or binary depending on the extension (.json -> JSON, anything else -> binary).
inline void save_strategy_matrix(const StrategyMatrix& c, const std::filesystem::path& path) {
  if (path.extension() == ".json") {
    auto out = open_for_write(path);
    out << strategy_matrix_to_json(c).dump() << '\n';
    finish_write(out, path);
  } else {
    auto out = open_for_write(path, true);
    const auto bytes = strategy_matrix_to_binary(c);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    finish_write(out, path);
  }
}

inline StrategyMatrix load_strategy_matrix(const std::filesystem::path& path) {
  if (path.extension() == ".json") {
    auto in = open_for_read(path);
    try {
      return strategy_matrix_from_json(nlohmann::json::parse(in));
    } catch (const nlohmann::json::parse_error& e) {
      throw ValidationError(std::string("malformed strategy matrix JSON: ") + e.what());
    }
  }
  auto in = open_for_read(path, true);
  return strategy_matrix_from_binary(std::vector<char>(std::istreambuf_iterator<char>(in), {}));
}

/// Trajectory CSV: t,m,R_t,purity (purity only on snapshot rows; m empty when no signal).
inline void write_trajectory_csv(std::ostream& out, const Trajectory& tr) {
  out << "t,m,R_t,purity\n";
  for (const auto& rec : tr.records) {
    out << rec.t << ',';
    if (rec.signal >= 0) out << rec.signal;
    out << ',' << format_double(rec.frustration) << ',';
    if (rec.purity) out << format_double(*rec.purity);
    out << '\n';
  }
}

}  // namespace sgame

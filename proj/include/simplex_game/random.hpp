#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace sgame {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer; a bijection on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Seed for realization `realization` at grid point `point`.
///
/// The key (point << 32 | realization) is multiplied by an odd constant and
/// added to the master seed before mixing, so distinct (point, realization)
/// pairs below 2^32 never collide within one sweep.
constexpr std::uint64_t child_seed(std::uint64_t master, std::uint32_t point,
                                   std::uint32_t realization) noexcept {
  const std::uint64_t key = (static_cast<std::uint64_t>(point) << 32) | realization;
  return mix64(master + 0xD1B54A32D192ED03ULL * key);
}

inline double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

/// Draws an index from unnormalized nonnegative weights by inverse CDF.
inline std::size_t sample_index(std::span<const double> weights, Rng& rng) {
  double total = 0.0;
  for (double w : weights) total += w;
  const double u = uniform01(rng) * total;
  double acc = 0.0;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    acc += weights[k];
    if (u < acc) return k;
  }
  // u landed on the rounding edge; return the last index with positive weight
  for (std::size_t k = weights.size(); k-- > 0;)
    if (weights[k] > 0.0) return k;
  return weights.size() - 1;
}

}  // namespace sgame

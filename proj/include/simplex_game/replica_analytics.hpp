#pragma once

// Closed-form predictions for the steady-state frustration: the expected
// minimum of S standard normals, the critical training parameter it sets, the
// resulting anarchy curve, and the binary-reduction map.

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <random>

#include "simplex_game/errors.hpp"
#include "simplex_game/game_core.hpp"
#include "simplex_game/random.hpp"

namespace sgame {

enum class ZetaMethod { quadrature, monte_carlo };

struct ZetaEstimate {
  double value;
  double standard_error;  // zero for quadrature
};

namespace detail {

/// Adaptive Simpson on [a, b] with absolute tolerance `tol`.
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                               int max_depth = 50) {
  struct Segment {
    static double simpson(double fa, double fm, double fb, double h) { return h / 6.0 * (fa + 4.0 * fm + fb); }
    static double refine(const std::function<double(double)>& f, double a, double b, double fa, double fm,
                         double fb, double whole, double tol, int depth) {
      const double m = 0.5 * (a + b);
      const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
      const double flm = f(lm), frm = f(rm);
      const double left = simpson(fa, flm, fm, m - a);
      const double right = simpson(fm, frm, fb, b - m);
      const double delta = left + right - whole;
      if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
      return refine(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
             refine(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
    }
  };
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = Segment::simpson(fa, fm, fb, b - a);
  const double value = Segment::refine(f, a, b, fa, fm, fb, whole, tol, max_depth);
  if (!std::isfinite(value)) throw IntegrationError("quadrature produced a non-finite value");
  return value;
}

}  // namespace detail

/// zeta(S) = (S / 2^(S-1)) sqrt(2/pi) * integral of z exp(-z^2) erfc(z)^(S-1) over [-8, 8].
inline double zeta_quadrature(int strategies, double tolerance = 1e-8) {
  if (strategies < 1) throw ValidationError("zeta needs S >= 1");
  if (strategies == 1) return 0.0;  // odd integrand
  const int power = strategies - 1;
  auto integrand = [power](double z) { return z * std::exp(-z * z) * std::pow(std::erfc(z), power); };
  const double prefactor = strategies / std::ldexp(1.0, power) * std::sqrt(2.0 / M_PI);
  // Unit panels: on one wide interval the first Simpson estimates can agree by accident
  // and stop the refinement early.
  constexpr int panels = 16;
  double integral = 0.0;
  for (int k = 0; k < panels; ++k)
    integral += detail::adaptive_simpson(integrand, -8.0 + k, -7.0 + k, 0.5 * tolerance / (panels * prefactor));
  return prefactor * integral;
}

/// Sample mean of min{z_1..z_S} over `samples` draws of S standard normals.
inline ZetaEstimate zeta_monte_carlo(int strategies, std::uint64_t samples = 1'000'000, std::uint64_t seed = 0) {
  if (strategies < 1) throw ValidationError("zeta needs S >= 1");
  if (samples < 2) throw ValidationError("Monte-Carlo zeta needs at least 2 samples");
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  // Welford accumulation keeps the variance stable over 10^7 draws.
  double mean = 0.0, m2 = 0.0;
  for (std::uint64_t k = 1; k <= samples; ++k) {
    double lo = normal(rng);
    for (int s = 1; s < strategies; ++s) lo = std::min(lo, normal(rng));
    const double delta = lo - mean;
    mean += delta / static_cast<double>(k);
    m2 += delta * (lo - mean);
  }
  const double variance = m2 / static_cast<double>(samples - 1);
  return {mean, std::sqrt(variance / static_cast<double>(samples))};
}

/// Memoized quadrature value of zeta(S); safe to call from several threads.
inline double zeta(int strategies) {
  static std::mutex guard;
  static std::map<int, double> cache;
  std::lock_guard lock(guard);
  if (auto it = cache.find(strategies); it != cache.end()) return it->second;
  const double value = zeta_quadrature(strategies);
  cache.emplace(strategies, value);
  return value;
}

inline ZetaEstimate zeta(int strategies, ZetaMethod method, std::uint64_t samples = 1'000'000,
                         std::uint64_t seed = 0) {
  if (method == ZetaMethod::quadrature) return {zeta(strategies), 0.0};
  return zeta_monte_carlo(strategies, samples, seed);
}

/// lambda_c = zeta(S)^2 / (B - 1)
inline double lambda_c(int strategies, int nodes) {
  if (nodes < 2) throw ValidationError("critical point needs B >= 2");
  const double z = zeta(strategies);
  return z * z / (nodes - 1);
}

/// Theta(lambda - lambda_c) (1 - sqrt(lambda_c / lambda))^2
inline double predicted_anarchy(double lambda, int strategies, int nodes) {
  if (!(lambda > 0.0)) throw ValidationError("training parameter must be positive");
  const double critical = lambda_c(strategies, nodes);
  if (lambda <= critical) return 0.0;
  const double gap = 1.0 - std::sqrt(critical / lambda);
  return gap * gap;
}

/// Two equal nodes with M (B - 1) signals; players and strategies unchanged.
inline GameConfig binary_reduction(const GameConfig& cfg) {
  cfg.validate();
  GameConfig out = cfg;
  out.signals = cfg.signals * (cfg.nodes() - 1);
  out.strengths = StrengthDistribution::uniform(2);
  out.spectral_efficiencies.reset();
  return out;
}

}  // namespace sgame

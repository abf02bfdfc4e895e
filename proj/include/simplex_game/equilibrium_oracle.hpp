#pragma once

// Exhaustive ground truth for tiny games. Every pure strategy profile is
// visited, payoffs are evaluated two independent ways (occupancy counts and
// the vertex dot product), and profiles that no single player can improve on
// in signal-averaged payoff are collected.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <sstream>
#include <vector>

#include <Eigen/Dense>

#include "simplex_game/errors.hpp"
#include "simplex_game/game_core.hpp"
#include "simplex_game/simplex_geometry.hpp"

namespace sgame {

inline constexpr double kEquilibriumSlack = 1e-12;
inline constexpr std::uint64_t kDefaultProfileBudget = 1'000'000;

struct EquilibriumProfile {
  std::vector<int> choices;
  double frustration;
};

struct EquilibriumSet {
  std::vector<EquilibriumProfile> profiles;
  /// Smallest frustration over the set; nullopt when no pure equilibrium exists.
  std::optional<double> min_R;
  std::uint64_t profiles_visited = 0;
  /// Largest disagreement between the two payoff evaluators over every visited profile.
  double max_evaluator_gap = 0.0;
};

namespace detail {

inline std::uint64_t profile_count(int players, int strategies, std::uint64_t budget) {
  std::uint64_t total = 1;
  for (int i = 0; i < players; ++i) {
    if (total > budget / static_cast<std::uint64_t>(strategies) + 1) return budget + 1;
    total *= static_cast<std::uint64_t>(strategies);
  }
  return total;
}

inline void decode_profile(std::uint64_t index, int strategies, std::vector<int>& choices) {
  for (auto& s : choices) {
    s = static_cast<int>(index % static_cast<std::uint64_t>(strategies));
    index /= static_cast<std::uint64_t>(strategies);
  }
}

/// Signal-averaged payoffs of one pure profile, every unilateral deviation
/// included, and its frustration.
struct ProfileEvaluation {
  Eigen::MatrixXd deviation;  // N x S: u*_i(s_{-i}; s'), column s_i holds u*_i(s)
  double frustration = 0.0;
  double evaluator_gap = 0.0;
};

class ProfileEvaluator {
public:
  ProfileEvaluator(const StrategyMatrix& c, const YSimplex& s) : c_(c), s_(s) {
    if (s.node_count() != static_cast<std::size_t>(c.nodes()))
      throw ValidationError("simplex does not match strategy matrix node count");
  }

  void evaluate(const std::vector<int>& choices, ProfileEvaluation& out) const {
    const int n = c_.players();
    const auto& y = s_.strengths();
    out.deviation.setZero(n, c_.strategies());
    out.frustration = 0.0;
    out.evaluator_gap = 0.0;
    std::vector<int> counts(s_.node_count());
    for (int m = 0; m < c_.signals(); ++m) {
      std::fill(counts.begin(), counts.end(), 0);
      for (int i = 0; i < n; ++i) ++counts[static_cast<std::size_t>(c_.at(i, choices[static_cast<std::size_t>(i)], m))];
      Eigen::VectorXd b = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(s_.dimension()));
      for (std::size_t r = 0; r < counts.size(); ++r) b += counts[r] * s_.vertex(r).transpose();
      out.frustration += b.squaredNorm();
      for (int i = 0; i < n; ++i) {
        const int played = c_.at(i, choices[static_cast<std::size_t>(i)], m);
        for (int k = 0; k < c_.strategies(); ++k) {
          const int node = c_.at(i, k, m);
          // direct resolution: move player i, recount, read 1 - N_r / (y_r N)
          const int occupancy = counts[static_cast<std::size_t>(node)] + (node == played ? 0 : 1);
          const double by_counts = 1.0 - occupancy / (y[static_cast<std::size_t>(node)] * n);
          // geometric route: -(1/N) q_r . b' with b' the swapped aggregate bet
          const Eigen::VectorXd swapped = b + s_.vertex(static_cast<std::size_t>(node)).transpose() -
                                          s_.vertex(static_cast<std::size_t>(played)).transpose();
          const double by_geometry = -s_.vertex(static_cast<std::size_t>(node)).dot(swapped) / n;
          out.evaluator_gap = std::max(out.evaluator_gap, std::abs(by_counts - by_geometry));
          out.deviation(i, k) += by_counts;
        }
      }
    }
    out.deviation /= c_.signals();
    out.frustration /= static_cast<double>(c_.signals()) * n * static_cast<double>(s_.dimension());
  }

private:
  const StrategyMatrix& c_;
  const YSimplex& s_;
};

/// Largest gain any player could obtain by deviating from the evaluated profile.
inline double worst_violation(const ProfileEvaluation& ev, const std::vector<int>& choices) {
  double worst = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < ev.deviation.rows(); ++i) {
    const double current = ev.deviation(i, choices[static_cast<std::size_t>(i)]);
    worst = std::max(worst, ev.deviation.row(i).maxCoeff() - current);
  }
  return worst;
}

inline void check_budget(const StrategyMatrix& c, std::uint64_t budget) {
  const auto total = profile_count(c.players(), c.strategies(), budget);
  if (total > budget) {
    std::ostringstream msg;
    msg << "S^N = " << c.strategies() << "^" << c.players() << " profiles exceeds the enumeration budget of "
        << budget;
    throw BudgetError(msg.str());
  }
}

}  // namespace detail

/// All pure constrained correlated equilibria of the game.
inline EquilibriumSet enumerate_equilibria(const StrategyMatrix& c, const YSimplex& s,
                                           std::uint64_t budget = kDefaultProfileBudget) {
  detail::check_budget(c, budget);
  const auto total = detail::profile_count(c.players(), c.strategies(), budget);
  const detail::ProfileEvaluator evaluator(c, s);
  detail::ProfileEvaluation ev;
  std::vector<int> choices(static_cast<std::size_t>(c.players()));
  EquilibriumSet out;
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    detail::decode_profile(idx, c.strategies(), choices);
    evaluator.evaluate(choices, ev);
    out.max_evaluator_gap = std::max(out.max_evaluator_gap, ev.evaluator_gap);
    if (detail::worst_violation(ev, choices) <= kEquilibriumSlack) {
      out.profiles.push_back({choices, ev.frustration});
      out.min_R = out.min_R ? std::min(*out.min_R, ev.frustration) : ev.frustration;
    }
  }
  out.profiles_visited = total;
  return out;
}

/// Minimum frustration over the pure equilibria; nullopt means "no pure equilibrium".
inline std::optional<double> exact_price_of_anarchy(const StrategyMatrix& c, const YSimplex& s,
                                                    std::uint64_t budget = kDefaultProfileBudget) {
  return enumerate_equilibria(c, s, budget).min_R;
}

/// u*(p_{-i}; s2) - u*(p_{-i}; s1) - 2 [u*_i(p_{-i}; s2) - u*_i(p_{-i}; s1)]
///   - (1/N) avg_m (|c_{i s2}|^2 - |c_{i s1}|^2)
/// Zero up to rounding at any finite N.
inline double potential_defect(const StrategyMatrix& c, const MixedProfile& p, int player, int s1, int s2,
                               const YSimplex& s) {
  if (player < 0 || player >= c.players()) throw ValidationError("player index out of range");
  if (s1 < 0 || s1 >= c.strategies() || s2 < 0 || s2 >= c.strategies())
    throw ValidationError("strategy index out of range");
  auto with_pure_row = [&](int strategy) {
    std::vector<double> v(p.values().begin(), p.values().end());
    for (int k = 0; k < c.strategies(); ++k)
      v[static_cast<std::size_t>(player) * c.strategies() + k] = (k == strategy ? 1.0 : 0.0);
    return MixedProfile(p.players(), p.strategies(), std::move(v));
  };
  const MixedProfile p1 = with_pure_row(s1);
  const MixedProfile p2 = with_pure_row(s2);
  const double aggregate_gap = aggregate_correlated_payoff(c, p2, s) - aggregate_correlated_payoff(c, p1, s);
  const double own_gap = mixed_correlated_payoff(c, p2, player, s) - mixed_correlated_payoff(c, p1, player, s);
  double norm_gap = 0.0;
  for (int m = 0; m < c.signals(); ++m)
    norm_gap += s.squared_norm(static_cast<std::size_t>(c.at(player, s2, m))) -
                s.squared_norm(static_cast<std::size_t>(c.at(player, s1, m)));
  norm_gap /= static_cast<double>(c.signals()) * c.players();
  return aggregate_gap - 2.0 * own_gap - norm_gap;
}

struct MaximizerCheck {
  std::vector<int> choices;
  double aggregate_payoff;
  double frustration;
  bool is_equilibrium;
  /// Largest unilateral gain (<= slack for equilibria).
  double worst_violation;
};

struct PotentialReport {
  double max_aggregate_payoff = -std::numeric_limits<double>::infinity();
  std::vector<MaximizerCheck> maximizers;
  double worst_violation = 0.0;
  /// (1/(2N)) (max_r |q_r|^2 - min_r |q_r|^2): the only slack the norm-correction term allows.
  double correction_bound = 0.0;
};

/// Finds every pure maximizer of u* and checks whether it is an exact equilibrium.
inline PotentialReport verify_potential_maximizers(const StrategyMatrix& c, const YSimplex& s,
                                     std::uint64_t budget = kDefaultProfileBudget) {
  detail::check_budget(c, budget);
  const auto total = detail::profile_count(c.players(), c.strategies(), budget);
  const detail::ProfileEvaluator evaluator(c, s);
  detail::ProfileEvaluation ev;
  std::vector<int> choices(static_cast<std::size_t>(c.players()));
  PotentialReport rep;
  constexpr double tie = 1e-12;
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    detail::decode_profile(idx, c.strategies(), choices);
    evaluator.evaluate(choices, ev);
    const double aggregate = -ev.frustration * static_cast<double>(s.dimension());
    if (aggregate > rep.max_aggregate_payoff + tie) {
      rep.max_aggregate_payoff = aggregate;
      rep.maximizers.clear();
    }
    if (aggregate >= rep.max_aggregate_payoff - tie) {
      const double violation = std::max(0.0, detail::worst_violation(ev, choices));
      rep.maximizers.push_back({choices, aggregate, ev.frustration, violation <= kEquilibriumSlack, violation});
    }
  }
  for (const auto& mx : rep.maximizers) rep.worst_violation = std::max(rep.worst_violation, mx.worst_violation);
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (std::size_t r = 0; r < s.node_count(); ++r) {
    lo = std::min(lo, s.squared_norm(r));
    hi = std::max(hi, s.squared_norm(r));
  }
  rep.correction_bound = (hi - lo) / (2.0 * c.players());
  return rep;
}

}  // namespace sgame

#pragma once

// Simplex game instances: preprogrammed strategy tables, bet resolution,
// linear and nonlinear payoffs, and the frustration functional.
//
// Indices are zero-based throughout: players 0..N-1, strategies 0..S-1,
// signals 0..M-1, nodes 0..B-1.

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "simplex_game/errors.hpp"
#include "simplex_game/random.hpp"
#include "simplex_game/simplex_geometry.hpp"

namespace sgame {

inline constexpr double kProbabilityTolerance = 1e-12;
inline constexpr std::size_t kMaxNodes = 255;

enum class PayoffMode { linear, nonlinear };

inline std::string to_string(PayoffMode mode) { return mode == PayoffMode::linear ? "linear" : "nonlinear"; }

inline PayoffMode parse_payoff_mode(const std::string& text) {
  if (text == "linear") return PayoffMode::linear;
  if (text == "nonlinear") return PayoffMode::nonlinear;
  throw ValidationError("unknown payoff mode '" + text + "' (expected linear or nonlinear)");
}

struct GameConfig {
  int players = 1;
  int signals = 1;
  int strategies = 1;
  StrengthDistribution strengths = StrengthDistribution::uniform(2);
  PayoffMode payoff_mode = PayoffMode::linear;
  /// Raw per-node spectral efficiencies, kept for reporting when strengths were derived from them.
  std::optional<std::vector<double>> spectral_efficiencies;

  int nodes() const noexcept { return static_cast<int>(strengths.node_count()); }
  /// lambda = M / N
  double training_parameter() const noexcept { return static_cast<double>(signals) / players; }

  void validate() const {
    if (players < 1) throw ValidationError("players must be >= 1");
    if (signals < 1) throw ValidationError("signals must be >= 1");
    if (strategies < 1) throw ValidationError("strategies per player must be >= 1");
    if (strengths.node_count() > kMaxNodes) throw ValidationError("at most 255 nodes are supported");
    if (spectral_efficiencies && spectral_efficiencies->size() != strengths.node_count())
      throw ValidationError("spectral efficiency count does not match node count");
  }
};

/// Game config whose strengths are the normalized spectral efficiencies.
inline GameConfig with_spectral_efficiencies(GameConfig cfg, std::vector<double> efficiencies) {
  cfg.strengths = StrengthDistribution::from_weights(efficiencies);
  cfg.spectral_efficiencies = std::move(efficiencies);
  return cfg;
}

/// Dense N x S x M table of node indices, row-major in (player, strategy, signal).
class StrategyMatrix {
public:
  StrategyMatrix(int players, int strategies, int signals, int nodes)
      : players_(players), strategies_(strategies), signals_(signals), nodes_(nodes),
        entries_(static_cast<std::size_t>(players) * strategies * signals, 0) {
    if (players < 1 || strategies < 1 || signals < 1)
      throw ValidationError("strategy matrix dimensions must be positive");
    if (nodes < 2 || static_cast<std::size_t>(nodes) > kMaxNodes)
      throw ValidationError("strategy matrix node count must be in [2, 255]");
  }

  StrategyMatrix(int players, int strategies, int signals, int nodes, std::vector<std::uint8_t> entries)
      : StrategyMatrix(players, strategies, signals, nodes) {
    if (entries.size() != entries_.size()) throw ValidationError("strategy matrix entry count mismatch");
    for (auto e : entries)
      if (e >= nodes) throw ValidationError("strategy matrix entry is not a valid node index");
    entries_ = std::move(entries);
  }

  int players() const noexcept { return players_; }
  int strategies() const noexcept { return strategies_; }
  int signals() const noexcept { return signals_; }
  int nodes() const noexcept { return nodes_; }

  int at(int player, int strategy, int signal) const { return entries_[offset(player, strategy, signal)]; }
  void set(int player, int strategy, int signal, int node) {
    if (node < 0 || node >= nodes_) throw ValidationError("node index out of range");
    entries_[offset(player, strategy, signal)] = static_cast<std::uint8_t>(node);
  }

  std::span<const std::uint8_t> entries() const noexcept { return entries_; }

  void check_matches(const GameConfig& cfg) const {
    if (players_ != cfg.players || strategies_ != cfg.strategies || signals_ != cfg.signals ||
        nodes_ != cfg.nodes())
      throw ValidationError("strategy matrix dimensions do not match the game config");
  }

  friend bool operator==(const StrategyMatrix&, const StrategyMatrix&) = default;

private:
  std::size_t offset(int i, int s, int m) const {
    return (static_cast<std::size_t>(i) * strategies_ + s) * signals_ + m;
  }

  int players_, strategies_, signals_, nodes_;
  std::vector<std::uint8_t> entries_;
};

/// Every entry independently equals node r with probability y_r.
inline StrategyMatrix draw_strategy_matrix(const GameConfig& cfg, Rng& rng) {
  cfg.validate();
  StrategyMatrix c(cfg.players, cfg.strategies, cfg.signals, cfg.nodes());
  const auto y = cfg.strengths.weights();
  for (int i = 0; i < cfg.players; ++i)
    for (int s = 0; s < cfg.strategies; ++s)
      for (int m = 0; m < cfg.signals; ++m) c.set(i, s, m, static_cast<int>(sample_index(y, rng)));
  return c;
}

/// One realized round: a broadcast signal and each player's strategy choice.
struct PureInstance {
  int signal = 0;
  std::vector<int> choices;
};

/// N x S matrix of mixed strategies p_is, one probability row per player.
class MixedProfile {
public:
  MixedProfile(int players, int strategies, std::vector<double> probabilities)
      : players_(players), strategies_(strategies), p_(std::move(probabilities)) {
    if (players < 1 || strategies < 1) throw ValidationError("profile dimensions must be positive");
    if (p_.size() != static_cast<std::size_t>(players) * strategies)
      throw ValidationError("profile size does not match N x S");
    validate();
  }

  static MixedProfile uniform(int players, int strategies) {
    return MixedProfile(players, strategies,
                        std::vector<double>(static_cast<std::size_t>(players) * strategies, 1.0 / strategies));
  }

  static MixedProfile pure(std::span<const int> choices, int strategies) {
    std::vector<double> p(choices.size() * static_cast<std::size_t>(strategies), 0.0);
    for (std::size_t i = 0; i < choices.size(); ++i) {
      if (choices[i] < 0 || choices[i] >= strategies) throw ValidationError("pure choice out of range");
      p[i * strategies + choices[i]] = 1.0;
    }
    return MixedProfile(static_cast<int>(choices.size()), strategies, std::move(p));
  }

  int players() const noexcept { return players_; }
  int strategies() const noexcept { return strategies_; }

  double operator()(int i, int s) const { return p_[static_cast<std::size_t>(i) * strategies_ + s]; }
  std::span<const double> row(int i) const {
    return {p_.data() + static_cast<std::size_t>(i) * strategies_, static_cast<std::size_t>(strategies_)};
  }
  std::span<const double> values() const noexcept { return p_; }

  /// Overwrites row i; the new row must be a probability vector.
  void set_row(int i, std::span<const double> row) {
    if (row.size() != static_cast<std::size_t>(strategies_)) throw ValidationError("row size mismatch");
    std::copy(row.begin(), row.end(), p_.begin() + static_cast<std::ptrdiff_t>(i) * strategies_);
    validate_row(i);
  }

  friend bool operator==(const MixedProfile&, const MixedProfile&) = default;

private:
  void validate() const {
    for (int i = 0; i < players_; ++i) validate_row(i);
  }
  void validate_row(int i) const {
    double total = 0.0;
    for (double v : row(i)) {
      if (!(v >= 0.0) || !std::isfinite(v)) throw ValidationError("mixed strategy has a negative entry");
      total += v;
    }
    if (std::abs(total - 1.0) > kProbabilityTolerance) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "mixed strategy of player " << i << " sums to " << total;
      throw ValidationError(msg.str());
    }
  }

  int players_, strategies_;
  std::vector<double> p_;
};

/// Occupancy N_r of each node.
struct Allocation {
  std::vector<int> counts;
  int total = 0;

  friend bool operator==(const Allocation&, const Allocation&) = default;
};

inline Allocation allocation_from_counts(std::vector<int> counts) {
  int total = 0;
  for (int n : counts) {
    if (n < 0) throw ValidationError("node occupancy must be nonnegative");
    total += n;
  }
  return {std::move(counts), total};
}

struct BetResolution {
  std::vector<int> nodes;  // node chosen by each player
  Allocation allocation;
};

inline BetResolution resolve_bets(const StrategyMatrix& c, const PureInstance& inst) {
  if (inst.signal < 0 || inst.signal >= c.signals()) throw ValidationError("signal index out of range");
  if (inst.choices.size() != static_cast<std::size_t>(c.players()))
    throw ValidationError("instance must name one strategy per player");
  BetResolution out{std::vector<int>(inst.choices.size()),
                    Allocation{std::vector<int>(static_cast<std::size_t>(c.nodes()), 0), c.players()}};
  for (int i = 0; i < c.players(); ++i) {
    const int s = inst.choices[static_cast<std::size_t>(i)];
    if (s < 0 || s >= c.strategies()) throw ValidationError("strategy index out of range");
    const int node = c.at(i, s, inst.signal);
    out.nodes[static_cast<std::size_t>(i)] = node;
    ++out.allocation.counts[static_cast<std::size_t>(node)];
  }
  return out;
}

/// b = sum_r N_r q_r
inline Eigen::VectorXd aggregate_bet(const Allocation& alloc, const YSimplex& s) {
  if (alloc.counts.size() != s.node_count()) throw ValidationError("allocation has wrong node count");
  Eigen::VectorXd b = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(s.dimension()));
  for (std::size_t r = 0; r < alloc.counts.size(); ++r)
    b += static_cast<double>(alloc.counts[r]) * s.vertex(r).transpose();
  return b;
}

/// b^2 from occupancies alone: sum_r N_r^2 / y_r - N^2.
inline double squared_bet_from_counts(const Allocation& alloc, const StrengthDistribution& y) {
  double sum = 0.0;
  for (std::size_t r = 0; r < alloc.counts.size(); ++r) {
    const double n = alloc.counts[r];
    sum += n * n / y[r];
  }
  const double total = alloc.total;
  return sum - total * total;
}

/// Per-node linear utility u_r = 1 - N_r / (y_r N); empty nodes report 1.
inline std::vector<double> payoff_linear(const Allocation& alloc, const StrengthDistribution& y) {
  if (alloc.counts.size() != y.node_count()) throw ValidationError("allocation has wrong node count");
  if (alloc.total < 1) throw ValidationError("allocation has no players");
  std::vector<double> u(alloc.counts.size());
  for (std::size_t r = 0; r < u.size(); ++r) u[r] = 1.0 - alloc.counts[r] / (y[r] * alloc.total);
  return u;
}

/// Per-node normalized throughput y_r N / N_r; nullopt for unoccupied nodes.
inline std::vector<std::optional<double>> payoff_nonlinear(const Allocation& alloc, const StrengthDistribution& y) {
  if (alloc.counts.size() != y.node_count()) throw ValidationError("allocation has wrong node count");
  std::vector<std::optional<double>> u(alloc.counts.size());
  for (std::size_t r = 0; r < u.size(); ++r)
    if (alloc.counts[r] > 0) u[r] = y[r] * alloc.total / alloc.counts[r];
  return u;
}

/// R_t = b^2 / (N (B-1)) on a realized allocation.
inline double instantaneous_frustration(const Allocation& alloc, const YSimplex& s) {
  const Eigen::VectorXd b = aggregate_bet(alloc, s);
  return b.squaredNorm() / (static_cast<double>(alloc.total) * static_cast<double>(s.dimension()));
}

/// Signal-averaged linear payoff u*_i of player i under a pure strategy tuple.
inline double correlated_payoff(const StrategyMatrix& c, std::span<const int> profile, int player,
                                const StrengthDistribution& y) {
  if (player < 0 || player >= c.players()) throw ValidationError("player index out of range");
  PureInstance inst{0, std::vector<int>(profile.begin(), profile.end())};
  double total = 0.0;
  for (int m = 0; m < c.signals(); ++m) {
    inst.signal = m;
    const auto resolved = resolve_bets(c, inst);
    const auto u = payoff_linear(resolved.allocation, y);
    total += u[static_cast<std::size_t>(resolved.nodes[static_cast<std::size_t>(player)])];
  }
  return total / c.signals();
}

namespace detail {

inline void check_profile(const StrategyMatrix& c, const MixedProfile& p, const YSimplex& s) {
  if (p.players() != c.players() || p.strategies() != c.strategies())
    throw ValidationError("mixed profile does not match strategy matrix");
  if (s.node_count() != static_cast<std::size_t>(c.nodes()))
    throw ValidationError("simplex does not match strategy matrix node count");
}

/// Per-signal expected bets <c_i^m> (rows: players) and expected squared norms <c_i^m . c_i^m>.
struct SignalMoments {
  Eigen::MatrixXd mean_bets;   // N x (B-1)
  Eigen::VectorXd mean_sq;     // N
  Eigen::VectorXd total;       // sum_i <c_i^m>
};

inline void signal_moments(const StrategyMatrix& c, const MixedProfile& p, const YSimplex& s, int m,
                           SignalMoments& out) {
  const auto n = static_cast<Eigen::Index>(c.players());
  const auto d = static_cast<Eigen::Index>(s.dimension());
  out.mean_bets.setZero(n, d);
  out.mean_sq.setZero(n);
  for (int i = 0; i < c.players(); ++i) {
    for (int k = 0; k < c.strategies(); ++k) {
      const double w = p(i, k);
      if (w == 0.0) continue;
      const auto node = static_cast<std::size_t>(c.at(i, k, m));
      out.mean_bets.row(i) += w * s.vertex(node);
      out.mean_sq(i) += w * s.squared_norm(node);
    }
  }
  out.total = out.mean_bets.colwise().sum().transpose();
}

}  // namespace detail

/// u*_i(p) = -(1/N) avg_m [ <c_i> . sum_{j != i} <c_j> + <c_i^2> ]
inline double mixed_correlated_payoff(const StrategyMatrix& c, const MixedProfile& p, int player,
                                      const YSimplex& s) {
  detail::check_profile(c, p, s);
  if (player < 0 || player >= c.players()) throw ValidationError("player index out of range");
  detail::SignalMoments mom;
  double acc = 0.0;
  for (int m = 0; m < c.signals(); ++m) {
    detail::signal_moments(c, p, s, m, mom);
    const Eigen::VectorXd own = mom.mean_bets.row(player).transpose();
    acc += own.dot(mom.total - own) + mom.mean_sq(player);
  }
  return -acc / (static_cast<double>(c.players()) * c.signals());
}

/// N x S matrix of u*_i(p_{-i}; s): the payoff player i would get by switching
/// to pure strategy s while everyone else keeps playing p.
inline Eigen::MatrixXd deviation_payoffs(const StrategyMatrix& c, const MixedProfile& p, const YSimplex& s) {
  detail::check_profile(c, p, s);
  const auto n = static_cast<Eigen::Index>(c.players());
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, c.strategies());
  detail::SignalMoments mom;
  for (int m = 0; m < c.signals(); ++m) {
    detail::signal_moments(c, p, s, m, mom);
    for (int i = 0; i < c.players(); ++i) {
      const Eigen::VectorXd others = mom.total - mom.mean_bets.row(i).transpose();
      for (int k = 0; k < c.strategies(); ++k) {
        const auto node = static_cast<std::size_t>(c.at(i, k, m));
        out(i, k) += s.vertex(node).dot(others) + s.squared_norm(node);
      }
    }
  }
  out *= -1.0 / (static_cast<double>(c.players()) * c.signals());
  return out;
}

/// u*(p) = sum_i u*_i(p), the aggregate signal-averaged payoff.
inline double aggregate_correlated_payoff(const StrategyMatrix& c, const MixedProfile& p, const YSimplex& s) {
  detail::check_profile(c, p, s);
  detail::SignalMoments mom;
  double acc = 0.0;
  for (int m = 0; m < c.signals(); ++m) {
    detail::signal_moments(c, p, s, m, mom);
    acc += mom.total.squaredNorm() - mom.mean_bets.rowwise().squaredNorm().sum() + mom.mean_sq.sum();
  }
  return -acc / (static_cast<double>(c.players()) * c.signals());
}

/// R(p) = -u*(p) / (B-1): the expected squared aggregate bet under p, averaged
/// exactly over all M signals and normalized by N (B-1).
inline double frustration(const StrategyMatrix& c, const MixedProfile& p, const YSimplex& s) {
  return -aggregate_correlated_payoff(c, p, s) / static_cast<double>(s.dimension());
}

struct FrustrationDecomposition {
  double base = 1.0;
  /// (1/(M N (B-1))) sum_m |b(m,p)|^2 with b(m,p) = sum_i <c_i^m> the mean aggregate bet.
  double congestion = 0.0;
  /// G(p) = (1/N) sum_i sum_s p_is^2
  double self_term = 0.0;

  double reassembled() const noexcept { return base + congestion - self_term; }
};

inline FrustrationDecomposition frustration_decomposition(const StrategyMatrix& c, const MixedProfile& p,
                                                          const YSimplex& s) {
  detail::check_profile(c, p, s);
  detail::SignalMoments mom;
  double congestion = 0.0;
  for (int m = 0; m < c.signals(); ++m) {
    detail::signal_moments(c, p, s, m, mom);
    congestion += mom.total.squaredNorm();
  }
  const double n = c.players();
  congestion /= static_cast<double>(c.signals()) * n * static_cast<double>(s.dimension());
  double g = 0.0;
  for (double v : p.values()) g += v * v;
  return {1.0, congestion, g / n};
}

}  // namespace sgame

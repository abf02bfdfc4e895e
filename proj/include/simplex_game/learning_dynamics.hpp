#pragma once

// Iterated play under exponential learning, the continuous-time replicator
// flow on the correlated form, and the baselines used for comparison.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <limits>
#include <numeric>
#include <optional>
#include <sstream>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "simplex_game/errors.hpp"
#include "simplex_game/game_core.hpp"
#include "simplex_game/random.hpp"
#include "simplex_game/simplex_geometry.hpp"

namespace sgame {

inline constexpr double kDefaultLearningRate = 20.0;

/// p_s = exp(gamma U_s) / sum_s' exp(gamma U_s'), evaluated max-shifted.
inline std::vector<double> softmax_probabilities(std::span<const double> scores, double gamma) {
  if (scores.empty()) throw ValidationError("softmax needs at least one score");
  if (!(gamma >= 0.0)) throw ValidationError("learning rate must be nonnegative");
  std::vector<double> p(scores.size());
  double peak = -std::numeric_limits<double>::infinity();
  for (double u : scores) {
    if (!std::isfinite(u)) throw ValidationError("scores must be finite");
    peak = std::max(peak, gamma * u);
  }
  double total = 0.0;
  for (std::size_t k = 0; k < scores.size(); ++k) {
    p[k] = std::exp(gamma * scores[k] - peak);
    total += p[k];
  }
  for (double& v : p) v /= total;
  return p;
}

/// Scores U_is, the induced mixed strategies and per-player learning rates.
struct LearnerState {
  std::vector<double> scores;  // N x S, row-major
  MixedProfile probabilities;
  std::vector<double> learning_rates;
  std::int64_t iteration = 0;

  static LearnerState initial(int players, int strategies, std::vector<double> rates) {
    if (rates.size() != static_cast<std::size_t>(players))
      throw ValidationError("need one learning rate per player");
    for (double g : rates)
      if (!(g >= 0.0) || !std::isfinite(g)) throw ValidationError("learning rates must be finite and >= 0");
    return {std::vector<double>(static_cast<std::size_t>(players) * strategies, 0.0),
            MixedProfile::uniform(players, strategies), std::move(rates), 0};
  }

  int players() const noexcept { return probabilities.players(); }
  int strategies() const noexcept { return probabilities.strategies(); }
  double score(int i, int s) const { return scores[static_cast<std::size_t>(i) * strategies() + s]; }
  std::span<const double> score_row(int i) const {
    return {scores.data() + static_cast<std::size_t>(i) * strategies(), static_cast<std::size_t>(strategies())};
  }
};

/// min_i max_s p_is; 1 iff every player is pure.
inline double purity(const MixedProfile& p) {
  double worst = 1.0;
  for (int i = 0; i < p.players(); ++i) {
    const auto row = p.row(i);
    worst = std::min(worst, *std::max_element(row.begin(), row.end()));
  }
  return worst;
}

/// Purity after merging strategies that pick the same node under every signal.
/// Such strategies always earn equal scores, so their split never resolves.
inline double effective_purity(const MixedProfile& p, const StrategyMatrix& c) {
  double worst = 1.0;
  std::vector<double> merged(static_cast<std::size_t>(c.strategies()));
  for (int i = 0; i < p.players(); ++i) {
    std::fill(merged.begin(), merged.end(), 0.0);
    for (int k = 0; k < c.strategies(); ++k) {
      int rep = k;
      for (int j = 0; j < k && rep == k; ++j) {
        bool same = true;
        for (int m = 0; m < c.signals() && same; ++m) same = c.at(i, j, m) == c.at(i, k, m);
        if (same) rep = j;
      }
      merged[static_cast<std::size_t>(rep)] += p(i, k);
    }
    worst = std::min(worst, *std::max_element(merged.begin(), merged.end()));
  }
  return worst;
}

struct IterationRecord {
  std::int64_t t = 0;
  int signal = -1;  // -1 when no signal is broadcast (random baseline)
  double frustration = 0.0;
  std::optional<Allocation> allocation;
  std::optional<double> purity;
  std::optional<MixedProfile> profile;
};

struct Trajectory {
  std::vector<IterationRecord> records;

  std::size_t size() const noexcept { return records.size(); }
  bool empty() const noexcept { return records.empty(); }

  std::vector<double> frustrations() const {
    std::vector<double> out(records.size());
    std::transform(records.begin(), records.end(), out.begin(), [](const auto& r) { return r.frustration; });
    return out;
  }
};

/// Counterfactual rewards W_is = -(1/(M N)) c_is . [b + (c_is - c_{i s_i})] for
/// every strategy s of `player`, given the realized aggregate bet b.
inline std::vector<double> reward_vector(const StrategyMatrix& c, const PureInstance& inst,
                                         const Eigen::VectorXd& realized_bet, int player, const YSimplex& s) {
  if (player < 0 || player >= c.players()) throw ValidationError("player index out of range");
  if (realized_bet.size() != static_cast<Eigen::Index>(s.dimension()))
    throw ValidationError("aggregate bet has wrong dimension");
  const int played = c.at(player, inst.choices.at(static_cast<std::size_t>(player)), inst.signal);
  const double scale = -1.0 / (static_cast<double>(c.signals()) * c.players());
  std::vector<double> w(static_cast<std::size_t>(c.strategies()));
  for (int k = 0; k < c.strategies(); ++k) {
    const auto node = static_cast<std::size_t>(c.at(player, k, inst.signal));
    const Eigen::VectorXd swapped =
        realized_bet + s.vertex(node).transpose() - s.vertex(static_cast<std::size_t>(played)).transpose();
    w[static_cast<std::size_t>(k)] = scale * s.vertex(node).dot(swapped);
  }
  return w;
}

/// Nonlinear counterpart of the reward: (1/M) (y_r N / N'_r - 1), where N'_r is
/// the occupancy of the counterfactual node after the player's own bet is swapped.
inline std::vector<double> nonlinear_reward_vector(const StrategyMatrix& c, const PureInstance& inst,
                                                   const Allocation& alloc, int player,
                                                   const StrengthDistribution& y) {
  const int played = c.at(player, inst.choices.at(static_cast<std::size_t>(player)), inst.signal);
  std::vector<double> w(static_cast<std::size_t>(c.strategies()));
  for (int k = 0; k < c.strategies(); ++k) {
    const int node = c.at(player, k, inst.signal);
    const int occupancy = alloc.counts[static_cast<std::size_t>(node)] + (node == played ? 0 : 1);
    w[static_cast<std::size_t>(k)] =
        (y[static_cast<std::size_t>(node)] * alloc.total / occupancy - 1.0) / c.signals();
  }
  return w;
}

struct LearningConfig {
  double learning_rate = kDefaultLearningRate;
  /// Per-player rates; when empty every player uses `learning_rate`.
  std::vector<double> learning_rates;
  std::int64_t iterations = 2000;
  /// Record allocation, purity and profile every `snapshot_stride` iterations (0 = never).
  std::int64_t snapshot_stride = 0;

  std::vector<double> rates_for(int players) const {
    if (learning_rates.empty()) return std::vector<double>(static_cast<std::size_t>(players), learning_rate);
    if (learning_rates.size() != static_cast<std::size_t>(players))
      throw ValidationError("need one learning rate per player");
    return learning_rates;
  }
};

/// One round: broadcast a uniform signal, sample each player's strategy, resolve
/// bets, reward every strategy of every player, then update scores and probabilities.
inline IterationRecord iterate(LearnerState& state, const StrategyMatrix& c, const YSimplex& simplex,
                               const GameConfig& cfg, Rng& rng, std::int64_t snapshot_stride = 0) {
  const int n = c.players();
  const int strategies = c.strategies();
  if (state.players() != n || state.strategies() != strategies)
    throw ValidationError("learner state does not match strategy matrix");

  PureInstance inst;
  inst.signal = std::uniform_int_distribution<int>(0, c.signals() - 1)(rng);
  inst.choices.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    inst.choices[static_cast<std::size_t>(i)] = static_cast<int>(sample_index(state.probabilities.row(i), rng));

  const BetResolution resolved = resolve_bets(c, inst);
  const Eigen::VectorXd b = aggregate_bet(resolved.allocation, simplex);
  const double frustration = b.squaredNorm() / (static_cast<double>(n) * static_cast<double>(simplex.dimension()));

  // q_r . b for every node; the bracket form only needs these and the Gram entries.
  const auto nodes = simplex.node_count();
  std::vector<double> projection(nodes);
  for (std::size_t r = 0; r < nodes; ++r) projection[r] = simplex.vertex(r).dot(b);

  const double scale = -1.0 / (static_cast<double>(c.signals()) * n);
  const auto& y = simplex.strengths();
  std::vector<double> row(static_cast<std::size_t>(strategies));
  for (int i = 0; i < n; ++i) {
    const auto played = static_cast<std::size_t>(resolved.nodes[static_cast<std::size_t>(i)]);
    for (int k = 0; k < strategies; ++k) {
      const auto node = static_cast<std::size_t>(c.at(i, k, inst.signal));
      double w;
      if (cfg.payoff_mode == PayoffMode::linear) {
        w = scale * (projection[node] + simplex.dot(node, node) - simplex.dot(node, played));
      } else {
        const int occupancy = resolved.allocation.counts[node] + (node == played ? 0 : 1);
        w = (y[node] * n / occupancy - 1.0) / c.signals();
      }
      state.scores[static_cast<std::size_t>(i) * strategies + k] += w;
    }
    const auto p = softmax_probabilities(state.score_row(i), state.learning_rates[static_cast<std::size_t>(i)]);
    std::copy(p.begin(), p.end(), row.begin());
    state.probabilities.set_row(i, row);
  }
  ++state.iteration;

  IterationRecord rec;
  rec.t = state.iteration;
  rec.signal = inst.signal;
  rec.frustration = frustration;
  if (snapshot_stride > 0 && state.iteration % snapshot_stride == 0) {
    rec.allocation = resolved.allocation;
    rec.purity = purity(state.probabilities);
    rec.profile = state.probabilities;
  }
  return rec;
}

struct RunResult {
  LearnerState state;
  Trajectory trajectory;
};

/// `iterations` rounds of exponential learning on a fixed strategy matrix.
inline RunResult run(const StrategyMatrix& c, const YSimplex& simplex, const GameConfig& cfg,
                     const LearningConfig& lcfg, Rng& rng) {
  cfg.validate();
  c.check_matches(cfg);
  if (lcfg.iterations < 0) throw ValidationError("iteration count must be nonnegative");
  RunResult out{LearnerState::initial(cfg.players, cfg.strategies, lcfg.rates_for(cfg.players)), {}};
  out.trajectory.records.reserve(static_cast<std::size_t>(lcfg.iterations));
  for (std::int64_t t = 0; t < lcfg.iterations; ++t)
    out.trajectory.records.push_back(iterate(out.state, c, simplex, cfg, rng, lcfg.snapshot_stride));
  return out;
}

struct SeededRun {
  StrategyMatrix matrix;
  YSimplex simplex;
  LearnerState state;
  Trajectory trajectory;
};

/// Draws the strategy matrix from `seed`, then keeps using the same stream for play.
inline SeededRun run(const GameConfig& cfg, const LearningConfig& lcfg, std::uint64_t seed) {
  cfg.validate();
  Rng rng(seed);
  YSimplex simplex = build_simplex(cfg.strengths);
  StrategyMatrix c = draw_strategy_matrix(cfg, rng);
  RunResult r = run(c, simplex, cfg, lcfg, rng);
  return {std::move(c), std::move(simplex), std::move(r.state), std::move(r.trajectory)};
}

/// dp_is/dtau = Gamma_i p_is (u*_i(p_{-i}; s) - u*_i(p)).
inline Eigen::MatrixXd replicator_flow(const StrategyMatrix& c, const MixedProfile& p, const YSimplex& simplex,
                                       std::span<const double> rates) {
  if (rates.size() != static_cast<std::size_t>(c.players()))
    throw ValidationError("need one learning rate per player");
  const Eigen::MatrixXd u = deviation_payoffs(c, p, simplex);
  Eigen::MatrixXd flow(u.rows(), u.cols());
  for (Eigen::Index i = 0; i < u.rows(); ++i) {
    double mean = 0.0;
    for (Eigen::Index k = 0; k < u.cols(); ++k) mean += p(static_cast<int>(i), static_cast<int>(k)) * u(i, k);
    for (Eigen::Index k = 0; k < u.cols(); ++k)
      flow(i, k) = rates[static_cast<std::size_t>(i)] * p(static_cast<int>(i), static_cast<int>(k)) * (u(i, k) - mean);
  }
  return flow;
}

struct ReplicatorTrajectory {
  std::vector<double> times;
  std::vector<MixedProfile> profiles;
  /// Largest |row sum - 1| seen before each renormalization.
  double max_renormalization_defect = 0.0;
  std::size_t clipped_components = 0;
};

namespace detail {

/// Clips negatives, renormalizes rows, and returns the worst pre-normalization row-sum defect.
inline double project_rows(Eigen::MatrixXd& x, std::size_t& clipped) {
  double defect = 0.0;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index k = 0; k < x.cols(); ++k) {
      if (x(i, k) < 0.0) {
        x(i, k) = 0.0;
        ++clipped;
      }
    }
    const double total = x.row(i).sum();
    defect = std::max(defect, std::abs(total - 1.0));
    x.row(i) /= total;
  }
  return defect;
}

inline Eigen::MatrixXd checked(Eigen::MatrixXd d, double tau) {
  if (!d.allFinite()) {
    std::ostringstream msg;
    msg << "replicator derivative is not finite at tau = " << tau;
    throw IntegrationError(msg.str());
  }
  return d;
}

/// Classical four-stage explicit step followed by projection back onto the simplex.
template <class Flow>
double rk4_step(Eigen::MatrixXd& x, double tau, double h, Flow&& flow, std::size_t& clipped) {
  const Eigen::MatrixXd k1 = checked(flow(x), tau);
  const Eigen::MatrixXd k2 = checked(flow(x + 0.5 * h * k1), tau + 0.5 * h);
  const Eigen::MatrixXd k3 = checked(flow(x + 0.5 * h * k2), tau + 0.5 * h);
  const Eigen::MatrixXd k4 = checked(flow(x + h * k3), tau + h);
  x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  return project_rows(x, clipped);
}

inline MixedProfile to_profile(const Eigen::MatrixXd& x) {
  std::vector<double> v(static_cast<std::size_t>(x.size()));
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index k = 0; k < x.cols(); ++k) v[static_cast<std::size_t>(i * x.cols() + k)] = x(i, k);
  return MixedProfile(static_cast<int>(x.rows()), static_cast<int>(x.cols()), std::move(v));
}

inline Eigen::MatrixXd to_matrix(const MixedProfile& p) {
  Eigen::MatrixXd x(p.players(), p.strategies());
  for (int i = 0; i < p.players(); ++i)
    for (int k = 0; k < p.strategies(); ++k) x(i, k) = p(i, k);
  return x;
}

/// Replicator flow on a raw matrix that may sit slightly off the simplex mid-step.
inline Eigen::MatrixXd raw_replicator_flow(const StrategyMatrix& c, const Eigen::MatrixXd& x,
                                           const YSimplex& simplex, std::span<const double> rates) {
  const auto n = static_cast<Eigen::Index>(c.players());
  const auto d = static_cast<Eigen::Index>(simplex.dimension());
  Eigen::MatrixXd u = Eigen::MatrixXd::Zero(n, c.strategies());
  Eigen::MatrixXd mean_bets(n, d);
  for (int m = 0; m < c.signals(); ++m) {
    mean_bets.setZero();
    for (int i = 0; i < c.players(); ++i)
      for (int k = 0; k < c.strategies(); ++k)
        mean_bets.row(i) += x(i, k) * simplex.vertex(static_cast<std::size_t>(c.at(i, k, m)));
    const Eigen::VectorXd total = mean_bets.colwise().sum().transpose();
    for (int i = 0; i < c.players(); ++i) {
      const Eigen::VectorXd others = total - mean_bets.row(i).transpose();
      for (int k = 0; k < c.strategies(); ++k) {
        const auto node = static_cast<std::size_t>(c.at(i, k, m));
        u(i, k) += simplex.vertex(node).dot(others) + simplex.squared_norm(node);
      }
    }
  }
  u *= -1.0 / (static_cast<double>(c.players()) * c.signals());
  Eigen::MatrixXd flow(n, c.strategies());
  for (Eigen::Index i = 0; i < n; ++i) {
    const double mean = x.row(i).dot(u.row(i));
    flow.row(i) = rates[static_cast<std::size_t>(i)] * (x.row(i).array() * (u.row(i).array() - mean)).matrix();
  }
  return flow;
}

}  // namespace detail

/// Fixed-step fourth-order integration of the replicator flow from p0 up to tau_end.
/// Profiles are recorded every `record_stride` steps (plus the initial one).
inline ReplicatorTrajectory integrate_replicator(const StrategyMatrix& c, const MixedProfile& p0,
                                                 const YSimplex& simplex, std::span<const double> rates,
                                                 double tau_end, double step, std::size_t record_stride = 1) {
  if (!(step > 0.0)) throw ValidationError("integration step must be positive");
  if (!(tau_end >= 0.0)) throw ValidationError("integration horizon must be nonnegative");
  if (rates.size() != static_cast<std::size_t>(c.players()))
    throw ValidationError("need one learning rate per player");
  if (record_stride == 0) record_stride = 1;
  detail::check_profile(c, p0, simplex);

  ReplicatorTrajectory out;
  Eigen::MatrixXd x = detail::to_matrix(p0);
  out.times.push_back(0.0);
  out.profiles.push_back(p0);
  const auto steps = static_cast<std::size_t>(std::llround(tau_end / step));
  auto flow = [&](const Eigen::MatrixXd& z) { return detail::raw_replicator_flow(c, z, simplex, rates); };
  for (std::size_t k = 1; k <= steps; ++k) {
    const double tau = static_cast<double>(k - 1) * step;
    const std::size_t clipped_before = out.clipped_components;
    const double defect = detail::rk4_step(x, tau, step, flow, out.clipped_components);
    out.max_renormalization_defect = std::max(out.max_renormalization_defect, defect);
    if (out.clipped_components != clipped_before)
      std::cerr << "warning: replicator step at tau=" << tau << " clipped "
                << (out.clipped_components - clipped_before) << " negative component(s)\n";
    if (k % record_stride == 0 || k == steps) {
      out.times.push_back(static_cast<double>(k) * step);
      out.profiles.push_back(detail::to_profile(x));
    }
  }
  return out;
}

struct CongestionReplicatorTrajectory {
  std::vector<double> times;
  std::vector<double> frustration;
};

/// Expected frustration E[b^2] / (N (B-1)) of independent node choices x_ir.
inline double congestion_frustration(const Eigen::MatrixXd& x, const StrengthDistribution& y) {
  const double n = static_cast<double>(x.rows());
  double sum = 0.0;
  for (Eigen::Index r = 0; r < x.cols(); ++r) {
    const double mean = x.col(r).sum();
    const double var = (x.col(r).array() * (1.0 - x.col(r).array())).sum();
    sum += (var + mean * mean) / y[static_cast<std::size_t>(r)];
  }
  return (sum - n * n) / (n * static_cast<double>(x.cols() - 1));
}

/// Replicator dynamics of the plain congestion game: each player mixes directly
/// over nodes with expected linear payoff u_ir = 1 - (1 + sum_{j != i} x_jr) / (y_r N).
inline CongestionReplicatorTrajectory integrate_congestion_replicator(const StrengthDistribution& y,
                                                                      const Eigen::MatrixXd& x0, double rate,
                                                                      double tau_end, double step,
                                                                      std::size_t record_stride = 1) {
  if (!(step > 0.0)) throw ValidationError("integration step must be positive");
  if (x0.cols() != static_cast<Eigen::Index>(y.node_count()))
    throw ValidationError("initial node mix has wrong node count");
  if (record_stride == 0) record_stride = 1;
  const double n = static_cast<double>(x0.rows());
  auto flow = [&](const Eigen::MatrixXd& x) {
    const Eigen::RowVectorXd load = x.colwise().sum();
    Eigen::MatrixXd f(x.rows(), x.cols());
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      Eigen::RowVectorXd u(x.cols());
      for (Eigen::Index r = 0; r < x.cols(); ++r)
        u(r) = 1.0 - (1.0 + load(r) - x(i, r)) / (y[static_cast<std::size_t>(r)] * n);
      const double mean = x.row(i).dot(u);
      for (Eigen::Index r = 0; r < x.cols(); ++r) f(i, r) = rate * x(i, r) * (u(r) - mean);
    }
    return f;
  };
  CongestionReplicatorTrajectory out;
  Eigen::MatrixXd x = x0;
  out.times.push_back(0.0);
  out.frustration.push_back(congestion_frustration(x, y));
  std::size_t clipped = 0;
  const auto steps = static_cast<std::size_t>(std::llround(tau_end / step));
  for (std::size_t k = 1; k <= steps; ++k) {
    detail::rk4_step(x, static_cast<double>(k - 1) * step, step, flow, clipped);
    if (k % record_stride == 0 || k == steps) {
      out.times.push_back(static_cast<double>(k) * step);
      out.frustration.push_back(congestion_frustration(x, y));
    }
  }
  return out;
}

/// Unsophisticated play: every player picks node r with probability y_r each round.
inline Trajectory random_baseline(const GameConfig& cfg, std::uint64_t seed, std::int64_t rounds) {
  cfg.validate();
  if (rounds < 1) throw ValidationError("baseline needs at least one round");
  Rng rng(seed);
  const auto& y = cfg.strengths;
  const double norm = static_cast<double>(cfg.players) * (cfg.nodes() - 1);
  Trajectory out;
  out.records.reserve(static_cast<std::size_t>(rounds));
  std::vector<int> counts(y.node_count());
  for (std::int64_t t = 1; t <= rounds; ++t) {
    std::fill(counts.begin(), counts.end(), 0);
    for (int i = 0; i < cfg.players; ++i) ++counts[sample_index(y.weights(), rng)];
    const Allocation alloc{counts, cfg.players};
    IterationRecord rec;
    rec.t = t;
    rec.frustration = squared_bet_from_counts(alloc, y) / norm;
    out.records.push_back(std::move(rec));
  }
  return out;
}

struct ConvergenceTolerances {
  double purity = 0.999;
  double relative_plateau_change = 1e-3;
};

struct ConvergenceReport {
  bool converged = false;
  double purity = 0.0;
  double plateau_R = 0.0;
};

namespace detail {
inline ConvergenceReport convergence_report(double purity_value, std::span<const double> frustration,
                                            std::size_t window, const ConvergenceTolerances& tol) {
  if (window == 0) throw ValidationError("convergence window must be positive");
  if (frustration.size() < window) throw ValidationError("trajectory shorter than convergence window");
  auto mean_of = [](std::span<const double> v) { return std::accumulate(v.begin(), v.end(), 0.0) / v.size(); };
  ConvergenceReport rep;
  rep.purity = purity_value;
  rep.plateau_R = mean_of(frustration.last(window));
  bool plateau = false;
  if (frustration.size() >= 2 * window) {
    const double previous = mean_of(frustration.subspan(frustration.size() - 2 * window, window));
    const double scale = std::max(std::abs(previous), std::abs(rep.plateau_R));
    plateau = std::abs(rep.plateau_R - previous) <= tol.relative_plateau_change * scale;
  }
  rep.converged = rep.purity >= tol.purity || plateau;
  return rep;
}
}  // namespace detail

/// Converged when every player is (nearly) pure, or when the mean of R_t over
/// the last `window` iterations moved by less than the relative tolerance
/// compared to the window before it.
inline ConvergenceReport detect_convergence(const MixedProfile& p, std::span<const double> frustration,
                                            std::size_t window, const ConvergenceTolerances& tol = {}) {
  return detail::convergence_report(purity(p), frustration, window, tol);
}

/// Same, with purity taken after merging each player's indistinguishable strategies.
inline ConvergenceReport detect_convergence(const MixedProfile& p, const StrategyMatrix& c,
                                            std::span<const double> frustration, std::size_t window,
                                            const ConvergenceTolerances& tol = {}) {
  return detail::convergence_report(effective_purity(p, c), frustration, window, tol);
}

inline ConvergenceReport detect_convergence(const LearnerState& state, const Trajectory& trajectory,
                                            std::size_t window, const ConvergenceTolerances& tol = {}) {
  const auto r = trajectory.frustrations();
  return detect_convergence(state.probabilities, r, window, tol);
}

inline ConvergenceReport detect_convergence(const LearnerState& state, const StrategyMatrix& c,
                                            const Trajectory& trajectory, std::size_t window,
                                            const ConvergenceTolerances& tol = {}) {
  const auto r = trajectory.frustrations();
  return detect_convergence(state.probabilities, c, r, window, tol);
}

}  // namespace sgame

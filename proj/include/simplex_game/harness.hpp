#pragma once

// Parameter sweeps over the training parameter, realization averaging,
// steady-state measurement and export.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <mutex>
#include <numeric>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "simplex_game/errors.hpp"
#include "simplex_game/experiment_config.hpp"
#include "simplex_game/game_core.hpp"
#include "simplex_game/learning_dynamics.hpp"
#include "simplex_game/random.hpp"
#include "simplex_game/replica_analytics.hpp"
#include "simplex_game/serialization.hpp"
#include "simplex_game/simplex_geometry.hpp"

namespace sgame {

/// Final-profile: exact frustration of the final mixed profile.
/// Windowed-trace: mean instantaneous R_t over the last `window` iterations.
inline double measure_steady_state(const LearnerState& state, const StrategyMatrix& c, const YSimplex& simplex,
                                   std::span<const double> trace, std::size_t window, MeasurementMode mode) {
  if (mode == MeasurementMode::final_profile) return frustration(c, state.probabilities, simplex);
  if (window == 0) throw ValidationError("measurement window must be positive");
  const auto tail = trace.last(std::min(window, trace.size()));
  if (tail.empty()) throw ValidationError("no iterations to measure");
  return std::accumulate(tail.begin(), tail.end(), 0.0) / static_cast<double>(tail.size());
}

struct RealizationResult {
  std::size_t point = 0;
  double lambda = 0.0;
  int signals = 0;
  int realization = 0;
  std::uint64_t seed = 0;
  double steady_R = 0.0;
  bool converged = false;
  std::int64_t iterations = 0;
};

struct PointSummary {
  double lambda = 0.0;
  int signals = 0;
  double mean_R = 0.0;
  double std_R = 0.0;  // sample standard deviation, 0 for K = 1
  double predicted_R = 0.0;
};

struct SweepResult {
  ExperimentConfig config;
  std::string config_hash;
  /// Ordered by (point, realization).
  std::vector<RealizationResult> rows;
  std::vector<PointSummary> summary;
  double wall_clock_seconds = 0.0;
};

/// Mean and sample standard deviation of the rows belonging to each point, in row order.
inline std::vector<PointSummary> summarize(const std::vector<RealizationResult>& rows, const ExperimentConfig& cfg) {
  const auto points = grid_points(cfg);
  std::vector<PointSummary> out(points.size());
  std::vector<std::vector<double>> values(points.size());
  for (const auto& r : rows) values.at(r.point).push_back(r.steady_R);
  for (std::size_t k = 0; k < points.size(); ++k) {
    const auto& v = values[k];
    auto& s = out[k];
    s.lambda = points[k].lambda;
    s.signals = points[k].signals;
    s.predicted_R = predicted_anarchy(points[k].lambda, cfg.strategies, cfg.node_count());
    if (v.empty()) continue;
    double sum = 0.0;
    for (double x : v) sum += x;
    s.mean_R = sum / static_cast<double>(v.size());
    if (v.size() > 1) {
      double ss = 0.0;
      for (double x : v) ss += (x - s.mean_R) * (x - s.mean_R);
      s.std_R = std::sqrt(ss / static_cast<double>(v.size() - 1));
    }
  }
  return out;
}

/// Worker count: SIMPLEX_GAME_THREADS if set and positive, else all cores.
inline unsigned worker_count() {
  if (const char* env = std::getenv("SIMPLEX_GAME_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1U, std::thread::hardware_concurrency());
}

/// Runs task(k) for k in [0, count) on up to `threads` workers. The first exception is rethrown.
template <class Task>
void parallel_for(std::size_t count, unsigned threads, Task&& task) {
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (threads <= 1) {
    for (std::size_t k = 0; k < count; ++k) task(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_guard;
  auto worker = [&] {
    for (std::size_t k = next++; k < count; k = next++) {
      try {
        task(k);
      } catch (...) {
        std::lock_guard lock(failure_guard);
        if (!failure) failure = std::current_exception();
        next = count;
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

/// One realization at one grid point. Fresh strengths (if configured) and a
/// fresh strategy matrix come from the child seed, then play uses the same stream.
/// Stops early once every player is pure (up to indistinguishable strategies)
/// to within the purity tolerance.
inline RealizationResult run_realization(const ExperimentConfig& cfg, std::size_t point, int realization,
                                         const ConvergenceTolerances& tol = {}) {
  const auto pts = grid_points(cfg);
  const SweepPoint& sp = pts.at(point);
  RealizationResult out;
  out.point = point;
  out.lambda = sp.lambda;
  out.signals = sp.signals;
  out.realization = realization;
  out.seed = child_seed(cfg.master_seed, static_cast<std::uint32_t>(point), static_cast<std::uint32_t>(realization));

  Rng rng(out.seed);
  GameConfig game = cfg.game(sp.signals);
  if (cfg.random_strengths) {
    game.strengths = random_proper_strengths(cfg.node_count(), rng);
    game.spectral_efficiencies.reset();
  }
  game.validate();
  const YSimplex simplex = build_simplex(game.strengths);
  const StrategyMatrix c = draw_strategy_matrix(game, rng);

  const LearningConfig lcfg = cfg.learning();
  LearnerState state = LearnerState::initial(game.players, game.strategies, lcfg.rates_for(game.players));
  std::vector<double> trace;
  trace.reserve(static_cast<std::size_t>(cfg.max_iterations));
  for (std::int64_t t = 1; t <= cfg.max_iterations; ++t) {
    trace.push_back(iterate(state, c, simplex, game, rng).frustration);
    if (t >= cfg.window && t % cfg.check_every == 0 && effective_purity(state.probabilities, c) >= tol.purity)
      break;
  }
  out.iterations = state.iteration;
  out.converged = detect_convergence(state.probabilities, c, trace, static_cast<std::size_t>(cfg.window), tol).converged;
  out.steady_R = measure_steady_state(state, c, simplex, trace, static_cast<std::size_t>(cfg.window), cfg.measurement);
  return out;
}

inline SweepResult sweep(const ExperimentConfig& cfg, unsigned threads = worker_count()) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  const auto points = grid_points(cfg);
  const std::size_t per_point = static_cast<std::size_t>(cfg.realizations);
  SweepResult out;
  out.config = cfg;
  out.config_hash = config_hash(cfg);
  out.rows.resize(points.size() * per_point);
  parallel_for(out.rows.size(), threads, [&](std::size_t slot) {
    out.rows[slot] = run_realization(cfg, slot / per_point, static_cast<int>(slot % per_point));
  });
  out.summary = summarize(out.rows, cfg);
  out.wall_clock_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

struct PointGap {
  double lambda = 0.0;
  double gap = 0.0;        // |mean_A - mean_B|
  double pooled_se = 0.0;  // sqrt(s_A^2 / K_A + s_B^2 / K_B)
};

struct PairedComparison {
  SweepResult a;
  SweepResult b;
  std::vector<PointGap> gaps;
  double max_gap = 0.0;
};

inline PairedComparison pair_sweeps(SweepResult a, SweepResult b) {
  if (a.summary.size() != b.summary.size()) throw ValidationError("paired sweeps need the same number of grid points");
  PairedComparison out;
  const double ka = a.config.realizations, kb = b.config.realizations;
  for (std::size_t k = 0; k < a.summary.size(); ++k) {
    const auto& sa = a.summary[k];
    const auto& sb = b.summary[k];
    PointGap g;
    g.lambda = sa.lambda;
    g.gap = std::abs(sa.mean_R - sb.mean_R);
    g.pooled_se = std::sqrt(sa.std_R * sa.std_R / ka + sb.std_R * sb.std_R / kb);
    out.max_gap = std::max(out.max_gap, g.gap);
    out.gaps.push_back(g);
  }
  out.a = std::move(a);
  out.b = std::move(b);
  return out;
}

/// Same sweep under two strength vectors; the shared master seed pairs the realizations.
inline PairedComparison compare_strengths(const ExperimentConfig& base, const std::vector<double>& strengths_a,
                                          const std::vector<double>& strengths_b, unsigned threads = worker_count()) {
  if (strengths_a.size() != strengths_b.size()) throw ValidationError("compared strengths need the same node count");
  ExperimentConfig a = base, b = base;
  a.strengths = strengths_a;
  b.strengths = strengths_b;
  a.spectral_efficiencies.clear();
  b.spectral_efficiencies.clear();
  a.random_strengths = b.random_strengths = false;
  a.nodes = b.nodes = static_cast<int>(strengths_a.size());
  return pair_sweeps(sweep(a, threads), sweep(b, threads));
}

/// Config of the binary reduction: two equal nodes, and each grid point's
/// realized M becomes M (B - 1).
inline ExperimentConfig reduced_config(const ExperimentConfig& cfg) {
  cfg.validate();
  const int factor = cfg.node_count() - 1;
  ExperimentConfig out = cfg;
  out.nodes = 2;
  out.strengths.clear();
  out.spectral_efficiencies.clear();
  out.random_strengths = false;
  if (out.signals) *out.signals *= factor;
  for (auto& l : out.lambda_grid) l = static_cast<double>(sweep_point(l, cfg.players).signals * factor) / cfg.players;
  return out;
}

inline PairedComparison verify_reduction(const ExperimentConfig& cfg, unsigned threads = worker_count()) {
  return pair_sweeps(sweep(cfg, threads), sweep(reduced_config(cfg), threads));
}

// ---- export ----

inline void write_sweep_csv(std::ostream& out, const SweepResult& r) {
  out << "lambda,realization,seed,steady_R,converged,iterations\n";
  for (const auto& row : r.rows)
    out << format_double(row.lambda) << ',' << row.realization << ',' << row.seed << ',' << format_double(row.steady_R)
        << ',' << (row.converged ? "true" : "false") << ',' << row.iterations << '\n';
}

inline void write_summary_csv(std::ostream& out, const SweepResult& r) {
  out << "lambda,mean_R,std_R,predicted_R\n";
  for (const auto& s : r.summary)
    out << format_double(s.lambda) << ',' << format_double(s.mean_R) << ',' << format_double(s.std_R) << ','
        << format_double(s.predicted_R) << '\n';
}

inline nlohmann::json sweep_to_json(const SweepResult& r) {
  nlohmann::json j;
  j["config"] = canonical_config(r.config);
  j["config_hash"] = r.config_hash;
  auto& rows = j["rows"] = nlohmann::json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"point", row.point},
                    {"lambda", row.lambda},
                    {"signals", row.signals},
                    {"realization", row.realization},
                    {"seed", row.seed},
                    {"steady_R", row.steady_R},
                    {"converged", row.converged},
                    {"iterations", row.iterations}});
  auto& summary = j["summary"] = nlohmann::json::array();
  for (const auto& s : r.summary)
    summary.push_back({{"lambda", s.lambda},
                       {"signals", s.signals},
                       {"mean_R", s.mean_R},
                       {"std_R", s.std_R},
                       {"predicted_R", s.predicted_R}});
  return j;
}

inline SweepResult sweep_from_json(const nlohmann::json& j) {
  try {
    SweepResult r;
    r.config = parse_config(j.at("config").get<std::string>());
    r.config_hash = j.at("config_hash").get<std::string>();
    for (const auto& row : j.at("rows")) {
      RealizationResult x;
      x.point = row.at("point").get<std::size_t>();
      x.lambda = row.at("lambda").get<double>();
      x.signals = row.at("signals").get<int>();
      x.realization = row.at("realization").get<int>();
      x.seed = row.at("seed").get<std::uint64_t>();
      x.steady_R = row.at("steady_R").get<double>();
      x.converged = row.at("converged").get<bool>();
      x.iterations = row.at("iterations").get<std::int64_t>();
      r.rows.push_back(x);
    }
    for (const auto& s : j.at("summary")) {
      PointSummary x;
      x.lambda = s.at("lambda").get<double>();
      x.signals = s.at("signals").get<int>();
      x.mean_R = s.at("mean_R").get<double>();
      x.std_R = s.at("std_R").get<double>();
      x.predicted_R = s.at("predicted_R").get<double>();
      r.summary.push_back(x);
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed sweep JSON: ") + e.what());
  }
}

struct ExportedFiles {
  std::vector<std::filesystem::path> data;
  std::filesystem::path timing;
};

/// Writes `<stem>.csv` + `<stem>_summary.csv` (csv), `<stem>.json` (json), or all
/// three, where stem is `path` without a .csv/.json extension. Wall-clock time goes
/// to `<stem>.timing.json` so the data files stay byte-stable.
inline ExportedFiles export_sweep(const SweepResult& r, std::filesystem::path path, OutputFormat format) {
  if (path.extension() == ".csv" || path.extension() == ".json") path.replace_extension();
  const auto with_suffix = [&](const std::string& suffix) { return std::filesystem::path(path.string() + suffix); };
  ExportedFiles files;
  if (format == OutputFormat::csv || format == OutputFormat::all) {
    const auto data = with_suffix(".csv"), summary = with_suffix("_summary.csv");
    auto out = open_for_write(data);
    write_sweep_csv(out, r);
    finish_write(out, data);
    auto sout = open_for_write(summary);
    write_summary_csv(sout, r);
    finish_write(sout, summary);
    files.data.push_back(data);
    files.data.push_back(summary);
  }
  if (format == OutputFormat::json || format == OutputFormat::all) {
    const auto json = with_suffix(".json");
    auto out = open_for_write(json);
    out << sweep_to_json(r).dump(1) << '\n';
    finish_write(out, json);
    files.data.push_back(json);
  }
  files.timing = with_suffix(".timing.json");
  auto tout = open_for_write(files.timing);
  tout << nlohmann::json{{"config_hash", r.config_hash}, {"wall_clock_seconds", r.wall_clock_seconds}}.dump(1) << '\n';
  finish_write(tout, files.timing);
  return files;
}

inline nlohmann::json comparison_to_json(const PairedComparison& cmp) {
  nlohmann::json j;
  j["a"] = sweep_to_json(cmp.a);
  j["b"] = sweep_to_json(cmp.b);
  auto& gaps = j["gaps"] = nlohmann::json::array();
  for (const auto& g : cmp.gaps) gaps.push_back({{"lambda", g.lambda}, {"gap", g.gap}, {"pooled_se", g.pooled_se}});
  j["max_gap"] = cmp.max_gap;
  return j;
}

}  // namespace sgame

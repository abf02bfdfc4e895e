// simplex-game: command line front end for single runs, sweeps, predictions
// and tiny-game enumeration. Exit codes: 0 ok, 1 invalid input, 2 I/O failure.

#include <algorithm>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "simplex_game.hpp"

namespace fs = std::filesystem;
using namespace sgame;

namespace {

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string format;
};

void add_common(CLI::App* cmd, Common& c, bool needs_config = true) {
  auto* opt = cmd->add_option("--config", c.config, "key=value experiment config");
  if (needs_config) opt->required();
  cmd->add_option("--seed", c.seed, "master seed (overrides the config)");
  cmd->add_option("--out", c.out, "output path");
  cmd->add_option("--format", c.format, "csv, json or all");
}

ExperimentConfig load(const Common& c) {
  ExperimentConfig cfg = load_config(c.config);
  if (c.seed) cfg.master_seed = *c.seed;
  if (!c.out.empty()) cfg.output = c.out;
  if (!c.format.empty()) cfg.format = parse_output_format(c.format);
  cfg.validate();
  return cfg;
}

/// Writes `text` to `path`, or to stdout when path is empty.
void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  auto out = open_for_write(path);
  out << text;
  finish_write(out, path);
}

std::string csv_of(const std::vector<double>& x, const std::vector<double>& y, const char* header) {
  std::string text = std::string(header) + "\n";
  for (std::size_t k = 0; k < x.size(); ++k) text += format_double(x[k]) + "," + format_double(y[k]) + "\n";
  return text;
}

// ---- run ----

struct RunArgs {
  Common common;
  std::optional<std::int64_t> iterations;
  std::string matrix_in, matrix_out, dump_simplex;
  std::string baseline_out;
  std::int64_t baseline_rounds = 10000;
  std::string replicator_out, congestion_out;
  double tau = 100.0, step = 0.05;
};

int cmd_run(const RunArgs& a) {
  ExperimentConfig cfg = load(a.common);
  if (a.iterations) cfg.max_iterations = *a.iterations;
  cfg.validate();
  const SweepPoint point = grid_points(cfg).front();
  const std::uint64_t seed = cfg.master_seed;

  Rng rng(seed);
  GameConfig game = cfg.game(point.signals);
  if (cfg.random_strengths) {
    game.strengths = random_proper_strengths(cfg.node_count(), rng);
    game.spectral_efficiencies.reset();
  }
  game.validate();
  const YSimplex simplex = build_simplex(game.strengths);
  // Always draw so play uses the same stream whether or not a matrix is loaded.
  StrategyMatrix c = draw_strategy_matrix(game, rng);
  if (!a.matrix_in.empty()) {
    c = load_strategy_matrix(a.matrix_in);
    game.signals = c.signals();
    c.check_matches(game);
  }
  if (!a.matrix_out.empty()) save_strategy_matrix(c, a.matrix_out);
  if (!a.dump_simplex.empty()) emit(a.dump_simplex, simplex_to_json(simplex).dump(1) + "\n");

  LearningConfig lcfg = cfg.learning();
  if (lcfg.snapshot_stride == 0) lcfg.snapshot_stride = cfg.check_every;
  const RunResult r = run(c, simplex, game, lcfg, rng);
  const auto trace = r.trajectory.frustrations();
  const auto window = static_cast<std::size_t>(cfg.window);
  const ConvergenceReport conv = detect_convergence(r.state, c, r.trajectory, window);
  const double final_R = measure_steady_state(r.state, c, simplex, trace, window, MeasurementMode::final_profile);
  const std::size_t head = std::min<std::size_t>(10, trace.size());
  const double first_R = std::accumulate(trace.begin(), trace.begin() + static_cast<long>(head), 0.0) / head;

  const fs::path out = cfg.output.empty() ? fs::path("trajectory.csv") : fs::path(cfg.output);
  if (cfg.format == OutputFormat::json) {
    nlohmann::json j;
    j["config"] = canonical_config(cfg);
    j["config_hash"] = config_hash(cfg);
    j["seed"] = seed;
    auto& recs = j["records"] = nlohmann::json::array();
    for (const auto& rec : r.trajectory.records) {
      nlohmann::json x{{"t", rec.t}, {"m", rec.signal}, {"R_t", rec.frustration}};
      if (rec.purity) x["purity"] = *rec.purity;
      recs.push_back(std::move(x));
    }
    j["final_profile_R"] = final_R;
    j["plateau_R"] = conv.plateau_R;
    j["converged"] = conv.converged;
    emit(out.string(), j.dump(1) + "\n");
  } else {
    auto f = open_for_write(out);
    write_trajectory_csv(f, r.trajectory);
    finish_write(f, out);
  }

  if (!a.baseline_out.empty()) {
    const Trajectory base = random_baseline(game, mix64(seed), a.baseline_rounds);
    auto f = open_for_write(a.baseline_out);
    write_trajectory_csv(f, base);
    finish_write(f, a.baseline_out);
  }

  const auto steps = static_cast<std::size_t>(std::max(1.0, a.tau / a.step));
  const std::size_t stride = std::max<std::size_t>(1, steps / 1000);
  if (!a.replicator_out.empty()) {
    const auto rates = lcfg.rates_for(game.players);
    const auto rep = integrate_replicator(c, MixedProfile::uniform(game.players, game.strategies), simplex, rates,
                                          a.tau, a.step, stride);
    std::vector<double> rs;
    for (const auto& p : rep.profiles) rs.push_back(frustration(c, p, simplex));
    emit(a.replicator_out, csv_of(rep.times, rs, "tau,R"));
  }
  if (!a.congestion_out.empty()) {
    Rng xrng(mix64(seed ^ 0xC0C0C0C0ULL));
    Eigen::MatrixXd x0(game.players, static_cast<Eigen::Index>(game.nodes()));
    for (Eigen::Index i = 0; i < x0.rows(); ++i) {
      for (Eigen::Index k = 0; k < x0.cols(); ++k) x0(i, k) = 0.5 + uniform01(xrng);
      x0.row(i) /= x0.row(i).sum();
    }
    const auto cg = integrate_congestion_replicator(game.strengths, x0, cfg.learning_rate, a.tau, a.step, stride);
    emit(a.congestion_out, csv_of(cg.times, cg.frustration, "tau,R"));
  }

  std::cout << "lambda=" << format_double(static_cast<double>(c.signals()) / c.players())
            << " first10_R=" << format_double(first_R) << " plateau_R=" << format_double(conv.plateau_R)
            << " final_profile_R=" << format_double(final_R) << " purity=" << format_double(conv.purity)
            << " converged=" << (conv.converged ? "true" : "false") << "\n";
  return 0;
}

// ---- sweep and paired sweeps ----

void report_files(const ExportedFiles& files) {
  for (const auto& p : files.data) std::cout << "wrote " << p.string() << "\n";
}

int cmd_sweep(const Common& c) {
  const ExperimentConfig cfg = load(c);
  const SweepResult r = sweep(cfg);
  report_files(export_sweep(r, cfg.output.empty() ? "sweep" : cfg.output, cfg.format));
  for (const auto& s : r.summary)
    std::cout << "lambda=" << format_double(s.lambda) << " mean_R=" << format_double(s.mean_R)
              << " std_R=" << format_double(s.std_R) << " predicted_R=" << format_double(s.predicted_R) << "\n";
  return 0;
}

int write_comparison(const PairedComparison& cmp, const ExperimentConfig& cfg, const std::string& fallback) {
  const fs::path out = cfg.output.empty() ? fs::path(fallback) : fs::path(cfg.output);
  if (cfg.format == OutputFormat::json || cfg.format == OutputFormat::all) {
    fs::path p = out;
    p.replace_extension(".json");
    emit(p.string(), comparison_to_json(cmp).dump(1) + "\n");
    std::cout << "wrote " << p.string() << "\n";
  }
  if (cfg.format == OutputFormat::csv || cfg.format == OutputFormat::all) {
    fs::path p = out;
    p.replace_extension(".csv");
    std::string text = "lambda,mean_A,mean_B,gap,pooled_se\n";
    for (std::size_t k = 0; k < cmp.gaps.size(); ++k)
      text += format_double(cmp.gaps[k].lambda) + "," + format_double(cmp.a.summary[k].mean_R) + "," +
              format_double(cmp.b.summary[k].mean_R) + "," + format_double(cmp.gaps[k].gap) + "," +
              format_double(cmp.gaps[k].pooled_se) + "\n";
    emit(p.string(), text);
    std::cout << "wrote " << p.string() << "\n";
  }
  for (const auto& g : cmp.gaps)
    std::cout << "lambda=" << format_double(g.lambda) << " gap=" << format_double(g.gap)
              << " pooled_se=" << format_double(g.pooled_se) << "\n";
  return 0;
}

int cmd_compare(const Common& c, const std::string& alt) {
  const ExperimentConfig cfg = load(c);
  const auto base = cfg.strength_distribution().weights();
  const std::vector<double> a(base.begin(), base.end());
  const std::vector<double> b = detail::parse_list("alt-strengths", alt);
  return write_comparison(compare_strengths(cfg, a, b), cfg, "compare");
}

int cmd_reduction(const Common& c) {
  const ExperimentConfig cfg = load(c);
  return write_comparison(verify_reduction(cfg), cfg, "reduction");
}

// ---- predict, oracle, zeta ----

int cmd_predict(int strategies, int nodes, const std::string& grid, const std::string& out) {
  const auto lambdas = parse_lambda_grid(grid);
  std::string text = "lambda,predicted_R\n";
  for (double l : lambdas) text += format_double(l) + "," + format_double(predicted_anarchy(l, strategies, nodes)) + "\n";
  emit(out, text);
  return 0;
}

struct OracleArgs {
  int players = 3, strategies = 2, signals = 2, nodes = 2;
  std::uint64_t seed = 0;
  std::string strengths;
  std::uint64_t budget = kDefaultProfileBudget;
  std::string out;
};

int cmd_oracle(const OracleArgs& a) {
  GameConfig cfg;
  cfg.players = a.players;
  cfg.strategies = a.strategies;
  cfg.signals = a.signals;
  cfg.strengths = a.strengths.empty() ? StrengthDistribution::uniform(static_cast<std::size_t>(a.nodes))
                                      : StrengthDistribution::from_weights(detail::parse_list("strengths", a.strengths));
  if (static_cast<int>(cfg.strengths.node_count()) != a.nodes)
    throw ValidationError("--strengths length does not match --B");
  cfg.validate();
  Rng rng(a.seed);
  const StrategyMatrix c = draw_strategy_matrix(cfg, rng);
  const YSimplex s = build_simplex(cfg.strengths);
  const EquilibriumSet eq = enumerate_equilibria(c, s, a.budget);
  const PotentialReport pot = verify_potential_maximizers(c, s, a.budget);

  nlohmann::json j;
  j["players"] = a.players;
  j["strategies"] = a.strategies;
  j["signals"] = a.signals;
  j["nodes"] = a.nodes;
  j["seed"] = a.seed;
  j["strategy_matrix"] = strategy_matrix_to_json(c);
  auto& list = j["equilibria"] = nlohmann::json::array();
  for (const auto& p : eq.profiles) list.push_back({{"choices", p.choices}, {"frustration", p.frustration}});
  j["min_R"] = eq.min_R ? nlohmann::json(*eq.min_R) : nlohmann::json(nullptr);
  j["profiles_visited"] = eq.profiles_visited;
  j["max_evaluator_gap"] = eq.max_evaluator_gap;
  auto& mx = j["maximizers"] = nlohmann::json::array();
  for (const auto& m : pot.maximizers)
    mx.push_back({{"choices", m.choices},
                  {"aggregate_payoff", m.aggregate_payoff},
                  {"frustration", m.frustration},
                  {"is_equilibrium", m.is_equilibrium},
                  {"worst_violation", m.worst_violation}});
  j["max_aggregate_payoff"] = pot.max_aggregate_payoff;
  j["correction_bound"] = pot.correction_bound;
  emit(a.out, j.dump(1) + "\n");
  return 0;
}

int cmd_zeta(int strategies, const std::string& method, std::uint64_t samples, std::uint64_t seed,
             std::optional<int> nodes) {
  ZetaMethod m;
  if (method == "quadrature") m = ZetaMethod::quadrature;
  else if (method == "monte-carlo") m = ZetaMethod::monte_carlo;
  else throw ValidationError("unknown zeta method '" + method + "' (expected quadrature or monte-carlo)");
  const ZetaEstimate z = zeta(strategies, m, samples, seed);
  std::cout << "zeta=" << format_double(z.value) << " standard_error=" << format_double(z.standard_error);
  if (nodes) std::cout << " lambda_c=" << format_double(lambda_c(strategies, *nodes));
  std::cout << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simplex game simulator"};
  app.require_subcommand(1);

  RunArgs run_args;
  auto* run_cmd = app.add_subcommand("run", "single learning trajectory");
  add_common(run_cmd, run_args.common);
  run_cmd->add_option("--iterations", run_args.iterations, "iterations (default: max_iterations)");
  run_cmd->add_option("--matrix-in", run_args.matrix_in, "load the strategy matrix (.json or binary)");
  run_cmd->add_option("--matrix-out", run_args.matrix_out, "save the strategy matrix (.json or binary)");
  run_cmd->add_option("--dump-simplex", run_args.dump_simplex, "write simplex vertices and diagnostics as JSON");
  run_cmd->add_option("--baseline-out", run_args.baseline_out, "random-choice baseline trajectory CSV");
  run_cmd->add_option("--baseline-rounds", run_args.baseline_rounds, "baseline rounds");
  run_cmd->add_option("--replicator-out", run_args.replicator_out, "replicator flow R(tau) CSV");
  run_cmd->add_option("--congestion-out", run_args.congestion_out, "congestion-game replicator R(tau) CSV");
  run_cmd->add_option("--tau", run_args.tau, "replicator horizon");
  run_cmd->add_option("--step", run_args.step, "replicator step");

  Common sweep_args;
  auto* sweep_cmd = app.add_subcommand("sweep", "lambda sweep with realization averaging");
  add_common(sweep_cmd, sweep_args);

  int pred_s = 2, pred_b = 2;
  std::string pred_grid, pred_out;
  auto* predict_cmd = app.add_subcommand("predict", "analytic anarchy curve");
  predict_cmd->add_option("--S", pred_s, "strategies per player")->required();
  predict_cmd->add_option("--B", pred_b, "nodes")->required();
  predict_cmd->add_option("--lambda-grid", pred_grid, "start:stop:count or comma list")->required();
  predict_cmd->add_option("--out", pred_out, "CSV path (default stdout)");

  OracleArgs oracle_args;
  auto* oracle_cmd = app.add_subcommand("oracle", "enumerate pure equilibria of a tiny game");
  oracle_cmd->add_option("--N", oracle_args.players, "players")->required();
  oracle_cmd->add_option("--S", oracle_args.strategies, "strategies")->required();
  oracle_cmd->add_option("--M", oracle_args.signals, "signals")->required();
  oracle_cmd->add_option("--B", oracle_args.nodes, "nodes")->required();
  oracle_cmd->add_option("--seed", oracle_args.seed, "strategy matrix seed");
  oracle_cmd->add_option("--strengths", oracle_args.strengths, "comma-separated strengths (default uniform)");
  oracle_cmd->add_option("--budget", oracle_args.budget, "maximum number of profiles");
  oracle_cmd->add_option("--out", oracle_args.out, "JSON path (default stdout)");

  Common compare_args;
  std::string alt;
  auto* compare_cmd = app.add_subcommand("compare-strengths", "paired sweeps under two strength vectors");
  add_common(compare_cmd, compare_args);
  compare_cmd->add_option("--alt-strengths", alt, "comma-separated alternative strengths")->required();

  Common reduction_args;
  auto* reduction_cmd = app.add_subcommand("verify-reduction", "paired sweeps of a game and its binary reduction");
  add_common(reduction_cmd, reduction_args);

  int zeta_s = 2;
  std::string zeta_method = "quadrature";
  std::uint64_t zeta_samples = 1'000'000, zeta_seed = 0;
  std::optional<int> zeta_b;
  auto* zeta_cmd = app.add_subcommand("zeta", "expected minimum of S standard normals");
  zeta_cmd->add_option("--S", zeta_s, "strategies")->required();
  zeta_cmd->add_option("--method", zeta_method, "quadrature or monte-carlo");
  zeta_cmd->add_option("--samples", zeta_samples, "Monte-Carlo samples");
  zeta_cmd->add_option("--seed", zeta_seed, "Monte-Carlo seed");
  zeta_cmd->add_option("--B", zeta_b, "also print lambda_c for this node count");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return 1;
  }

  try {
    if (*run_cmd) return cmd_run(run_args);
    if (*sweep_cmd) return cmd_sweep(sweep_args);
    if (*predict_cmd) return cmd_predict(pred_s, pred_b, pred_grid, pred_out);
    if (*oracle_cmd) return cmd_oracle(oracle_args);
    if (*compare_cmd) return cmd_compare(compare_args, alt);
    if (*reduction_cmd) return cmd_reduction(reduction_args);
    if (*zeta_cmd) return cmd_zeta(zeta_s, zeta_method, zeta_samples, zeta_seed, zeta_b);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <unistd.h>

#include <gtest/gtest.h>

#include "test_support.hpp"

using namespace sgame;
using namespace testing_support;

namespace {

std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("simplex_game_" + name + "_" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ExperimentConfig small_sweep() {
  return parse_config(
      "players = 16\nnodes = 3\nlambda_grid = 0.25,1\nrealizations = 3\nmax_iterations = 600\nwindow = 100\n"
      "check_every = 50\nseed = 5\n");
}

}  // namespace

TEST(Sweep, SinglePointSingleRealization) {
  const auto r = sweep(parse_config("players = 10\nsignals = 4\nmax_iterations = 300\nseed = 2"), 1);
  ASSERT_EQ(r.rows.size(), 1u);
  ASSERT_EQ(r.summary.size(), 1u);
  EXPECT_EQ(r.summary[0].std_R, 0.0);
  EXPECT_EQ(r.summary[0].mean_R, r.rows[0].steady_R);
  EXPECT_EQ(r.rows[0].seed, child_seed(2, 0, 0));
  EXPECT_LE(r.rows[0].iterations, 300);
  EXPECT_DOUBLE_EQ(r.rows[0].lambda, 0.4);
  EXPECT_EQ(r.config_hash, config_hash(r.config));
}

TEST(Sweep, RowsAreOrderedAndSummaryRecomputes) {
  const auto r = sweep(small_sweep(), 2);
  ASSERT_EQ(r.rows.size(), 6u);
  for (std::size_t k = 0; k < r.rows.size(); ++k) {
    EXPECT_EQ(r.rows[k].point, k / 3);
    EXPECT_EQ(r.rows[k].realization, static_cast<int>(k % 3));
    EXPECT_GE(r.rows[k].steady_R, 0.0);
  }
  const auto again = summarize(r.rows, r.config);
  for (std::size_t k = 0; k < again.size(); ++k) {
    double m = 0, ss = 0;
    for (int j = 0; j < 3; ++j) m += r.rows[k * 3 + j].steady_R / 3;
    for (int j = 0; j < 3; ++j) ss += std::pow(r.rows[k * 3 + j].steady_R - m, 2);
    EXPECT_NEAR(r.summary[k].mean_R, m, 1e-15);
    EXPECT_NEAR(r.summary[k].std_R, std::sqrt(ss / 2), 1e-15);
    EXPECT_EQ(again[k].mean_R, r.summary[k].mean_R);
    EXPECT_EQ(again[k].predicted_R, predicted_anarchy(r.summary[k].lambda, 2, 3));
  }
}

TEST(Sweep, JsonRoundTripIsExact) {
  const auto r = sweep(small_sweep(), 1);
  const auto back = sweep_from_json(nlohmann::json::parse(sweep_to_json(r).dump()));
  EXPECT_EQ(back.config_hash, r.config_hash);
  EXPECT_EQ(canonical_config(back.config), canonical_config(r.config));
  ASSERT_EQ(back.rows.size(), r.rows.size());
  for (std::size_t k = 0; k < r.rows.size(); ++k) {
    EXPECT_EQ(back.rows[k].steady_R, r.rows[k].steady_R);
    EXPECT_EQ(back.rows[k].seed, r.rows[k].seed);
    EXPECT_EQ(back.rows[k].converged, r.rows[k].converged);
    EXPECT_EQ(back.rows[k].iterations, r.rows[k].iterations);
  }
  for (std::size_t k = 0; k < r.summary.size(); ++k) {
    EXPECT_EQ(back.summary[k].mean_R, r.summary[k].mean_R);
    EXPECT_EQ(back.summary[k].std_R, r.summary[k].std_R);
  }
  EXPECT_THROW(sweep_from_json(nlohmann::json{{"rows", 1}}), ValidationError);
}

TEST(Sweep, IndependentOfThreadCount) {
  const auto cfg = small_sweep();
  const auto one = sweep(cfg, 1);
  const auto four = sweep(cfg, 4);
  std::ostringstream a, b;
  write_sweep_csv(a, one);
  write_sweep_csv(b, four);
  EXPECT_EQ(a.str(), b.str());
}

TEST(Sweep, RandomStrengthsDifferPerRealization) {
  auto cfg = small_sweep();
  const auto fixed = sweep(cfg, 1);
  cfg.random_strengths = true;
  const auto drawn = sweep(cfg, 1);
  int differing = 0;
  for (std::size_t k = 0; k < fixed.rows.size(); ++k) differing += fixed.rows[k].steady_R != drawn.rows[k].steady_R;
  EXPECT_GT(differing, 0);
}

TEST(CompareStrengths, IdenticalStrengthsGiveZeroGap) {
  const auto cmp = compare_strengths(small_sweep(), {1, 2, 3}, {2, 4, 6}, 1);
  ASSERT_EQ(cmp.gaps.size(), 2u);
  for (const auto& g : cmp.gaps) EXPECT_EQ(g.gap, 0.0);
  EXPECT_EQ(cmp.max_gap, 0.0);
  EXPECT_THROW(compare_strengths(small_sweep(), {1, 2}, {1, 2, 3}, 1), ValidationError);
}

TEST(Reduction, MapsGridToRealizedSignals) {
  auto cfg = parse_config("players = 20\nnodes = 5\nlambda_grid = 0.1,0.33");
  const auto red = reduced_config(cfg);
  EXPECT_EQ(red.node_count(), 2);
  const auto pts = grid_points(red);
  EXPECT_EQ(pts[0].signals, 8);   // M = 2 -> 8
  EXPECT_EQ(pts[1].signals, 28);  // M = 7 -> 28
  cfg.lambda_grid.clear();
  cfg.signals = 3;
  EXPECT_EQ(*reduced_config(cfg).signals, 12);
}

TEST(Reduction, BinaryConfigIsItsOwnReduction) {
  auto cfg = small_sweep();
  cfg.nodes = 2;
  const auto cmp = verify_reduction(cfg, 1);
  for (const auto& g : cmp.gaps) EXPECT_EQ(g.gap, 0.0);
}

TEST(SteadyState, ZeroFrustrationProfile) {
  StrategyMatrix c(2, 1, 1, 2);
  c.set(1, 0, 0, 1);
  const auto s = build_simplex(StrengthDistribution::uniform(2));
  const auto state = LearnerState::initial(2, 1, {1.0, 1.0});
  const std::vector<double> trace(50, 0.0);
  EXPECT_NEAR(measure_steady_state(state, c, s, trace, 20, MeasurementMode::final_profile), 0.0, 1e-15);
  EXPECT_EQ(measure_steady_state(state, c, s, trace, 20, MeasurementMode::windowed_trace), 0.0);
  EXPECT_THROW(measure_steady_state(state, c, s, {}, 20, MeasurementMode::windowed_trace), ValidationError);
}

TEST(SteadyState, ModesAgreeForFrozenPlay) {
  GameConfig cfg;
  cfg.players = 50;
  cfg.signals = 50;
  cfg.strategies = 2;
  Rng rng(15);
  const auto s = build_simplex(cfg.strengths);
  const auto c = draw_strategy_matrix(cfg, rng);
  auto state = LearnerState::initial(50, 2, std::vector<double>(50, 0.0));
  std::vector<double> trace;
  for (int t = 0; t < 4000; ++t) trace.push_back(iterate(state, c, s, cfg, rng).frustration);
  const double exact = measure_steady_state(state, c, s, trace, 4000, MeasurementMode::final_profile);
  EXPECT_EQ(exact, frustration(c, MixedProfile::uniform(50, 2), s));
  EXPECT_NEAR(measure_steady_state(state, c, s, trace, 4000, MeasurementMode::windowed_trace), exact, 0.08);
}

TEST(SteadyState, ModesAgreeAfterLearning) {
  auto cfg = parse_config(
      "players = 50\nnodes = 5\nrandom_strengths = true\nsignals = 2\nmax_iterations = 3000\nrealizations = 4\nseed = 8");
  const auto final_mode = sweep(cfg, 1);
  cfg.measurement = MeasurementMode::windowed_trace;
  const auto windowed = sweep(cfg, 1);
  EXPECT_NEAR(final_mode.summary[0].mean_R, windowed.summary[0].mean_R, 0.05);
}

TEST(Seeds, ChildSeedsDoNotCollide) {
  std::set<std::uint64_t> seen;
  for (std::uint32_t p = 0; p < 200; ++p)
    for (std::uint32_t k = 0; k < 1000; ++k) seen.insert(child_seed(20240611, p, k));
  EXPECT_EQ(seen.size(), 200000u);
  EXPECT_NE(child_seed(1, 0, 0), child_seed(2, 0, 0));
}

TEST(Workers, EnvironmentOverride) {
  ::setenv("SIMPLEX_GAME_THREADS", "3", 1);
  EXPECT_EQ(worker_count(), 3u);
  ::setenv("SIMPLEX_GAME_THREADS", "zero", 1);
  EXPECT_GE(worker_count(), 1u);
  ::unsetenv("SIMPLEX_GAME_THREADS");

  std::vector<int> hits(100, 0);
  parallel_for(hits.size(), 4, [&](std::size_t k) { hits[k] += 1; });
  for (int h : hits) EXPECT_EQ(h, 1);
  EXPECT_THROW(parallel_for(10, 3,
                            [](std::size_t k) {
                              if (k == 7) throw std::runtime_error("boom");
                            }),
               std::runtime_error);
}

TEST(Export, WritesRequestedFiles) {
  const auto dir = scratch_dir("export");
  const auto r = sweep(small_sweep(), 1);
  const auto files = export_sweep(r, dir / "sweep.csv", OutputFormat::all);
  ASSERT_EQ(files.data.size(), 3u);
  EXPECT_EQ(files.data[0], dir / "sweep.csv");
  EXPECT_EQ(files.data[1], dir / "sweep_summary.csv");
  EXPECT_EQ(files.data[2], dir / "sweep.json");
  EXPECT_EQ(files.timing, dir / "sweep.timing.json");

  std::istringstream data(slurp(files.data[0]));
  std::string line;
  std::getline(data, line);
  EXPECT_EQ(line, "lambda,realization,seed,steady_R,converged,iterations");
  int rows = 0;
  while (std::getline(data, line)) {
    ++rows;
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 5);
  }
  EXPECT_EQ(rows, 6);
  EXPECT_EQ(slurp(files.data[1]).substr(0, 31), "lambda,mean_R,std_R,predicted_R");

  const auto again = export_sweep(sweep(small_sweep(), 3), dir / "other", OutputFormat::csv);
  EXPECT_EQ(slurp(again.data[0]), slurp(files.data[0]));
  EXPECT_EQ(nlohmann::json::parse(slurp(files.timing)).at("config_hash"), r.config_hash);
  std::filesystem::remove_all(dir);
}

TEST(Export, UnwritablePathIsIoError) {
  const auto r = sweep(parse_config("players = 4\nsignals = 1\nmax_iterations = 200"), 1);
  EXPECT_THROW(export_sweep(r, "/nonexistent-dir/sub/out", OutputFormat::csv), IoError);
}

TEST(SelfAveraging, SpreadShrinksWithPlayers) {
  const auto spread = [](int n) {
    auto cfg = parse_config("lambda_grid = 1\nrealizations = 12\nmax_iterations = 3000\nseed = 31");
    cfg.players = n;
    return sweep(cfg, 1).summary[0].std_R;
  };
  EXPECT_LT(spread(80), spread(20));
}

TEST(Orderings, MoreNodesMoreFrustrationMoreStrategiesLess) {
  auto cfg = parse_config("players = 30\nlambda_grid = 1\nrealizations = 6\nmax_iterations = 4000\nseed = 13");
  const double b2 = sweep(cfg, 1).summary[0].mean_R;
  cfg.nodes = 5;
  const double b5 = sweep(cfg, 1).summary[0].mean_R;
  cfg.strategies = 4;
  const double b5s4 = sweep(cfg, 1).summary[0].mean_R;
  EXPECT_LT(b2, b5);
  EXPECT_LT(b5s4, b5);
}

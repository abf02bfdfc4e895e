#include <string>

#include <gtest/gtest.h>

#include "simplex_game.hpp"

using namespace sgame;

TEST(ConfigParse, KeysCommentsAndDefaults) {
  const auto cfg = parse_config(R"(
# node strengths from a cell plan
players = 40
strengths = 1, 2, 3   # trailing comment
strategies=3
lambda_grid = 0.5,1,2
learning_rate = 5
max_iterations = 10000
realizations = 4
seed = 18446744073709551615
measurement = windowed-trace
payoff_mode = nonlinear
format = all
output = out/run
)");
  EXPECT_EQ(cfg.players, 40);
  EXPECT_EQ(cfg.node_count(), 3);
  EXPECT_EQ(cfg.strategies, 3);
  EXPECT_EQ(cfg.lambda_grid, (std::vector<double>{0.5, 1, 2}));
  EXPECT_EQ(cfg.learning_rate, 5.0);
  EXPECT_EQ(cfg.max_iterations, 10000);
  EXPECT_EQ(cfg.realizations, 4);
  EXPECT_EQ(cfg.master_seed, 18446744073709551615ULL);
  EXPECT_EQ(cfg.measurement, MeasurementMode::windowed_trace);
  EXPECT_EQ(cfg.payoff_mode, PayoffMode::nonlinear);
  EXPECT_EQ(cfg.format, OutputFormat::all);
  EXPECT_EQ(cfg.output, "out/run");
  EXPECT_NEAR(cfg.strength_distribution()[2], 0.5, 1e-15);
  EXPECT_EQ(cfg.window, 200);
  EXPECT_EQ(cfg.check_every, 100);
}

TEST(ConfigParse, ErrorsNameTheLine) {
  try {
    parse_config("players = 10\nbogus = 3\n");
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("bogus"), std::string::npos);
  }
  EXPECT_THROW(parse_config("players 10"), ValidationError);
  EXPECT_THROW(parse_config("players = ten"), ValidationError);
  EXPECT_THROW(parse_config("players = 10.5"), ValidationError);
  EXPECT_THROW(parse_config("seed = -1"), ValidationError);
  EXPECT_THROW(parse_config("random_strengths = maybe"), ValidationError);
  EXPECT_THROW(parse_config("measurement = average"), ValidationError);
  EXPECT_THROW(load_config("/nonexistent/dir/x.cfg"), IoError);
}

TEST(ConfigParse, LambdaGridRange) {
  const auto g = parse_lambda_grid("0.1:1.1:6");
  ASSERT_EQ(g.size(), 6u);
  EXPECT_DOUBLE_EQ(g.front(), 0.1);
  EXPECT_DOUBLE_EQ(g.back(), 1.1);
  EXPECT_NEAR(g[1], 0.3, 1e-15);
  EXPECT_EQ(parse_lambda_grid("2:3:1"), std::vector<double>{2});
  EXPECT_THROW(parse_lambda_grid("1:2"), ValidationError);
  EXPECT_THROW(parse_lambda_grid("1:2:0"), ValidationError);
}

TEST(ConfigValidate, Invariants) {
  EXPECT_THROW(parse_config("players = 0"), ValidationError);
  EXPECT_THROW(parse_config("nodes = 1"), ValidationError);
  EXPECT_THROW(parse_config("nodes = 256"), ValidationError);
  EXPECT_THROW(parse_config("strategies = 0"), ValidationError);
  EXPECT_THROW(parse_config("signals = 0"), ValidationError);
  EXPECT_THROW(parse_config("realizations = 0"), ValidationError);
  EXPECT_THROW(parse_config("learning_rate = -1"), ValidationError);
  EXPECT_THROW(parse_config("window = 300\nmax_iterations = 200"), ValidationError);
  EXPECT_THROW(parse_config("check_every = 0"), ValidationError);
  EXPECT_THROW(parse_config("lambda_grid = 0.5,-1"), ValidationError);
  EXPECT_THROW(parse_config("players = 10\nlambda_grid = 0.01"), ValidationError);
  EXPECT_THROW(parse_config("strengths = 1,2\nspectral_efficiencies = 1,2"), ValidationError);
  EXPECT_THROW(parse_config("strengths = 1,0"), ValidationError);
  EXPECT_THROW(parse_config("strengths = 1"), ValidationError);
  EXPECT_NO_THROW(parse_config("learning_rate = 0"));
}

TEST(SweepPoints, RoundSignalsAndReportRealizedLambda) {
  const auto p = sweep_point(0.26, 50);
  EXPECT_EQ(p.signals, 13);
  EXPECT_DOUBLE_EQ(p.lambda, 0.26);
  const auto q = sweep_point(0.31, 50);
  EXPECT_EQ(q.signals, 16);
  EXPECT_DOUBLE_EQ(q.lambda, 0.32);
  EXPECT_EQ(sweep_point(0.001, 50).signals, 1);

  auto cfg = parse_config("players = 20\nsignals = 7");
  const auto single = grid_points(cfg);
  ASSERT_EQ(single.size(), 1u);
  EXPECT_EQ(single[0].signals, 7);
  EXPECT_DOUBLE_EQ(single[0].lambda, 0.35);
  cfg.signals.reset();
  EXPECT_THROW(grid_points(cfg), ValidationError);
}

TEST(ConfigHash, ChangesExactlyWithSemanticFields) {
  const auto base = parse_config("players = 30\nlambda_grid = 0.5,1\nrealizations = 3");
  const auto h = config_hash(base);
  EXPECT_EQ(h.size(), 16u);
  EXPECT_EQ(h, config_hash(parse_config("realizations=3\n# same thing\nlambda_grid=0.5, 1\nplayers=30\n")));

  auto cosmetic = base;
  cosmetic.output = "elsewhere";
  cosmetic.format = OutputFormat::json;
  EXPECT_EQ(config_hash(cosmetic), h);

  for (const char* extra : {"seed = 1", "learning_rate = 19", "max_iterations = 5001", "strategies = 3",
                            "measurement = windowed-trace", "payoff_mode = nonlinear", "random_strengths = true",
                            "window = 100", "check_every = 50", "nodes = 3", "strengths = 1,2",
                            "snapshot_stride = 10", "realizations = 4", "players = 31"}) {
    const auto changed = parse_config(canonical_config(base) + extra + "\n");
    EXPECT_NE(config_hash(changed), h) << extra;
  }
}

TEST(ConfigHash, CanonicalTextRoundTrips) {
  const auto cfg = parse_config(
      "players = 12\nspectral_efficiencies = 1.06, 3.91, 11, 14.1\nlambda_grid = 0.1:2:5\nseed = 9\nsignals = 3\n"
      "learning_rate = 0.30000000000000004");
  const auto text = canonical_config(cfg);
  const auto back = parse_config(text);
  EXPECT_EQ(canonical_config(back), text);
  EXPECT_EQ(back.lambda_grid, cfg.lambda_grid);
  EXPECT_EQ(back.learning_rate, cfg.learning_rate);
  EXPECT_EQ(back.strength_distribution(), cfg.strength_distribution());
}

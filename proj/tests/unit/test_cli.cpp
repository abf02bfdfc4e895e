#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <sys/wait.h>
#include <unistd.h>

#include "simplex_game.hpp"

using namespace sgame;

namespace {

struct Outcome {
  int status;
  std::string out;
};

Outcome run_cli(const std::string& args) {
  const char* exe = std::getenv("SIMPLEX_GAME_CLI");
  if (!exe) return {-1, "SIMPLEX_GAME_CLI not set"};
  const std::string cmd = std::string(exe) + " " + args + " 2>/dev/null";
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) return {-1, ""};
  std::string out;
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
  const int raw = ::pclose(pipe);
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, out};
}

class Cli : public ::testing::Test {
protected:
  void SetUp() override {
    if (!std::getenv("SIMPLEX_GAME_CLI")) GTEST_SKIP() << "SIMPLEX_GAME_CLI not set";
    dir_ = std::filesystem::temp_directory_path() / ("simplex_game_cli_" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir_);
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(path(name)) << text;
    return path(name);
  }

  static std::string slurp(const std::string& p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  std::filesystem::path dir_;
};

}  // namespace

TEST_F(Cli, RunWritesTrajectoryAndSummary) {
  const auto cfg = write("a.cfg", "players = 20\nsignals = 4\nmax_iterations = 300\n");
  const auto res = run_cli("run --config " + cfg + " --seed 3 --out " + path("traj.csv") + " --matrix-out " +
                           path("m.bin") + " --dump-simplex " + path("s.json"));
  ASSERT_EQ(res.status, 0) << res.out;
  EXPECT_NE(res.out.find("lambda=0.20000000000000001 "), std::string::npos);
  EXPECT_NE(res.out.find("final_profile_R="), std::string::npos);
  const auto traj = slurp(path("traj.csv"));
  EXPECT_EQ(traj.substr(0, 15), "t,m,R_t,purity\n");
  EXPECT_EQ(std::count(traj.begin(), traj.end(), '\n'), 301);
  const auto c = load_strategy_matrix(path("m.bin"));
  EXPECT_EQ(c.players(), 20);
  EXPECT_EQ(c.signals(), 4);

  // Replaying the saved matrix reproduces the run.
  const auto again = run_cli("run --config " + cfg + " --seed 3 --out " + path("traj2.csv") + " --matrix-in " +
                             path("m.bin"));
  ASSERT_EQ(again.status, 0);
  EXPECT_EQ(slurp(path("traj2.csv")), traj);
}

TEST_F(Cli, PredictPrintsTheCurve) {
  const auto res = run_cli("predict --S 2 --B 2 --lambda-grid 0:5:51");
  ASSERT_EQ(res.status, 1);  // lambda = 0 is rejected
  const auto ok = run_cli("predict --S 2 --B 2 --lambda-grid 0.1:5:50");
  ASSERT_EQ(ok.status, 0);
  std::istringstream in(ok.out);
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) {
    if (lines++ == 0) {
      EXPECT_EQ(line, "lambda,predicted_R");
      continue;
    }
    const auto comma = line.find(',');
    const double l = std::stod(line.substr(0, comma));
    EXPECT_EQ(std::stod(line.substr(comma + 1)), predicted_anarchy(l, 2, 2));
  }
  EXPECT_EQ(lines, 51);
}

TEST_F(Cli, OracleMatchesLibrary) {
  const auto res = run_cli("oracle --N 3 --S 2 --M 2 --B 2 --seed 9 --out " + path("o.json"));
  ASSERT_EQ(res.status, 0);
  const auto j = nlohmann::json::parse(slurp(path("o.json")));
  GameConfig cfg;
  cfg.players = 3;
  cfg.strategies = 2;
  cfg.signals = 2;
  Rng rng(9);
  const auto c = draw_strategy_matrix(cfg, rng);
  EXPECT_EQ(strategy_matrix_from_json(j.at("strategy_matrix")), c);
  const auto eq = enumerate_equilibria(c, build_simplex(cfg.strengths));
  EXPECT_EQ(j.at("equilibria").size(), eq.profiles.size());
  EXPECT_EQ(j.at("min_R").get<double>(), *eq.min_R);

  EXPECT_EQ(run_cli("oracle --N 40 --S 2 --M 1 --B 2").status, 1);
  EXPECT_EQ(run_cli("oracle --N 3 --S 2 --M 1 --B 3 --strengths 1,2").status, 1);
}

TEST_F(Cli, ZetaQuadratureAndMonteCarlo) {
  const auto q = run_cli("zeta --S 2 --B 2");
  ASSERT_EQ(q.status, 0);
  EXPECT_NE(q.out.find("zeta=-0.56418958"), std::string::npos) << q.out;
  EXPECT_NE(q.out.find("lambda_c=0.3183098"), std::string::npos) << q.out;
  const auto mc = run_cli("zeta --S 3 --method monte-carlo --samples 20000 --seed 4");
  ASSERT_EQ(mc.status, 0);
  EXPECT_EQ(mc.out.find("standard_error=0 "), std::string::npos);
  EXPECT_EQ(run_cli("zeta --S 3 --method simpson").status, 1);
}

TEST_F(Cli, SweepExportsFiles) {
  const auto cfg = write("s.cfg", "players = 12\nlambda_grid = 0.5,1\nrealizations = 2\nmax_iterations = 300\n");
  const auto res = run_cli("sweep --config " + cfg + " --out " + path("sw") + " --format all");
  ASSERT_EQ(res.status, 0) << res.out;
  for (const char* f : {"sw.csv", "sw_summary.csv", "sw.json", "sw.timing.json"})
    EXPECT_TRUE(std::filesystem::exists(path(f))) << f;
  EXPECT_EQ(sweep_from_json(nlohmann::json::parse(slurp(path("sw.json")))).rows.size(), 4u);
}

TEST_F(Cli, ExitCodes) {
  EXPECT_EQ(run_cli("").status, 1);
  EXPECT_EQ(run_cli("frobnicate").status, 1);
  EXPECT_EQ(run_cli("run").status, 1);
  EXPECT_EQ(run_cli("run --config /nonexistent/x.cfg").status, 2);
  const auto bad = write("bad.cfg", "players = 5\ncolour = blue\n");
  EXPECT_EQ(run_cli("run --config " + bad).status, 1);
  const auto good = write("g.cfg", "players = 5\nsignals = 1\nmax_iterations = 200\n");
  EXPECT_EQ(run_cli("run --config " + good + " --out /nonexistent/dir/t.csv").status, 2);
  EXPECT_EQ(run_cli("--help").status, 0);
}

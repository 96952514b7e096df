#include <gtest/gtest.h>

#include <cstdlib>
#include <sys/wait.h>

#include "commands.h"
#include "curves.h"
#include "pipeline.h"
#include "scenarios.h"
#include "test_util.h"

namespace streid {
namespace {

using testing::Pipeline;
using testing::TempDir;

// Small scenario with distinct travel laws per state.
std::filesystem::path write_small_config(const TempDir& dir) {
  auto c = testing::recovery_config(150, 2, 19);
  c.train_fraction = 0.5;
  c.start_time_span = 3000.0;
  c.travel[{0, 0, 1}] = {{150.0, 20.0, 0.6}, {500.0, 30.0, 0.4}};
  c.travel[{0, 1, 5}] = {{250.0, 25.0, 1.0}};
  c.noise = {0.7, 0.1, 0.35, 0.1};
  const auto path = dir / "config.json";
  io::write_file(path, io::scenario_config_to_json(c));
  return path;
}

int run_binary(const std::string& args) {
  const std::string cmd = std::string(STREID_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(Cli, EndToEndWritesEveryArtifact) {
  TempDir dir("e2e");
  Pipeline p(write_small_config(dir), dir.path());
  p.simulate();
  for (const char* f : {"train.csv", "query.csv", "gallery.csv", "similarity.csv",
                        "topology.csv", "truth.json"}) {
    EXPECT_TRUE(std::filesystem::exists(dir / f)) << f;
  }
  p.fit();
  const auto ranking = p.rank("p1");
  const auto report = p.eval(ranking, dir / "report.txt");
  EXPECT_GT(report.mean_ap, 0.0);
  EXPECT_LE(report.mean_ap, 1.0);
  const auto text = io::read_file(dir / "report.txt");
  EXPECT_NE(text.find("mAP: "), std::string::npos);
  EXPECT_NE(text.find("CMC@10: "), std::string::npos);
}

TEST(Cli, FitRejectsBadParametersBeforeReadingFiles) {
  cli::FitOptions o;
  o.train = "/nonexistent/train.csv";
  o.output = "/nonexistent/model.json";
  o.sigma = 0.0;
  std::ostringstream log;
  try {
    cli::run_fit(o, log);
    FAIL();
  } catch (const std::exception& e) {
    EXPECT_EQ(cli::exit_code_for(e), cli::kExitUsage);
  }
  o.sigma = 100.0;
  try {
    cli::run_fit(o, log);
    FAIL();
  } catch (const std::exception& e) {
    EXPECT_EQ(cli::exit_code_for(e), cli::kExitData);
  }
}

TEST(Cli, FitLogsPerRowCounts) {
  TempDir dir("fitlog");
  Pipeline p(write_small_config(dir), dir.path());
  p.simulate();
  cli::FitOptions o;
  o.train = dir / "train.csv";
  o.output = dir / "m.json";
  std::ostringstream log;
  cli::run_fit(o, log);
  EXPECT_NE(log.str().find("camera 0 state 0: "), std::string::npos) << log.str();
}

TEST(Cli, RankRejectsUnknownIdsAndBadProtocol) {
  TempDir dir("rankerr");
  Pipeline p(write_small_config(dir), dir.path());
  p.simulate();
  p.fit();
  auto o = p.rank_options("p9");
  o.output = dir / "r.csv";
  std::ostringstream log;
  EXPECT_THROW(cli::run_rank(o, log), ValidationError);
  o = p.rank_options("p1");
  o.output = dir / "r.csv";
  o.gallery = dir / "query.csv";
  EXPECT_THROW(cli::run_rank(o, log), DataError);
}

TEST(Cli, GridSweepWritesOneFilePerPair) {
  TempDir dir("grid");
  Pipeline p(write_small_config(dir), dir.path());
  p.simulate();
  p.fit();
  auto o = p.rank_options("p1");
  o.alpha_grid = {0.1, 0.2};
  o.beta_grid = {1.0, 1.5};
  o.output = dir / "sweep";
  std::ostringstream log;
  cli::run_rank(o, log);
  for (double a : o.alpha_grid) {
    for (double b : o.beta_grid) {
      EXPECT_TRUE(std::filesystem::exists(o.output / cli::grid_file_name(a, b)));
    }
  }
  EXPECT_EQ(cli::grid_file_name(0.15, 1.0), "rank_a0.15_b1.csv");
}

TEST(Cli, SimulateSeedOverrideChangesOutput) {
  TempDir dir("seed");
  const auto config = write_small_config(dir);
  std::ostringstream log;
  cli::run_simulate({config, std::nullopt, dir / "a"}, log);
  cli::run_simulate({config, 99u, dir / "b"}, log);
  cli::run_simulate({config, std::nullopt, dir / "c"}, log);
  EXPECT_NE(io::read_file(dir / "a" / "similarity.csv"),
            io::read_file(dir / "b" / "similarity.csv"));
  EXPECT_EQ(io::read_file(dir / "a" / "similarity.csv"),
            io::read_file(dir / "c" / "similarity.csv"));
}

TEST(Cli, PlotDataDecoupledCurvesIntegrateToOne) {
  TempDir dir("plot");
  Pipeline p(write_small_config(dir), dir.path());
  p.simulate();
  p.fit();
  cli::PlotOptions o;
  o.model = p.model();
  o.pairs = {{0, 1}, {0, 5}};
  std::ostringstream csv;
  cli::run_plot_data(o, csv);
  const auto curves = testing::parse_curves(csv.str());
  ASSERT_FALSE(curves.empty());
  for (const auto& [key, series] : curves) {
    EXPECT_FALSE(key.state.empty());
    EXPECT_NEAR(testing::trapezoid(series), 1.0, 0.005);
  }
}

TEST(Cli, PlotDataCoupledAreasFollowCounts) {
  TempDir dir("plotc");
  Pipeline p(write_small_config(dir), dir.path());
  p.simulate();
  p.fit();
  const auto model = io::model_from_json(io::read_file(p.model()));
  cli::PlotOptions o;
  o.model = p.model();
  o.pairs = {{0, 1}};
  o.protocol = "p3";
  std::ostringstream csv;
  cli::run_plot_data(o, csv);
  for (const auto& [key, series] : testing::parse_curves(csv.str())) {
    const auto n = model.intervals
                       .instance_samples(CameraId{key.from},
                                         StateId{static_cast<std::uint32_t>(std::stoul(key.state))},
                                         CameraId{key.to})
                       .size();
    EXPECT_NEAR(testing::trapezoid(series),
                static_cast<double>(n) / static_cast<double>(model.intervals.max_instance_count()),
                0.005);
  }

  o.protocol = "p2";
  std::ostringstream camera_csv;
  cli::run_plot_data(o, camera_csv);
  const auto camera_curves = testing::parse_curves(camera_csv.str());
  ASSERT_EQ(camera_curves.size(), 1u);
  EXPECT_TRUE(camera_curves.begin()->first.state.empty());

  o.pairs = {{0, 0}};
  o.state = "7";
  o.protocol = "p1";
  std::ostringstream none;
  EXPECT_THROW(cli::run_plot_data(o, none), DataError);
  o.state = "x";
  EXPECT_THROW(cli::run_plot_data(o, none), ValidationError);
}

TEST(Cli, ParseCameraPair) {
  EXPECT_EQ(cli::parse_camera_pair("3:11"), (std::pair<std::uint32_t, std::uint32_t>{3, 11}));
  EXPECT_THROW(cli::parse_camera_pair("3-11"), ValidationError);
  EXPECT_THROW(cli::parse_camera_pair(":1"), ValidationError);
}

TEST(CliBinary, ExitCodes) {
  TempDir dir("bin");
  const auto config = write_small_config(dir);
  const auto d = dir.path().string();
  EXPECT_EQ(run_binary("--help"), 0);
  EXPECT_EQ(run_binary(""), 1);
  EXPECT_EQ(run_binary("fit --bogus"), 1);
  EXPECT_EQ(run_binary("simulate --config " + config.string() + " -o " + d), 0);
  EXPECT_EQ(run_binary("fit --train " + d + "/train.csv --sigma 0 -o " + d + "/m.json"), 1);
  EXPECT_EQ(run_binary("fit --train " + d + "/missing.csv -o " + d + "/m.json"), 2);
  EXPECT_EQ(run_binary("fit --train " + d + "/train.csv --topology " + d +
                       "/topology.csv -o " + d + "/m.json"),
            0);
  EXPECT_EQ(run_binary("rank --model " + d + "/m.json --queries " + d +
                       "/query.csv --gallery " + d + "/gallery.csv --similarity " + d +
                       "/similarity.csv --alpha -1 -o " + d + "/r.csv"),
            1);
  EXPECT_EQ(run_binary("rank --model " + d + "/m.json --queries " + d +
                       "/query.csv --gallery " + d + "/gallery.csv --similarity " + d +
                       "/similarity.csv -o " + d + "/r.csv"),
            0);
  EXPECT_EQ(run_binary("eval --rankings " + d + "/r.csv --queries " + d +
                       "/query.csv --gallery " + d + "/gallery.csv --cmc-ks 1,5"),
            0);
  io::write_file(dir / "bad.json", "{\"seed\": 1}");
  EXPECT_EQ(run_binary("simulate --config " + d + "/bad.json -o " + d + "/x"), 1);
  EXPECT_EQ(run_binary("plot-data --model " + d + "/m.json --pair 0:1 -o " + d + "/p.csv"), 0);
}

}  // namespace
}  // namespace streid

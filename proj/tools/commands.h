#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "streid/evaluation.h"
#include "streid/fusion.h"
#include "streid/intervals.h"
#include "streid/types.h"

namespace streid::cli {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

struct FitOptions {
  std::filesystem::path train;
  std::optional<std::filesystem::path> topology;  // inferred when absent
  double sigma = kDefaultBandwidth;
  double epsilon = 0.0;
  std::string protocol = "p1";
  std::filesystem::path output;
};

struct RankOptions {
  std::filesystem::path model;
  std::filesystem::path queries;
  std::filesystem::path gallery;
  std::filesystem::path similarity;
  double alpha = kDefaultAlpha;
  double beta = kDefaultBeta;
  std::string protocol = "p1";
  std::string mode = "peak-score";
  // With a grid, `output` is a directory receiving one file per (alpha, beta).
  std::vector<double> alpha_grid;
  std::vector<double> beta_grid;
  std::filesystem::path output;
};

struct EvalOptions {
  std::filesystem::path rankings;
  std::filesystem::path queries;
  std::filesystem::path gallery;
  std::vector<int> cmc_ks = {1, 5, 10};
  std::optional<std::filesystem::path> report;
  std::optional<std::filesystem::path> per_query;
};

struct SimulateOptions {
  std::filesystem::path config;
  std::optional<std::uint64_t> seed;  // overrides the config's seed
  std::filesystem::path output_dir;
};

struct PlotOptions {
  std::filesystem::path model;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
  // "all" (one curve per observed state), "camera", or a state index.
  std::string state = "all";
  std::optional<double> delta_min;
  std::optional<double> delta_max;
  std::optional<double> step;
  std::string protocol = "p1";
  std::string mode = "normalized-density";
  std::optional<std::filesystem::path> output;  // stdout when absent
};

// Each command writes human-readable progress to `log` and throws
// ValidationError (usage) or DataError (data) on failure.
void run_fit(const FitOptions& options, std::ostream& log);
void run_rank(const RankOptions& options, std::ostream& log);
EvalReport run_eval(const EvalOptions& options, std::ostream& log);
void run_simulate(const SimulateOptions& options, std::ostream& log);
void run_plot_data(const PlotOptions& options, std::ostream& out);

// Name of the per-pair file written by a grid sweep.
std::string grid_file_name(double alpha, double beta);

// Parses "i:j" camera pairs.
std::pair<std::uint32_t, std::uint32_t> parse_camera_pair(const std::string& text);

// Maps an exception thrown by a command to an exit code and message.
int exit_code_for(const std::exception& error);

}  // namespace streid::cli

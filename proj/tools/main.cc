#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "commands.h"

namespace {

using streid::cli::kExitUsage;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spatial-temporal re-ranking for person re-identification"};
  app.require_subcommand(1);

  streid::cli::FitOptions fit;
  auto* fit_cmd = app.add_subcommand("fit", "Fit transition and interval models");
  fit_cmd->add_option("--train", fit.train, "Training observations CSV")->required();
  fit_cmd->add_option("--topology", fit.topology,
                      "Per-camera state counts CSV (inferred from data if omitted)");
  fit_cmd->add_option("--sigma", fit.sigma, "Gaussian kernel bandwidth (seconds)")
      ->capture_default_str();
  fit_cmd->add_option("--epsilon", fit.epsilon, "Additive transition smoothing")
      ->capture_default_str();
  fit_cmd->add_option("--protocol", fit.protocol, "p1|p2|p3|p4|visual-only")
      ->capture_default_str();
  fit_cmd->add_option("--output,-o", fit.output, "Model JSON path")->required();

  streid::cli::RankOptions rank;
  auto* rank_cmd = app.add_subcommand("rank", "Re-rank galleries with a fitted model");
  rank_cmd->add_option("--model", rank.model)->required();
  rank_cmd->add_option("--queries", rank.queries, "Query observations CSV")->required();
  rank_cmd->add_option("--gallery", rank.gallery, "Gallery observations CSV")->required();
  rank_cmd->add_option("--similarity", rank.similarity, "Similarity matrix CSV")
      ->required();
  rank_cmd->add_option("--alpha", rank.alpha, "Spatial scale")->capture_default_str();
  rank_cmd->add_option("--beta", rank.beta, "Temporal scale")->capture_default_str();
  rank_cmd->add_option("--protocol", rank.protocol, "p1|p2|p3|p4|visual-only")
      ->capture_default_str();
  rank_cmd->add_option("--mode", rank.mode, "peak-score|normalized-density")
      ->capture_default_str();
  rank_cmd->add_option("--alpha-grid", rank.alpha_grid, "Sweep alpha values")
      ->delimiter(',');
  rank_cmd->add_option("--beta-grid", rank.beta_grid, "Sweep beta values")
      ->delimiter(',');
  rank_cmd->add_option("--output,-o", rank.output,
                       "Ranking CSV (a directory when sweeping a grid)")
      ->required();

  streid::cli::EvalOptions eval;
  auto* eval_cmd = app.add_subcommand("eval", "Compute mAP and CMC for a ranking");
  eval_cmd->add_option("--rankings", eval.rankings)->required();
  eval_cmd->add_option("--queries", eval.queries)->required();
  eval_cmd->add_option("--gallery", eval.gallery)->required();
  eval_cmd->add_option("--cmc-ks", eval.cmc_ks, "CMC ranks")
      ->delimiter(',')
      ->capture_default_str();
  eval_cmd->add_option("--report", eval.report, "Write the report here as well");
  eval_cmd->add_option("--per-query", eval.per_query, "Per-query AP CSV");

  streid::cli::SimulateOptions sim;
  std::uint64_t seed = 0;
  auto* sim_cmd = app.add_subcommand("simulate", "Generate a synthetic scenario");
  sim_cmd->add_option("--config", sim.config, "Scenario JSON")->required();
  auto* seed_opt = sim_cmd->add_option("--seed", seed, "Override the config seed");
  sim_cmd->add_option("--output,-o", sim.output_dir, "Output directory")->required();

  streid::cli::PlotOptions plot;
  std::vector<std::string> pairs;
  auto* plot_cmd =
      app.add_subcommand("plot-data", "Export interval distribution curves as CSV");
  plot_cmd->add_option("--model", plot.model)->required();
  plot_cmd->add_option("--pair", pairs, "Camera pair i:j (repeatable)")->required();
  plot_cmd->add_option("--state", plot.state, "all|camera|<state index>")
      ->capture_default_str();
  plot_cmd->add_option("--delta-min", plot.delta_min);
  plot_cmd->add_option("--delta-max", plot.delta_max);
  plot_cmd->add_option("--step", plot.step);
  plot_cmd->add_option("--protocol", plot.protocol,
                       "p1/p2 decoupled, p3/p4 coupled curves")
      ->capture_default_str();
  plot_cmd->add_option("--mode", plot.mode)->capture_default_str();
  plot_cmd->add_option("--output,-o", plot.output);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*fit_cmd) {
      streid::cli::run_fit(fit, std::cout);
    } else if (*rank_cmd) {
      streid::cli::run_rank(rank, std::cout);
    } else if (*eval_cmd) {
      streid::cli::run_eval(eval, std::cout);
    } else if (*sim_cmd) {
      if (seed_opt->count() > 0) sim.seed = seed;
      streid::cli::run_simulate(sim, std::cout);
    } else if (*plot_cmd) {
      for (const auto& p : pairs) plot.pairs.push_back(streid::cli::parse_camera_pair(p));
      streid::cli::run_plot_data(plot, std::cout);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return streid::cli::exit_code_for(e);
  }
  return streid::cli::kExitOk;
}

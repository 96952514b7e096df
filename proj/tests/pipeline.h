#pragma once

#include <filesystem>
#include <sstream>
#include <string>

#include "commands.h"
#include "streid/io.h"

namespace streid::testing {

// simulate -> fit -> rank -> eval through the CLI command layer, keeping every
// artifact on disk under `dir`.
class Pipeline {
 public:
  Pipeline(std::filesystem::path config, std::filesystem::path dir)
      : config_(std::move(config)), dir_(std::move(dir)) {}

  void simulate() {
    std::ostringstream log;
    cli::run_simulate({config_, std::nullopt, dir_}, log);
  }

  void fit(double sigma = kDefaultBandwidth, double epsilon = 0.0) {
    cli::FitOptions o;
    o.train = dir_ / "train.csv";
    o.topology = dir_ / "topology.csv";
    o.sigma = sigma;
    o.epsilon = epsilon;
    o.output = model();
    std::ostringstream log;
    cli::run_fit(o, log);
  }

  cli::RankOptions rank_options(const std::string& protocol) const {
    cli::RankOptions o;
    o.model = model();
    o.queries = dir_ / "query.csv";
    o.gallery = dir_ / "gallery.csv";
    o.similarity = dir_ / "similarity.csv";
    o.protocol = protocol;
    return o;
  }

  std::filesystem::path rank(const std::string& protocol, double alpha = kDefaultAlpha,
                             double beta = kDefaultBeta) {
    auto o = rank_options(protocol);
    o.alpha = alpha;
    o.beta = beta;
    o.output = dir_ / ("rank_" + protocol + ".csv");
    std::ostringstream log;
    cli::run_rank(o, log);
    return o.output;
  }

  EvalReport eval(const std::filesystem::path& rankings,
                  std::optional<std::filesystem::path> report = std::nullopt) const {
    cli::EvalOptions o;
    o.rankings = rankings;
    o.queries = dir_ / "query.csv";
    o.gallery = dir_ / "gallery.csv";
    o.report = std::move(report);
    std::ostringstream log;
    return cli::run_eval(o, log);
  }

  std::filesystem::path model() const { return dir_ / "model.json"; }
  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path config_;
  std::filesystem::path dir_;
};

}  // namespace streid::testing

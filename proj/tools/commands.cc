#include "commands.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "streid/io.h"
#include "streid/model.h"
#include "streid/simulator.h"

namespace streid::cli {
namespace {

std::vector<Observation> load_observations(const std::filesystem::path& path) {
  std::istringstream in(io::read_file(path));
  try {
    return io::read_observations(in);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

SpatialTemporalModel load_model(const std::filesystem::path& path) {
  try {
    return io::model_from_json(io::read_file(path));
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

// Looks up metadata for each id, in the given order.
std::vector<Observation> order_by_ids(const std::vector<Observation>& metadata,
                                      const std::vector<std::string>& ids,
                                      const char* what) {
  std::unordered_map<std::string, const Observation*> by_id;
  for (const auto& o : metadata) by_id[o.observation_id] = &o;
  std::vector<Observation> out;
  out.reserve(ids.size());
  for (const auto& id : ids) {
    auto it = by_id.find(id);
    if (it == by_id.end()) {
      throw DataError(std::string("similarity matrix references unknown ") +
                      what + " id '" + id + "'");
    }
    out.push_back(*it->second);
  }
  return out;
}

std::vector<Observation> validated_for(std::vector<Observation> observations,
                                       const Topology& topology) {
  try {
    return validate_observations(std::move(observations), topology);
  } catch (const ValidationError& e) {
    throw DataError(e.what());
  }
}

std::string rankings_csv(const std::vector<RankedList>& rankings) {
  std::ostringstream out;
  io::write_rankings(out, rankings);
  return out.str();
}

}  // namespace

void run_fit(const FitOptions& options, std::ostream& log) {
  if (!std::isfinite(options.sigma) || options.sigma <= 0.0) {
    throw ValidationError("--sigma must be finite and > 0");
  }
  if (!std::isfinite(options.epsilon) || options.epsilon < 0.0) {
    throw ValidationError("--epsilon must be finite and >= 0");
  }
  const Protocol protocol = parse_protocol(options.protocol);

  const auto observations = load_observations(options.train);
  Topology topology;
  if (options.topology) {
    std::istringstream in(io::read_file(*options.topology));
    topology = io::read_topology(in);
  } else {
    topology = Topology::infer(observations);
  }
  SpatialTemporalModel model;
  try {
    model = fit_model(observations, topology, options.sigma, options.epsilon,
                      protocol);
  } catch (const ValidationError& e) {
    throw DataError(e.what());
  }
  io::write_file(options.output, io::model_to_json(model));

  for (const auto& [row, counts] : model.transitions.instance_counts()) {
    std::uint64_t total = 0;
    for (auto c : counts) total += c;
    log << "camera " << row.first << " state " << row.second << ": " << total
        << " transitions\n";
  }
  log << "model written to " << options.output.string() << '\n';
}

std::string grid_file_name(double alpha, double beta) {
  return "rank_a" + io::format_double(alpha) + "_b" + io::format_double(beta) +
         ".csv";
}

void run_rank(const RankOptions& options, std::ostream& log) {
  const Protocol protocol = parse_protocol(options.protocol);
  const ScoreMode mode = parse_score_mode(options.mode);
  FusionParams base{options.alpha, options.beta};
  base.validate();
  for (double a : options.alpha_grid) FusionParams{a, base.beta}.validate();
  for (double b : options.beta_grid) FusionParams{base.alpha, b}.validate();

  const auto model = load_model(options.model);
  std::istringstream sim_in(io::read_file(options.similarity));
  SimilarityMatrix similarity;
  try {
    similarity = io::read_similarity(sim_in);
  } catch (const std::exception& e) {
    throw DataError(options.similarity.string() + ": " + e.what());
  }
  const auto queries = validated_for(
      order_by_ids(load_observations(options.queries), similarity.query_ids(),
                   "query"),
      model.topology);
  const auto gallery = validated_for(
      order_by_ids(load_observations(options.gallery), similarity.gallery_ids(),
                   "gallery"),
      model.topology);

  const bool grid = !options.alpha_grid.empty() || !options.beta_grid.empty();
  if (!grid) {
    const auto rankings =
        rank_all(queries, gallery, similarity, model, protocol, base, mode);
    io::write_file(options.output, rankings_csv(rankings));
    log << "ranked " << rankings.size() << " queries against " << gallery.size()
        << " gallery entries (" << to_string(protocol) << ")\n";
    return;
  }

  const auto alphas = options.alpha_grid.empty() ? std::vector<double>{base.alpha}
                                                 : options.alpha_grid;
  const auto betas = options.beta_grid.empty() ? std::vector<double>{base.beta}
                                               : options.beta_grid;
  std::filesystem::create_directories(options.output);
  for (double a : alphas) {
    for (double b : betas) {
      const auto rankings = rank_all(queries, gallery, similarity, model,
                                     protocol, FusionParams{a, b}, mode);
      const auto path = options.output / grid_file_name(a, b);
      io::write_file(path, rankings_csv(rankings));
      log << "wrote " << path.string() << '\n';
    }
  }
}

EvalReport run_eval(const EvalOptions& options, std::ostream& log) {
  for (int k : options.cmc_ks) {
    if (k <= 0) throw ValidationError("--cmc-ks values must be positive");
  }
  std::istringstream rank_in(io::read_file(options.rankings));
  std::vector<RankingRecord> rankings;
  try {
    rankings = io::read_rankings(rank_in);
  } catch (const DataError& e) {
    throw DataError(options.rankings.string() + ": " + e.what());
  }
  const auto queries = load_observations(options.queries);
  const auto gallery = load_observations(options.gallery);
  const auto report = evaluate(rankings, queries, gallery, options.cmc_ks);

  if (!report.skipped_queries.empty()) {
    log << "warning: " << report.skipped_queries.size()
        << " queries have no cross-camera positive and were skipped\n";
  }
  std::ostringstream text;
  io::write_eval_report(text, report);
  log << text.str();
  if (options.report) io::write_file(*options.report, text.str());
  if (options.per_query) {
    std::ostringstream per_query;
    io::write_per_query_ap(per_query, report);
    io::write_file(*options.per_query, per_query.str());
  }
  return report;
}

void run_simulate(const SimulateOptions& options, std::ostream& log) {
  auto config = io::scenario_config_from_json(io::read_file(options.config));
  if (options.seed) config.seed = *options.seed;

  const auto truth = generate_scenario(config);
  const auto split = split_scenario(truth);
  const auto similarity =
      synth_similarity(truth, split.query, split.gallery, config.noise, config.seed);

  auto pick = [&](const std::vector<std::size_t>& indices) {
    std::vector<Observation> out;
    out.reserve(indices.size());
    for (auto i : indices) out.push_back(truth.observations[i]);
    return out;
  };
  auto csv = [](auto writer, const auto& value) {
    std::ostringstream out;
    writer(out, value);
    return out.str();
  };

  const auto& dir = options.output_dir;
  std::filesystem::create_directories(dir);
  io::write_file(dir / "train.csv", csv(io::write_observations, pick(split.train)));
  io::write_file(dir / "query.csv", csv(io::write_observations, pick(split.query)));
  io::write_file(dir / "gallery.csv",
                 csv(io::write_observations, pick(split.gallery)));
  io::write_file(dir / "similarity.csv", csv(io::write_similarity, similarity));
  io::write_file(dir / "topology.csv",
                 csv(io::write_topology, Topology(config.state_counts)));
  // The resolved config (seed included) is the generative truth.
  io::write_file(dir / "truth.json", io::scenario_config_to_json(config));

  log << "simulated " << config.num_identities << " identities, "
      << truth.observations.size() << " observations (" << split.train.size()
      << " train, " << split.query.size() << " query, " << split.gallery.size()
      << " gallery) into " << dir.string() << '\n';
}

std::pair<std::uint32_t, std::uint32_t> parse_camera_pair(const std::string& text) {
  const auto colon = text.find(':');
  std::uint32_t from = 0;
  std::uint32_t to = 0;
  auto parse = [](std::string_view s, std::uint32_t& v) {
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    return !s.empty() && ec == std::errc() && ptr == s.data() + s.size();
  };
  if (colon == std::string::npos ||
      !parse(std::string_view(text).substr(0, colon), from) ||
      !parse(std::string_view(text).substr(colon + 1), to)) {
    throw ValidationError("camera pair must look like 'i:j', got '" + text + "'");
  }
  return {from, to};
}

void run_plot_data(const PlotOptions& options, std::ostream& out) {
  const Protocol protocol = parse_protocol(options.protocol);
  if (protocol == Protocol::kVisualOnly) {
    throw ValidationError("plot-data needs one of p1..p4");
  }
  const ScoreMode mode = parse_score_mode(options.mode);
  if (options.pairs.empty()) throw ValidationError("at least one --pair is required");
  std::optional<std::uint32_t> single_state;
  bool camera_level = !uses_instance_state(protocol) || options.state == "camera";
  if (!camera_level && options.state != "all") {
    std::uint32_t s = 0;
    auto [ptr, ec] = std::from_chars(options.state.data(),
                                     options.state.data() + options.state.size(), s);
    if (options.state.empty() || ec != std::errc() ||
        ptr != options.state.data() + options.state.size()) {
      throw ValidationError("--state must be 'all', 'camera' or a state index");
    }
    single_state = s;
  }
  if (options.step && !(*options.step > 0.0)) {
    throw ValidationError("--step must be > 0");
  }

  const auto model = load_model(options.model);
  const auto& intervals = model.intervals;
  const bool coupled = is_coupled(protocol);

  struct Curve {
    std::string name;
    std::uint32_t from;
    std::optional<std::uint32_t> state;
    std::uint32_t to;
    std::span<const double> samples;
    std::size_t normalizer;
  };
  std::vector<Curve> curves;
  for (const auto& [from, to] : options.pairs) {
    const std::string pair_name = std::to_string(from) + "-" + std::to_string(to);
    if (camera_level) {
      auto samples = intervals.camera_samples(CameraId{from}, CameraId{to});
      if (samples.empty()) throw DataError("no interval samples for " + pair_name);
      curves.push_back({pair_name, from, std::nullopt, to, samples,
                        coupled ? intervals.max_camera_count() : samples.size()});
      continue;
    }
    bool any = false;
    for (const auto& [key, deltas] : intervals.instance()) {
      const auto [kf, ks, kt] = key;
      if (kf != from || kt != to || (single_state && ks != *single_state)) continue;
      any = true;
      curves.push_back({std::to_string(from) + "-s" + std::to_string(ks) + "-" +
                            std::to_string(to),
                        from, ks, to, deltas,
                        coupled ? intervals.max_instance_count() : deltas.size()});
    }
    if (!any) {
      throw DataError("no interval samples for " + pair_name +
                      (single_state ? " state " + std::to_string(*single_state) : ""));
    }
  }

  const double sigma = intervals.sigma();
  double lo = curves.front().samples.front();
  double hi = curves.front().samples.back();
  for (const auto& c : curves) {
    lo = std::min(lo, c.samples.front());
    hi = std::max(hi, c.samples.back());
  }
  const double delta_min = options.delta_min.value_or(lo - 6.0 * sigma);
  const double delta_max = options.delta_max.value_or(hi + 6.0 * sigma);
  const double step = options.step.value_or(sigma / 50.0);
  if (!(delta_max >= delta_min)) {
    throw ValidationError("--delta-max must not be below --delta-min");
  }
  const auto points =
      static_cast<std::size_t>(std::floor((delta_max - delta_min) / step + 1e-9)) + 1;

  std::ostringstream csv;
  csv << "curve,from,state,to,delta,value\n";
  for (const auto& c : curves) {
    for (std::size_t k = 0; k < points; ++k) {
      const double delta = delta_min + static_cast<double>(k) * step;
      csv << c.name << ',' << c.from << ','
          << (c.state ? std::to_string(*c.state) : std::string()) << ',' << c.to
          << ',' << io::format_double(delta) << ','
          << io::format_double(intervals.evaluate(c.samples, c.normalizer, delta, mode))
          << '\n';
    }
  }
  if (options.output) {
    io::write_file(*options.output, csv.str());
  } else {
    out << csv.str();
  }
}

int exit_code_for(const std::exception& error) {
  if (dynamic_cast<const ValidationError*>(&error)) return kExitUsage;
  return kExitData;
}

}  // namespace streid::cli

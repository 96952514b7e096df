#include "streid/simulator.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <string>

namespace streid {
namespace {

constexpr std::uint64_t kTrajectoryTag = 1;
constexpr std::uint64_t kSplitTag = 2;
constexpr std::uint64_t kSimilarityTag = 3;
constexpr int kMaxResamples = 1000;

std::string index_path(const std::string& field, std::initializer_list<std::size_t> idx) {
  std::string out = field;
  for (auto i : idx) out += "[" + std::to_string(i) + "]";
  return out;
}

void validate_law(const TravelLaw& law, const std::string& path) {
  if (law.empty()) throw ValidationError(path + ": travel law has no components");
  double total = 0.0;
  for (std::size_t c = 0; c < law.size(); ++c) {
    const auto& comp = law[c];
    const auto cpath = index_path(path, {c});
    if (!std::isfinite(comp.mean) || comp.mean <= 0.0) {
      throw ValidationError(cpath + ".mean: must be > 0");
    }
    if (!std::isfinite(comp.stddev) || comp.stddev < 0.0) {
      throw ValidationError(cpath + ".std: must be >= 0");
    }
    if (!std::isfinite(comp.weight) || comp.weight <= 0.0) {
      throw ValidationError(cpath + ".weight: must be > 0");
    }
    total += comp.weight;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw ValidationError(path + ": component weights sum to " +
                          std::to_string(total) + ", expected 1");
  }
}

std::string pad(std::size_t value, int width) {
  auto s = std::to_string(value);
  if (static_cast<int>(s.size()) < width) s.insert(0, width - s.size(), '0');
  return s;
}

}  // namespace

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream,
                           std::uint64_t tag) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(stream >> 32),
                    static_cast<std::uint32_t>(tag)};
  engine_.seed(seq);
}

std::uint64_t RandomStream::next() { return engine_(); }

double RandomStream::uniform() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double RandomStream::normal(double mean, double stddev) {
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  const double z = std::sqrt(-2.0 * std::log(u1)) *
                   std::cos(2.0 * std::numbers::pi * u2);
  return mean + stddev * z;
}

std::size_t RandomStream::categorical(std::span<const double> weights) {
  double total = 0.0;
  for (double w : weights) total += w;
  const double u = uniform() * total;
  double acc = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    acc += weights[i];
    last_positive = i;
    if (u < acc) return i;
  }
  return last_positive;
}

std::uint64_t RandomStream::poisson(double mean) {
  // Knuth's product method; hop counts are small.
  const double limit = std::exp(-mean);
  std::uint64_t k = 0;
  double p = uniform();
  while (p > limit) {
    ++k;
    p *= uniform();
  }
  return k;
}

void ScenarioConfig::validate() const {
  const std::size_t n = state_counts.size();
  if (n == 0) throw ValidationError("state_counts: at least one camera required");
  for (std::size_t i = 0; i < n; ++i) {
    if (state_counts[i] == 0) {
      throw ValidationError(index_path("state_counts", {i}) + ": must be >= 1");
    }
  }
  if (transition.size() != n) {
    throw ValidationError("transition: expected " + std::to_string(n) +
                          " camera rows, got " + std::to_string(transition.size()));
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (transition[i].size() != state_counts[i]) {
      throw ValidationError(index_path("transition", {i}) + ": expected " +
                            std::to_string(state_counts[i]) + " state rows");
    }
    for (std::size_t s = 0; s < transition[i].size(); ++s) {
      const auto& row = transition[i][s];
      const auto path = index_path("transition", {i, s});
      if (row.size() != n) {
        throw ValidationError(path + ": expected " + std::to_string(n) +
                              " destination probabilities");
      }
      double sum = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (!std::isfinite(row[j]) || row[j] < 0.0) {
          throw ValidationError(index_path("transition", {i, s, j}) +
                                ": probability must be finite and >= 0");
        }
        sum += row[j];
      }
      if (std::abs(sum - 1.0) > 1e-9) {
        throw ValidationError(path + ": row sums to " + std::to_string(sum) +
                              ", expected 1");
      }
      for (std::size_t j = 0; j < n; ++j) {
        if (row[j] > 0.0 && !travel.contains({static_cast<std::uint32_t>(i),
                                               static_cast<std::uint32_t>(s),
                                               static_cast<std::uint32_t>(j)}) &&
            default_travel.empty()) {
          throw ValidationError(index_path("transition", {i, s, j}) +
                                ": no travel law and no default_travel");
        }
      }
    }
  }
  for (const auto& [key, law] : travel) {
    const auto [from, state, to] = key;
    const auto path = "travel(" + std::to_string(from) + "," +
                      std::to_string(state) + "," + std::to_string(to) + ")";
    if (from >= n || to >= n || state >= state_counts[from]) {
      throw ValidationError(path + ": key outside the camera topology");
    }
    validate_law(law, path);
  }
  if (!default_travel.empty()) validate_law(default_travel, "default_travel");
  for (std::size_t p = 0; p < state_pins.size(); ++p) {
    const auto& pin = state_pins[p];
    if (pin.from >= n || pin.to >= n || pin.state >= state_counts[pin.to]) {
      throw ValidationError(index_path("state_pins", {p}) +
                            ": pin outside the camera topology");
    }
  }
  if (num_identities == 0) throw ValidationError("identities: must be >= 1");
  if (!std::isfinite(mean_hops) || mean_hops < 0.0) {
    throw ValidationError("mean_hops: must be finite and >= 0");
  }
  if (hop_law == HopLaw::kFixed && mean_hops != std::floor(mean_hops)) {
    throw ValidationError("mean_hops: must be an integer for the fixed hop law");
  }
  if (!std::isfinite(start_time_span) || start_time_span < 0.0) {
    throw ValidationError("start_time_span: must be finite and >= 0");
  }
  if (!(train_fraction >= 0.0 && train_fraction <= 1.0)) {
    throw ValidationError("train_fraction: must lie in [0, 1]");
  }
  if (!std::isfinite(noise.intra_mean) || !std::isfinite(noise.inter_mean) ||
      !std::isfinite(noise.intra_std) || !std::isfinite(noise.inter_std) ||
      noise.intra_std < 0.0 || noise.inter_std < 0.0) {
    throw ValidationError("similarity: means must be finite, stds >= 0");
  }
}

const TravelLaw& ScenarioConfig::travel_law(std::uint32_t from,
                                            std::uint32_t state,
                                            std::uint32_t to) const {
  auto it = travel.find({from, state, to});
  return it != travel.end() ? it->second : default_travel;
}

namespace {

double sample_travel_time(const TravelLaw& law, RandomStream& rng) {
  std::vector<double> weights;
  weights.reserve(law.size());
  for (const auto& c : law) weights.push_back(c.weight);
  const auto& comp = law[rng.categorical(weights)];
  for (int attempt = 0; attempt < kMaxResamples; ++attempt) {
    const double t = rng.normal(comp.mean, comp.stddev);
    if (t > 0.0) return t;
  }
  return comp.mean;
}

std::uint32_t arrival_state(const ScenarioConfig& config, std::uint32_t from,
                            std::uint32_t to, RandomStream& rng) {
  for (const auto& pin : config.state_pins) {
    if (pin.from == from && pin.to == to) return pin.state;
  }
  const auto n = config.state_counts[to];
  return static_cast<std::uint32_t>(
      std::min<std::uint64_t>(static_cast<std::uint64_t>(rng.uniform() * n), n - 1));
}

}  // namespace

ScenarioTruth generate_scenario(const ScenarioConfig& config) {
  config.validate();
  ScenarioTruth truth;
  truth.config = config;
  const auto num_cameras = static_cast<std::uint32_t>(config.state_counts.size());
  const int id_width = std::max<int>(
      4, static_cast<int>(std::to_string(config.num_identities).size()));

  std::size_t obs_counter = 0;
  for (std::size_t k = 0; k < config.num_identities; ++k) {
    RandomStream rng(config.seed, k, kTrajectoryTag);
    const std::string identity = "id" + pad(k, id_width);
    const std::size_t hops =
        config.hop_law == HopLaw::kFixed
            ? static_cast<std::size_t>(config.mean_hops)
            : static_cast<std::size_t>(rng.poisson(config.mean_hops));

    double t = rng.uniform() * config.start_time_span;
    auto camera = static_cast<std::uint32_t>(std::min<std::uint64_t>(
        static_cast<std::uint64_t>(rng.uniform() * num_cameras), num_cameras - 1));
    const auto n0 = config.state_counts[camera];
    auto state = static_cast<std::uint32_t>(std::min<std::uint64_t>(
        static_cast<std::uint64_t>(rng.uniform() * n0), n0 - 1));

    auto emit = [&] {
      truth.observations.push_back(Observation{
          "o" + pad(obs_counter++, 6), identity, CameraId{camera}, t,
          StateId{state}});
      truth.identity_index.push_back(k);
    };
    emit();
    for (std::size_t h = 0; h < hops; ++h) {
      const auto& row = config.transition[camera][state];
      const auto next = static_cast<std::uint32_t>(rng.categorical(row));
      t += sample_travel_time(config.travel_law(camera, state, next), rng);
      const auto next_state = arrival_state(config, camera, next, rng);
      camera = next;
      state = next_state;
      emit();
    }
  }
  return truth;
}

ScenarioSplit split_scenario(const ScenarioTruth& truth) {
  std::map<std::size_t, std::vector<std::size_t>> members;
  for (std::size_t i = 0; i < truth.observations.size(); ++i) {
    members[truth.identity_index[i]].push_back(i);
  }
  ScenarioSplit split;
  for (const auto& [k, indices] : members) {
    RandomStream rng(truth.config.seed, k, kSplitTag);
    if (rng.uniform() < truth.config.train_fraction) {
      split.train.insert(split.train.end(), indices.begin(), indices.end());
      continue;
    }
    if (indices.size() < 2) {
      split.gallery.insert(split.gallery.end(), indices.begin(), indices.end());
      continue;
    }
    const auto pick = std::min<std::size_t>(
        static_cast<std::size_t>(rng.uniform() * indices.size()),
        indices.size() - 1);
    for (std::size_t m = 0; m < indices.size(); ++m) {
      (m == pick ? split.query : split.gallery).push_back(indices[m]);
    }
  }
  std::sort(split.gallery.begin(), split.gallery.end());
  return split;
}

SimilarityMatrix synth_similarity(const ScenarioTruth& truth,
                                  std::span<const std::size_t> query,
                                  std::span<const std::size_t> gallery,
                                  const SimilarityNoise& noise,
                                  std::uint64_t seed) {
  std::set<std::size_t> query_set(query.begin(), query.end());
  for (auto g : gallery) {
    if (query_set.contains(g)) {
      throw ValidationError("query and gallery splits overlap at observation '" +
                            truth.observations.at(g).observation_id + "'");
    }
  }
  std::vector<std::string> qids, gids;
  for (auto q : query) qids.push_back(truth.observations.at(q).observation_id);
  for (auto g : gallery) gids.push_back(truth.observations.at(g).observation_id);

  std::vector<double> values;
  values.reserve(query.size() * gallery.size());
  for (auto q : query) {
    // One substream per query observation keeps rows independent of order.
    RandomStream rng(seed, q, kSimilarityTag);
    for (auto g : gallery) {
      const bool same = truth.identity_index[q] == truth.identity_index[g];
      const double s = same ? rng.normal(noise.intra_mean, noise.intra_std)
                            : rng.normal(noise.inter_mean, noise.inter_std);
      values.push_back(std::clamp(s, 0.0, 1.0));
    }
  }
  return SimilarityMatrix(std::move(qids), std::move(gids), std::move(values));
}

OracleTransitions oracle_transition_estimate(const ScenarioTruth& truth) {
  const auto& obs = truth.observations;
  const auto& states = truth.config.state_counts;
  const std::size_t n = states.size();

  OracleTransitions out;
  out.counts.resize(n);
  out.probabilities.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.counts[i].assign(states[i], std::vector<std::uint64_t>(n, 0));
    out.probabilities[i].assign(states[i], std::vector<double>(n, 0.0));
  }

  // a precedes b in an identity's timeline
  auto before = [&](std::size_t a, std::size_t b) {
    if (obs[a].timestamp != obs[b].timestamp) return obs[a].timestamp < obs[b].timestamp;
    if (obs[a].camera.value != obs[b].camera.value) {
      return obs[a].camera.value < obs[b].camera.value;
    }
    return a < b;
  };

  std::map<std::size_t, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < obs.size(); ++i) {
    groups[truth.identity_index[i]].push_back(i);
  }
  for (const auto& [k, members] : groups) {
    for (auto a : members) {
      // successor: the earliest sighting that comes after a
      std::optional<std::size_t> succ;
      for (auto b : members) {
        if (b == a || !before(a, b)) continue;
        if (!succ || before(b, *succ)) succ = b;
      }
      if (succ) {
        ++out.counts[obs[a].camera.value][obs[a].state.value]
                    [obs[*succ].camera.value];
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t s = 0; s < states[i]; ++s) {
      std::uint64_t total = 0;
      for (auto c : out.counts[i][s]) total += c;
      if (total == 0) continue;
      for (std::size_t j = 0; j < n; ++j) {
        out.probabilities[i][s][j] = static_cast<double>(out.counts[i][s][j]) /
                                     static_cast<double>(total);
      }
    }
  }
  return out;
}

}  // namespace streid

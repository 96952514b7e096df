#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <tuple>
#include <vector>

#include "streid/types.h"

namespace streid {

struct GaussianComponent {
  double mean = 0.0;    // seconds, > 0
  double stddev = 0.0;  // seconds, >= 0
  double weight = 1.0;

  bool operator==(const GaussianComponent&) const = default;
};

// Travel-time law between two cameras: a Gaussian mixture, truncated to
// positive values by resampling.
using TravelLaw = std::vector<GaussianComponent>;

struct SimilarityNoise {
  double intra_mean = 0.6;
  double intra_std = 0.15;
  double inter_mean = 0.4;
  double inter_std = 0.15;

  bool operator==(const SimilarityNoise&) const = default;
};

// Forces the arrival state when an identity moves from `from` to `to`.
struct StatePin {
  std::uint32_t from = 0;
  std::uint32_t to = 0;
  std::uint32_t state = 0;

  bool operator==(const StatePin&) const = default;
};

enum class HopLaw { kFixed, kPoisson };

// Ground-truth camera network and traffic used to generate a scenario.
struct ScenarioConfig {
  using TravelKey = std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>;

  std::vector<std::uint32_t> state_counts;
  // transition[i][s][j] = P(next camera j | camera i, state s)
  std::vector<std::vector<std::vector<double>>> transition;
  std::map<TravelKey, TravelLaw> travel;  // keyed (from, state, to)
  TravelLaw default_travel;               // used where `travel` has no entry
  std::vector<StatePin> state_pins;
  std::size_t num_identities = 100;
  double mean_hops = 3.0;
  HopLaw hop_law = HopLaw::kFixed;
  double start_time_span = 0.0;  // identities enter uniformly in [0, span]
  double train_fraction = 0.5;
  SimilarityNoise noise;
  std::uint64_t seed = 0;

  // Throws ValidationError whose message starts with the offending field
  // path, e.g. "transition[2][1]: ...".
  void validate() const;
  const TravelLaw& travel_law(std::uint32_t from, std::uint32_t state,
                              std::uint32_t to) const;

  bool operator==(const ScenarioConfig&) const = default;
};

struct ScenarioTruth {
  std::vector<Observation> observations;
  std::vector<std::size_t> identity_index;  // trajectory of each observation
  ScenarioConfig config;
};

// Deterministic in (config, config.seed). Identity k draws from its own
// substream, so appending identities leaves earlier trajectories unchanged.
ScenarioTruth generate_scenario(const ScenarioConfig& config);

// Index lists into ScenarioTruth::observations.
struct ScenarioSplit {
  std::vector<std::size_t> train;
  std::vector<std::size_t> query;
  std::vector<std::size_t> gallery;
};

// Identities go to training with probability train_fraction; each remaining
// identity with two or more sightings contributes one random query, and all
// its other sightings join the gallery.
ScenarioSplit split_scenario(const ScenarioTruth& truth);

// Draws S(q, g) from the intra- or inter-identity law, clamped to [0, 1].
// Throws ValidationError when the splits overlap.
SimilarityMatrix synth_similarity(const ScenarioTruth& truth,
                                  std::span<const std::size_t> query,
                                  std::span<const std::size_t> gallery,
                                  const SimilarityNoise& noise,
                                  std::uint64_t seed);

// Brute-force transition table counted straight from the trajectories.
// Kept free of any code shared with TransitionModel; tests compare the two.
struct OracleTransitions {
  // [from][state][to]
  std::vector<std::vector<std::vector<std::uint64_t>>> counts;
  std::vector<std::vector<std::vector<double>>> probabilities;
};
OracleTransitions oracle_transition_estimate(const ScenarioTruth& truth);

// Counter-seeded random stream. Draws are built on the engine's raw output
// because the std distributions are implementation-defined.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream, std::uint64_t tag);

  std::uint64_t next();
  double uniform();  // [0, 1)
  double normal(double mean, double stddev);
  std::size_t categorical(std::span<const double> weights);
  std::uint64_t poisson(double mean);

 private:
  std::mt19937_64 engine_;
};

}  // namespace streid

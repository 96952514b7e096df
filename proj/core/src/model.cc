#include "streid/model.h"

namespace streid {

SpatialTemporalModel fit_model(const std::vector<Observation>& observations,
                               const Topology& topology, double sigma,
                               double epsilon, Protocol protocol) {
  const auto validated = validate_observations(observations, topology);
  const auto samples = extract_transitions(validated);
  SpatialTemporalModel model;
  model.topology = topology;
  model.intervals = IntervalModel::fit(samples, sigma);
  model.transitions = TransitionModel::fit(samples, topology, epsilon);
  model.protocol = protocol;
  return model;
}

}  // namespace streid

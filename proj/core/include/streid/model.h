#pragma once

#include <vector>

#include "streid/intervals.h"
#include "streid/transitions.h"
#include "streid/types.h"

namespace streid {

// Everything fitted from one training set: the spatial (transition) and
// temporal (interval) patterns of a camera network.
struct SpatialTemporalModel {
  Topology topology;
  TransitionModel transitions;
  IntervalModel intervals;
  // Regime the model was fitted for. Every table is kept regardless, so any
  // protocol can be scored from the same model.
  Protocol protocol = Protocol::kInstanceDecoupled;
};

// Validates the observations against the topology, extracts consecutive hops
// and fits both pattern models.
SpatialTemporalModel fit_model(const std::vector<Observation>& observations,
                               const Topology& topology, double sigma,
                               double epsilon,
                               Protocol protocol = Protocol::kInstanceDecoupled);

}  // namespace streid

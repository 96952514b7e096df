#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "streid/types.h"

namespace streid {

// One hop of one identity: seen at `from` in `state`, next seen at `to`
// after `delta` seconds.
struct TransitionSample {
  CameraId from;
  StateId state;
  CameraId to;
  double delta = 0.0;

  bool operator==(const TransitionSample&) const = default;
};

// Pairs consecutive sightings of each identity (ordered by timestamp, then
// camera id, then input position). Same-camera reappearances are kept.
// Unlabeled observations and single-sighting identities contribute nothing.
// Output is grouped by identity in lexicographic identity order.
std::vector<TransitionSample> extract_transitions(
    const std::vector<Observation>& observations);

// Empirical next-camera distribution, conditioned either on (camera, state)
// or on camera alone. Probabilities are derived from integer counts with
// additive smoothing epsilon:
//   p(j | row) = (count(row -> j) + eps) / (count(row -> *) + eps * N)
class TransitionModel {
 public:
  using InstanceRow = std::pair<std::uint32_t, std::uint32_t>;  // (camera, state)
  using Counts = std::vector<std::uint64_t>;  // indexed by destination camera

  TransitionModel() = default;

  // Throws DataError on an empty sample set, ValidationError on a negative
  // or non-finite epsilon or on samples outside the topology.
  static TransitionModel fit(std::span<const TransitionSample> samples,
                             const Topology& topology, double epsilon);

  // Rebuilds a model from stored counts (deserialization).
  TransitionModel(std::size_t num_cameras, double epsilon,
                  std::map<InstanceRow, Counts> instance_counts,
                  std::map<std::uint32_t, Counts> camera_counts);

  // Total over all protocols: instance row -> camera row -> uniform 1/N.
  // Instance protocols read the (from, state) row; camera-level protocols
  // (and the visual-only baseline) read the camera row.
  double probability(CameraId from, StateId state, CameraId to,
                     Protocol protocol) const;

  // nullopt when the row was never observed.
  std::optional<double> instance_probability(CameraId from, StateId state,
                                             CameraId to) const;
  std::optional<double> camera_probability(CameraId from, CameraId to) const;

  std::size_t num_cameras() const { return num_cameras_; }
  double epsilon() const { return epsilon_; }
  const std::map<InstanceRow, Counts>& instance_counts() const {
    return instance_counts_;
  }
  const std::map<std::uint32_t, Counts>& camera_counts() const {
    return camera_counts_;
  }

 private:
  double row_probability(const Counts& row, std::uint32_t to) const;

  std::size_t num_cameras_ = 0;
  double epsilon_ = 0.0;
  std::map<InstanceRow, Counts> instance_counts_;
  std::map<std::uint32_t, Counts> camera_counts_;
};

}  // namespace streid

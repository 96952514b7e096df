#include "streid/types.h"

#include <algorithm>
#include <cmath>

namespace streid {

Topology::Topology(std::vector<std::uint32_t> state_counts)
    : state_counts_(std::move(state_counts)) {
  for (std::size_t i = 0; i < state_counts_.size(); ++i) {
    if (state_counts_[i] == 0) {
      throw ValidationError("camera " + std::to_string(i) +
                            " declares zero states");
    }
  }
}

std::uint32_t Topology::num_states(CameraId camera) const {
  if (!has_camera(camera)) {
    throw ValidationError("unknown camera id " + std::to_string(camera.value));
  }
  return state_counts_[camera.value];
}

Topology Topology::infer(const std::vector<Observation>& observations) {
  std::vector<std::uint32_t> counts;
  for (const auto& obs : observations) {
    if (obs.camera.value >= counts.size()) counts.resize(obs.camera.value + 1, 1);
    counts[obs.camera.value] =
        std::max(counts[obs.camera.value], obs.state.value + 1);
  }
  return Topology(std::move(counts));
}

std::vector<Observation> validate_observations(
    std::vector<Observation> observations, const Topology& topology) {
  for (const auto& obs : observations) {
    if (!topology.has_camera(obs.camera)) {
      throw ValidationError("observation '" + obs.observation_id +
                            "': unknown camera id " +
                            std::to_string(obs.camera.value));
    }
    const auto n = topology.num_states(obs.camera);
    if (obs.state.value >= n) {
      throw ValidationError("observation '" + obs.observation_id +
                            "': state " + std::to_string(obs.state.value) +
                            " out of range for camera " +
                            std::to_string(obs.camera.value) + " with " +
                            std::to_string(n) + " states");
    }
    if (!std::isfinite(obs.timestamp) || obs.timestamp < 0.0) {
      throw ValidationError("observation '" + obs.observation_id +
                            "': timestamp must be finite and non-negative");
    }
  }
  return observations;
}

SimilarityMatrix::SimilarityMatrix(std::vector<std::string> query_ids,
                                   std::vector<std::string> gallery_ids,
                                   std::vector<double> values)
    : query_ids_(std::move(query_ids)),
      gallery_ids_(std::move(gallery_ids)),
      values_(std::move(values)) {
  if (values_.size() != query_ids_.size() * gallery_ids_.size()) {
    throw ValidationError("similarity matrix has " +
                          std::to_string(values_.size()) + " entries, expected " +
                          std::to_string(query_ids_.size()) + "x" +
                          std::to_string(gallery_ids_.size()));
  }
  for (double v : values_) {
    if (!std::isfinite(v) || v < 0.0) {
      throw ValidationError("similarity entries must be finite and >= 0");
    }
  }
}

std::string to_string(Protocol protocol) {
  switch (protocol) {
    case Protocol::kInstanceDecoupled: return "p1";
    case Protocol::kCameraDecoupled: return "p2";
    case Protocol::kInstanceCoupled: return "p3";
    case Protocol::kCameraCoupled: return "p4";
    case Protocol::kVisualOnly: return "visual-only";
  }
  return "unknown";
}

std::string to_string(ScoreMode mode) {
  return mode == ScoreMode::kPeakScore ? "peak-score" : "normalized-density";
}

Protocol parse_protocol(const std::string& name) {
  if (name == "p1") return Protocol::kInstanceDecoupled;
  if (name == "p2") return Protocol::kCameraDecoupled;
  if (name == "p3") return Protocol::kInstanceCoupled;
  if (name == "p4") return Protocol::kCameraCoupled;
  if (name == "visual-only") return Protocol::kVisualOnly;
  throw ValidationError("unknown protocol '" + name + "'");
}

ScoreMode parse_score_mode(const std::string& name) {
  if (name == "peak-score") return ScoreMode::kPeakScore;
  if (name == "normalized-density") return ScoreMode::kNormalizedDensity;
  throw ValidationError("unknown score mode '" + name + "'");
}

}  // namespace streid

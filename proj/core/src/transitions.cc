#include "streid/transitions.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace streid {

std::vector<TransitionSample> extract_transitions(
    const std::vector<Observation>& observations) {
  std::map<std::string, std::vector<std::size_t>> by_identity;
  for (std::size_t i = 0; i < observations.size(); ++i) {
    if (observations[i].identity) {
      by_identity[*observations[i].identity].push_back(i);
    }
  }

  std::vector<TransitionSample> samples;
  for (auto& [identity, indices] : by_identity) {
    std::sort(indices.begin(), indices.end(),
              [&](std::size_t a, std::size_t b) {
                const auto& oa = observations[a];
                const auto& ob = observations[b];
                if (oa.timestamp != ob.timestamp) {
                  return oa.timestamp < ob.timestamp;
                }
                if (oa.camera != ob.camera) return oa.camera < ob.camera;
                return a < b;
              });
    for (std::size_t k = 1; k < indices.size(); ++k) {
      const auto& earlier = observations[indices[k - 1]];
      const auto& later = observations[indices[k]];
      samples.push_back({earlier.camera, earlier.state, later.camera,
                         later.timestamp - earlier.timestamp});
    }
  }
  return samples;
}

TransitionModel TransitionModel::fit(std::span<const TransitionSample> samples,
                                     const Topology& topology, double epsilon) {
  if (samples.empty()) {
    throw DataError("cannot fit a transition model from zero samples");
  }
  if (!std::isfinite(epsilon) || epsilon < 0.0) {
    throw ValidationError("smoothing epsilon must be finite and >= 0");
  }
  const std::size_t n = topology.num_cameras();
  std::map<InstanceRow, Counts> instance;
  std::map<std::uint32_t, Counts> camera;
  for (const auto& s : samples) {
    if (!topology.has_camera(s.from) || !topology.has_camera(s.to)) {
      throw ValidationError("transition sample references a camera outside "
                            "the topology");
    }
    if (s.state.value >= topology.num_states(s.from)) {
      throw ValidationError("transition sample state out of range for camera " +
                            std::to_string(s.from.value));
    }
    auto& irow = instance[{s.from.value, s.state.value}];
    if (irow.empty()) irow.assign(n, 0);
    ++irow[s.to.value];
    auto& crow = camera[s.from.value];
    if (crow.empty()) crow.assign(n, 0);
    ++crow[s.to.value];
  }
  return TransitionModel(n, epsilon, std::move(instance), std::move(camera));
}

TransitionModel::TransitionModel(std::size_t num_cameras, double epsilon,
                                 std::map<InstanceRow, Counts> instance_counts,
                                 std::map<std::uint32_t, Counts> camera_counts)
    : num_cameras_(num_cameras),
      epsilon_(epsilon),
      instance_counts_(std::move(instance_counts)),
      camera_counts_(std::move(camera_counts)) {
  if (!std::isfinite(epsilon_) || epsilon_ < 0.0) {
    throw ValidationError("smoothing epsilon must be finite and >= 0");
  }
  auto check = [&](const Counts& row) {
    if (row.size() != num_cameras_) {
      throw DataError("transition count row has " + std::to_string(row.size()) +
                      " entries, expected " + std::to_string(num_cameras_));
    }
    if (std::accumulate(row.begin(), row.end(), std::uint64_t{0}) == 0) {
      throw DataError("transition count row is empty");
    }
  };
  for (const auto& [key, row] : instance_counts_) check(row);
  for (const auto& [key, row] : camera_counts_) check(row);
}

double TransitionModel::row_probability(const Counts& row,
                                        std::uint32_t to) const {
  if (to >= row.size()) return 0.0;
  const auto total = std::accumulate(row.begin(), row.end(), std::uint64_t{0});
  return (static_cast<double>(row[to]) + epsilon_) /
         (static_cast<double>(total) +
          epsilon_ * static_cast<double>(num_cameras_));
}

std::optional<double> TransitionModel::instance_probability(
    CameraId from, StateId state, CameraId to) const {
  auto it = instance_counts_.find({from.value, state.value});
  if (it == instance_counts_.end()) return std::nullopt;
  return row_probability(it->second, to.value);
}

std::optional<double> TransitionModel::camera_probability(CameraId from,
                                                          CameraId to) const {
  auto it = camera_counts_.find(from.value);
  if (it == camera_counts_.end()) return std::nullopt;
  return row_probability(it->second, to.value);
}

double TransitionModel::probability(CameraId from, StateId state, CameraId to,
                                    Protocol protocol) const {
  if (uses_instance_state(protocol)) {
    if (auto p = instance_probability(from, state, to)) return *p;
  }
  if (auto p = camera_probability(from, to)) return *p;
  return num_cameras_ == 0 ? 0.0 : 1.0 / static_cast<double>(num_cameras_);
}

}  // namespace streid

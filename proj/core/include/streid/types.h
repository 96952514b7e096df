#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace streid {

// Raised when inputs violate a precondition (bad flag, bad config, bad topology).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised when input data cannot be parsed or is inconsistent with other inputs.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CameraId {
  std::uint32_t value = 0;
  auto operator<=>(const CameraId&) const = default;
};

struct StateId {
  std::uint32_t value = 0;
  auto operator<=>(const StateId&) const = default;
};

// One sighting of a pedestrian. `identity` is empty for unlabeled gallery
// entries.
struct Observation {
  std::string observation_id;
  std::optional<std::string> identity;
  CameraId camera;
  double timestamp = 0.0;
  StateId state;

  bool operator==(const Observation&) const = default;
};

// Camera network layout: number of direction states for each camera index.
class Topology {
 public:
  Topology() = default;
  explicit Topology(std::vector<std::uint32_t> state_counts);

  std::size_t num_cameras() const { return state_counts_.size(); }
  std::uint32_t num_states(CameraId camera) const;
  bool has_camera(CameraId camera) const {
    return camera.value < state_counts_.size();
  }
  const std::vector<std::uint32_t>& state_counts() const {
    return state_counts_;
  }

  // Smallest topology covering every camera and state referenced.
  static Topology infer(const std::vector<Observation>& observations);

  bool operator==(const Topology&) const = default;

 private:
  std::vector<std::uint32_t> state_counts_;
};

// Checks camera, state and timestamp of every observation. Returns the input
// unchanged on success; throws ValidationError naming the offending
// observation otherwise.
std::vector<Observation> validate_observations(
    std::vector<Observation> observations, const Topology& topology);

// Visual similarity between each query (row) and gallery entry (column).
class SimilarityMatrix {
 public:
  SimilarityMatrix() = default;
  // Throws ValidationError when dimensions disagree or an entry is not a
  // finite non-negative number.
  SimilarityMatrix(std::vector<std::string> query_ids,
                   std::vector<std::string> gallery_ids,
                   std::vector<double> values);

  std::size_t rows() const { return query_ids_.size(); }
  std::size_t cols() const { return gallery_ids_.size(); }
  double at(std::size_t q, std::size_t g) const { return values_[q * cols() + g]; }
  std::span<const double> row(std::size_t q) const {
    return std::span<const double>(values_).subspan(q * cols(), cols());
  }
  const std::vector<std::string>& query_ids() const { return query_ids_; }
  const std::vector<std::string>& gallery_ids() const { return gallery_ids_; }
  const std::vector<double>& values() const { return values_; }

  bool operator==(const SimilarityMatrix&) const = default;

 private:
  std::vector<std::string> query_ids_;
  std::vector<std::string> gallery_ids_;
  std::vector<double> values_;  // row-major
};

// The four fitting/fusion regimes plus the visual-only baseline.
enum class Protocol {
  kInstanceDecoupled,  // p1
  kCameraDecoupled,    // p2
  kInstanceCoupled,    // p3
  kCameraCoupled,      // p4
  kVisualOnly,
};

// How interval kernel sums are scaled.
enum class ScoreMode {
  kPeakScore,          // unnormalized Gaussian, values in [0, 1]
  kNormalizedDensity,  // proper density, integrates to 1 when decoupled
};

inline bool uses_instance_state(Protocol p) {
  return p == Protocol::kInstanceDecoupled || p == Protocol::kInstanceCoupled;
}

inline bool is_coupled(Protocol p) {
  return p == Protocol::kInstanceCoupled || p == Protocol::kCameraCoupled;
}

std::string to_string(Protocol protocol);
std::string to_string(ScoreMode mode);
// Throws ValidationError for unknown names.
Protocol parse_protocol(const std::string& name);
ScoreMode parse_score_mode(const std::string& name);

}  // namespace streid

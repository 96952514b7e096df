#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <tuple>
#include <utility>
#include <vector>

#include "streid/transitions.h"
#include "streid/types.h"

namespace streid {

inline constexpr double kDefaultBandwidth = 100.0;

// Parzen-window (Gaussian kernel) model of travel-time intervals, kept per
// (camera, state, camera) and per (camera, camera). Each key stores its
// sorted interval samples; the sample count is the decoupled normalizer and
// the largest count over all keys of the same granularity is the coupled
// normalizer shared by every curve.
class IntervalModel {
 public:
  using InstanceKey = std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>;
  using CameraKey = std::pair<std::uint32_t, std::uint32_t>;

  IntervalModel() = default;

  // Throws ValidationError unless sigma is finite and > 0, or if a sample
  // carries a negative or non-finite delta.
  static IntervalModel fit(std::span<const TransitionSample> samples,
                           double sigma);

  // Rebuilds a model from stored sample lists. Lists are sorted on entry.
  IntervalModel(double sigma, std::map<InstanceKey, std::vector<double>> instance,
                std::map<CameraKey, std::vector<double>> camera);

  // Temporal score for a hop of `delta` seconds from (from, state) to `to`.
  // Instance protocols read the (from, state, to) samples when the
  // (from, state) row was observed at all, else fall back to (from, to);
  // a row with no samples toward `to` scores 0. Coupled protocols divide by
  // the shared maximum count instead of the key's own count.
  double score(CameraId from, StateId state, CameraId to, double delta,
               Protocol protocol, ScoreMode mode) const;

  // Kernel sum over `samples` divided by `normalizer`, further divided by
  // sigma * sqrt(2 pi) in normalized-density mode. Zero for empty input.
  double evaluate(std::span<const double> samples, std::size_t normalizer,
                  double delta, ScoreMode mode) const;

  // Sum of exp(-(d - delta)^2 / (2 sigma^2)) over `samples` (sorted), in
  // ascending sample order.
  double kernel_sum(std::span<const double> samples, double delta) const;

  double sigma() const { return sigma_; }
  std::size_t max_instance_count() const { return max_instance_count_; }
  std::size_t max_camera_count() const { return max_camera_count_; }

  // Empty span when the key is absent.
  std::span<const double> instance_samples(CameraId from, StateId state,
                                           CameraId to) const;
  std::span<const double> camera_samples(CameraId from, CameraId to) const;

  const std::map<InstanceKey, std::vector<double>>& instance() const {
    return instance_;
  }
  const std::map<CameraKey, std::vector<double>>& camera() const {
    return camera_;
  }

 private:
  bool instance_row_observed(std::uint32_t from, std::uint32_t state) const;
  bool camera_row_observed(std::uint32_t from) const;

  double sigma_ = kDefaultBandwidth;
  std::map<InstanceKey, std::vector<double>> instance_;
  std::map<CameraKey, std::vector<double>> camera_;
  std::size_t max_instance_count_ = 0;
  std::size_t max_camera_count_ = 0;
};

}  // namespace streid

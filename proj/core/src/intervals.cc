#include "streid/intervals.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace streid {
namespace {

// Beyond this many bandwidths exp(-x^2/2) underflows to exactly 0.0, so
// skipping those samples leaves the sum bit-identical.
constexpr double kKernelSupport = 39.0;

void check_sigma(double sigma) {
  if (!std::isfinite(sigma) || sigma <= 0.0) {
    throw ValidationError("kernel bandwidth sigma must be finite and > 0");
  }
}

void check_deltas(const std::vector<double>& deltas) {
  for (double d : deltas) {
    if (!std::isfinite(d) || d < 0.0) {
      throw ValidationError("interval samples must be finite and >= 0");
    }
  }
}

}  // namespace

IntervalModel IntervalModel::fit(std::span<const TransitionSample> samples,
                                 double sigma) {
  check_sigma(sigma);
  std::map<InstanceKey, std::vector<double>> instance;
  std::map<CameraKey, std::vector<double>> camera;
  for (const auto& s : samples) {
    instance[{s.from.value, s.state.value, s.to.value}].push_back(s.delta);
    camera[{s.from.value, s.to.value}].push_back(s.delta);
  }
  return IntervalModel(sigma, std::move(instance), std::move(camera));
}

IntervalModel::IntervalModel(
    double sigma, std::map<InstanceKey, std::vector<double>> instance,
    std::map<CameraKey, std::vector<double>> camera)
    : sigma_(sigma), instance_(std::move(instance)), camera_(std::move(camera)) {
  check_sigma(sigma_);
  for (auto& [key, deltas] : instance_) {
    check_deltas(deltas);
    std::sort(deltas.begin(), deltas.end());
    max_instance_count_ = std::max(max_instance_count_, deltas.size());
  }
  for (auto& [key, deltas] : camera_) {
    check_deltas(deltas);
    std::sort(deltas.begin(), deltas.end());
    max_camera_count_ = std::max(max_camera_count_, deltas.size());
  }
  std::erase_if(instance_, [](const auto& kv) { return kv.second.empty(); });
  std::erase_if(camera_, [](const auto& kv) { return kv.second.empty(); });
}

double IntervalModel::kernel_sum(std::span<const double> samples,
                                 double delta) const {
  const double reach = kKernelSupport * sigma_;
  auto first = std::lower_bound(samples.begin(), samples.end(), delta - reach);
  auto last = std::upper_bound(first, samples.end(), delta + reach);
  const double inv_two_var = 1.0 / (2.0 * sigma_ * sigma_);
  double sum = 0.0;
  for (auto it = first; it != last; ++it) {
    const double d = *it - delta;
    sum += std::exp(-d * d * inv_two_var);
  }
  return sum;
}

std::span<const double> IntervalModel::instance_samples(CameraId from,
                                                        StateId state,
                                                        CameraId to) const {
  auto it = instance_.find({from.value, state.value, to.value});
  if (it == instance_.end()) return {};
  return it->second;
}

std::span<const double> IntervalModel::camera_samples(CameraId from,
                                                      CameraId to) const {
  auto it = camera_.find({from.value, to.value});
  if (it == camera_.end()) return {};
  return it->second;
}

bool IntervalModel::instance_row_observed(std::uint32_t from,
                                          std::uint32_t state) const {
  auto it = instance_.lower_bound({from, state, 0});
  return it != instance_.end() && std::get<0>(it->first) == from &&
         std::get<1>(it->first) == state;
}

bool IntervalModel::camera_row_observed(std::uint32_t from) const {
  auto it = camera_.lower_bound({from, 0});
  return it != camera_.end() && it->first.first == from;
}

double IntervalModel::score(CameraId from, StateId state, CameraId to,
                            double delta, Protocol protocol,
                            ScoreMode mode) const {
  if (!std::isfinite(delta)) return 0.0;
  const bool coupled = is_coupled(protocol);
  std::span<const double> samples;
  std::size_t normalizer = 0;
  if (uses_instance_state(protocol) &&
      instance_row_observed(from.value, state.value)) {
    samples = instance_samples(from, state, to);
    normalizer = coupled ? max_instance_count_ : samples.size();
  } else if (camera_row_observed(from.value)) {
    samples = camera_samples(from, to);
    normalizer = coupled ? max_camera_count_ : samples.size();
  }
  return evaluate(samples, normalizer, delta, mode);
}

double IntervalModel::evaluate(std::span<const double> samples,
                               std::size_t normalizer, double delta,
                               ScoreMode mode) const {
  if (samples.empty() || normalizer == 0) return 0.0;
  double value = kernel_sum(samples, delta) / static_cast<double>(normalizer);
  if (mode == ScoreMode::kNormalizedDensity) {
    value /= sigma_ * std::sqrt(2.0 * std::numbers::pi);
  }
  return value;
}

}  // namespace streid

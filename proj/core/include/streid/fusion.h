#pragma once

#include <span>
#include <string>
#include <vector>

#include "streid/model.h"
#include "streid/types.h"

namespace streid {

inline constexpr double kDefaultAlpha = 0.15;
inline constexpr double kDefaultBeta = 1.0;

struct FusionParams {
  double alpha = kDefaultAlpha;  // spatial scale
  double beta = kDefaultBeta;    // temporal scale

  // Throws ValidationError unless both scales are finite and >= 0.
  void validate() const;
};

// Sigmoid fusion of decoupled spatial and temporal evidence. Lies in
// [0.5, 1) for non-negative inputs.
double fuse(double p_spa, double p_tem, const FusionParams& params);

// Sigmoid of a single coupled spatial-temporal score.
double fuse_coupled(double p_st, double beta);

// Visual similarity scaled by the spatial-temporal factor.
inline double joint_score(double similarity, double st_factor) {
  return similarity * st_factor;
}

struct StScore {
  double p_spa = 0.0;
  double p_tem = 0.0;
  double fused = 1.0;
};

// Scores a query/gallery pair. The earlier sighting (ties: lower camera id,
// then the query) supplies the source camera and the conditioning state;
// the interval is the absolute time difference. Coupled protocols report the
// coupled score in both p_spa and p_tem. Visual-only returns fused = 1.
StScore st_probability(const Observation& query, const Observation& gallery,
                       const SpatialTemporalModel& model, Protocol protocol,
                       const FusionParams& params,
                       ScoreMode mode = ScoreMode::kPeakScore);

struct RankedEntry {
  std::size_t gallery_index = 0;
  std::string gallery_id;
  double similarity = 0.0;
  double p_spa = 0.0;
  double p_tem = 0.0;
  double fused = 1.0;
  double joint = 0.0;
};

struct RankedList {
  std::string query_id;
  std::vector<RankedEntry> entries;  // joint desc, gallery index asc on ties
};

// Throws ValidationError when the similarity row and gallery disagree in
// length.
RankedList rank_gallery(const Observation& query,
                        std::span<const Observation> gallery,
                        std::span<const double> similarity_row,
                        const SpatialTemporalModel& model, Protocol protocol,
                        const FusionParams& params,
                        ScoreMode mode = ScoreMode::kPeakScore);

// Ranks every query row of `similarity`. Queries and gallery must be listed in
// the matrix's row and column order.
std::vector<RankedList> rank_all(std::span<const Observation> queries,
                                 std::span<const Observation> gallery,
                                 const SimilarityMatrix& similarity,
                                 const SpatialTemporalModel& model,
                                 Protocol protocol, const FusionParams& params,
                                 ScoreMode mode = ScoreMode::kPeakScore);

}  // namespace streid

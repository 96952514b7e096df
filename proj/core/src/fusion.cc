#include "streid/fusion.h"

#include <algorithm>
#include <cmath>

namespace streid {

void FusionParams::validate() const {
  if (!std::isfinite(alpha) || alpha < 0.0) {
    throw ValidationError("alpha must be finite and >= 0");
  }
  if (!std::isfinite(beta) || beta < 0.0) {
    throw ValidationError("beta must be finite and >= 0");
  }
}

double fuse(double p_spa, double p_tem, const FusionParams& params) {
  return 1.0 / (1.0 + std::exp(-(params.alpha * p_spa + params.beta * p_tem)));
}

double fuse_coupled(double p_st, double beta) {
  return 1.0 / (1.0 + std::exp(-beta * p_st));
}

StScore st_probability(const Observation& query, const Observation& gallery,
                       const SpatialTemporalModel& model, Protocol protocol,
                       const FusionParams& params, ScoreMode mode) {
  if (protocol == Protocol::kVisualOnly) return {0.0, 0.0, 1.0};

  bool query_first = true;
  if (gallery.timestamp < query.timestamp) {
    query_first = false;
  } else if (gallery.timestamp == query.timestamp &&
             gallery.camera < query.camera) {
    query_first = false;
  }
  const Observation& earlier = query_first ? query : gallery;
  const Observation& later = query_first ? gallery : query;
  const double delta = later.timestamp - earlier.timestamp;

  const double p_tem = std::clamp(
      model.intervals.score(earlier.camera, earlier.state, later.camera, delta,
                            protocol, mode),
      0.0, 1.0);
  if (is_coupled(protocol)) {
    return {p_tem, p_tem, fuse_coupled(p_tem, params.beta)};
  }
  const double p_spa = model.transitions.probability(
      earlier.camera, earlier.state, later.camera, protocol);
  return {p_spa, p_tem, fuse(p_spa, p_tem, params)};
}

RankedList rank_gallery(const Observation& query,
                        std::span<const Observation> gallery,
                        std::span<const double> similarity_row,
                        const SpatialTemporalModel& model, Protocol protocol,
                        const FusionParams& params, ScoreMode mode) {
  if (similarity_row.size() != gallery.size()) {
    throw ValidationError("similarity row for query '" + query.observation_id +
                          "' has " + std::to_string(similarity_row.size()) +
                          " entries but the gallery has " +
                          std::to_string(gallery.size()));
  }
  RankedList list;
  list.query_id = query.observation_id;
  list.entries.reserve(gallery.size());
  for (std::size_t g = 0; g < gallery.size(); ++g) {
    const auto st =
        st_probability(query, gallery[g], model, protocol, params, mode);
    RankedEntry e;
    e.gallery_index = g;
    e.gallery_id = gallery[g].observation_id;
    e.similarity = similarity_row[g];
    e.p_spa = st.p_spa;
    e.p_tem = st.p_tem;
    e.fused = st.fused;
    e.joint = joint_score(e.similarity, e.fused);
    list.entries.push_back(std::move(e));
  }
  std::sort(list.entries.begin(), list.entries.end(),
            [](const RankedEntry& a, const RankedEntry& b) {
              if (a.joint != b.joint) return a.joint > b.joint;
              return a.gallery_index < b.gallery_index;
            });
  return list;
}

std::vector<RankedList> rank_all(std::span<const Observation> queries,
                                 std::span<const Observation> gallery,
                                 const SimilarityMatrix& similarity,
                                 const SpatialTemporalModel& model,
                                 Protocol protocol, const FusionParams& params,
                                 ScoreMode mode) {
  params.validate();
  if (queries.size() != similarity.rows() ||
      gallery.size() != similarity.cols()) {
    throw DataError("similarity matrix is " + std::to_string(similarity.rows()) +
                    "x" + std::to_string(similarity.cols()) + " but metadata has " +
                    std::to_string(queries.size()) + " queries and " +
                    std::to_string(gallery.size()) + " gallery entries");
  }
  for (std::size_t q = 0; q < queries.size(); ++q) {
    if (queries[q].observation_id != similarity.query_ids()[q]) {
      throw DataError("query order mismatch at row " + std::to_string(q));
    }
  }
  for (std::size_t g = 0; g < gallery.size(); ++g) {
    if (gallery[g].observation_id != similarity.gallery_ids()[g]) {
      throw DataError("gallery order mismatch at column " + std::to_string(g));
    }
  }
  std::vector<RankedList> out;
  out.reserve(queries.size());
  for (std::size_t q = 0; q < queries.size(); ++q) {
    out.push_back(rank_gallery(queries[q], gallery, similarity.row(q), model,
                               protocol, params, mode));
  }
  return out;
}

}  // namespace streid

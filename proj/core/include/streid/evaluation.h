#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "streid/fusion.h"
#include "streid/types.h"

namespace streid {

using Relevance = std::vector<std::uint8_t>;

// Marks each ranked gallery entry 1 if it shares the query's identity.
// Entries with the query's identity seen by the query's own camera are
// dropped (junk), so the result can be shorter than the input. Unlabeled
// gallery entries count as negatives. Throws DataError if the query is
// unlabeled.
Relevance relevance_vector(const Observation& query,
                           std::span<const Observation* const> ranked_gallery);

inline bool has_positive(std::span<const std::uint8_t> relevance) {
  for (auto r : relevance) {
    if (r) return true;
  }
  return false;
}

// Mean of precision@k over the ranks k holding a positive. Throws
// ValidationError when there are no positives.
double average_precision(std::span<const std::uint8_t> relevance);

// Throws DataError when `aps` is empty.
double mean_average_precision(std::span<const double> aps);

// Fraction of queries whose first positive sits at rank <= k. Queries
// without positives are left out of the denominator; with no usable query
// every accuracy is 0. Throws ValidationError on a non-positive k.
std::map<int, double> cmc(std::span<const Relevance> relevances,
                          std::span<const int> ks);

struct QueryAp {
  std::string query_id;
  double ap = 0.0;
};

struct EvalReport {
  double mean_ap = 0.0;
  std::map<int, double> cmc;
  std::vector<QueryAp> per_query;         // queries with >= 1 positive
  std::vector<std::string> skipped_queries;  // no cross-camera positive
};

// A ranking as read back from disk: gallery ids, best first.
struct RankingRecord {
  std::string query_id;
  std::vector<std::string> gallery_ids;
};

inline const std::vector<int> kDefaultCmcRanks = {1, 5, 10};

// Resolves ids against the labeled metadata and scores every ranking.
// Throws DataError on unknown ids or when no query has a positive.
EvalReport evaluate(std::span<const RankingRecord> rankings,
                    std::span<const Observation> queries,
                    std::span<const Observation> gallery,
                    std::span<const int> ks = kDefaultCmcRanks);

EvalReport evaluate(std::span<const RankedList> rankings,
                    std::span<const Observation> queries,
                    std::span<const Observation> gallery,
                    std::span<const int> ks = kDefaultCmcRanks);

}  // namespace streid

#include "streid/evaluation.h"

#include <unordered_map>

namespace streid {

Relevance relevance_vector(const Observation& query,
                           std::span<const Observation* const> ranked_gallery) {
  if (!query.identity) {
    throw DataError("query '" + query.observation_id + "' has no identity");
  }
  Relevance out;
  out.reserve(ranked_gallery.size());
  for (const Observation* g : ranked_gallery) {
    const bool same_identity = g->identity && *g->identity == *query.identity;
    if (same_identity && g->camera == query.camera) continue;
    out.push_back(same_identity ? 1 : 0);
  }
  return out;
}

double average_precision(std::span<const std::uint8_t> relevance) {
  double sum = 0.0;
  std::size_t hits = 0;
  for (std::size_t k = 0; k < relevance.size(); ++k) {
    if (relevance[k]) {
      ++hits;
      sum += static_cast<double>(hits) / static_cast<double>(k + 1);
    }
  }
  if (hits == 0) {
    throw ValidationError("average precision needs at least one positive");
  }
  return sum / static_cast<double>(hits);
}

double mean_average_precision(std::span<const double> aps) {
  if (aps.empty()) throw DataError("no query with a positive match");
  double sum = 0.0;
  for (double ap : aps) sum += ap;
  return sum / static_cast<double>(aps.size());
}

std::map<int, double> cmc(std::span<const Relevance> relevances,
                          std::span<const int> ks) {
  std::map<int, double> out;
  for (int k : ks) {
    if (k <= 0) throw ValidationError("CMC ranks must be positive");
    out[k] = 0.0;
  }
  std::size_t valid = 0;
  std::vector<std::size_t> first_hits;
  for (const auto& rel : relevances) {
    for (std::size_t r = 0; r < rel.size(); ++r) {
      if (rel[r]) {
        first_hits.push_back(r + 1);
        ++valid;
        break;
      }
    }
  }
  if (valid == 0) return out;
  for (auto& [k, acc] : out) {
    std::size_t within = 0;
    for (auto hit : first_hits) {
      if (hit <= static_cast<std::size_t>(k)) ++within;
    }
    acc = static_cast<double>(within) / static_cast<double>(valid);
  }
  return out;
}

EvalReport evaluate(std::span<const RankingRecord> rankings,
                    std::span<const Observation> queries,
                    std::span<const Observation> gallery,
                    std::span<const int> ks) {
  std::unordered_map<std::string, const Observation*> query_by_id;
  std::unordered_map<std::string, const Observation*> gallery_by_id;
  for (const auto& q : queries) query_by_id[q.observation_id] = &q;
  for (const auto& g : gallery) gallery_by_id[g.observation_id] = &g;

  EvalReport report;
  std::vector<Relevance> relevances;
  std::vector<double> aps;
  std::vector<const Observation*> ranked;
  for (const auto& record : rankings) {
    auto qit = query_by_id.find(record.query_id);
    if (qit == query_by_id.end()) {
      throw DataError("ranking references unknown query '" + record.query_id +
                      "'");
    }
    ranked.clear();
    for (const auto& gid : record.gallery_ids) {
      auto git = gallery_by_id.find(gid);
      if (git == gallery_by_id.end()) {
        throw DataError("ranking for query '" + record.query_id +
                        "' references unknown gallery id '" + gid + "'");
      }
      ranked.push_back(git->second);
    }
    auto rel = relevance_vector(*qit->second, ranked);
    if (!has_positive(rel)) {
      report.skipped_queries.push_back(record.query_id);
      continue;
    }
    const double ap = average_precision(rel);
    aps.push_back(ap);
    report.per_query.push_back({record.query_id, ap});
    relevances.push_back(std::move(rel));
  }
  report.mean_ap = mean_average_precision(aps);
  report.cmc = cmc(relevances, ks);
  return report;
}

EvalReport evaluate(std::span<const RankedList> rankings,
                    std::span<const Observation> queries,
                    std::span<const Observation> gallery,
                    std::span<const int> ks) {
  std::vector<RankingRecord> records;
  records.reserve(rankings.size());
  for (const auto& list : rankings) {
    RankingRecord r{list.query_id, {}};
    r.gallery_ids.reserve(list.entries.size());
    for (const auto& e : list.entries) r.gallery_ids.push_back(e.gallery_id);
    records.push_back(std::move(r));
  }
  return evaluate(records, queries, gallery, ks);
}

}  // namespace streid

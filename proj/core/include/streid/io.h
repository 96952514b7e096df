#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "streid/evaluation.h"
#include "streid/fusion.h"
#include "streid/model.h"
#include "streid/simulator.h"
#include "streid/types.h"

namespace streid::io {

// All readers throw DataError with a 1-based line number on malformed input.
// Fields are parsed strictly: trailing garbage, empty numbers and
// out-of-range values are rejected.

// Header: observation_id,identity,camera,timestamp,state
std::vector<Observation> read_observations(std::istream& in);
void write_observations(std::ostream& out, const std::vector<Observation>& obs);

// Header: camera,states
Topology read_topology(std::istream& in);
void write_topology(std::ostream& out, const Topology& topology);

// First row: corner label then gallery ids; following rows: query id then
// one score per gallery column.
SimilarityMatrix read_similarity(std::istream& in);
void write_similarity(std::ostream& out, const SimilarityMatrix& matrix);

// Header: query_id,rank,gallery_id,S,p_spa,p_tem,P,joint
void write_rankings(std::ostream& out, const std::vector<RankedList>& rankings);
std::vector<RankingRecord> read_rankings(std::istream& in);

// Plain `key: value` lines: queries, skipped, mAP, CMC@k.
void write_eval_report(std::ostream& out, const EvalReport& report);
// Header: query_id,ap
void write_per_query_ap(std::ostream& out, const EvalReport& report);

// JSON document; interval samples and all reals round-trip bit-exactly.
std::string model_to_json(const SpatialTemporalModel& model);
SpatialTemporalModel model_from_json(const std::string& text);

std::string scenario_config_to_json(const ScenarioConfig& config);
// Field errors surface as ValidationError carrying the field path.
ScenarioConfig scenario_config_from_json(const std::string& text);

// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace streid::io

#include "streid/io.h"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include <nlohmann/json.hpp>

namespace streid::io {
namespace {

using nlohmann::json;

constexpr const char* kObservationHeader =
    "observation_id,identity,camera,timestamp,state";
constexpr const char* kTopologyHeader = "camera,states";
constexpr const char* kRankingHeader =
    "query_id,rank,gallery_id,S,p_spa,p_tem,P,joint";
constexpr const char* kModelFormat = "streid-model";
constexpr int kModelVersion = 1;

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  throw DataError("line " + std::to_string(line) + ": " + what);
}

// Splits on commas; quoting is not supported, so fields may not contain ','.
std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto pos = line.find(',', start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

bool next_line(std::istream& in, std::string& line, std::size_t& number) {
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) return true;
  }
  return false;
}

template <typename T>
T parse_integer(const std::string& field, std::size_t line, const char* name) {
  T value{};
  const auto* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (field.empty() || ec != std::errc() || ptr != end) {
    fail(line, std::string("invalid ") + name + " '" + field + "'");
  }
  return value;
}

double parse_real(const std::string& field, std::size_t line, const char* name) {
  double value = 0.0;
  const auto* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (field.empty() || ec != std::errc() || ptr != end) {
    fail(line, std::string("invalid ") + name + " '" + field + "'");
  }
  return value;
}

void expect_header(std::istream& in, std::size_t& number, const char* header) {
  std::string line;
  if (!next_line(in, line, number)) fail(number + 1, "missing header");
  if (line != header) {
    fail(number, "expected header '" + std::string(header) + "', got '" + line + "'");
  }
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

std::vector<Observation> read_observations(std::istream& in) {
  std::size_t number = 0;
  expect_header(in, number, kObservationHeader);
  std::vector<Observation> out;
  std::unordered_set<std::string> seen;
  std::string line;
  while (next_line(in, line, number)) {
    auto f = split_fields(line);
    if (f.size() != 5) {
      fail(number, "expected 5 fields, got " + std::to_string(f.size()));
    }
    if (f[0].empty()) fail(number, "empty observation_id");
    if (!seen.insert(f[0]).second) {
      fail(number, "duplicate observation_id '" + f[0] + "'");
    }
    Observation obs;
    obs.observation_id = f[0];
    if (!f[1].empty()) obs.identity = f[1];
    obs.camera = CameraId{parse_integer<std::uint32_t>(f[2], number, "camera")};
    obs.timestamp = parse_real(f[3], number, "timestamp");
    if (!std::isfinite(obs.timestamp) || obs.timestamp < 0.0) {
      fail(number, "timestamp must be finite and >= 0");
    }
    obs.state = StateId{parse_integer<std::uint32_t>(f[4], number, "state")};
    out.push_back(std::move(obs));
  }
  return out;
}

void write_observations(std::ostream& out, const std::vector<Observation>& obs) {
  out << kObservationHeader << '\n';
  for (const auto& o : obs) {
    out << o.observation_id << ',' << o.identity.value_or("") << ','
        << o.camera.value << ',' << format_double(o.timestamp) << ','
        << o.state.value << '\n';
  }
}

Topology read_topology(std::istream& in) {
  std::size_t number = 0;
  expect_header(in, number, kTopologyHeader);
  std::vector<std::uint32_t> counts;
  std::string line;
  while (next_line(in, line, number)) {
    auto f = split_fields(line);
    if (f.size() != 2) fail(number, "expected 2 fields");
    const auto camera = parse_integer<std::uint32_t>(f[0], number, "camera");
    const auto states = parse_integer<std::uint32_t>(f[1], number, "states");
    if (camera != counts.size()) {
      fail(number, "cameras must be listed in order starting at 0");
    }
    if (states == 0) fail(number, "camera needs at least one state");
    counts.push_back(states);
  }
  return Topology(std::move(counts));
}

void write_topology(std::ostream& out, const Topology& topology) {
  out << kTopologyHeader << '\n';
  for (std::size_t i = 0; i < topology.num_cameras(); ++i) {
    out << i << ',' << topology.state_counts()[i] << '\n';
  }
}

SimilarityMatrix read_similarity(std::istream& in) {
  std::size_t number = 0;
  std::string line;
  if (!next_line(in, line, number)) fail(1, "missing gallery id row");
  auto header = split_fields(line);
  std::vector<std::string> gallery(header.begin() + 1, header.end());
  std::vector<std::string> queries;
  std::vector<double> values;
  while (next_line(in, line, number)) {
    auto f = split_fields(line);
    if (f.size() != gallery.size() + 1) {
      fail(number, "expected " + std::to_string(gallery.size() + 1) +
                       " fields, got " + std::to_string(f.size()));
    }
    queries.push_back(f[0]);
    for (std::size_t c = 1; c < f.size(); ++c) {
      const double v = parse_real(f[c], number, "similarity");
      if (!std::isfinite(v) || v < 0.0) {
        fail(number, "similarity must be finite and >= 0");
      }
      values.push_back(v);
    }
  }
  return SimilarityMatrix(std::move(queries), std::move(gallery), std::move(values));
}

void write_similarity(std::ostream& out, const SimilarityMatrix& matrix) {
  out << "query_id";
  for (const auto& g : matrix.gallery_ids()) out << ',' << g;
  out << '\n';
  for (std::size_t q = 0; q < matrix.rows(); ++q) {
    out << matrix.query_ids()[q];
    for (double v : matrix.row(q)) out << ',' << format_double(v);
    out << '\n';
  }
}

void write_rankings(std::ostream& out, const std::vector<RankedList>& rankings) {
  out << kRankingHeader << '\n';
  for (const auto& list : rankings) {
    std::size_t rank = 1;
    for (const auto& e : list.entries) {
      out << list.query_id << ',' << rank++ << ',' << e.gallery_id << ','
          << format_double(e.similarity) << ',' << format_double(e.p_spa) << ','
          << format_double(e.p_tem) << ',' << format_double(e.fused) << ','
          << format_double(e.joint) << '\n';
    }
  }
}

std::vector<RankingRecord> read_rankings(std::istream& in) {
  std::size_t number = 0;
  expect_header(in, number, kRankingHeader);
  std::vector<RankingRecord> out;
  std::unordered_set<std::string> finished;
  std::string line;
  while (next_line(in, line, number)) {
    auto f = split_fields(line);
    if (f.size() != 8) fail(number, "expected 8 fields, got " + std::to_string(f.size()));
    const auto rank = parse_integer<std::size_t>(f[1], number, "rank");
    for (std::size_t c = 3; c < 8; ++c) parse_real(f[c], number, "score");
    if (out.empty() || out.back().query_id != f[0]) {
      if (!out.empty()) finished.insert(out.back().query_id);
      if (finished.contains(f[0])) {
        fail(number, "rows for query '" + f[0] + "' are not contiguous");
      }
      out.push_back({f[0], {}});
    }
    auto& record = out.back();
    if (rank != record.gallery_ids.size() + 1) {
      fail(number, "expected rank " + std::to_string(record.gallery_ids.size() + 1));
    }
    record.gallery_ids.push_back(f[2]);
  }
  return out;
}

void write_eval_report(std::ostream& out, const EvalReport& report) {
  char buf[64];
  auto fixed = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return std::string(buf);
  };
  out << "queries: " << report.per_query.size() << '\n';
  out << "skipped: " << report.skipped_queries.size() << '\n';
  out << "mAP: " << fixed(report.mean_ap) << '\n';
  for (const auto& [k, acc] : report.cmc) {
    out << "CMC@" << k << ": " << fixed(acc) << '\n';
  }
}

void write_per_query_ap(std::ostream& out, const EvalReport& report) {
  out << "query_id,ap\n";
  for (const auto& q : report.per_query) {
    out << q.query_id << ',' << format_double(q.ap) << '\n';
  }
}

std::string model_to_json(const SpatialTemporalModel& model) {
  json doc;
  doc["format"] = kModelFormat;
  doc["version"] = kModelVersion;
  doc["sigma"] = model.intervals.sigma();
  doc["epsilon"] = model.transitions.epsilon();
  doc["protocol"] = to_string(model.protocol);
  doc["state_counts"] = model.topology.state_counts();

  json instance_rows = json::array();
  for (const auto& [key, counts] : model.transitions.instance_counts()) {
    instance_rows.push_back(
        {{"camera", key.first}, {"state", key.second}, {"counts", counts}});
  }
  json camera_rows = json::array();
  for (const auto& [camera, counts] : model.transitions.camera_counts()) {
    camera_rows.push_back({{"camera", camera}, {"counts", counts}});
  }
  doc["transitions"] = {{"instance", instance_rows}, {"camera", camera_rows}};

  json instance_sets = json::array();
  for (const auto& [key, deltas] : model.intervals.instance()) {
    const auto [from, state, to] = key;
    instance_sets.push_back(
        {{"from", from}, {"state", state}, {"to", to}, {"deltas", deltas}});
  }
  json camera_sets = json::array();
  for (const auto& [key, deltas] : model.intervals.camera()) {
    camera_sets.push_back(
        {{"from", key.first}, {"to", key.second}, {"deltas", deltas}});
  }
  doc["intervals"] = {{"instance", instance_sets},
                      {"camera", camera_sets},
                      {"max_instance_count", model.intervals.max_instance_count()},
                      {"max_camera_count", model.intervals.max_camera_count()}};
  return doc.dump(1) + "\n";
}

SpatialTemporalModel model_from_json(const std::string& text) {
  try {
    const json doc = json::parse(text);
    if (doc.at("format").get<std::string>() != kModelFormat ||
        doc.at("version").get<int>() != kModelVersion) {
      throw DataError("not a version " + std::to_string(kModelVersion) +
                      " model document");
    }
    SpatialTemporalModel model;
    model.topology =
        Topology(doc.at("state_counts").get<std::vector<std::uint32_t>>());
    model.protocol = parse_protocol(doc.at("protocol").get<std::string>());

    std::map<TransitionModel::InstanceRow, TransitionModel::Counts> instance;
    for (const auto& row : doc.at("transitions").at("instance")) {
      instance[{row.at("camera").get<std::uint32_t>(),
                row.at("state").get<std::uint32_t>()}] =
          row.at("counts").get<TransitionModel::Counts>();
    }
    std::map<std::uint32_t, TransitionModel::Counts> camera;
    for (const auto& row : doc.at("transitions").at("camera")) {
      camera[row.at("camera").get<std::uint32_t>()] =
          row.at("counts").get<TransitionModel::Counts>();
    }
    model.transitions =
        TransitionModel(model.topology.num_cameras(), doc.at("epsilon").get<double>(),
                        std::move(instance), std::move(camera));

    const auto& iv = doc.at("intervals");
    std::map<IntervalModel::InstanceKey, std::vector<double>> instance_sets;
    for (const auto& s : iv.at("instance")) {
      instance_sets[{s.at("from").get<std::uint32_t>(),
                     s.at("state").get<std::uint32_t>(),
                     s.at("to").get<std::uint32_t>()}] =
          s.at("deltas").get<std::vector<double>>();
    }
    std::map<IntervalModel::CameraKey, std::vector<double>> camera_sets;
    for (const auto& s : iv.at("camera")) {
      camera_sets[{s.at("from").get<std::uint32_t>(),
                   s.at("to").get<std::uint32_t>()}] =
          s.at("deltas").get<std::vector<double>>();
    }
    model.intervals = IntervalModel(doc.at("sigma").get<double>(),
                                    std::move(instance_sets), std::move(camera_sets));
    if (iv.at("max_instance_count").get<std::size_t>() !=
            model.intervals.max_instance_count() ||
        iv.at("max_camera_count").get<std::size_t>() !=
            model.intervals.max_camera_count()) {
      throw DataError("stored coupled normalizers disagree with the sample sets");
    }
    return model;
  } catch (const json::exception& e) {
    throw DataError(std::string("model document: ") + e.what());
  } catch (const ValidationError& e) {
    throw DataError(std::string("model document: ") + e.what());
  }
}

namespace {

json law_to_json(const TravelLaw& law) {
  json arr = json::array();
  for (const auto& c : law) {
    arr.push_back({{"mean", c.mean}, {"std", c.stddev}, {"weight", c.weight}});
  }
  return arr;
}

// Typed field access that reports the path of a missing or mistyped field.
template <typename T>
T field(const json& obj, const char* key, const std::string& path) {
  const std::string p = path.empty() ? key : path + "." + key;
  if (!obj.is_object() || !obj.contains(key)) {
    throw ValidationError(p + ": missing field");
  }
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ValidationError(p + ": wrong type");
  }
}

template <typename T>
T field_or(const json& obj, const char* key, const std::string& path, T fallback) {
  if (!obj.contains(key)) return fallback;
  return field<T>(obj, key, path);
}

TravelLaw law_from_json(const json& arr, const std::string& path) {
  if (!arr.is_array()) throw ValidationError(path + ": expected an array");
  TravelLaw law;
  for (std::size_t c = 0; c < arr.size(); ++c) {
    const auto cpath = path + "[" + std::to_string(c) + "]";
    law.push_back({field<double>(arr[c], "mean", cpath),
                   field<double>(arr[c], "std", cpath),
                   field<double>(arr[c], "weight", cpath)});
  }
  return law;
}

}  // namespace

std::string scenario_config_to_json(const ScenarioConfig& config) {
  json doc;
  doc["seed"] = config.seed;
  doc["state_counts"] = config.state_counts;
  doc["transition"] = config.transition;
  json travel = json::array();
  for (const auto& [key, law] : config.travel) {
    const auto [from, state, to] = key;
    travel.push_back({{"from", from},
                      {"state", state},
                      {"to", to},
                      {"components", law_to_json(law)}});
  }
  doc["travel"] = travel;
  if (!config.default_travel.empty()) {
    doc["default_travel"] = law_to_json(config.default_travel);
  }
  json pins = json::array();
  for (const auto& pin : config.state_pins) {
    pins.push_back({{"from", pin.from}, {"to", pin.to}, {"state", pin.state}});
  }
  doc["state_pins"] = pins;
  doc["identities"] = config.num_identities;
  doc["mean_hops"] = config.mean_hops;
  doc["hop_law"] = config.hop_law == HopLaw::kFixed ? "fixed" : "poisson";
  doc["start_time_span"] = config.start_time_span;
  doc["train_fraction"] = config.train_fraction;
  doc["similarity"] = {{"intra_mean", config.noise.intra_mean},
                       {"intra_std", config.noise.intra_std},
                       {"inter_mean", config.noise.inter_mean},
                       {"inter_std", config.noise.inter_std}};
  return doc.dump(2) + "\n";
}

ScenarioConfig scenario_config_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("config: ") + e.what());
  }
  if (!doc.is_object()) throw ValidationError("config: expected an object");
  ScenarioConfig config;
  config.seed = field_or<std::uint64_t>(doc, "seed", "", 0);
  config.state_counts = field<std::vector<std::uint32_t>>(doc, "state_counts", "");
  config.transition =
      field<std::vector<std::vector<std::vector<double>>>>(doc, "transition", "");
  if (doc.contains("travel")) {
    const auto& travel = doc["travel"];
    if (!travel.is_array()) throw ValidationError("travel: expected an array");
    for (std::size_t t = 0; t < travel.size(); ++t) {
      const auto path = "travel[" + std::to_string(t) + "]";
      const auto& entry = travel[t];
      ScenarioConfig::TravelKey key{field<std::uint32_t>(entry, "from", path),
                                    field<std::uint32_t>(entry, "state", path),
                                    field<std::uint32_t>(entry, "to", path)};
      if (!entry.contains("components")) {
        throw ValidationError(path + ".components: missing field");
      }
      config.travel[key] = law_from_json(entry["components"], path + ".components");
    }
  }
  if (doc.contains("default_travel")) {
    config.default_travel = law_from_json(doc["default_travel"], "default_travel");
  }
  if (doc.contains("state_pins")) {
    const auto& pins = doc["state_pins"];
    if (!pins.is_array()) throw ValidationError("state_pins: expected an array");
    for (std::size_t p = 0; p < pins.size(); ++p) {
      const auto path = "state_pins[" + std::to_string(p) + "]";
      config.state_pins.push_back({field<std::uint32_t>(pins[p], "from", path),
                                   field<std::uint32_t>(pins[p], "to", path),
                                   field<std::uint32_t>(pins[p], "state", path)});
    }
  }
  config.num_identities = field<std::size_t>(doc, "identities", "");
  config.mean_hops = field<double>(doc, "mean_hops", "");
  const auto hop_law = field_or<std::string>(doc, "hop_law", "", "fixed");
  if (hop_law == "fixed") {
    config.hop_law = HopLaw::kFixed;
  } else if (hop_law == "poisson") {
    config.hop_law = HopLaw::kPoisson;
  } else {
    throw ValidationError("hop_law: expected 'fixed' or 'poisson'");
  }
  config.start_time_span = field_or<double>(doc, "start_time_span", "", 0.0);
  config.train_fraction = field_or<double>(doc, "train_fraction", "", 0.5);
  if (doc.contains("similarity")) {
    const auto& s = doc["similarity"];
    config.noise.intra_mean = field<double>(s, "intra_mean", "similarity");
    config.noise.intra_std = field<double>(s, "intra_std", "similarity");
    config.noise.inter_mean = field<double>(s, "inter_mean", "similarity");
    config.noise.inter_std = field<double>(s, "inter_std", "similarity");
  }
  config.validate();
  return config;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out << contents;
  if (!out) throw DataError("failed writing '" + path.string() + "'");
}

}  // namespace streid::io

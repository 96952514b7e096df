#include <gtest/gtest.h>

#include <functional>
#include <random>
#include <sstream>

#include "streid/io.h"
#include "test_util.h"

namespace streid {
namespace {

using testing::obs;

std::string message_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    return e.what();
  }
  return {};
}

TEST(ObservationCsv, RoundTrip) {
  const std::vector<Observation> in = {obs("a", "X", 0, 0.1, 1), obs("b", std::nullopt, 3, 12.5),
                                       obs("c", "Y", 2, 1e9 + 0.25, 0)};
  std::stringstream ss;
  io::write_observations(ss, in);
  EXPECT_EQ(io::read_observations(ss), in);
}

TEST(ObservationCsv, MalformedRowReportsFileLine) {
  std::stringstream ss;
  ss << "observation_id,identity,camera,timestamp,state\n";
  for (int i = 2; i < 17; ++i) ss << "o" << i << ",X," << 0 << ',' << i << ",0\n";
  ss << "o17,X,zero,17,0\n";
  const auto msg = message_of([&] { io::read_observations(ss); });
  EXPECT_EQ(msg.rfind("line 17:", 0), 0u) << msg;
}

TEST(ObservationCsv, Errors) {
  auto parse = [](const std::string& body) {
    std::stringstream ss("observation_id,identity,camera,timestamp,state\n" + body);
    return io::read_observations(ss);
  };
  EXPECT_THROW(parse("a,X,0,1\n"), DataError);
  EXPECT_THROW(parse("a,X,0,-1,0\n"), DataError);
  EXPECT_THROW(parse("a,X,0,nan,0\n"), DataError);
  EXPECT_THROW(parse("a,X,0,1,0\na,Y,0,2,0\n"), DataError);
  EXPECT_THROW(parse(",X,0,1,0\n"), DataError);
  std::stringstream bad_header("id,camera\n");
  EXPECT_THROW(io::read_observations(bad_header), DataError);
  EXPECT_EQ(parse("a,X,0,1,0\r\n\n").size(), 1u);
}

TEST(TopologyCsv, RoundTripAndOrder) {
  std::stringstream ss;
  io::write_topology(ss, Topology({2, 1, 3}));
  EXPECT_EQ(io::read_topology(ss).state_counts(), (std::vector<std::uint32_t>{2, 1, 3}));
  std::stringstream gap("camera,states\n0,1\n2,1\n");
  EXPECT_THROW(io::read_topology(gap), DataError);
  std::stringstream zero("camera,states\n0,0\n");
  EXPECT_THROW(io::read_topology(zero), DataError);
}

TEST(SimilarityCsv, RoundTripBitExact) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> values(12);
  for (auto& v : values) v = u(rng);
  const SimilarityMatrix m({"q0", "q1", "q2"}, {"g0", "g1", "g2", "g3"}, values);
  std::stringstream ss;
  io::write_similarity(ss, m);
  const auto back = io::read_similarity(ss);
  EXPECT_EQ(back.query_ids(), m.query_ids());
  EXPECT_EQ(back.gallery_ids(), m.gallery_ids());
  for (std::size_t q = 0; q < 3; ++q) {
    for (std::size_t g = 0; g < 4; ++g) EXPECT_EQ(back.at(q, g), m.at(q, g));
  }
  std::stringstream ragged("query_id,g0,g1\nq0,0.1\n");
  EXPECT_THROW(io::read_similarity(ragged), DataError);
}

TEST(RankingCsv, RoundTripAndStructure) {
  RankedList list{"q0", {}};
  list.entries.push_back({1, "g1", 0.9, 0.5, 0.25, 0.6, 0.54});
  list.entries.push_back({0, "g0", 0.5, 0.0, 0.0, 0.5, 0.25});
  std::stringstream ss;
  io::write_rankings(ss, {list});
  const auto records = io::read_rankings(ss);
  ASSERT_EQ(records.size(), 1u);
  EXPECT_EQ(records[0].query_id, "q0");
  EXPECT_EQ(records[0].gallery_ids, (std::vector<std::string>{"g1", "g0"}));

  const std::string header = "query_id,rank,gallery_id,S,p_spa,p_tem,P,joint\n";
  std::stringstream skip(header + "q,1,a,1,1,1,1,1\nq,3,b,1,1,1,1,1\n");
  EXPECT_THROW(io::read_rankings(skip), DataError);
  std::stringstream split(header + "q,1,a,1,1,1,1,1\nr,1,a,1,1,1,1,1\nq,2,b,1,1,1,1,1\n");
  EXPECT_THROW(io::read_rankings(split), DataError);
}

TEST(EvalReport, Format) {
  EvalReport r;
  r.mean_ap = 5.0 / 6.0;
  r.cmc = {{1, 1.0}, {5, 1.0}};
  r.per_query = {{"q", 5.0 / 6.0}};
  r.skipped_queries = {"z"};
  std::stringstream ss;
  io::write_eval_report(ss, r);
  EXPECT_EQ(ss.str(),
            "queries: 1\nskipped: 1\nmAP: 0.833333\nCMC@1: 1.000000\nCMC@5: 1.000000\n");
}

TEST(ModelJson, RoundTripIsBitExact) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 5000.0);
  std::vector<Observation> train;
  for (int k = 0; k < 300; ++k) {
    const auto id = "p" + std::to_string(k % 40);
    train.push_back(obs("o" + std::to_string(k), id, static_cast<std::uint32_t>(rng() % 4),
                        u(rng), static_cast<std::uint32_t>(rng() % 2)));
  }
  const auto model = fit_model(train, Topology({2, 2, 2, 2}), 87.5, 0.3,
                               Protocol::kCameraCoupled);
  const auto text = io::model_to_json(model);
  const auto back = io::model_from_json(text);
  EXPECT_EQ(back.protocol, Protocol::kCameraCoupled);
  EXPECT_EQ(back.topology.state_counts(), model.topology.state_counts());
  EXPECT_EQ(back.transitions.instance_counts(), model.transitions.instance_counts());
  EXPECT_EQ(back.transitions.camera_counts(), model.transitions.camera_counts());
  EXPECT_EQ(back.transitions.epsilon(), model.transitions.epsilon());
  EXPECT_EQ(back.intervals.sigma(), model.intervals.sigma());
  EXPECT_EQ(back.intervals.instance(), model.intervals.instance());
  EXPECT_EQ(back.intervals.camera(), model.intervals.camera());
  EXPECT_EQ(io::model_to_json(back), text);
}

TEST(ModelJson, RejectsBadDocuments) {
  EXPECT_THROW(io::model_from_json("{"), DataError);
  EXPECT_THROW(io::model_from_json("{\"format\":\"other\"}"), DataError);
  const auto model = fit_model({obs("a", "X", 0, 0.0), obs("b", "X", 1, 5.0)},
                               Topology({1, 1}), 10.0, 0.0);
  auto text = io::model_to_json(model);
  const std::string key = "\"max_instance_count\": 1";
  const auto pos = text.find(key);
  ASSERT_NE(pos, std::string::npos);
  text.replace(pos, key.size(), "\"max_instance_count\": 9");
  EXPECT_THROW(io::model_from_json(text), DataError);
}

TEST(ScenarioJson, ErrorsCarryFieldPath) {
  EXPECT_THROW(io::scenario_config_from_json("not json"), ValidationError);
  const auto msg = message_of([] {
    io::scenario_config_from_json(R"({"seed":1,"state_counts":[1],"transition":[[[1.0]]],
      "default_travel":[{"mean":10,"std":1,"weight":1}],"identities":"many"})");
  });
  EXPECT_NE(msg.find("identities"), std::string::npos) << msg;
}

TEST(FormatDouble, ShortestRoundTrip) {
  EXPECT_EQ(io::format_double(0.1), "0.1");
  EXPECT_EQ(io::format_double(100.0), "100");
  const double x = 0.1 + 0.2;
  EXPECT_EQ(std::stod(io::format_double(x)), x);
}

}  // namespace
}  // namespace streid

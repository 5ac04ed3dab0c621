#include "vne/harness.h"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

#include "json.hpp"
#include "vne/rng.h"

namespace vne {
namespace {

ExperimentConfig Parse(const std::string& text) {
  std::istringstream in(text);
  return ParseConfig(in);
}

std::string Csv(const ExperimentReport& report) {
  std::ostringstream out;
  WriteReportCsv(report, out);
  return out.str();
}

std::string JsonLines(const ExperimentReport& report) {
  std::ostringstream out;
  WriteReportJsonLines(report, out);
  return out.str();
}

std::vector<std::string> Lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

// The report CSV with its trailing wall-clock column removed.
std::string CsvWithoutTiming(const ExperimentReport& report) {
  std::string out;
  for (const std::string& line : Lines(Csv(report))) {
    out += line.substr(0, line.rfind(',')) + '\n';
  }
  return out;
}

std::filesystem::path TempDir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("vne_harness_test_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

// ---- configuration --------------------------------------------------------

TEST(ConfigTest, EmptyObjectGivesDefaults) {
  const ExperimentConfig cfg = Parse("{}");
  EXPECT_EQ(cfg.seed, 1u);
  EXPECT_EQ(cfg.mesh.nodes, 5);
  EXPECT_EQ(cfg.stream.count, 100);
  EXPECT_EQ(cfg.stream.link_prob, 0.5);
  EXPECT_EQ(cfg.algorithm, Algorithm::kPrimal);
  EXPECT_EQ(cfg.partition_policy.kind, PartitionKind::kNone);
  EXPECT_EQ(cfg.step.kind, StepKind::kDiminishing);
  EXPECT_EQ(cfg.step.a, 0.5);
  EXPECT_EQ(cfg.stop.max_iterations, 100);
  EXPECT_FALSE(cfg.blind_gap);
  EXPECT_EQ(cfg.format, ReportFormat::kCsv);
}

TEST(ConfigTest, EveryKeyIsRead) {
  const ExperimentConfig cfg = Parse(R"({
    "seed": 9,
    "mesh": {"nodes": 4, "node_capacity": 50, "link_capacity": 20},
    "k_paths": 2,
    "vn_stream": {"count": 7, "min_vnodes": 1, "max_vnodes": 3, "link_prob": 0.25,
                  "node_demand": [2, 4], "link_demand": [1, 2], "value_rule": "unit"},
    "algorithm": "dual",
    "partition_policy": "k_way:3",
    "utility": {"mode": "weighted_node", "node_weights": [1, 2, 3, 4]},
    "assignment": "exactly_once",
    "distinct_hosts": true,
    "step_rule": {"kind": "square_summable", "a": 2, "b": 3},
    "stop": {"max_iterations": 50, "gap_tolerance": 0.01},
    "gap_reference": "blind",
    "parallel": true,
    "bytes": {"header": 8, "per_scalar": 4},
    "study": {"nodes": 6, "vnodes": 20, "seeds": 3, "policy": "capacity_ordered:2"},
    "output": {"dir": "results", "format": "jsonl"}
  })");
  EXPECT_EQ(cfg.seed, 9u);
  EXPECT_EQ(cfg.mesh.nodes, 4);
  EXPECT_EQ(cfg.mesh.link_capacity, 20);
  EXPECT_EQ(cfg.k_paths, 2);
  EXPECT_EQ(cfg.stream.count, 7);
  EXPECT_EQ(cfg.stream.node_demand.hi, 4);
  EXPECT_EQ(cfg.stream.value_rule, ValueRule::kUnit);
  EXPECT_EQ(cfg.algorithm, Algorithm::kDual);
  EXPECT_EQ(cfg.partition_policy.kind, PartitionKind::kKWay);
  EXPECT_EQ(cfg.partition_policy.k, 3);
  EXPECT_EQ(cfg.utility.mode, UtilityMode::kWeightedNode);
  EXPECT_EQ(cfg.utility.node_weights.size(), 4u);
  EXPECT_EQ(cfg.assignment, AssignmentMode::kExactlyOnce);
  EXPECT_TRUE(cfg.distinct_hosts);
  EXPECT_EQ(cfg.step.kind, StepKind::kSquareSummable);
  EXPECT_EQ(cfg.step.b, 3);
  EXPECT_EQ(cfg.stop.max_iterations, 50);
  EXPECT_TRUE(cfg.blind_gap);
  EXPECT_TRUE(cfg.parallel);
  EXPECT_EQ(cfg.bytes.header_bytes, 8);
  EXPECT_EQ(cfg.study.vnodes, 20);
  EXPECT_EQ(cfg.study.policy.kind, PartitionKind::kCapacityOrdered);
  EXPECT_EQ(cfg.out_dir, "results");
  EXPECT_EQ(cfg.format, ReportFormat::kJsonLines);
}

TEST(ConfigTest, InvalidConfigsRaiseConfigError) {
  const std::vector<std::pair<std::string, std::string>> cases = {
      {"{", "JSON"},
      {"[]", "object"},
      {R"({"sed": 1})", "sed"},
      {R"({"mesh": {"nodes": 5, "capacity": 1}})", "mesh.capacity"},
      {R"({"mesh": {"nodes": "five"}})", "mesh.nodes"},
      {R"({"mesh": {"nodes": 1}})", "mesh.nodes"},
      {R"({"vn_stream": {"link_prob": 1.5}})", "link_prob"},
      {R"({"vn_stream": {"count": -1}})", "count"},
      {R"({"vn_stream": {"min_vnodes": 4, "max_vnodes": 2}})", "max_vnodes"},
      {R"({"vn_stream": {"node_demand": [5, 1]}})", "node_demand"},
      {R"({"vn_stream": {"node_demand": [1]}})", "node_demand"},
      {R"({"algorithm": "admm"})", "algorithm"},
      {R"({"partition_policy": "thirds"})", "partition_policy"},
      {R"({"step_rule": {"a": -1}})", "step_rule"},
      {R"({"stop": {"max_iterations": 0}})", "max_iterations"},
      {R"({"gap_reference": "oracle"})", "gap_reference"},
      {R"({"output": {"format": "xml"}})", "format"},
      {R"({"instance": "/nonexistent/instance.json"})", "does not exist"},
      {R"({"utility": {"node_weights": [1, 2]}})", "node_weights"},
      {R"({"study": {"vnodes": 1, "policy": "halves"}})", "study"},
  };
  for (const auto& [text, fragment] : cases) {
    try {
      Parse(text);
      ADD_FAILURE() << "accepted " << text;
    } catch (const ConfigError& e) {
      EXPECT_NE(std::string(e.what()).find(fragment), std::string::npos)
          << text << " -> " << e.what();
    }
  }
}

TEST(ConfigTest, LoadConfigReportsPathAndResolvesInstance) {
  const auto dir = TempDir("load");
  std::filesystem::create_directories(dir);
  Instance inst;
  inst.network = GenerateFullMesh(3, 10, 10);
  SaveInstance(inst, dir / "net.json");
  {
    std::ofstream(dir / "cfg.json") << R"({"instance": "net.json", "vn_stream": {"count": 2}})";
    std::ofstream(dir / "bad.json") << R"({"bogus": true})";
  }
  const ExperimentConfig cfg = LoadConfig(dir / "cfg.json");
  ASSERT_TRUE(cfg.instance_file.has_value());
  EXPECT_EQ(MaterializeInstance(cfg).network.node_count(), 3);
  try {
    LoadConfig(dir / "bad.json");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("bad.json"), std::string::npos);
  }
  EXPECT_THROW(LoadConfig(dir / "absent.json"), ConfigError);
  std::filesystem::remove_all(dir);
}

TEST(ConfigTest, ReportFormatNames) {
  EXPECT_EQ(ParseReportFormat("csv"), ReportFormat::kCsv);
  EXPECT_EQ(ParseReportFormat("jsonl"), ReportFormat::kJsonLines);
  EXPECT_EQ(ToString(ReportFormat::kJsonLines), "jsonl");
  EXPECT_THROW(ParseReportFormat("json"), std::invalid_argument);
}

// ---- instances ------------------------------------------------------------

TEST(MaterializeTest, StreamIsDeterministicAndWithinBounds) {
  ExperimentConfig cfg;
  cfg.stream.count = 30;
  const Instance a = MaterializeInstance(cfg);
  const Instance b = MaterializeInstance(cfg);
  ASSERT_EQ(a.requests.size(), 30u);
  EXPECT_EQ(a.network.node_count(), 5);
  EXPECT_EQ(a.network.link_count(), 10);
  for (std::size_t j = 0; j < a.requests.size(); ++j) {
    const VnRequest& r = a.requests[j];
    EXPECT_EQ(r.id(), static_cast<int>(j));
    EXPECT_GE(r.vnode_count(), 2);
    EXPECT_LE(r.vnode_count(), 6);
    for (const VirtualNode& v : r.vnodes()) {
      EXPECT_GE(v.demand, 1.0);
      EXPECT_LE(v.demand, 10.0);
    }
    EXPECT_DOUBLE_EQ(r.value(), r.TotalNodeDemand());
    EXPECT_EQ(r.vlink_count(), b.requests[j].vlink_count());
    EXPECT_EQ(r.value(), b.requests[j].value());
  }
  cfg.seed = 2;
  const Instance c = MaterializeInstance(cfg);
  bool differs = false;
  for (std::size_t j = 0; j < 30; ++j) differs |= c.requests[j].value() != a.requests[j].value();
  EXPECT_TRUE(differs);
}

TEST(MaterializeTest, InstanceFileRequestsTakePrecedence) {
  const auto dir = TempDir("materialize");
  std::filesystem::create_directories(dir);
  Instance inst;
  inst.network = GenerateFullMesh(2, 10, 10);
  inst.requests.push_back(VnRequest(5, {{1.0}}, {}, 1.0));
  SaveInstance(inst, dir / "one.json");
  ExperimentConfig cfg;
  cfg.instance_file = dir / "one.json";
  const Instance back = MaterializeInstance(cfg);
  ASSERT_EQ(back.requests.size(), 1u);
  EXPECT_EQ(back.requests[0].id(), 5);
  std::filesystem::remove_all(dir);
}

TEST(StudyInstanceTest, MatchesTheDescribedClass) {
  const StudySpec spec;
  const PlacementInstance inst = MakeStudyInstance(spec, 3);
  ASSERT_EQ(inst.request.vnode_count(), 50);
  ASSERT_EQ(inst.capacity.size(), 10u);
  const double caps = std::accumulate(inst.capacity.begin(), inst.capacity.end(), 0.0);
  EXPECT_NEAR(caps, inst.request.TotalNodeDemand(), 1e-9);
  EXPECT_DOUBLE_EQ(*std::max_element(inst.capacity.begin(), inst.capacity.end()), 1.0);
  for (int v = 0; v < 50; ++v) {
    for (int i = 0; i < 10; ++i) {
      EXPECT_GE(inst.utility.Weight(0, v, i), 0.5);
      EXPECT_LE(inst.utility.Weight(0, v, i), 1.5);
    }
  }
  const PlacementInstance again = MakeStudyInstance(spec, 3);
  EXPECT_EQ(again.capacity, inst.capacity);
  EXPECT_EQ(again.utility.affinity, inst.utility.affinity);
}

// ---- experiments ----------------------------------------------------------

ExperimentConfig Small(Algorithm algorithm, const std::string& policy, int count) {
  ExperimentConfig cfg;
  cfg.algorithm = algorithm;
  cfg.partition_policy = PartitionPolicy::Parse(policy);
  cfg.stream.count = count;
  return cfg;
}

TEST(ExperimentTest, NoRequestsReportsAnError) {
  for (Algorithm a : {Algorithm::kMonolithic, Algorithm::kPrimal, Algorithm::kDual}) {
    const ExperimentReport r = RunExperiment(Small(a, "none", 0));
    EXPECT_EQ(r.requested, 0);
    EXPECT_FALSE(r.allocation_ratio.has_value());
    EXPECT_FALSE(r.error.empty());
    EXPECT_EQ(r.revenue, 0.0);
    EXPECT_EQ(Lines(Csv(r)).size(), 1u);
    const auto summary = nlohmann::json::parse(Lines(JsonLines(r)).back());
    EXPECT_EQ(summary["kind"], "summary");
    EXPECT_TRUE(summary["allocation_ratio"].is_null());
    EXPECT_EQ(summary["error"], r.error);
  }
}

TEST(ExperimentTest, AbundantCapacityAcceptsEverything) {
  for (Algorithm a : {Algorithm::kMonolithic, Algorithm::kPrimal, Algorithm::kDual}) {
    for (const std::string policy : {"none", "halves"}) {
      if (a == Algorithm::kMonolithic && policy != "none") continue;
      ExperimentConfig cfg = Small(a, policy, 10);
      cfg.mesh.node_capacity = 1e4;
      cfg.mesh.link_capacity = 1e4;
      cfg.stream.max_vnodes = 3;
      cfg.k_paths = 2;
      const ExperimentReport r = RunExperiment(cfg);
      ASSERT_TRUE(r.allocation_ratio.has_value());
      EXPECT_EQ(*r.allocation_ratio, 1.0) << ToString(a) << " " << policy;
      double revenue = 0.0;
      for (const VnOutcome& o : r.outcomes) {
        EXPECT_TRUE(o.diagnostic.empty()) << o.diagnostic;
        EXPECT_EQ(o.attempts, 1);
        revenue += o.value;
      }
      EXPECT_DOUBLE_EQ(r.revenue, revenue);
      EXPECT_EQ(r.embeddings.size(), 10u);
    }
  }
}

TEST(ExperimentTest, MonolithicRejectsWhatCannotFit) {
  Instance inst;
  inst.network = PhysicalNetwork({{0, 5.0}, {1, 5.0}}, {{0, 1, 1.0}});
  inst.requests.push_back(VnRequest(0, {{4.0}, {4.0}}, {{0, 1, 2.0}}, 8.0));  // link too thin
  inst.requests.push_back(VnRequest(1, {{4.0}, {4.0}}, {{0, 1, 1.0}}, 8.0));
  inst.requests.push_back(VnRequest(2, {{2.0}}, {}, 2.0));  // nodes now hold 1 each
  ExperimentConfig cfg = Small(Algorithm::kMonolithic, "none", 0);
  const ExperimentReport r = RunExperiment(cfg, inst);
  ASSERT_EQ(r.outcomes.size(), 3u);
  EXPECT_FALSE(r.outcomes[0].accepted);
  EXPECT_FALSE(r.outcomes[0].diagnostic.empty());
  EXPECT_TRUE(r.outcomes[1].accepted);
  EXPECT_FALSE(r.outcomes[2].accepted);
  EXPECT_EQ(r.accepted, 1);
  EXPECT_DOUBLE_EQ(r.revenue, 8.0);
  EXPECT_EQ(r.capacity_violations, 0);
}

TEST(ExperimentTest, DecomposedPlacementRoutesOnFirstPathWithRoom) {
  // A triangle where the direct link is too thin for the vlink: the vlink
  // takes the two-hop path, which is listed second.
  Instance inst;
  inst.network = PhysicalNetwork({{0, 1.0}, {1, 1.0}, {2, 0.0001}},
                                 {{0, 1, 1.0}, {0, 2, 5.0}, {1, 2, 5.0}});
  inst.requests.push_back(VnRequest(0, {{1.0}, {1.0}}, {{0, 1, 3.0}}, 2.0));
  ExperimentConfig cfg = Small(Algorithm::kPrimal, "none", 0);
  const ExperimentReport r = RunExperiment(cfg, inst);
  ASSERT_EQ(r.accepted, 1) << r.outcomes[0].diagnostic;
  const Embedding& e = r.embeddings[0];
  ASSERT_NE(e.node_map[0], e.node_map[1]);
  const PathSet paths = EnumerateLoopFreePaths(inst.network, cfg.k_paths);
  ASSERT_NE(e.link_map[0], kNoPath);
  EXPECT_EQ(paths.path(e.link_map[0]).hops(), 2);
  EXPECT_EQ(r.outcomes[0].cross_vlinks, 0);
  EXPECT_EQ(r.outcomes[0].messages, 2);
}

TEST(ExperimentTest, OneRowPerRequestPlusSummary) {
  const ExperimentReport r = RunExperiment(Small(Algorithm::kPrimal, "halves", 100));
  const std::vector<std::string> lines = Lines(Csv(r));
  ASSERT_EQ(lines.size(), 1u + 100u + 1u);
  EXPECT_EQ(lines[0],
            "kind,request_id,accepted,requested,allocation_ratio,revenue,vnodes,vlinks,"
            "cross_vlinks,attempts,iterations,messages,bytes,diagnostic,solver_seconds");
  EXPECT_EQ(lines.back().rfind("summary,", 0), 0u);
  EXPECT_EQ(Lines(JsonLines(r)).size(), 101u);
}

TEST(ExperimentTest, SummaryRoundTripsThroughBothFormats) {
  for (const std::string policy : {"none", "halves"}) {
    const ExperimentReport r = RunExperiment(Small(Algorithm::kDual, policy, 25));
    const ReportSummary expected = Summarize(r);
    for (ReportFormat f : {ReportFormat::kCsv, ReportFormat::kJsonLines}) {
      std::istringstream in(f == ReportFormat::kCsv ? Csv(r) : JsonLines(r));
      const ReportSummary back = ParseReportSummary(in, f);
      EXPECT_EQ(back.requested, expected.requested);
      EXPECT_EQ(back.accepted, expected.accepted);
      ASSERT_TRUE(back.allocation_ratio.has_value());
      EXPECT_EQ(*back.allocation_ratio, *expected.allocation_ratio);
      EXPECT_EQ(back.revenue, expected.revenue);
      EXPECT_EQ(back.messages, expected.messages);
      EXPECT_EQ(back.bytes, expected.bytes);
    }
  }
}

TEST(ExperimentTest, DiagnosticsWithCommasSurviveCsv) {
  ExperimentReport r;
  r.requested = 1;
  r.allocation_ratio = 0.0;
  VnOutcome o;
  o.diagnostic = "a, \"quoted\" reason";
  r.outcomes.push_back(o);
  std::istringstream in(Csv(r));
  const ReportSummary back = ParseReportSummary(in, ReportFormat::kCsv);
  EXPECT_EQ(back.requested, 1);
  EXPECT_NE(Csv(r).find("\"a, \"\"quoted\"\" reason\""), std::string::npos);
}

TEST(ExperimentTest, IdenticalConfigsGiveIdenticalReports) {
  for (Algorithm a : {Algorithm::kPrimal, Algorithm::kDual}) {
    ExperimentConfig cfg = Small(a, "halves", 40);
    const ExperimentReport first = RunExperiment(cfg);
    cfg.parallel = true;
    const ExperimentReport second = RunExperiment(cfg);
    EXPECT_EQ(CsvWithoutTiming(first), CsvWithoutTiming(second));
    std::ostringstream m1, m2;
    WriteMessageCsv(first.messages_log, m1);
    WriteMessageCsv(second.messages_log, m2);
    EXPECT_EQ(m1.str(), m2.str());
  }
}

class ExperimentInvariants
    : public ::testing::TestWithParam<std::tuple<Algorithm, std::string, std::uint64_t>> {};

TEST_P(ExperimentInvariants, Hold) {
  const auto& [algorithm, policy, seed] = GetParam();
  ExperimentConfig cfg = Small(algorithm, policy, 60);
  cfg.seed = seed;
  const ExperimentReport r = RunExperiment(cfg);
  ASSERT_TRUE(r.allocation_ratio.has_value());
  EXPECT_GE(*r.allocation_ratio, 0.0);
  EXPECT_LE(*r.allocation_ratio, 1.0);
  EXPECT_GE(r.revenue, 0.0);
  EXPECT_LE(r.accepted, r.requested);
  EXPECT_EQ(r.capacity_violations, 0);

  // Replay the commits and check every residual after every acceptance.
  const Instance inst = MaterializeInstance(cfg);
  const PathSet paths = EnumerateLoopFreePaths(inst.network, cfg.k_paths);
  std::vector<VnRequest> committed;
  std::vector<Embedding> embeddings;
  std::size_t next = 0;
  long long messages = 0;
  for (const VnOutcome& o : r.outcomes) {
    const int parts = static_cast<int>(
        Split(inst.requests[o.request_id], cfg.partition_policy).parts.size());
    EXPECT_EQ(o.messages, 2LL * parts * o.iterations) << o.request_id;
    messages += o.messages;
    if (!o.accepted) {
      EXPECT_FALSE(o.diagnostic.empty());
      EXPECT_GE(o.attempts, 1);
      EXPECT_LE(o.attempts, 2);
      continue;
    }
    committed.push_back(inst.requests[o.request_id]);
    embeddings.push_back(r.embeddings.at(next++));
    CheckEmbeddingConsistency(inst.network, paths, committed.back(), embeddings.back());
    const Residuals res = ResidualCapacity(inst.network, paths, embeddings, committed);
    for (double v : res.node) EXPECT_GE(v, -1e-9);
    for (double v : res.link) EXPECT_GE(v, -1e-9);
  }
  EXPECT_EQ(next, r.embeddings.size());
  EXPECT_EQ(messages, r.messages);
  EXPECT_EQ(r.messages, r.messages_log.message_count());
}

INSTANTIATE_TEST_SUITE_P(
    Seeds, ExperimentInvariants,
    ::testing::Combine(::testing::Values(Algorithm::kPrimal, Algorithm::kDual),
                       ::testing::Values("none", "halves", "capacity_ordered:2"),
                       ::testing::Values(1u, 2u, 3u)));

TEST(ExperimentTest, PartitioningAddsMessages) {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    ExperimentConfig none = Small(Algorithm::kPrimal, "none", 100);
    none.seed = seed;
    ExperimentConfig halves = none;
    halves.partition_policy = PartitionPolicy::Parse("halves");
    EXPECT_GT(RunExperiment(halves).messages, RunExperiment(none).messages);
  }
}

TEST(ExperimentTest, MoreCapacityNeverRejectsASingleRequest) {
  // Feasibility of one request under the exact program is monotone in the
  // capacities.
  Rng rng(77);
  for (int trial = 0; trial < 12; ++trial) {
    const VnRequest r = GenerateRandomVn(0, 2 + trial % 2, 0.5, {1, 10}, {1, 10},
                                         ValueRule::kNodeDemandSum, rng.Next());
    const double small = rng.Uniform(3.0, 12.0);
    Instance tight{GenerateFullMesh(3, small, small), {r}};
    Instance roomy{GenerateFullMesh(3, small * rng.Uniform(1.0, 2.0), small * 2.0), {r}};
    ExperimentConfig cfg = Small(Algorithm::kMonolithic, "none", 0);
    cfg.k_paths = 2;
    if (RunExperiment(cfg, tight).accepted == 1) {
      EXPECT_EQ(RunExperiment(cfg, roomy).accepted, 1) << trial;
    }
  }
}

TEST(ExperimentTest, MoreCapacityCanChangeWhichLaterRequestsFit) {
  // Online admission is not monotone: with 6 units the first request fits
  // and then blocks the second; with 5 it is rejected and the second fits.
  for (Algorithm a : {Algorithm::kMonolithic, Algorithm::kPrimal, Algorithm::kDual}) {
    Instance inst;
    inst.requests = {VnRequest(0, {{6.0}}, {}, 6.0), VnRequest(1, {{5.0}}, {}, 5.0)};
    inst.network = PhysicalNetwork({{0, 5.0}}, {});
    const ExperimentConfig cfg = Small(a, "none", 0);
    const ExperimentReport small = RunExperiment(cfg, inst);
    inst.network = PhysicalNetwork({{0, 6.0}}, {});
    const ExperimentReport large = RunExperiment(cfg, inst);
    EXPECT_FALSE(small.outcomes[0].accepted);
    EXPECT_TRUE(small.outcomes[1].accepted);
    EXPECT_TRUE(large.outcomes[0].accepted);
    EXPECT_FALSE(large.outcomes[1].accepted);
  }
}

// ---- convergence study ----------------------------------------------------

ExperimentConfig StudyConfig(const std::string& policy, int iterations) {
  ExperimentConfig cfg;
  cfg.study.nodes = 6;
  cfg.study.vnodes = 14;
  cfg.study.seeds = 3;
  cfg.study.policy = PartitionPolicy::Parse(policy);
  cfg.stop.max_iterations = iterations;
  cfg.stop.gap_tolerance = -1.0;
  return cfg;
}

TEST(StudyTest, SinglePartitionMatchesTheNodeProgramAtFirstIteration) {
  const ExperimentConfig cfg = StudyConfig("none", 50);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const StudyRun run = RunStudySeed(cfg, seed);
    const PlacementInstance inst = MakeStudyInstance(cfg.study, seed);
    const NodeEmbeddingProgram program =
        BuildNodeEmbeddingProgram(inst.request, inst.capacity, {}, inst.utility);
    const lp::LpSolution direct = lp::SolveLp(program.lp);
    ASSERT_TRUE(direct.optimal());
    EXPECT_NEAR(run.reference, direct.objective, 1e-9 * std::max(1.0, direct.objective));
    for (const IterateTrace* trace : {&run.primal, &run.dual}) {
      ASSERT_EQ(trace->records.size(), 1u);
      EXPECT_NEAR(trace->records[0].objective, direct.objective,
                  1e-9 * std::max(1.0, direct.objective));
    }
    EXPECT_EQ(run.primal_log.message_count(), 2);
    EXPECT_EQ(run.dual_log.message_count(), 2);
  }
}

TEST(StudyTest, SeedsAreConsecutiveAndTracesRepeat) {
  ExperimentConfig cfg = StudyConfig("halves", 30);
  cfg.seed = 40;
  const ConvergenceStudy first = RunConvergenceStudy(cfg);
  const ConvergenceStudy second = RunConvergenceStudy(cfg);
  ASSERT_EQ(first.runs.size(), 3u);
  for (std::size_t s = 0; s < 3; ++s) {
    EXPECT_EQ(first.runs[s].seed, 40u + s);
    for (const auto& [a, b] : {std::pair{&first.runs[s].primal, &second.runs[s].primal},
                               std::pair{&first.runs[s].dual, &second.runs[s].dual}}) {
      ASSERT_EQ(a->records.size(), 30u);
      ASSERT_EQ(a->records.size(), b->records.size());
      for (std::size_t t = 0; t < a->records.size(); ++t) {
        EXPECT_EQ(a->records[t].objective, b->records[t].objective);
        EXPECT_EQ(a->records[t].gap, b->records[t].gap);
        EXPECT_EQ(a->records[t].state, b->records[t].state);
      }
      EXPECT_EQ(a->x_best, b->x_best);
    }
    EXPECT_EQ(first.runs[s].primal_log.message_count(), 2 * 2 * 30);
    EXPECT_EQ(first.runs[s].dual_log.message_count(), 2 * 2 * 30);
  }
}

TEST(StudyTest, GapsAreMeasuredAgainstTheCoupledOptimum) {
  const StudyRun run = RunStudySeed(StudyConfig("halves", 60), 2);
  for (const IterateRecord& r : run.dual.records) {
    EXPECT_GE(r.objective, run.reference - 1e-7);
    EXPECT_GE(r.gap, -1e-7);
  }
  for (const IterateRecord& r : run.primal.records) {
    EXPECT_LE(r.objective, run.reference + 1e-7);
    EXPECT_GE(r.gap, -1e-7);
  }
}

// ---- output files ---------------------------------------------------------

TEST(EmitTest, ReportAndMessageFiles) {
  const ExperimentReport r = RunExperiment(Small(Algorithm::kPrimal, "halves", 12));
  const auto dir = TempDir("emit");
  for (ReportFormat f : {ReportFormat::kCsv, ReportFormat::kJsonLines}) {
    const auto path = EmitReport(r, f, dir / ToString(f));
    ASSERT_TRUE(std::filesystem::exists(path));
    std::ifstream in(path);
    const ReportSummary back = ParseReportSummary(in, f);
    EXPECT_EQ(back.accepted, r.accepted);
    std::ifstream messages(dir / ToString(f) / "messages.csv");
    std::string header;
    std::getline(messages, header);
    EXPECT_EQ(header, "iter,from,to,kind,bytes");
    long long rows = 0;
    for (std::string line; std::getline(messages, line);) ++rows;
    EXPECT_EQ(rows, r.messages);
  }
  std::filesystem::remove_all(dir);
}

TEST(EmitTest, StudyTablesAlignIterations) {
  const ConvergenceStudy study = RunConvergenceStudy(StudyConfig("halves", 20));
  const auto dir = TempDir("study");
  const auto files = EmitStudy(study, ReportFormat::kCsv, dir);
  EXPECT_EQ(files.size(), 3u + 2u * study.runs.size());
  std::ifstream it(dir / "gap_vs_iteration.csv");
  std::string line;
  std::getline(it, line);
  EXPECT_EQ(line, "seed,t,primal_gap,dual_gap");
  int rows = 0;
  while (std::getline(it, line)) ++rows;
  EXPECT_EQ(rows, 3 * 20);
  std::ifstream tm(dir / "gap_vs_time.csv");
  std::getline(tm, line);
  EXPECT_EQ(line, "seed,algorithm,t,seconds,gap");
  rows = 0;
  while (std::getline(tm, line)) ++rows;
  EXPECT_EQ(rows, 2 * 3 * 20);
  EXPECT_TRUE(std::filesystem::exists(dir / "traces" / "primal_seed1.csv"));
  const auto jsonl = EmitStudy(study, ReportFormat::kJsonLines, dir / "j");
  std::ifstream ji(dir / "j" / "gap_vs_iteration.jsonl");
  std::getline(ji, line);
  const auto first = nlohmann::json::parse(line);
  EXPECT_EQ(first["t"], 1);
  EXPECT_TRUE(first["dual_gap"].is_number());
  std::filesystem::remove_all(dir);
}

TEST(EmitTest, UnwritableDirectoryNamesThePath) {
  const auto dir = TempDir("blocked");
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "file") << "x";
  const ExperimentReport empty;
  try {
    EmitReport(empty, ReportFormat::kCsv, dir / "file" / "sub");
    FAIL();
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find("file"), std::string::npos);
  }
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace vne

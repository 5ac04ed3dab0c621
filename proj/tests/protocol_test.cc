#include "vne/protocol.h"

#include <gtest/gtest.h>

#include <numeric>
#include <sstream>

#include "vne/rng.h"

namespace vne {
namespace {

PartitionedLp Instance(std::uint64_t seed, const std::string& policy, int nodes = 5,
                       int vnodes = 12) {
  Rng rng(seed);
  std::vector<VirtualNode> vn;
  double total = 0.0;
  for (int v = 0; v < vnodes; ++v) {
    vn.push_back({rng.Uniform(1.0, 10.0)});
    total += vn.back().demand;
  }
  const VnRequest request(0, vn, {}, total);
  std::vector<double> caps(nodes);
  for (double& c : caps) c = total / nodes * rng.Uniform(0.5, 1.5);
  UtilitySpec utility;
  utility.mode = UtilityMode::kWeightedNode;
  utility.affinity.assign(1, std::vector<std::vector<double>>(vnodes));
  for (auto& row : utility.affinity[0]) {
    row.resize(nodes);
    for (double& a : row) a = rng.Uniform(0.5, 1.5);
  }
  return BuildPartitionedLp(request, Split(request, PartitionPolicy::Parse(policy)),
                            caps, {}, utility);
}

RunOptions FixedIterations(int t) {
  RunOptions o;
  o.stop.max_iterations = t;
  o.stop.gap_tolerance = -1.0;
  return o;
}

TEST(MessageLogTest, EmptyLogHasZeroStats) {
  const MessageLog log;
  const OverheadStats s = ComputeOverheadStats(log);
  EXPECT_EQ(s.messages, 0);
  EXPECT_EQ(s.bytes, 0);
  EXPECT_EQ(s.iterations, 0);
  EXPECT_EQ(s.messages_per_iteration, 0.0);
  EXPECT_EQ(s.bytes_per_iteration, 0.0);
}

TEST(MessageLogTest, FourHundredMessagesOfFortyEightBytes) {
  MessageLog log;
  for (int i = 0; i < 400; ++i) {
    log.Append({i / 4 + 1, i % 2, 1 - i % 2, MessageKind::kShare, 4, 48, 0.0});
  }
  const OverheadStats s = ComputeOverheadStats(log);
  EXPECT_EQ(s.messages, 400);
  EXPECT_EQ(s.bytes, 19200);
  EXPECT_EQ(s.iterations, 100);
  EXPECT_DOUBLE_EQ(s.messages_per_iteration, 4.0);
  EXPECT_DOUBLE_EQ(s.bytes_per_iteration, 192.0);
  EXPECT_EQ(log.total_bytes(), 19200);
}

TEST(MessageLogTest, RejectsEmptyPayload) {
  MessageLog log;
  EXPECT_THROW(log.Append({1, 0, 1, MessageKind::kPrice, 0, 0, 0.0}),
               std::invalid_argument);
  EXPECT_EQ(log.message_count(), 0);
}

TEST(MessageLogTest, SizesFollowTheByteModel) {
  MessageLog standard;
  standard.OnMessage(1, 0, 1, MessageKind::kShare, 4);
  EXPECT_EQ(standard.records()[0].bytes, 16 + 8 * 4);
  MessageLog custom(ByteModel{4, 2});
  custom.OnMessage(1, 0, 1, MessageKind::kShare, 4);
  EXPECT_EQ(custom.records()[0].bytes, 12);
}

TEST(MessageLogTest, LatencyHookDefaultsToZero) {
  MessageLog quiet;
  quiet.OnMessage(1, 0, 1, MessageKind::kShare, 3);
  EXPECT_EQ(quiet.total_latency(), 0.0);
  MessageLog slow({}, [](const MessageRecord& r) { return 1e-6 * r.bytes; });
  slow.OnMessage(1, 0, 1, MessageKind::kShare, 3);
  slow.OnMessage(1, 1, 0, MessageKind::kDuals, 4);
  EXPECT_DOUBLE_EQ(slow.total_latency(), 1e-6 * (40 + 48));
}

TEST(MessageLogTest, CountersMatchRecords) {
  const DistributedRun run =
      RunDistributed(Algorithm::kDual, Instance(1, "k_way:3"), FixedIterations(7));
  long long bytes = 0;
  for (const MessageRecord& r : run.log.records()) {
    EXPECT_GT(r.bytes, 0);
    bytes += r.bytes;
  }
  EXPECT_EQ(run.log.total_bytes(), bytes);
  EXPECT_EQ(run.log.message_count(),
            static_cast<long long>(run.log.records().size()));
}

TEST(RunDistributedTest, PrimalTwoPartitionsHundredIterations) {
  const PartitionedLp plp = Instance(2, "halves");
  const DistributedRun run = RunDistributed(Algorithm::kPrimal, plp, FixedIterations(100));
  ASSERT_EQ(run.trace.records.size(), 100u);
  EXPECT_EQ(run.log.message_count(), 400);
  const int n = plp.node_count;
  for (const MessageRecord& r : run.log.records()) {
    if (r.from == 0) {
      EXPECT_EQ(r.kind, MessageKind::kShare);
      EXPECT_EQ(r.bytes, 16 + 8 * n);
    } else {
      EXPECT_EQ(r.kind, MessageKind::kDuals);
      EXPECT_EQ(r.to, 0);
      EXPECT_EQ(r.bytes, 16 + 8 * (1 + n));
    }
  }
}

TEST(RunDistributedTest, DualMessageCountIsTwoKT) {
  for (const std::string policy : {"halves", "k_way:3", "k_way:4"}) {
    for (int t : {1, 5, 17}) {
      const PartitionedLp plp = Instance(3, policy);
      const DistributedRun run = RunDistributed(Algorithm::kDual, plp, FixedIterations(t));
      const long long iterations = static_cast<long long>(run.trace.records.size());
      EXPECT_EQ(run.log.message_count(), 2LL * plp.num_partitions() * iterations)
          << policy << " " << t;
      EXPECT_EQ(run.trace.records.back().messages, run.log.message_count());
    }
  }
}

TEST(RunDistributedTest, CountFormulaHoldsWithEarlyStops) {
  for (std::uint64_t seed = 10; seed < 20; ++seed) {
    for (Algorithm a : {Algorithm::kPrimal, Algorithm::kDual}) {
      const PartitionedLp plp = Instance(seed, seed % 2 ? "halves" : "capacity_ordered:3");
      const double opt = lp::SolveLp(CoupledProgram(plp)).objective;
      RunOptions o;
      o.stop.max_iterations = 80;
      o.reference = opt;
      o.stop.gap_tolerance = 1e-2;
      const DistributedRun run = RunDistributed(a, plp, o);
      EXPECT_EQ(run.log.message_count(),
                2LL * plp.num_partitions() *
                    static_cast<long long>(run.trace.records.size()));
    }
  }
}

TEST(RunDistributedTest, SinglePartitionExchangesTwoMessages) {
  for (Algorithm a : {Algorithm::kPrimal, Algorithm::kDual}) {
    const DistributedRun run = RunDistributed(a, Instance(4, "none"), FixedIterations(100));
    ASSERT_EQ(run.log.message_count(), 2);
    EXPECT_EQ(run.log.records()[0].from, 0);
    EXPECT_EQ(run.log.records()[1].to, 0);
  }
}

TEST(RunDistributedTest, PartitioningAddsMessages) {
  for (Algorithm a : {Algorithm::kPrimal, Algorithm::kDual}) {
    const DistributedRun whole = RunDistributed(a, Instance(5, "none"), FixedIterations(50));
    const DistributedRun split = RunDistributed(a, Instance(5, "halves"), FixedIterations(50));
    EXPECT_GT(split.log.message_count(), whole.log.message_count());
  }
}

TEST(RunDistributedTest, TraceIsIdenticalToInProcessRun) {
  for (const std::string policy : {"halves", "k_way:3"}) {
    const PartitionedLp plp = Instance(6, policy);
    const RunOptions o = FixedIterations(40);
    const IterateTrace primal = RunPrimal(plp, o);
    const IterateTrace dual = RunDual(plp, o);
    const DistributedRun p = RunDistributed(Algorithm::kPrimal, plp, o);
    const DistributedRun d = RunDistributed(Algorithm::kDual, plp, o);
    ASSERT_EQ(p.trace.records.size(), primal.records.size());
    ASSERT_EQ(d.trace.records.size(), dual.records.size());
    for (std::size_t i = 0; i < primal.records.size(); ++i) {
      EXPECT_EQ(p.trace.records[i].objective, primal.records[i].objective);
      EXPECT_EQ(p.trace.records[i].state, primal.records[i].state);
    }
    for (std::size_t i = 0; i < dual.records.size(); ++i) {
      EXPECT_EQ(d.trace.records[i].objective, dual.records[i].objective);
      EXPECT_EQ(d.trace.records[i].best_primal, dual.records[i].best_primal);
    }
    EXPECT_EQ(p.trace.x_best, primal.x_best);
    EXPECT_EQ(d.trace.x_best, dual.x_best);
  }
}

TEST(RunDistributedTest, LogIsOrderedByIterationAndAgent) {
  RunOptions o = FixedIterations(10);
  o.parallel = true;
  const DistributedRun run = RunDistributed(Algorithm::kPrimal, Instance(7, "k_way:4"), o);
  int last_iteration = 0;
  int last_agent = 0;
  for (const MessageRecord& r : run.log.records()) {
    const int agent = std::max(r.from, r.to);
    if (r.iteration != last_iteration) {
      EXPECT_EQ(r.iteration, last_iteration + 1);
      last_agent = 0;
    }
    EXPECT_GE(agent, last_agent);
    last_iteration = r.iteration;
    last_agent = agent;
  }
}

TEST(RunDistributedTest, MonolithicHasNoProtocol) {
  MessageLog log;
  EXPECT_THROW(RunDistributed(Algorithm::kMonolithic, Instance(8, "halves"),
                              FixedIterations(3), log),
               std::invalid_argument);
}

TEST(MessageCsvTest, HeaderAndRows) {
  const DistributedRun run =
      RunDistributed(Algorithm::kPrimal, Instance(9, "halves"), FixedIterations(2));
  std::ostringstream out;
  WriteMessageCsv(run.log, out);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "iter,from,to,kind,bytes");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 8);
  EXPECT_NE(out.str().find("1,0,1,share,"), std::string::npos);
  EXPECT_NE(out.str().find("1,1,0,duals,"), std::string::npos);
}

TEST(AlgorithmTest, ParseRoundTrip) {
  for (Algorithm a : {Algorithm::kMonolithic, Algorithm::kPrimal, Algorithm::kDual}) {
    EXPECT_EQ(ParseAlgorithm(ToString(a)), a);
  }
  EXPECT_THROW(ParseAlgorithm("admm"), std::invalid_argument);
}

}  // namespace
}  // namespace vne

#include "vne/protocol.h"

#include <algorithm>
#include <ostream>
#include <set>
#include <stdexcept>

namespace vne {

MessageLog::MessageLog(ByteModel bytes, LatencyModel latency)
    : model_(bytes), latency_model_(std::move(latency)) {}

void MessageLog::OnMessage(int iteration, int from, int to, MessageKind kind,
                           int scalars) {
  MessageRecord record{iteration, from, to, kind, scalars, model_.Size(scalars), 0.0};
  if (latency_model_) record.latency = latency_model_(record);
  Append(record);
}

void MessageLog::Append(const MessageRecord& record) {
  if (record.bytes <= 0) {
    throw std::invalid_argument("message payload must be positive");
  }
  records_.push_back(record);
  ++messages_;
  bytes_ += record.bytes;
  latency_ += record.latency;
}

Algorithm ParseAlgorithm(const std::string& name) {
  if (name == "monolithic") return Algorithm::kMonolithic;
  if (name == "primal") return Algorithm::kPrimal;
  if (name == "dual") return Algorithm::kDual;
  throw std::invalid_argument("unknown algorithm '" + name + "'");
}

std::string ToString(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::kMonolithic:
      return "monolithic";
    case Algorithm::kPrimal:
      return "primal";
    case Algorithm::kDual:
      return "dual";
  }
  return "primal";
}

IterateTrace RunDistributed(Algorithm algorithm, const PartitionedLp& plp,
                            RunOptions options, MessageLog& log,
                            const lp::SolverOptions& solver) {
  options.sink = &log;
  switch (algorithm) {
    case Algorithm::kPrimal:
      return RunPrimal(plp, options, solver);
    case Algorithm::kDual:
      return RunDual(plp, options, solver);
    case Algorithm::kMonolithic:
      break;
  }
  throw std::invalid_argument("the monolithic solve has no protocol");
}

DistributedRun RunDistributed(Algorithm algorithm, const PartitionedLp& plp,
                              const RunOptions& options, ByteModel bytes,
                              const lp::SolverOptions& solver) {
  DistributedRun run{{}, MessageLog(bytes)};
  run.trace = RunDistributed(algorithm, plp, options, run.log, solver);
  return run;
}

OverheadStats ComputeOverheadStats(const MessageLog& log) {
  OverheadStats stats;
  std::set<int> iterations;
  for (const MessageRecord& r : log.records()) {
    ++stats.messages;
    stats.bytes += r.bytes;
    iterations.insert(r.iteration);
  }
  stats.iterations = static_cast<int>(iterations.size());
  if (stats.iterations > 0) {
    stats.messages_per_iteration =
        static_cast<double>(stats.messages) / stats.iterations;
    stats.bytes_per_iteration = static_cast<double>(stats.bytes) / stats.iterations;
  }
  return stats;
}

void WriteMessageCsv(const MessageLog& log, std::ostream& out) {
  out << "iter,from,to,kind,bytes\n";
  for (const MessageRecord& r : log.records()) {
    out << r.iteration << ',' << r.from << ',' << r.to << ','
        << ToString(r.kind) << ',' << r.bytes << '\n';
  }
}

}  // namespace vne

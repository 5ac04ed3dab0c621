#ifndef VNE_PROTOCOL_H_
#define VNE_PROTOCOL_H_

// Master/agent message accounting around the decompositions. Nothing is sent
// anywhere: every exchange the in-process run performs is recorded with a
// modelled payload size, so traces are identical with or without a log.

#include <functional>
#include <iosfwd>
#include <vector>

#include "vne/decomposition.h"
#include "vne/dual_decomposition.h"
#include "vne/primal_decomposition.h"

namespace vne {

struct ByteModel {
  int header_bytes = 16;
  int bytes_per_scalar = 8;

  long long Size(int scalars) const {
    return header_bytes + static_cast<long long>(bytes_per_scalar) * scalars;
  }
};

struct MessageRecord {
  int iteration = 0;
  int from = 0;  // 0 is the master, s + 1 the agent of partition s
  int to = 0;
  MessageKind kind = MessageKind::kShare;
  int scalars = 0;
  long long bytes = 0;
  double latency = 0.0;  // seconds
};

class MessageLog : public MessageSink {
 public:
  using LatencyModel = std::function<double(const MessageRecord&)>;

  explicit MessageLog(ByteModel bytes = {}, LatencyModel latency = {});

  void OnMessage(int iteration, int from, int to, MessageKind kind,
                 int scalars) override;
  // Appends an already sized record; throws std::invalid_argument when its
  // byte count is not positive.
  void Append(const MessageRecord& record);

  const std::vector<MessageRecord>& records() const { return records_; }
  long long message_count() const { return messages_; }
  long long total_bytes() const { return bytes_; }
  double total_latency() const { return latency_; }

 private:
  ByteModel model_;
  LatencyModel latency_model_;
  std::vector<MessageRecord> records_;
  long long messages_ = 0;
  long long bytes_ = 0;
  double latency_ = 0.0;
};

enum class Algorithm { kMonolithic, kPrimal, kDual };

Algorithm ParseAlgorithm(const std::string& name);
std::string ToString(Algorithm algorithm);

struct DistributedRun {
  IterateTrace trace;
  MessageLog log;
};

// Runs the primal or dual method with `log` attached. Solver errors
// propagate after the traffic exchanged so far has been logged into `log`.
IterateTrace RunDistributed(Algorithm algorithm, const PartitionedLp& plp,
                            RunOptions options, MessageLog& log,
                            const lp::SolverOptions& solver = {});

DistributedRun RunDistributed(Algorithm algorithm, const PartitionedLp& plp,
                              const RunOptions& options, ByteModel bytes = {},
                              const lp::SolverOptions& solver = {});

struct OverheadStats {
  long long messages = 0;
  long long bytes = 0;
  int iterations = 0;
  double messages_per_iteration = 0.0;
  double bytes_per_iteration = 0.0;
};

OverheadStats ComputeOverheadStats(const MessageLog& log);

// Columns iter,from,to,kind,bytes.
void WriteMessageCsv(const MessageLog& log, std::ostream& out);

}  // namespace vne

#endif  // VNE_PROTOCOL_H_

#ifndef VNE_DECOMPOSITION_H_
#define VNE_DECOMPOSITION_H_

// Pieces shared by the primal and dual subgradient decompositions: step and
// stop rules, per-iteration trace records and the message hook used by the
// protocol simulation.

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "vne/lp.h"
#include "vne/partition.h"

namespace vne {

enum class StepKind {
  kDiminishing,     // a / t
  kConstant,        // a
  kSquareSummable,  // a / (b + t)
  kNormalized,      // a / (sqrt(t) * |g|), a / sqrt(t) when g = 0
};

struct StepRule {
  StepKind kind = StepKind::kDiminishing;
  double a = 0.5;
  double b = 0.0;

  // t starts at 1. Throws std::invalid_argument for t < 1.
  double Step(int t, double g_norm) const;
  // Throws on a <= 0 or a square-summable rule with b + 1 <= 0.
  void Validate() const;

  // "diminishing", "constant", "square_summable" or "normalized".
  static StepKind ParseKind(const std::string& name);
  static std::string ToString(StepKind kind);
};

struct StopRule {
  int max_iterations = 100;
  // Stop once gap <= gap_tolerance * max(1, |reference|); negative disables.
  double gap_tolerance = 1e-4;
};

enum class MessageKind { kShare, kPrice, kValue, kDuals, kOptimum };

std::string ToString(MessageKind kind);

// Receives one call per master/agent message. Agent 0 is the master; the
// agent for partition s is s + 1.
class MessageSink {
 public:
  virtual ~MessageSink() = default;
  virtual void OnMessage(int iteration, int from, int to, MessageKind kind,
                         int scalars) = 0;
};

// A subproblem solve ended neither optimal nor in a state the method can
// recover from (iteration limit, unbounded).
class SolverFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SubproblemResult {
  lp::LpStatus status = lp::LpStatus::kOptimal;
  double value = 0.0;
  std::vector<double> x;
  // Multipliers of the shared-capacity rows (primal method only).
  std::vector<double> duals;
  // Set when the share was infeasible and the duals come from the
  // minimum-violation problem instead.
  bool recovered = false;
};

struct IterateRecord {
  int t = 0;
  double alpha = 0.0;
  // phi_sum for the primal method, q(lambda) for the dual.
  double objective = 0.0;
  double best_primal = 0.0;
  double best_bound = 0.0;
  double gap = 0.0;  // NaN when no reference is available
  double g_norm = 0.0;
  long long messages = 0;  // cumulative
  double solver_seconds = 0.0;  // cumulative, subproblem solves only
  // Shares z_s (partition-major, node-minor) or prices lambda.
  std::vector<double> state;
};

struct IterateTrace {
  std::string algorithm;
  std::vector<IterateRecord> records;
  std::string stop_reason;
  // Best integral node assignment found, vnode * node_count + node order.
  std::vector<double> x_best;
  double best_primal = 0.0;
  double best_bound = lp::kInfinity;

  double final_gap() const;
  double total_solver_seconds() const;
};

struct RunOptions {
  StepRule step;
  StopRule stop;
  // Coupled program optimum (or an external bound) used for the gap.
  std::optional<double> reference;
  // Solve the subproblems of one iteration on separate threads.
  bool parallel = false;
  MessageSink* sink = nullptr;
};

// Trace CSV; the column set follows trace.algorithm.
void WriteTraceCsv(const IterateTrace& trace, std::ostream& out);

}  // namespace vne

#endif  // VNE_DECOMPOSITION_H_

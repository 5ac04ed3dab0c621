#include "vne/decomposition.h"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "decomposition_internal.h"

namespace vne {

double StepRule::Step(int t, double g_norm) const {
  if (t < 1) throw std::invalid_argument("step index starts at 1");
  switch (kind) {
    case StepKind::kDiminishing:
      return a / t;
    case StepKind::kConstant:
      return a;
    case StepKind::kSquareSummable:
      return a / (b + t);
    case StepKind::kNormalized:
      return g_norm > 0.0 ? a / (std::sqrt(static_cast<double>(t)) * g_norm)
                          : a / std::sqrt(static_cast<double>(t));
  }
  return a;
}

void StepRule::Validate() const {
  if (!(a > 0.0) || !std::isfinite(a)) {
    throw std::invalid_argument("step size constant must be positive");
  }
  if (kind == StepKind::kSquareSummable && !(b + 1.0 > 0.0)) {
    throw std::invalid_argument("square-summable offset must exceed -1");
  }
}

StepKind StepRule::ParseKind(const std::string& name) {
  if (name == "diminishing") return StepKind::kDiminishing;
  if (name == "constant") return StepKind::kConstant;
  if (name == "square_summable") return StepKind::kSquareSummable;
  if (name == "normalized") return StepKind::kNormalized;
  throw std::invalid_argument("unknown step rule '" + name + "'");
}

std::string StepRule::ToString(StepKind kind) {
  switch (kind) {
    case StepKind::kDiminishing:
      return "diminishing";
    case StepKind::kConstant:
      return "constant";
    case StepKind::kSquareSummable:
      return "square_summable";
    case StepKind::kNormalized:
      return "normalized";
  }
  return "diminishing";
}

std::string ToString(MessageKind kind) {
  switch (kind) {
    case MessageKind::kShare:
      return "share";
    case MessageKind::kPrice:
      return "price";
    case MessageKind::kValue:
      return "value";
    case MessageKind::kDuals:
      return "duals";
    case MessageKind::kOptimum:
      return "optimum";
  }
  return "value";
}

double IterateTrace::final_gap() const {
  return records.empty() ? std::nan("") : records.back().gap;
}

double IterateTrace::total_solver_seconds() const {
  return records.empty() ? 0.0 : records.back().solver_seconds;
}

void WriteTraceCsv(const IterateTrace& trace, std::ostream& out) {
  const bool primal = trace.algorithm == "primal";
  out.precision(17);
  out << (primal ? "t,alpha,phi_sum,gap,g_norm,msgs_cum\n"
                 : "t,alpha,q_lambda,best_primal,gap,g_norm,msgs_cum\n");
  for (const IterateRecord& r : trace.records) {
    out << r.t << ',' << r.alpha << ',' << r.objective << ',';
    if (!primal) out << r.best_primal << ',';
    out << r.gap << ',' << r.g_norm << ',' << r.messages << '\n';
  }
}

}  // namespace vne

namespace vne::internal {

double Norm(const std::vector<double>& v) {
  double sum = 0.0;
  for (double x : v) sum += x * x;
  return std::sqrt(sum);
}

std::vector<double> RoundPlacement(const PartitionedLp& plp,
                                   const std::vector<double>& x,
                                   double* objective) {
  const NodeAssignment a = RepairNodeAssignment(plp.whole, x, plp.h);
  std::vector<double> out(x.size(), 0.0);
  for (int v = 0; v < plp.vnode_count; ++v) {
    if (a.host[v] != kUnmapped) out[plp.whole.Column(v, a.host[v])] = 1.0;
  }
  if (objective) *objective = a.objective;
  return out;
}

IterateTrace SolveUndecomposed(const PartitionedLp& plp, const RunOptions& options,
                               const lp::SolverOptions& solver,
                               const std::string& algorithm) {
  const auto start = std::chrono::steady_clock::now();
  const lp::LpSolution s = lp::SolveLp(CoupledProgram(plp), solver);
  const double elapsed = Seconds(std::chrono::steady_clock::now() - start);
  if (!s.optimal()) {
    throw SolverFailure("coupled program: " + lp::ToString(s.status));
  }
  if (options.sink) {
    options.sink->OnMessage(1, 0, 1, MessageKind::kShare, plp.node_count);
    options.sink->OnMessage(1, 1, 0, MessageKind::kValue,
                            1 + plp.num_columns());
  }
  IterateTrace trace;
  trace.algorithm = algorithm;
  trace.stop_reason = "single_partition";
  // Columns of a lone block follow the whole-program order.
  std::vector<double> x = AssembleSolution(plp, {s.x});
  double rounded = 0.0;
  trace.x_best = RoundPlacement(plp, x, &rounded);
  trace.best_primal = s.objective;
  trace.best_bound = s.objective;
  IterateRecord r;
  r.t = 1;
  r.objective = s.objective;
  r.best_primal = s.objective;
  r.best_bound = s.objective;
  r.gap = options.reference ? std::abs(*options.reference - s.objective) : 0.0;
  r.messages = 2;
  r.solver_seconds = elapsed;
  r.state = plp.h;
  trace.records.push_back(std::move(r));
  return trace;
}

bool GapReached(double gap, const RunOptions& options) {
  if (options.stop.gap_tolerance < 0.0 || std::isnan(gap)) return false;
  const double scale =
      options.reference ? std::max(1.0, std::abs(*options.reference)) : 1.0;
  return gap <= options.stop.gap_tolerance * scale;
}

}  // namespace vne::internal

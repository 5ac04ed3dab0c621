#include "vne/dual_decomposition.h"

#include <algorithm>
#include <cmath>

#include "decomposition_internal.h"

namespace vne {

SubproblemResult SolveSubproblemDual(const PartitionedLp& plp, int s,
                                     std::span<const double> lambda,
                                     const lp::SolverOptions& solver) {
  const PartitionBlock& block = plp.blocks.at(s);
  if (static_cast<int>(lambda.size()) != plp.node_count) {
    throw std::invalid_argument("price vector has the wrong length");
  }
  lp::LpProblem priced = block.local;
  for (int i = 0; i < plp.node_count; ++i) {
    const lp::SparseRow& f = block.coupling[i];
    for (std::size_t t = 0; t < f.columns.size(); ++t) {
      const int c = f.columns[t];
      priced.set_cost(c, priced.cost()[c] - f.values[t] * lambda[i]);
    }
  }
  const lp::LpSolution sol = lp::SolveLp(priced, solver);
  if (!sol.optimal()) {
    throw SolverFailure("dual subproblem " + std::to_string(s) + ": " +
                        lp::ToString(sol.status));
  }
  SubproblemResult out;
  out.status = sol.status;
  out.value = sol.objective;
  out.x = sol.x;
  return out;
}

double DualValue(const PartitionedLp& plp, std::span<const double> lambda,
                 std::span<const double> values) {
  double q = 0.0;
  for (int i = 0; i < plp.node_count; ++i) q += lambda[i] * plp.h[i];
  for (double v : values) q += v;
  return q;
}

DualState DualMasterStep(const DualState& state, std::span<const double> usage,
                         std::span<const double> h, const StepRule& rule) {
  DualState next = state;
  const std::size_t n = h.size();
  next.g.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) next.g[i] = usage[i] - h[i];
  next.alpha = rule.Step(state.t, internal::Norm(next.g));
  for (std::size_t i = 0; i < n; ++i) {
    next.lambda[i] = std::max(0.0, state.lambda[i] + next.alpha * next.g[i]);
  }
  ++next.t;
  return next;
}

IterateTrace RunDual(const PartitionedLp& plp, const RunOptions& options,
                     const lp::SolverOptions& solver) {
  const int k = plp.num_partitions();
  if (options.stop.max_iterations < 1) {
    throw std::invalid_argument("at least one iteration is required");
  }
  if (k == 1) return internal::SolveUndecomposed(plp, options, solver, "dual");
  options.step.Validate();
  const int n = plp.node_count;

  DualState state;
  state.lambda.assign(n, 0.0);
  IterateTrace trace;
  trace.algorithm = "dual";
  std::vector<double> average(static_cast<std::size_t>(plp.vnode_count) * n, 0.0);
  double best_bound = lp::kInfinity;
  double best_primal = -lp::kInfinity;
  long long messages = 0;
  double solver_seconds = 0.0;

  for (int t = 1; t <= options.stop.max_iterations; ++t) {
    state.t = t;
    const auto start = std::chrono::steady_clock::now();
    const std::vector<SubproblemResult> results =
        internal::SolveAll<SubproblemResult>(k, options.parallel, [&](int s) {
          return SolveSubproblemDual(plp, s, state.lambda, solver);
        });
    solver_seconds += internal::Seconds(std::chrono::steady_clock::now() - start);

    std::vector<double> values;
    std::vector<std::vector<double>> xs;
    std::vector<double> usage(n, 0.0);
    for (int s = 0; s < k; ++s) {
      if (options.sink) {
        options.sink->OnMessage(t, 0, s + 1, MessageKind::kPrice, n);
        options.sink->OnMessage(
            t, s + 1, 0, MessageKind::kOptimum,
            1 + static_cast<int>(results[s].x.size()));
      }
      messages += 2;
      values.push_back(results[s].value);
      xs.push_back(results[s].x);
      const std::vector<double> used = CouplingUsage(plp.blocks[s], results[s].x);
      for (int i = 0; i < n; ++i) usage[i] += used[i];
    }
    const double q = DualValue(plp, state.lambda, values);
    best_bound = std::min(best_bound, q);

    const std::vector<double> x = AssembleSolution(plp, xs);
    for (std::size_t c = 0; c < x.size(); ++c) {
      average[c] += (x[c] - average[c]) / t;
    }
    double rounded = 0.0;
    std::vector<double> placement = internal::RoundPlacement(plp, average, &rounded);
    if (rounded > best_primal) {
      best_primal = rounded;
      trace.x_best = std::move(placement);
    }

    const DualState next = DualMasterStep(state, usage, plp.h, options.step);
    // The optima are feasible for the shared rows and no positive price sits
    // on a slack row: x is optimal for the coupled program and q is exact.
    bool complementary = true;
    for (int i = 0; i < n && complementary; ++i) {
      const double tol = 1e-9 * std::max(1.0, plp.h[i]);
      complementary = next.g[i] <= tol &&
                      (state.lambda[i] <= 1e-12 || next.g[i] >= -tol);
    }

    IterateRecord r;
    r.t = t;
    r.alpha = next.alpha;
    r.objective = q;
    r.best_primal = best_primal;
    r.best_bound = best_bound;
    r.gap = options.reference ? best_bound - *options.reference
                              : best_bound - best_primal;
    r.g_norm = internal::Norm(next.g);
    r.messages = messages;
    r.solver_seconds = solver_seconds;
    r.state = state.lambda;
    trace.records.push_back(std::move(r));

    // The stop needs a recovered placement within tolerance of the bound. A
    // tight bound alone (q against the reference) says nothing about x_best.
    if (internal::GapReached(best_bound - best_primal, options)) {
      trace.stop_reason = "gap";
      break;
    }
    if (complementary) {
      trace.stop_reason = "complementary";
      break;
    }
    if (t == options.stop.max_iterations) {
      trace.stop_reason = "max_iterations";
      break;
    }
    state = next;
  }
  trace.best_bound = best_bound;
  trace.best_primal = best_primal;
  if (trace.x_best.empty()) trace.x_best.assign(average.size(), 0.0);
  return trace;
}

}  // namespace vne

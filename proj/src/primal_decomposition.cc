#include "vne/primal_decomposition.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "decomposition_internal.h"

namespace vne {

SubproblemResult SolveSubproblemPrimal(const PartitionedLp& plp, int s,
                                       std::span<const double> share,
                                       const lp::SolverOptions& solver) {
  const PartitionBlock& block = plp.blocks.at(s);
  if (static_cast<int>(share.size()) != plp.node_count) {
    throw std::invalid_argument("share vector has the wrong length");
  }
  auto with_share_rows = [&](lp::LpProblem problem, bool elastic) {
    for (int i = 0; i < plp.node_count; ++i) {
      const lp::SparseRow& f = block.coupling[i];
      std::vector<std::pair<int, double>> terms;
      for (std::size_t t = 0; t < f.columns.size(); ++t) {
        terms.emplace_back(f.columns[t], f.values[t]);
      }
      if (elastic) terms.emplace_back(problem.AddVariable(-1.0, 0.0, lp::kInfinity), -1.0);
      problem.AddRow(terms, share[i], "share[" + std::to_string(i) + "]");
    }
    return problem;
  };

  const int first_share_row = block.local.num_rows();
  const int columns = block.local.num_variables();
  SubproblemResult out;
  const lp::LpSolution sol = lp::SolveLp(with_share_rows(block.local, false), solver);
  out.status = sol.status;
  if (sol.optimal()) {
    out.value = sol.objective;
    out.x = sol.x;
    out.duals.assign(sol.duals.begin() + first_share_row, sol.duals.end());
    return out;
  }
  if (sol.status != lp::LpStatus::kInfeasible) {
    throw SolverFailure("primal subproblem " + std::to_string(s) + ": " +
                        lp::ToString(sol.status));
  }

  // Minimum total violation of the share rows; its multipliers say which
  // resources the partition is short of.
  lp::LpProblem feasibility = block.local;
  for (int c = 0; c < columns; ++c) feasibility.set_cost(c, 0.0);
  const lp::LpSolution relaxed =
      lp::SolveLp(with_share_rows(std::move(feasibility), true), solver);
  if (!relaxed.optimal()) {
    throw SolverFailure("primal subproblem " + std::to_string(s) +
                        " has an infeasible local system");
  }
  out.value = -lp::kInfinity;
  out.x.assign(relaxed.x.begin(), relaxed.x.begin() + columns);
  out.duals.assign(relaxed.duals.begin() + first_share_row, relaxed.duals.end());
  out.recovered = true;
  return out;
}

std::vector<double> ProjectOntoSimplex(std::span<const double> v, double total) {
  std::vector<double> out(v.size(), 0.0);
  if (v.empty() || total <= 0.0) return out;
  std::vector<double> sorted(v.begin(), v.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double prefix = 0.0;
  double theta = 0.0;
  for (std::size_t j = 0; j < sorted.size(); ++j) {
    prefix += sorted[j];
    const double candidate = (prefix - total) / static_cast<double>(j + 1);
    if (sorted[j] - candidate > 0.0) theta = candidate;
  }
  for (std::size_t j = 0; j < v.size(); ++j) out[j] = std::max(v[j] - theta, 0.0);
  return out;
}

PrimalState PrimalMasterStep(const PrimalState& state, std::span<const double> h,
                             const StepRule& rule) {
  const int k = static_cast<int>(state.z.size());
  const int n = static_cast<int>(h.size());
  PrimalState next = state;
  next.g.assign(k, std::vector<double>(n, 0.0));
  if (k < 2) {
    next.alpha = rule.Step(state.t, 0.0);
    next.g_norm = 0.0;
    ++next.t;
    return next;
  }
  const double spread = static_cast<double>(k) / (k - 1);
  double squared = 0.0;
  for (int i = 0; i < n; ++i) {
    double mean = 0.0;
    for (int s = 0; s < k; ++s) mean += state.lambda[s][i];
    mean /= k;
    for (int s = 0; s < k; ++s) {
      next.g[s][i] = -spread * (state.lambda[s][i] - mean);
      squared += next.g[s][i] * next.g[s][i];
    }
  }
  // Scaled so that two partitions report |g| of the first one.
  next.g_norm = std::sqrt(squared * (k - 1) / k);
  next.alpha = rule.Step(state.t, next.g_norm);
  for (int i = 0; i < n; ++i) {
    std::vector<double> column(k);
    for (int s = 0; s < k; ++s) {
      column[s] = state.z[s][i] - next.alpha * next.g[s][i];
    }
    const std::vector<double> projected = ProjectOntoSimplex(column, h[i]);
    for (int s = 0; s < k; ++s) next.z[s][i] = projected[s];
  }
  ++next.t;
  return next;
}

IterateTrace RunPrimal(const PartitionedLp& plp, const RunOptions& options,
                       const lp::SolverOptions& solver) {
  const int k = plp.num_partitions();
  if (options.stop.max_iterations < 1) {
    throw std::invalid_argument("at least one iteration is required");
  }
  if (k == 1) return internal::SolveUndecomposed(plp, options, solver, "primal");
  options.step.Validate();
  const int n = plp.node_count;

  PrimalState state;
  state.z.assign(k, std::vector<double>(n));
  for (int s = 0; s < k; ++s) {
    for (int i = 0; i < n; ++i) state.z[s][i] = plp.h[i] / k;
  }

  IterateTrace trace;
  trace.algorithm = "primal";
  double best = -lp::kInfinity;
  std::vector<double> best_x;
  long long messages = 0;
  double solver_seconds = 0.0;

  for (int t = 1; t <= options.stop.max_iterations; ++t) {
    state.t = t;
    const auto start = std::chrono::steady_clock::now();
    const std::vector<SubproblemResult> results =
        internal::SolveAll<SubproblemResult>(k, options.parallel, [&](int s) {
          return SolveSubproblemPrimal(plp, s, state.z[s], solver);
        });
    solver_seconds += internal::Seconds(std::chrono::steady_clock::now() - start);

    double phi_sum = 0.0;
    std::vector<std::vector<double>> xs;
    state.lambda.clear();
    for (int s = 0; s < k; ++s) {
      if (options.sink) {
        options.sink->OnMessage(t, 0, s + 1, MessageKind::kShare, n);
        options.sink->OnMessage(t, s + 1, 0, MessageKind::kDuals, 1 + n);
      }
      messages += 2;
      phi_sum += results[s].value;
      state.lambda.push_back(results[s].duals);
      xs.push_back(results[s].x);
    }
    if (phi_sum > best) {
      best = phi_sum;
      best_x = AssembleSolution(plp, xs);
    }

    const PrimalState next = PrimalMasterStep(state, plp.h, options.step);
    IterateRecord r;
    r.t = t;
    r.alpha = next.alpha;
    r.objective = phi_sum;
    r.best_primal = best;
    r.best_bound = options.reference.value_or(lp::kInfinity);
    r.gap = options.reference ? *options.reference - best : std::nan("");
    r.g_norm = next.g_norm;
    r.messages = messages;
    r.solver_seconds = solver_seconds;
    for (const auto& share : state.z) {
      r.state.insert(r.state.end(), share.begin(), share.end());
    }
    trace.records.push_back(std::move(r));

    if (internal::GapReached(trace.records.back().gap, options)) {
      trace.stop_reason = "gap";
      break;
    }
    if (next.g_norm <= 1e-12) {
      trace.stop_reason = "zero_subgradient";
      break;
    }
    if (t == options.stop.max_iterations) {
      trace.stop_reason = "max_iterations";
      break;
    }
    state = next;
  }

  trace.best_primal = best;
  trace.best_bound = options.reference.value_or(lp::kInfinity);
  if (best_x.empty()) {
    trace.x_best.assign(static_cast<std::size_t>(plp.vnode_count) * n, 0.0);
  } else {
    trace.x_best = internal::RoundPlacement(plp, best_x, nullptr);
  }
  return trace;
}

}  // namespace vne

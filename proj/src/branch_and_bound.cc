#include <cmath>
#include <cstdint>
#include <queue>
#include <stdexcept>
#include <vector>

#include "vne/lp.h"

namespace vne::lp {
namespace {

struct Node {
  double bound = 0.0;
  std::int64_t sequence = 0;
  // (column, fixed value) decisions from the root.
  std::vector<std::pair<int, int>> fixings;
};

struct BestBoundFirst {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound < b.bound;
    return a.sequence < b.sequence;  // newest first: dive on ties
  }
};

void CheckBinaryBounds(const LpProblem& problem) {
  for (int j = 0; j < problem.num_variables(); ++j) {
    if (!problem.integer()[j]) continue;
    if (problem.lower()[j] < 0.0 || problem.upper()[j] > 1.0) {
      throw std::invalid_argument("integer column " + std::to_string(j) +
                                  " must have bounds inside [0, 1]");
    }
  }
}

}  // namespace

LpSolution SolveIlp(const LpProblem& problem, const SolverOptions& options) {
  problem.Validate();
  CheckBinaryBounds(problem);

  LpProblem work = problem;
  const double prune_tol = options.tol_gap;
  auto improves = [&](double value, double incumbent) {
    return value > incumbent + prune_tol * std::max(1.0, std::abs(incumbent));
  };

  std::priority_queue<Node, std::vector<Node>, BestBoundFirst> open;
  std::int64_t sequence = 0;
  open.push(Node{kInfinity, sequence++, {}});

  LpSolution best;
  best.status = LpStatus::kInfeasible;
  bool have_incumbent = false;
  double incumbent = -kInfinity;
  std::int64_t nodes = 0;
  int iterations = 0;
  bool hit_iteration_limit = false;

  while (!open.empty()) {
    if (have_incumbent && !improves(open.top().bound, incumbent)) break;
    if (nodes >= options.max_nodes) break;
    Node node = open.top();
    open.pop();
    ++nodes;

    for (int j = 0; j < work.num_variables(); ++j) {
      work.set_bounds(j, problem.lower()[j], problem.upper()[j]);
    }
    for (const auto& [j, v] : node.fixings) work.set_bounds(j, v, v);

    LpSolution relaxed = SolveLp(work, options);
    iterations += relaxed.iterations;
    if (relaxed.status == LpStatus::kInfeasible) continue;
    if (relaxed.status == LpStatus::kUnbounded) {
      if (node.fixings.empty()) {
        relaxed.nodes = nodes;
        return relaxed;
      }
      continue;
    }
    if (relaxed.status == LpStatus::kIterationLimit) {
      hit_iteration_limit = true;
      continue;
    }
    if (have_incumbent && !improves(relaxed.objective, incumbent)) continue;

    int branch = -1;
    double most_fractional = options.tol_integrality;
    for (int j = 0; j < work.num_variables(); ++j) {
      if (!problem.integer()[j]) continue;
      const double f = std::abs(relaxed.x[j] - std::round(relaxed.x[j]));
      if (f > most_fractional) {
        most_fractional = f;
        branch = j;
      }
    }

    if (branch < 0) {
      for (int j = 0; j < work.num_variables(); ++j) {
        if (problem.integer()[j]) relaxed.x[j] = std::round(relaxed.x[j]);
      }
      relaxed.objective = problem.Objective(relaxed.x);
      if (!have_incumbent || relaxed.objective > incumbent) {
        incumbent = relaxed.objective;
        best = std::move(relaxed);
        have_incumbent = true;
      }
      continue;
    }

    Node down{relaxed.objective, sequence++, node.fixings};
    down.fixings.emplace_back(branch, 0);
    Node up{relaxed.objective, sequence++, std::move(node.fixings)};
    up.fixings.emplace_back(branch, 1);
    open.push(std::move(up));
    open.push(std::move(down));
  }

  best.nodes = nodes;
  best.iterations = iterations;
  const bool exhausted =
      open.empty() || (have_incumbent && !improves(open.top().bound, incumbent));
  if (have_incumbent) {
    best.status = exhausted && !hit_iteration_limit ? LpStatus::kOptimal
                                                    : LpStatus::kNodeLimit;
    best.bound = exhausted ? incumbent : std::max(incumbent, open.top().bound);
  } else if (!exhausted) {
    best.status = LpStatus::kNodeLimit;
    best.bound = open.top().bound;
  } else if (hit_iteration_limit) {
    best.status = LpStatus::kIterationLimit;
  } else {
    best.status = LpStatus::kInfeasible;
  }
  return best;
}

LpSolution BruteForceBinary(const LpProblem& problem, double tolerance) {
  problem.Validate();
  const int n = problem.num_variables();
  if (n > kBruteForceMaxVariables) {
    throw std::invalid_argument("brute force limited to " +
                                std::to_string(kBruteForceMaxVariables) +
                                " variables");
  }
  for (int j = 0; j < n; ++j) {
    if (!problem.integer()[j] || problem.lower()[j] < 0.0 ||
        problem.upper()[j] > 1.0) {
      throw std::invalid_argument("brute force needs binary column " +
                                  std::to_string(j));
    }
  }

  LpSolution best;
  best.status = LpStatus::kInfeasible;
  best.duals.assign(problem.num_rows(), 0.0);
  std::vector<double> x(n);
  bool found = false;
  // Column 0 is the most significant bit, so counting up walks vectors in
  // lexicographic order and the first optimum seen is the smallest.
  const std::uint64_t count = std::uint64_t{1} << n;
  for (std::uint64_t code = 0; code < count; ++code) {
    bool feasible = true;
    for (int j = 0; j < n; ++j) {
      x[j] = static_cast<double>((code >> (n - 1 - j)) & 1U);
      if (x[j] < problem.lower()[j] || x[j] > problem.upper()[j]) {
        feasible = false;
        break;
      }
    }
    if (!feasible) continue;
    for (int i = 0; i < problem.num_rows() && feasible; ++i) {
      feasible = problem.Activity(i, x) <= problem.rhs()[i] + tolerance;
    }
    if (!feasible) continue;
    const double objective = problem.Objective(x);
    if (!found || objective > best.objective) {
      best.x = x;
      best.objective = objective;
      found = true;
    }
  }
  if (found) {
    best.status = LpStatus::kOptimal;
    best.bound = best.objective;
    best.reduced_costs.assign(n, 0.0);
  }
  best.nodes = static_cast<std::int64_t>(count);
  return best;
}

}  // namespace vne::lp

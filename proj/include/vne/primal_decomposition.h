#ifndef VNE_PRIMAL_DECOMPOSITION_H_
#define VNE_PRIMAL_DECOMPOSITION_H_

// Resource-share decomposition. The master splits every node capacity h_i
// into shares z_s[i] (sum_s z_s = h, z_s >= 0); partition s maximises its own
// objective under F_s x_s <= z_s and reports its value phi_s and the
// multipliers lambda_s of the share rows. Capacity moves towards partitions
// whose multiplier is above the average.

#include <span>
#include <vector>

#include "vne/decomposition.h"
#include "vne/partition.h"

namespace vne {

// With at-most-once assignment every share is feasible. With exactly-once
// assignment an infeasible share returns value -infinity and the
// multipliers of the minimum total violation problem, flagged `recovered`.
// Throws SolverFailure on any other non-optimal status.
SubproblemResult SolveSubproblemPrimal(const PartitionedLp& plp, int s,
                                       std::span<const double> share,
                                       const lp::SolverOptions& solver = {});

struct PrimalState {
  int t = 1;
  std::vector<std::vector<double>> z;       // [s][i]
  std::vector<std::vector<double>> lambda;  // [s][i], from iteration t
  std::vector<std::vector<double>> g;       // [s][i], filled by the step
  double alpha = 0.0;
  double g_norm = 0.0;
};

// g_s = -(k / (k - 1)) * (lambda_s - mean_r lambda_r), which is
// -lambda_1 + lambda_2 for the first of two partitions. Then
// z_s <- z_s - alpha_t g_s and each resource column is projected back onto
// {z >= 0, sum_s z_s = h_i}. For two partitions the projection is a clamp of
// z_1 to [0, h_i]. Increments t.
PrimalState PrimalMasterStep(const PrimalState& state, std::span<const double> h,
                             const StepRule& rule);

// Euclidean projection of `v` onto {x >= 0, sum x = total}.
std::vector<double> ProjectOntoSimplex(std::span<const double> v, double total);

// z starts at h / k. The best iterate keeps the largest phi sum; its placement
// is rounded into trace.x_best. A single partition is one solve of the
// coupled program.
IterateTrace RunPrimal(const PartitionedLp& plp, const RunOptions& options,
                       const lp::SolverOptions& solver = {});

}  // namespace vne

#endif  // VNE_PRIMAL_DECOMPOSITION_H_

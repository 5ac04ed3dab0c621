#ifndef VNE_DUAL_DECOMPOSITION_H_
#define VNE_DUAL_DECOMPOSITION_H_

// Pricing decomposition of the placement program. The shared capacity rows
// are moved into the objective with prices lambda >= 0:
//
//   L(x, lambda) = sum_s c_s^T x_s + lambda^T (h - sum_s F_s x_s)
//   q(lambda)    = lambda^T h + sum_s max { (c_s - F_s^T lambda)^T x_s :
//                                           A_s x_s <= b_s, 0 <= x_s <= 1 }
//
// q bounds the coupled optimum from above for every lambda >= 0 and the
// master minimises it. The subgradient of q is h - sum_s F_s x_s, so a
// descent step raises the price of every overused node:
//
//   lambda <- max(0, lambda + alpha_t (sum_s F_s x_s - h))

#include <span>
#include <vector>

#include "vne/decomposition.h"
#include "vne/partition.h"

namespace vne {

// Optimum x_s of the price-adjusted local program and its value.
SubproblemResult SolveSubproblemDual(const PartitionedLp& plp, int s,
                                     std::span<const double> lambda,
                                     const lp::SolverOptions& solver = {});

// lambda^T h plus the price-adjusted subproblem values.
double DualValue(const PartitionedLp& plp, std::span<const double> lambda,
                 std::span<const double> values);

struct DualState {
  int t = 1;
  std::vector<double> lambda;
  std::vector<double> g;  // sum_s F_s x_s - h
  double alpha = 0.0;
};

// Sets g = usage - h and takes the projected step from lambda. Increments t.
DualState DualMasterStep(const DualState& state, std::span<const double> usage,
                         std::span<const double> h, const StepRule& rule);

// lambda starts at 0. After every iteration the running average of the
// subproblem optima is rounded to a capacity-feasible placement, whose value
// is the best primal candidate. With a reference the gap is
// min_t q(lambda_t) - reference, otherwise min_t q(lambda_t) - best primal.
// Stops early when min_t q(lambda_t) - best primal meets the gap rule, or
// when the optima already satisfy the shared rows with complementary prices.
IterateTrace RunDual(const PartitionedLp& plp, const RunOptions& options,
                     const lp::SolverOptions& solver = {});

}  // namespace vne

#endif  // VNE_DUAL_DECOMPOSITION_H_

#ifndef VNE_SRC_DECOMPOSITION_INTERNAL_H_
#define VNE_SRC_DECOMPOSITION_INTERNAL_H_

#include <chrono>
#include <functional>
#include <future>
#include <vector>

#include "vne/decomposition.h"

namespace vne::internal {

// Runs solve(s) for every partition, concurrently when asked. Results are
// indexed by partition so the outcome never depends on scheduling.
template <typename Result>
std::vector<Result> SolveAll(int k, bool parallel,
                             const std::function<Result(int)>& solve) {
  std::vector<Result> out(k);
  if (!parallel || k == 1) {
    for (int s = 0; s < k; ++s) out[s] = solve(s);
    return out;
  }
  std::vector<std::future<Result>> pending;
  for (int s = 0; s < k; ++s) {
    pending.push_back(std::async(std::launch::async, solve, s));
  }
  for (int s = 0; s < k; ++s) out[s] = pending[s].get();
  return out;
}

inline double Seconds(std::chrono::steady_clock::duration d) {
  return std::chrono::duration<double>(d).count();
}

double Norm(const std::vector<double>& v);

// Rounds a placement in whole-program column order and returns it as a 0/1
// vector; `objective` receives its value.
std::vector<double> RoundPlacement(const PartitionedLp& plp,
                                   const std::vector<double>& x,
                                   double* objective);

// One solve of the coupled program, reported as a one-iteration trace with a
// request and an answer message.
IterateTrace SolveUndecomposed(const PartitionedLp& plp, const RunOptions& options,
                               const lp::SolverOptions& solver,
                               const std::string& algorithm);

bool GapReached(double gap, const RunOptions& options);

}  // namespace vne::internal

#endif  // VNE_SRC_DECOMPOSITION_INTERNAL_H_

#ifndef VNE_LP_H_
#define VNE_LP_H_

// Linear and small binary programs in maximisation form:
//
//   maximize    c^T x
//   subject to  A x <= b
//               lower <= x <= upper
//               x_j in {0, 1} for integer-flagged j (SolveIlp only)
//
// SolveLp is a bounded-variable revised simplex with a two-phase start.
// Row multipliers come straight out of the final basis and are nonnegative
// for every row of an optimal solve. SolveIlp runs best-bound branch and
// bound on top of SolveLp.

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace vne::lp {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct SparseRow {
  std::vector<int> columns;  // strictly increasing
  std::vector<double> values;
};

class LpProblem {
 public:
  int AddVariable(double cost, double lower = 0.0, double upper = 1.0,
                  bool integer = false, std::string name = {});
  // Adds sum(terms) <= rhs. Repeated columns are merged, zeros dropped.
  int AddRow(const std::vector<std::pair<int, double>>& terms, double rhs,
             std::string label = {});
  // Adds sum(terms) == rhs as two opposite <= rows; returns the first.
  int AddEqualityRows(const std::vector<std::pair<int, double>>& terms,
                      double rhs, const std::string& label = {});

  int num_variables() const { return static_cast<int>(cost_.size()); }
  int num_rows() const { return static_cast<int>(rows_.size()); }
  std::int64_t num_nonzeros() const;

  const std::vector<double>& cost() const { return cost_; }
  const std::vector<double>& lower() const { return lower_; }
  const std::vector<double>& upper() const { return upper_; }
  const std::vector<bool>& integer() const { return integer_; }
  const std::vector<std::string>& names() const { return names_; }
  const std::vector<SparseRow>& rows() const { return rows_; }
  const SparseRow& row(int i) const { return rows_[i]; }
  const std::vector<double>& rhs() const { return rhs_; }
  const std::vector<std::string>& row_labels() const { return labels_; }

  void set_cost(int j, double c) { cost_[j] = c; }
  void set_bounds(int j, double lower, double upper) {
    lower_[j] = lower;
    upper_[j] = upper;
  }
  void set_rhs(int i, double b) { rhs_[i] = b; }
  void set_integer(int j, bool integer) { integer_[j] = integer; }
  void set_all_integer(bool integer);

  // Throws std::invalid_argument on inconsistent dimensions, lower > upper,
  // a non-finite right-hand side or an infinite lower bound.
  void Validate() const;

  // Row activity A_i x.
  double Activity(int i, const std::vector<double>& x) const;
  double Objective(const std::vector<double>& x) const;

 private:
  std::vector<double> cost_;
  std::vector<double> lower_;
  std::vector<double> upper_;
  std::vector<bool> integer_;
  std::vector<std::string> names_;
  std::vector<SparseRow> rows_;
  std::vector<double> rhs_;
  std::vector<std::string> labels_;
};

enum class LpStatus {
  kOptimal,
  kInfeasible,
  kUnbounded,
  kIterationLimit,
  kNodeLimit,
};

std::string ToString(LpStatus status);

struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  std::vector<double> x;
  double objective = 0.0;
  // One multiplier per row; nonnegative when status is kOptimal.
  std::vector<double> duals;
  // c_j - A_j^T duals.
  std::vector<double> reduced_costs;
  int iterations = 0;
  // Branch and bound only.
  std::int64_t nodes = 0;
  double bound = 0.0;

  bool optimal() const { return status == LpStatus::kOptimal; }
};

struct SolverOptions {
  double tol_feas = 1e-7;
  double tol_cs = 1e-6;
  double tol_gap = 1e-6;
  double tol_integrality = 1e-6;
  int max_iterations = 200000;
  std::int64_t max_nodes = 200000;
  bool scale = true;
};

LpSolution SolveLp(const LpProblem& problem, const SolverOptions& options = {});

// Integer-flagged variables must have bounds inside [0, 1]. Children of a
// node fix the most fractional variable (lowest index on ties) to 1 first.
LpSolution SolveIlp(const LpProblem& problem,
                    const SolverOptions& options = {});

// Exhaustive oracle over binaries; every variable must be integer with
// bounds inside [0, 1]. Ties go to the lexicographically smallest vector.
inline constexpr int kBruteForceMaxVariables = 20;
LpSolution BruteForceBinary(const LpProblem& problem,
                            double tolerance = 1e-9);

// Optimality certificate recomputed from the raw problem data.
struct KktReport {
  double primal_violation = 0.0;  // max bound or row violation
  double dual_violation = 0.0;    // negative multipliers, wrong-sign d_j
  double complementarity = 0.0;   // max duals_i * slack_i
  double gap = 0.0;               // |c^T x - dual objective|
  double dual_objective = 0.0;
  bool ok = false;
};

// Tolerances are applied to data normalised by the largest magnitude in the
// corresponding quantity, so the check is unit-free.
KktReport CheckKkt(const LpProblem& problem, const LpSolution& solution,
                   const SolverOptions& options = {});

// CPLEX-LP text form, for cross-checking against external solvers.
void WriteLpFormat(const LpProblem& problem, std::ostream& out);

}  // namespace vne::lp

#endif  // VNE_LP_H_

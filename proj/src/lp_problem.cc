#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <stdexcept>

#include "vne/lp.h"

namespace vne::lp {

int LpProblem::AddVariable(double cost, double lower, double upper,
                           bool integer, std::string name) {
  cost_.push_back(cost);
  lower_.push_back(lower);
  upper_.push_back(upper);
  integer_.push_back(integer);
  names_.push_back(std::move(name));
  return num_variables() - 1;
}

int LpProblem::AddRow(const std::vector<std::pair<int, double>>& terms,
                      double rhs, std::string label) {
  std::map<int, double> merged;
  for (const auto& [j, a] : terms) {
    if (j < 0 || j >= num_variables()) {
      throw std::invalid_argument("row '" + label + "' references column " +
                                  std::to_string(j));
    }
    merged[j] += a;
  }
  SparseRow row;
  for (const auto& [j, a] : merged) {
    if (a == 0.0) continue;
    row.columns.push_back(j);
    row.values.push_back(a);
  }
  rows_.push_back(std::move(row));
  rhs_.push_back(rhs);
  labels_.push_back(std::move(label));
  return num_rows() - 1;
}

int LpProblem::AddEqualityRows(const std::vector<std::pair<int, double>>& terms,
                               double rhs, const std::string& label) {
  const int first = AddRow(terms, rhs, label);
  std::vector<std::pair<int, double>> negated(terms);
  for (auto& term : negated) term.second = -term.second;
  AddRow(negated, -rhs, label);
  return first;
}

std::int64_t LpProblem::num_nonzeros() const {
  std::int64_t nnz = 0;
  for (const auto& row : rows_) nnz += static_cast<std::int64_t>(row.columns.size());
  return nnz;
}

void LpProblem::set_all_integer(bool integer) {
  std::fill(integer_.begin(), integer_.end(), integer);
}

void LpProblem::Validate() const {
  const int n = num_variables();
  for (int j = 0; j < n; ++j) {
    if (!std::isfinite(cost_[j])) {
      throw std::invalid_argument("non-finite cost on column " +
                                  std::to_string(j));
    }
    if (!std::isfinite(lower_[j])) {
      throw std::invalid_argument("column " + std::to_string(j) +
                                  " needs a finite lower bound");
    }
    if (lower_[j] > upper_[j]) {
      throw std::invalid_argument("column " + std::to_string(j) +
                                  " has lower > upper");
    }
  }
  for (int i = 0; i < num_rows(); ++i) {
    if (!std::isfinite(rhs_[i])) {
      throw std::invalid_argument("non-finite rhs on row " + std::to_string(i));
    }
    const SparseRow& row = rows_[i];
    if (row.columns.size() != row.values.size()) {
      throw std::invalid_argument("ragged row " + std::to_string(i));
    }
    for (std::size_t t = 0; t < row.columns.size(); ++t) {
      if (row.columns[t] < 0 || row.columns[t] >= n ||
          !std::isfinite(row.values[t])) {
        throw std::invalid_argument("bad entry in row " + std::to_string(i));
      }
    }
  }
}

double LpProblem::Activity(int i, const std::vector<double>& x) const {
  const SparseRow& r = rows_[i];
  double sum = 0.0;
  for (std::size_t t = 0; t < r.columns.size(); ++t) {
    sum += r.values[t] * x[r.columns[t]];
  }
  return sum;
}

double LpProblem::Objective(const std::vector<double>& x) const {
  double sum = 0.0;
  for (int j = 0; j < num_variables(); ++j) sum += cost_[j] * x[j];
  return sum;
}

std::string ToString(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal:
      return "optimal";
    case LpStatus::kInfeasible:
      return "infeasible";
    case LpStatus::kUnbounded:
      return "unbounded";
    case LpStatus::kIterationLimit:
      return "iteration-limit";
    case LpStatus::kNodeLimit:
      return "node-limit";
  }
  return "unknown";
}

KktReport CheckKkt(const LpProblem& problem, const LpSolution& solution,
                   const SolverOptions& options) {
  KktReport report;
  const int n = problem.num_variables();
  const int m = problem.num_rows();
  const auto& x = solution.x;
  const auto& y = solution.duals;
  if (static_cast<int>(x.size()) != n || static_cast<int>(y.size()) != m) {
    report.primal_violation = kInfinity;
    return report;
  }

  double x_scale = 1.0;
  for (int j = 0; j < n; ++j) x_scale = std::max(x_scale, std::abs(x[j]));

  for (int j = 0; j < n; ++j) {
    const double scale = std::max(1.0, std::abs(x[j]));
    report.primal_violation =
        std::max(report.primal_violation, (problem.lower()[j] - x[j]) / scale);
    if (std::isfinite(problem.upper()[j])) {
      report.primal_violation = std::max(report.primal_violation,
                                         (x[j] - problem.upper()[j]) / scale);
    }
  }

  // Reduced costs recomputed from the data, not taken from the solver.
  std::vector<double> d(problem.cost());
  double row_scale_max = 1.0;
  std::vector<double> slack(m);
  for (int i = 0; i < m; ++i) {
    const SparseRow& row = problem.row(i);
    double activity = 0.0;
    double magnitude = std::abs(problem.rhs()[i]);
    for (std::size_t t = 0; t < row.columns.size(); ++t) {
      const int j = row.columns[t];
      activity += row.values[t] * x[j];
      magnitude = std::max(magnitude, std::abs(row.values[t]) * x_scale);
      d[j] -= row.values[t] * y[i];
    }
    const double scale = std::max(1.0, magnitude);
    row_scale_max = std::max(row_scale_max, scale);
    slack[i] = problem.rhs()[i] - activity;
    report.primal_violation =
        std::max(report.primal_violation, -slack[i] / scale);
    report.dual_violation = std::max(report.dual_violation, -y[i]);
  }

  double dual_objective = 0.0;
  for (int i = 0; i < m; ++i) dual_objective += problem.rhs()[i] * y[i];
  for (int j = 0; j < n; ++j) {
    const double lo = problem.lower()[j];
    const double hi = problem.upper()[j];
    const double scale = std::max(1.0, std::abs(problem.cost()[j]));
    if (d[j] > 0.0) {
      // Profitable direction must be blocked by a finite upper bound.
      if (!std::isfinite(hi)) {
        report.dual_violation = std::max(report.dual_violation, d[j] / scale);
      } else {
        dual_objective += hi * d[j];
      }
    } else {
      dual_objective += lo * d[j];
    }
  }

  const double obj = problem.Objective(x);
  const double obj_scale = std::max(1.0, std::abs(obj));
  for (int i = 0; i < m; ++i) {
    report.complementarity = std::max(
        report.complementarity, std::abs(y[i] * slack[i]) / obj_scale);
  }
  for (int j = 0; j < n; ++j) {
    const double lo = problem.lower()[j];
    const double hi = problem.upper()[j];
    // Bound complementarity: d_j > 0 only at upper, d_j < 0 only at lower.
    const double gap_to_bound = d[j] > 0.0 ? (std::isfinite(hi) ? hi - x[j] : 0.0)
                                           : x[j] - lo;
    report.complementarity = std::max(
        report.complementarity, std::abs(d[j]) * gap_to_bound / obj_scale);
  }

  report.dual_objective = dual_objective;
  report.gap = std::abs(obj - dual_objective) / obj_scale;
  report.ok = report.primal_violation <= options.tol_feas &&
              report.dual_violation <= options.tol_feas &&
              report.complementarity <= options.tol_cs &&
              report.gap <= options.tol_gap;
  return report;
}

namespace {

std::string ColumnName(const LpProblem& problem, int j) {
  // LP format names may not contain brackets, spaces or commas.
  std::string name = problem.names()[j];
  if (name.empty()) return "x" + std::to_string(j);
  for (char& ch : name) {
    if (ch == '[' || ch == ']' || ch == ',' || ch == ' ' || ch == '=') ch = '_';
  }
  return name + "_c" + std::to_string(j);
}

void WriteTerm(std::ostream& out, double a, const std::string& name,
               bool first) {
  if (a < 0.0) {
    out << (first ? "- " : " - ") << -a << ' ' << name;
  } else {
    out << (first ? "" : " + ") << a << ' ' << name;
  }
}

}  // namespace

void WriteLpFormat(const LpProblem& problem, std::ostream& out) {
  out.precision(17);
  out << "Maximize\n obj:";
  bool first = true;
  for (int j = 0; j < problem.num_variables(); ++j) {
    if (problem.cost()[j] == 0.0) continue;
    out << ' ';
    WriteTerm(out, problem.cost()[j], ColumnName(problem, j), first);
    first = false;
  }
  if (first) out << " 0 " << (problem.num_variables() > 0 ? ColumnName(problem, 0) : "x0");
  out << "\nSubject To\n";
  for (int i = 0; i < problem.num_rows(); ++i) {
    const SparseRow& row = problem.row(i);
    out << " r" << i << ':';
    if (row.columns.empty()) {
      out << " 0 " << (problem.num_variables() > 0 ? ColumnName(problem, 0) : "x0");
    }
    for (std::size_t t = 0; t < row.columns.size(); ++t) {
      out << ' ';
      WriteTerm(out, row.values[t], ColumnName(problem, row.columns[t]), t == 0);
    }
    out << " <= " << problem.rhs()[i];
    if (!problem.row_labels()[i].empty()) {
      out << "  \\ " << problem.row_labels()[i];
    }
    out << '\n';
  }
  out << "Bounds\n";
  for (int j = 0; j < problem.num_variables(); ++j) {
    out << ' ' << problem.lower()[j] << " <= " << ColumnName(problem, j)
        << " <= ";
    if (std::isfinite(problem.upper()[j])) {
      out << problem.upper()[j];
    } else {
      out << "+inf";
    }
    out << '\n';
  }
  bool any_integer = false;
  for (int j = 0; j < problem.num_variables(); ++j) {
    if (!problem.integer()[j]) continue;
    if (!any_integer) out << "General\n";
    any_integer = true;
    out << ' ' << ColumnName(problem, j) << '\n';
  }
  out << "End\n";
}

}  // namespace vne::lp

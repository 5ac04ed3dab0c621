// Bounded-variable revised simplex.
//
// Every row i gets a slack s_i in [0, inf) so that A x + s = b. Structural
// columns start nonbasic at their lower bound and the slacks form the first
// basis. A row whose slack would start negative gets an artificial column
// -e_i instead; phase 1 drives the artificials to zero, after which they are
// pinned to [0, 0] and phase 2 optimises the real objective from that basis.
//
// The basis inverse is kept dense and updated by elementary row operations,
// checked against the basis columns every kRefactorInterval pivots and
// rebuilt from scratch when it has drifted past kInverseDriftTol. Pricing is
// Dantzig's rule with a two-pass (Harris) ratio test; a run of degenerate
// pivots switches both choices to Bland's lowest-index rule until the
// objective moves again.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "vne/lp.h"

namespace vne::lp {
namespace {

constexpr double kPrimalTol = 1e-9;
constexpr double kDualTol = 1e-9;
constexpr double kPivotTol = 1e-9;
constexpr double kDegenerateStep = 1e-12;
constexpr int kDegenerateRunLimit = 20;
constexpr int kRefactorInterval = 64;
constexpr double kInverseDriftTol = 1e-9;

enum class VarState : std::uint8_t { kBasic, kAtLower, kAtUpper };

struct ScaledData {
  int m = 0;
  int n = 0;
  std::vector<int> col_start;
  std::vector<int> row_index;
  std::vector<double> value;
  std::vector<double> cost;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<double> rhs;
  std::vector<double> row_scale;
  std::vector<double> col_scale;
  double cost_scale = 1.0;
};

ScaledData Prepare(const LpProblem& p, bool scale) {
  ScaledData d;
  d.m = p.num_rows();
  d.n = p.num_variables();
  d.row_scale.assign(d.m, 1.0);
  d.col_scale.assign(d.n, 1.0);
  if (scale) {
    for (int i = 0; i < d.m; ++i) {
      double big = 0.0;
      for (double a : p.row(i).values) big = std::max(big, std::abs(a));
      if (big > 0.0) d.row_scale[i] = 1.0 / big;
    }
    std::vector<double> col_big(d.n, 0.0);
    for (int i = 0; i < d.m; ++i) {
      const SparseRow& row = p.row(i);
      for (std::size_t t = 0; t < row.columns.size(); ++t) {
        const int j = row.columns[t];
        col_big[j] =
            std::max(col_big[j], std::abs(row.values[t]) * d.row_scale[i]);
      }
    }
    for (int j = 0; j < d.n; ++j) {
      if (col_big[j] > 0.0) d.col_scale[j] = 1.0 / col_big[j];
    }
  }

  // Transpose rows into scaled columns.
  std::vector<int> count(d.n + 1, 0);
  for (int i = 0; i < d.m; ++i) {
    for (int j : p.row(i).columns) ++count[j + 1];
  }
  d.col_start.assign(d.n + 1, 0);
  for (int j = 0; j < d.n; ++j) d.col_start[j + 1] = d.col_start[j] + count[j + 1];
  d.row_index.resize(d.col_start[d.n]);
  d.value.resize(d.col_start[d.n]);
  std::vector<int> fill(d.col_start.begin(), d.col_start.end() - 1);
  for (int i = 0; i < d.m; ++i) {
    const SparseRow& row = p.row(i);
    for (std::size_t t = 0; t < row.columns.size(); ++t) {
      const int j = row.columns[t];
      d.row_index[fill[j]] = i;
      d.value[fill[j]] = row.values[t] * d.row_scale[i] * d.col_scale[j];
      ++fill[j];
    }
  }

  d.cost.resize(d.n);
  d.lower.resize(d.n);
  d.upper.resize(d.n);
  double cost_big = 0.0;
  for (int j = 0; j < d.n; ++j) {
    d.cost[j] = p.cost()[j] * d.col_scale[j];
    cost_big = std::max(cost_big, std::abs(d.cost[j]));
    d.lower[j] = p.lower()[j] / d.col_scale[j];
    d.upper[j] = p.upper()[j] / d.col_scale[j];
  }
  if (scale && cost_big > 0.0) {
    d.cost_scale = 1.0 / cost_big;
    for (double& c : d.cost) c *= d.cost_scale;
  }
  d.rhs.resize(d.m);
  for (int i = 0; i < d.m; ++i) d.rhs[i] = p.rhs()[i] * d.row_scale[i];
  return d;
}

class RevisedSimplex {
 public:
  RevisedSimplex(const ScaledData& data, int max_iterations)
      : d_(data), m_(data.m), n_(data.n), max_iterations_(max_iterations) {}

  LpStatus Solve() {
    Initialise();
    if (num_artificial_ > 0) {
      std::vector<double> phase1(total_, 0.0);
      for (int a = 0; a < num_artificial_; ++a) phase1[n_ + m_ + a] = -1.0;
      const LpStatus status = Run(phase1);
      if (status == LpStatus::kIterationLimit) return status;
      double infeasibility = 0.0;
      for (int a = 0; a < num_artificial_; ++a) infeasibility += x_[n_ + m_ + a];
      if (infeasibility > 1e-8) return LpStatus::kInfeasible;
      for (int a = 0; a < num_artificial_; ++a) {
        const int j = n_ + m_ + a;
        upper_[j] = 0.0;
        if (state_[j] != VarState::kBasic) {
          state_[j] = VarState::kAtLower;
          x_[j] = 0.0;
        }
      }
      RecomputeBasicValues();
    }
    std::vector<double> phase2(total_, 0.0);
    for (int j = 0; j < n_; ++j) phase2[j] = d_.cost[j];
    return Run(phase2);
  }

  int iterations() const { return iterations_; }
  double value(int j) const { return x_[j]; }
  const std::vector<double>& duals() const { return pi_; }
  double ReducedCostOf(int j) const { return ReducedCost(j, cost_, pi_); }

 private:
  void Initialise() {
    // Artificial columns are counted first so all arrays have final size.
    std::vector<double> activity(m_, 0.0);
    for (int j = 0; j < n_; ++j) {
      for (int t = d_.col_start[j]; t < d_.col_start[j + 1]; ++t) {
        activity[d_.row_index[t]] += d_.value[t] * d_.lower[j];
      }
    }
    std::vector<int> needs_artificial;
    for (int i = 0; i < m_; ++i) {
      if (d_.rhs[i] - activity[i] < -kPrimalTol) needs_artificial.push_back(i);
    }
    num_artificial_ = static_cast<int>(needs_artificial.size());
    total_ = n_ + m_ + num_artificial_;
    artificial_row_ = needs_artificial;

    lower_.assign(total_, 0.0);
    upper_.assign(total_, kInfinity);
    x_.assign(total_, 0.0);
    state_.assign(total_, VarState::kAtLower);
    for (int j = 0; j < n_; ++j) {
      lower_[j] = d_.lower[j];
      upper_[j] = d_.upper[j];
      x_[j] = d_.lower[j];
    }
    basis_.assign(m_, -1);
    binv_.assign(static_cast<std::size_t>(m_) * m_, 0.0);
    for (int i = 0; i < m_; ++i) {
      basis_[i] = n_ + i;
      state_[n_ + i] = VarState::kBasic;
      Binv(i, i) = 1.0;
    }
    for (int a = 0; a < num_artificial_; ++a) {
      const int i = artificial_row_[a];
      const int j = n_ + m_ + a;
      state_[n_ + i] = VarState::kAtLower;
      basis_[i] = j;
      state_[j] = VarState::kBasic;
      Binv(i, i) = -1.0;
    }
    RecomputeBasicValues();
    pi_.assign(m_, 0.0);
  }

  double& Binv(int r, int c) { return binv_[static_cast<std::size_t>(r) * m_ + c]; }
  double Binv(int r, int c) const {
    return binv_[static_cast<std::size_t>(r) * m_ + c];
  }

  // Applies f(row, coefficient) to the nonzeros of column j of [A I -E].
  template <typename F>
  void ForColumn(int j, F&& f) const {
    if (j < n_) {
      for (int t = d_.col_start[j]; t < d_.col_start[j + 1]; ++t) {
        f(d_.row_index[t], d_.value[t]);
      }
    } else if (j < n_ + m_) {
      f(j - n_, 1.0);
    } else {
      f(artificial_row_[j - n_ - m_], -1.0);
    }
  }

  void ComputeDuals(const std::vector<double>& cost) {
    std::fill(pi_.begin(), pi_.end(), 0.0);
    for (int r = 0; r < m_; ++r) {
      const double cb = cost[basis_[r]];
      if (cb == 0.0) continue;
      const double* row = &binv_[static_cast<std::size_t>(r) * m_];
      for (int c = 0; c < m_; ++c) pi_[c] += cb * row[c];
    }
  }

  double ReducedCost(int j, const std::vector<double>& cost,
                     const std::vector<double>& pi) const {
    double dj = cost[j];
    ForColumn(j, [&](int i, double a) { dj -= pi[i] * a; });
    return dj;
  }

  void Ftran(int j, std::vector<double>& alpha) const {
    std::fill(alpha.begin(), alpha.end(), 0.0);
    ForColumn(j, [&](int i, double a) {
      for (int r = 0; r < m_; ++r) alpha[r] += Binv(r, i) * a;
    });
  }

  void RecomputeBasicValues() {
    std::vector<double> residual(d_.rhs);
    for (int j = 0; j < total_; ++j) {
      if (state_[j] == VarState::kBasic || x_[j] == 0.0) continue;
      const double xj = x_[j];
      ForColumn(j, [&](int i, double a) { residual[i] -= a * xj; });
    }
    for (int r = 0; r < m_; ++r) {
      double v = 0.0;
      const double* row = &binv_[static_cast<std::size_t>(r) * m_];
      for (int c = 0; c < m_; ++c) v += row[c] * residual[c];
      x_[basis_[r]] = v;
    }
  }

  // Gauss-Jordan on the current basis columns. Keeps the updated inverse if
  // the basis looks singular.
  void Refactor() {
    std::vector<double> b(static_cast<std::size_t>(m_) * m_, 0.0);
    for (int r = 0; r < m_; ++r) {
      ForColumn(basis_[r], [&](int i, double a) {
        b[static_cast<std::size_t>(i) * m_ + r] = a;
      });
    }
    std::vector<double> inv(static_cast<std::size_t>(m_) * m_, 0.0);
    for (int i = 0; i < m_; ++i) inv[static_cast<std::size_t>(i) * m_ + i] = 1.0;
    auto at = [this](std::vector<double>& v, int r, int c) -> double& {
      return v[static_cast<std::size_t>(r) * m_ + c];
    };
    for (int c = 0; c < m_; ++c) {
      int best = c;
      for (int r = c + 1; r < m_; ++r) {
        if (std::abs(at(b, r, c)) > std::abs(at(b, best, c))) best = r;
      }
      if (std::abs(at(b, best, c)) < 1e-11) return;
      if (best != c) {
        for (int k = 0; k < m_; ++k) {
          std::swap(at(b, best, k), at(b, c, k));
          std::swap(at(inv, best, k), at(inv, c, k));
        }
      }
      const double pivot = at(b, c, c);
      for (int k = 0; k < m_; ++k) {
        at(b, c, k) /= pivot;
        at(inv, c, k) /= pivot;
      }
      for (int r = 0; r < m_; ++r) {
        if (r == c) continue;
        const double f = at(b, r, c);
        if (f == 0.0) continue;
        for (int k = 0; k < m_; ++k) {
          at(b, r, k) -= f * at(b, c, k);
          at(inv, r, k) -= f * at(inv, c, k);
        }
      }
    }
    // B was assembled with rows = constraint rows, columns = basis slots, so
    // inv maps constraint space to basis slots exactly as binv_ does.
    binv_.swap(inv);
  }

  // Largest entry of Binv * B - I.
  double InverseDrift() const {
    double worst = 0.0;
    std::vector<double> column(m_);
    for (int r = 0; r < m_; ++r) {
      std::fill(column.begin(), column.end(), 0.0);
      ForColumn(basis_[r], [&](int i, double a) {
        for (int s = 0; s < m_; ++s) column[s] += Binv(s, i) * a;
      });
      column[r] -= 1.0;
      for (double v : column) worst = std::max(worst, std::abs(v));
    }
    return worst;
  }

  void PivotInverse(int r, const std::vector<double>& alpha) {
    double* pivot_row = &binv_[static_cast<std::size_t>(r) * m_];
    const double inv_pivot = 1.0 / alpha[r];
    for (int c = 0; c < m_; ++c) pivot_row[c] *= inv_pivot;
    for (int i = 0; i < m_; ++i) {
      if (i == r || alpha[i] == 0.0) continue;
      double* row = &binv_[static_cast<std::size_t>(i) * m_];
      const double f = alpha[i];
      for (int c = 0; c < m_; ++c) row[c] -= f * pivot_row[c];
    }
  }

  LpStatus Run(const std::vector<double>& cost) {
    cost_ = cost;
    std::vector<double> alpha(m_);
    int degenerate_run = 0;
    int since_refactor = 0;
    while (true) {
      ComputeDuals(cost);

      // Pricing.
      const bool bland = degenerate_run >= kDegenerateRunLimit;
      int entering = -1;
      double best_score = 0.0;
      int direction = 0;
      for (int j = 0; j < total_; ++j) {
        if (state_[j] == VarState::kBasic) continue;
        if (upper_[j] - lower_[j] <= 0.0) continue;
        const double dj = ReducedCost(j, cost, pi_);
        int dir = 0;
        if (state_[j] == VarState::kAtLower && dj > kDualTol) dir = 1;
        if (state_[j] == VarState::kAtUpper && dj < -kDualTol) dir = -1;
        if (dir == 0) continue;
        if (bland) {
          entering = j;
          direction = dir;
          break;
        }
        if (std::abs(dj) > best_score) {
          best_score = std::abs(dj);
          entering = j;
          direction = dir;
        }
      }
      if (entering < 0) return LpStatus::kOptimal;
      if (iterations_ >= max_iterations_) return LpStatus::kIterationLimit;
      ++iterations_;

      Ftran(entering, alpha);

      // Two-pass ratio test. delta_r is the rate of change of basic r.
      double theta_max = kInfinity;
      for (int r = 0; r < m_; ++r) {
        const double delta = -direction * alpha[r];
        const int b = basis_[r];
        if (delta < -kPivotTol) {
          theta_max = std::min(
              theta_max, (x_[b] - lower_[b] + kPrimalTol) / -delta);
        } else if (delta > kPivotTol && std::isfinite(upper_[b])) {
          theta_max = std::min(
              theta_max, (upper_[b] - x_[b] + kPrimalTol) / delta);
        }
      }
      int leaving = -1;
      double theta = kInfinity;
      double best_pivot = 0.0;
      for (int r = 0; r < m_; ++r) {
        const double delta = -direction * alpha[r];
        const int b = basis_[r];
        double ratio;
        if (delta < -kPivotTol) {
          ratio = (x_[b] - lower_[b]) / -delta;
        } else if (delta > kPivotTol && std::isfinite(upper_[b])) {
          ratio = (upper_[b] - x_[b]) / delta;
        } else {
          continue;
        }
        ratio = std::max(ratio, 0.0);
        if (bland) {
          if (ratio < theta - kDegenerateStep ||
              (ratio <= theta + kDegenerateStep && leaving >= 0 &&
               b < basis_[leaving])) {
            theta = ratio;
            leaving = r;
          }
        } else if (ratio <= theta_max && std::abs(delta) > best_pivot) {
          best_pivot = std::abs(delta);
          theta = ratio;
          leaving = r;
        }
      }

      const double range = upper_[entering] - lower_[entering];
      if (std::isfinite(range) && (leaving < 0 || range <= theta)) {
        // Bound flip: the entering column crosses its whole range.
        for (int r = 0; r < m_; ++r) {
          x_[basis_[r]] += -direction * alpha[r] * range;
        }
        if (direction > 0) {
          state_[entering] = VarState::kAtUpper;
          x_[entering] = upper_[entering];
        } else {
          state_[entering] = VarState::kAtLower;
          x_[entering] = lower_[entering];
        }
        degenerate_run = 0;
        continue;
      }
      if (leaving < 0) return LpStatus::kUnbounded;

      for (int r = 0; r < m_; ++r) {
        x_[basis_[r]] += -direction * alpha[r] * theta;
      }
      x_[entering] += direction * theta;
      const int out = basis_[leaving];
      const double out_delta = -direction * alpha[leaving];
      if (out_delta < 0.0) {
        state_[out] = VarState::kAtLower;
        x_[out] = lower_[out];
      } else {
        state_[out] = VarState::kAtUpper;
        x_[out] = upper_[out];
      }
      basis_[leaving] = entering;
      state_[entering] = VarState::kBasic;
      PivotInverse(leaving, alpha);

      degenerate_run = theta <= kDegenerateStep ? degenerate_run + 1 : 0;
      if (++since_refactor >= kRefactorInterval) {
        if (InverseDrift() > kInverseDriftTol) Refactor();
        RecomputeBasicValues();
        since_refactor = 0;
      }
    }
  }

  const ScaledData& d_;
  int m_;
  int n_;
  int max_iterations_;
  int num_artificial_ = 0;
  int total_ = 0;
  int iterations_ = 0;
  std::vector<int> artificial_row_;
  std::vector<double> lower_;
  std::vector<double> upper_;
  std::vector<double> x_;
  std::vector<VarState> state_;
  std::vector<int> basis_;
  std::vector<double> binv_;
  std::vector<double> pi_;
  std::vector<double> cost_;
};

}  // namespace

LpSolution SolveLp(const LpProblem& problem, const SolverOptions& options) {
  problem.Validate();
  const ScaledData data = Prepare(problem, options.scale);
  RevisedSimplex simplex(data, options.max_iterations);
  LpSolution solution;
  solution.status = simplex.Solve();
  solution.iterations = simplex.iterations();

  const int n = data.n;
  const int m = data.m;
  solution.x.resize(n);
  for (int j = 0; j < n; ++j) {
    double xj = simplex.value(j) * data.col_scale[j];
    // Snap to bounds that the scaled solve reached within tolerance.
    if (std::abs(xj - problem.lower()[j]) <= kPrimalTol) xj = problem.lower()[j];
    if (std::abs(xj - problem.upper()[j]) <= kPrimalTol) xj = problem.upper()[j];
    solution.x[j] = xj;
  }
  solution.objective = problem.Objective(solution.x);
  solution.duals.assign(m, 0.0);
  solution.reduced_costs.assign(n, 0.0);
  if (solution.status == LpStatus::kOptimal) {
    const auto& pi = simplex.duals();
    for (int i = 0; i < m; ++i) {
      double yi = pi[i] * data.row_scale[i] / data.cost_scale;
      if (yi < 0.0 && yi > -1e-9) yi = 0.0;
      solution.duals[i] = yi;
    }
    std::vector<double> d(problem.cost());
    for (int i = 0; i < m; ++i) {
      const SparseRow& row = problem.row(i);
      for (std::size_t t = 0; t < row.columns.size(); ++t) {
        d[row.columns[t]] -= row.values[t] * solution.duals[i];
      }
    }
    solution.reduced_costs = std::move(d);
  }
  solution.bound = solution.objective;
  return solution;
}

}  // namespace vne::lp

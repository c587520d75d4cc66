#include "fairvq/lp.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace fairvq {

namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kCostTol = 1e-9;
constexpr double kPhase1Tol = 1e-7;
constexpr double kFeasTol = 1e-8;

// Dense tableau with an attached cost row. Columns are ordered structural,
// slack, artificial; Bland's rule scans them in that order, which makes the
// pivot sequence (and thus the returned vertex) deterministic.
struct Tableau {
  Mat m;                   // rows+1 x cols+1; last row = reduced costs, last col = rhs
  std::vector<int> basis;  // column index basic in each constraint row
  int rows = 0;
  int cols = 0;

  double rhs(int r) const { return m(r, cols); }

  void pivot(int row, int col) {
    m.row(row) /= m(row, col);
    for (int r = 0; r <= rows; ++r) {
      if (r == row) continue;
      const double factor = m(r, col);
      if (factor != 0.0) m.row(r) -= factor * m.row(row);
    }
    basis[static_cast<std::size_t>(row)] = col;
  }

  // Returns true on optimality, false when the iteration cap was hit or a
  // column priced out as unbounded (neither should occur on these problems).
  bool iterate(int allowed_cols, long max_iters, long* iters) {
    while ((*iters)++ < max_iters) {
      int enter = -1;
      for (int j = 0; j < allowed_cols; ++j) {
        if (m(rows, j) < -kCostTol) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;

      int leave = -1;
      double best_ratio = 0.0;
      for (int r = 0; r < rows; ++r) {
        if (m(r, enter) > kPivotTol) {
          const double ratio = rhs(r) / m(r, enter);
          if (leave < 0 || ratio < best_ratio - kPivotTol ||
              (std::abs(ratio - best_ratio) <= kPivotTol &&
               basis[static_cast<std::size_t>(r)] <
                   basis[static_cast<std::size_t>(leave)])) {
            leave = r;
            best_ratio = ratio;
          }
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
    return false;
  }
};

}  // namespace

void LpProblem::validate() const {
  const auto nn = c.size();
  if (nn < 1) throw std::invalid_argument("lp: empty objective");
  if (lower.size() != nn || upper.size() != nn) {
    throw std::invalid_argument("lp: bound dimensions inconsistent with objective");
  }
  for (Eigen::Index i = 0; i < nn; ++i) {
    if (!(lower(i) <= upper(i))) throw std::invalid_argument("lp: crossed bounds");
  }
  if (a.rows() != b.size() || (a.rows() > 0 && a.cols() != nn)) {
    throw std::invalid_argument("lp: row dimensions inconsistent");
  }
  if (!row_labels.empty() && row_labels.size() != static_cast<std::size_t>(b.size())) {
    throw std::invalid_argument("lp: row label count mismatch");
  }
}

LpSolution solve_lp(const LpProblem& problem) {
  problem.validate();
  const int n = problem.n();
  const int m0 = problem.rows();

  // Shift to z = x - lower >= 0 and fold the upper bounds in as rows.
  const Vec span = problem.upper - problem.lower;
  const int m = m0 + n;
  Mat rows_a(m, n);
  Vec rows_b(m);
  if (m0 > 0) {
    rows_a.topRows(m0) = problem.a;
    rows_b.head(m0) = problem.b - problem.a * problem.lower;
  }
  rows_a.bottomRows(n) = Mat::Identity(n, n);
  rows_b.tail(n) = span;

  std::vector<int> artificial_row;  // rows needing an artificial variable
  for (int r = 0; r < m; ++r) {
    if (rows_b(r) < 0.0) artificial_row.push_back(r);
  }
  const int n_art = static_cast<int>(artificial_row.size());
  const int cols = n + m + n_art;

  Tableau t;
  t.rows = m;
  t.cols = cols;
  t.m = Mat::Zero(m + 1, cols + 1);
  t.basis.assign(static_cast<std::size_t>(m), -1);

  for (int r = 0; r < m; ++r) {
    const double sign = rows_b(r) < 0.0 ? -1.0 : 1.0;
    t.m.block(r, 0, 1, n) = sign * rows_a.row(r);
    t.m(r, n + r) = sign;  // slack
    t.m(r, cols) = sign * rows_b(r);
    t.basis[static_cast<std::size_t>(r)] = n + r;
  }
  for (int k = 0; k < n_art; ++k) {
    const int r = artificial_row[static_cast<std::size_t>(k)];
    t.m(r, n + m + k) = 1.0;
    t.basis[static_cast<std::size_t>(r)] = n + m + k;
  }

  LpSolution solution;
  long iters = 0;
  const long max_iters = 20000 + 200L * (m + n);

  if (n_art > 0) {
    // phase 1: minimize the artificial sum
    for (int k = 0; k < n_art; ++k) t.m(m, n + m + k) = 1.0;
    for (const int r : artificial_row) t.m.row(m) -= t.m.row(r);

    if (!t.iterate(cols, max_iters, &iters)) {
      solution.status = LpStatus::Degenerate;
      solution.iterations = static_cast<int>(iters);
      return solution;
    }
    const double phase1 = -t.m(m, cols);
    if (phase1 > kPhase1Tol) {
      solution.status = LpStatus::Infeasible;
      solution.iterations = static_cast<int>(iters);
      return solution;
    }
    // drive leftover basic artificials onto structural/slack columns
    for (int r = 0; r < m; ++r) {
      if (t.basis[static_cast<std::size_t>(r)] < n + m) continue;
      for (int j = 0; j < n + m; ++j) {
        if (std::abs(t.m(r, j)) > kPivotTol) {
          t.pivot(r, j);
          break;
        }
      }
      // a row that stays artificial is redundant; its rhs is ~0 and the
      // artificial columns are barred from re-entering below
    }
  }

  // phase 2 with the original costs
  t.m.row(m).setZero();
  t.m.block(m, 0, 1, n) = problem.c.transpose();
  for (int r = 0; r < m; ++r) {
    const int bv = t.basis[static_cast<std::size_t>(r)];
    if (bv < n && problem.c(bv) != 0.0) {
      t.m.row(m) -= problem.c(bv) * t.m.row(r);
    }
  }
  if (!t.iterate(n + m, max_iters, &iters)) {
    solution.status = LpStatus::Degenerate;
    solution.iterations = static_cast<int>(iters);
    return solution;
  }

  Vec z = Vec::Zero(n);
  for (int r = 0; r < m; ++r) {
    const int bv = t.basis[static_cast<std::size_t>(r)];
    if (bv < n) z(bv) = t.rhs(r);
  }
  Vec x = problem.lower + z;
  for (int i = 0; i < n; ++i) {
    x(i) = std::min(std::max(x(i), problem.lower(i)), problem.upper(i));
  }

  if (m0 > 0) {
    const Vec slack = problem.b - problem.a * x;
    if (slack.minCoeff() < -kFeasTol) {
      solution.status = LpStatus::Degenerate;
      solution.iterations = static_cast<int>(iters);
      return solution;
    }
  }

  solution.status = LpStatus::Optimal;
  solution.x = std::move(x);
  solution.objective = problem.c.dot(solution.x);
  solution.iterations = static_cast<int>(iters);
  return solution;
}

}  // namespace fairvq

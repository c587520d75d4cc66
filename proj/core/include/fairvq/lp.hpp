#pragma once

#include <string>
#include <vector>

#include "fairvq/types.hpp"

namespace fairvq {

/// min c.x  subject to  a x <= b (row-wise) and lower <= x <= upper.
/// Absolute-value fairness constraints enter as +/- row pairs; row_labels
/// name the originating constraint of each row.
struct LpProblem {
  Vec c;
  Mat a;  // rows x n; rows may be 0
  Vec b;
  Vec lower, upper;
  std::vector<std::string> row_labels;
  std::vector<std::string> warnings;

  int n() const { return static_cast<int>(c.size()); }
  int rows() const { return static_cast<int>(b.size()); }
  void validate() const;
};

enum class LpStatus { Optimal, Infeasible, Degenerate };

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  Vec x;
  double objective = 0.0;
  int iterations = 0;
};

/// Dense two-phase primal simplex with Bland's rule. Deterministic; primal
/// feasibility violation and objective error both within 1e-8 on the scales
/// this library produces.
LpSolution solve_lp(const LpProblem& problem);

}  // namespace fairvq

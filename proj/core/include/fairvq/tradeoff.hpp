#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fairvq/lp.hpp"
#include "fairvq/neighbors.hpp"
#include "fairvq/scores.hpp"

namespace fairvq {

/// Relaxation budgets; disengaged constraints are absent rather than huge.
/// eod ties equal opportunity and predictive equality to one shared budget
/// and excludes setting either of them separately.
struct FairnessBudget {
  std::optional<double> dp;
  std::optional<double> eop;
  std::optional<double> pe;
  std::optional<double> ea;
  std::optional<double> eod;
  std::optional<double> ind;

  void validate() const;
  bool any_active() const;
  std::string label() const;  // canonical active-set name, e.g. "dp+ea"

  std::optional<double> effective_eop() const { return eod ? eod : eop; }
  std::optional<double> effective_pe() const { return eod ? eod : pe; }
};

/// Build the trade-off LP over the deviation vector m: objective
/// (p1 - p0).m (unaware) or its per-group sum (aware), one +/- row pair per
/// active constraint, and sign-restricted box bounds from the Bayes scores.
/// Constraints conditioned on zero-mass events are omitted with a warning.
LpProblem assemble_tradeoff_lp(const ProbabilityViews& v, const ScoreVector& s_star,
                               const NeighborMatrix& w, const FairnessBudget& budget,
                               bool aware);

struct ConstraintResidual {
  std::string name;
  double attained = 0.0;  // |expr| at the solution
  double budget = 0.0;
};

struct FairLpResult {
  LpStatus status = LpStatus::Infeasible;
  Vec m;
  ScoreVector s_fair;
  double acc_star = 0.0;
  double acc_fair = 0.0;
  double objective = 0.0;
  std::vector<ConstraintResidual> residuals;
  std::vector<std::string> warnings;
};

/// Bayes scores -> LP -> s_fair = s* - m. Among equally accurate optima the
/// deviation maximizing 1.m is selected (a second LP over the optimal face),
/// which prefers the fair classifier scoring the fewest positives; this keeps
/// the result deterministic when the optimal face is not a single vertex.
FairLpResult fair_solution(const ProbabilityViews& v, const FairnessBudget& budget,
                           bool aware, const NeighborMatrix& w);

struct SweepPoint {
  FairnessBudget budget;
  FairLpResult result;
};

/// One fair_solution per grid entry, in grid order. Infeasible points are
/// recorded, not raised.
std::vector<SweepPoint> pareto_sweep(const ProbabilityViews& v,
                                     const std::vector<FairnessBudget>& grid,
                                     bool aware, const NeighborMatrix& w);

}  // namespace fairvq

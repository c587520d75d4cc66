#pragma once

#include <vector>

#include "fairvq/tradeoff.hpp"

namespace fairvq {

/// Euclidean projection onto {w >= 0, sum w = 1} (sort-threshold algorithm).
Vec project_simplex(const Vec& v);

/// Budgets for the transformed-domain constraint stack, ordered to match its
/// rows: [dp, eop, pe, ea, ind...]. Slots that should not bind stay at the
/// slack default.
struct TransferBudget {
  double dp = 10.0;
  double eop = 10.0;
  double pe = 10.0;
  double ea = 10.0;
  double ind = 10.0;
};

struct DecorrelationConfig {
  double lambda = 15.0;  // accuracy weight
  double beta = 25.0;    // correlation weight
  double tau = 10.0;     // penalty parameter
  double momentum = 0.9;
  double lr_initial = 1e-2;
  double lr_final = 1e-12;
  double stop_tol = 1e-4;  // on the summed squared residuals of rho and T
  int inner_iterations = 2000;
  int outer_iterations = 200;
  TransferBudget budget;
};

/// Accuracy of the fair classifier on the transformed features:
/// s.T p1 + (1-s).T p0, or the per-group sum in the aware variant.
double accuracy_term(const Mat& t, const ScoreVector& s_fair, const ProbabilityViews& v);
double accuracy_term(const Mat& ta, const Mat& tb, const ScoreVector& s_fair,
                     const ProbabilityViews& v);

/// Group correlation of the transformed features, ||T (p_a - p_b)||_1 or
/// ||T_a p_a - T_b p_b||_1; ranges over [0, 2].
double correlation_term(const Mat& t, const ProbabilityViews& v);
double correlation_term(const Mat& ta, const Mat& tb, const ProbabilityViews& v);

/// Stacked constraint overshoot g = max([expr; -expr] - [f; f], 0) of the
/// transformed-domain fairness rows (dp, eop, pe, ea, then one per neighbor
/// pair); length 2B + 8.
Vec fairness_violation(const Mat& t, const ScoreVector& s_fair, const ProbabilityViews& v,
                       const NeighborMatrix& w, const TransferBudget& f);
Vec fairness_violation(const Mat& ta, const Mat& tb, const ScoreVector& s_fair,
                       const ProbabilityViews& v, const NeighborMatrix& wa,
                       const NeighborMatrix& wb, const TransferBudget& f);

/// Augmented Lagrangian
/// -lambda * accuracy + beta * correlation + <rho, g> + (tau/2) ||g||^2.
double lagrangian(const Mat& t, const Vec& rho, const DecorrelationConfig& config,
                  const ScoreVector& s_fair, const ProbabilityViews& v,
                  const NeighborMatrix& w);
double lagrangian(const Mat& ta, const Mat& tb, const Vec& rho,
                  const DecorrelationConfig& config, const ScoreVector& s_fair,
                  const ProbabilityViews& v, const NeighborMatrix& wa,
                  const NeighborMatrix& wb);

struct TransferReport {
  double baseline_correlation = 0.0;
  double final_correlation = 0.0;
  double correlation_reduction = 0.0;
  double acc_before = 0.0;
  double acc_after = 0.0;
  double acc_reduction = 0.0;
  double max_violation = 0.0;
  bool converged = false;
};

struct MultiplierState {
  Vec rho;  // non-negative, length 2B + 8
  int outer_iterations = 0;
  std::vector<double> residual_history;
};

struct TransformSolution {
  bool aware = false;
  Mat t;         // unaware: N x N column-stochastic
  Mat t_a, t_b;  // aware: 2N x N column-stochastic, per group
  MultiplierState state;
  TransferReport report;
};

/// Untransformed starting points: the identity map, and for the aware
/// representation the disjoint embedding of each group into its own bin half.
Mat identity_transform(int cells);
void identity_transform_aware(int cells, Mat& ta, Mat& tb);

/// Method of multipliers: inner projected-subgradient minimization of the
/// Lagrangian over column-stochastic T (momentum + geometrically decaying
/// learning rate, per-step column projection), then rho += tau * g(T), until
/// the summed squared residuals of rho and T fall below stop_tol.
TransformSolution solve_decorrelation_unaware(const ScoreVector& s_fair,
                                              const ProbabilityViews& v,
                                              const NeighborMatrix& w,
                                              const DecorrelationConfig& config);

/// ADMM variant: alternate the inner minimization over T_a (T_b fixed) and
/// T_b (T_a fixed) before each multiplier update.
TransformSolution solve_decorrelation_aware(const ScoreVector& s_fair,
                                            const ProbabilityViews& v,
                                            const NeighborMatrix& wa,
                                            const NeighborMatrix& wb,
                                            const DecorrelationConfig& config);

TransferReport evaluate_transfer(const Mat& t, const ScoreVector& s_fair,
                                 const ProbabilityViews& v, const NeighborMatrix& w,
                                 const TransferBudget& f);
TransferReport evaluate_transfer(const Mat& ta, const Mat& tb, const ScoreVector& s_fair,
                                 const ProbabilityViews& v, const NeighborMatrix& wa,
                                 const NeighborMatrix& wb, const TransferBudget& f);

}  // namespace fairvq

#pragma once

#include "fairvq/joint.hpp"

namespace fairvq {

/// Per-cell scores of a randomized classifier. Unaware scores have length N;
/// aware scores concatenate the two per-group blocks to length 2N.
struct ScoreVector {
  Vec s;
  bool aware = false;
};

struct BayesResult {
  ScoreVector scores;
  double accuracy = 0.0;
};

/// Majority vote per cell on P(X, Y = y); ties score 0.
BayesResult bayes_scores_unaware(const ProbabilityViews& v);

/// Majority vote per cell and group on P(X, Y = y | A = g); ties score 0.
/// Requires both groups to carry positive mass.
BayesResult bayes_scores_aware(const ProbabilityViews& v);

}  // namespace fairvq

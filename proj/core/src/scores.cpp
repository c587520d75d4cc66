#include "fairvq/scores.hpp"

#include <stdexcept>

namespace fairvq {

BayesResult bayes_scores_unaware(const ProbabilityViews& v) {
  BayesResult result;
  result.scores.aware = false;
  result.scores.s = Vec::Zero(v.cells);
  for (int i = 0; i < v.cells; ++i) {
    // tie -> 0, keeping the sign-bound index sets consistent
    if (v.p1(i) > v.p0(i)) {
      result.scores.s(i) = 1.0;
      result.accuracy += v.p1(i);
    } else {
      result.accuracy += v.p0(i);
    }
  }
  return result;
}

BayesResult bayes_scores_aware(const ProbabilityViews& v) {
  if (!v.group_mass[0] || !v.group_mass[1]) {
    throw std::invalid_argument("bayes_scores_aware: a group carries zero mass");
  }
  BayesResult result;
  result.scores.aware = true;
  result.scores.s = Vec::Zero(2 * v.cells);
  for (int g = 0; g < 2; ++g) {
    for (int i = 0; i < v.cells; ++i) {
      if (v.label_in_group[g][1](i) > v.label_in_group[g][0](i)) {
        result.scores.s(g * v.cells + i) = 1.0;
        result.accuracy += v.joint_gy[g][1](i);
      } else {
        result.accuracy += v.joint_gy[g][0](i);
      }
    }
  }
  return result;
}

}  // namespace fairvq

#pragma once

#include <array>

#include "fairvq/codebook.hpp"
#include "fairvq/types.hpp"

namespace fairvq {

/// Discrete joint distribution P(X = x_i, A = g, Y = y) over cells, the two
/// groups, and the two labels. Entries are non-negative and sum to 1.
struct DiscreteJoint {
  int cells = 0;
  std::vector<std::array<std::array<double, 2>, 2>> p;  // p[i][g][y]

  double& at(int i, int g, int y) { return p[static_cast<std::size_t>(i)][g][y]; }
  double at(int i, int g, int y) const { return p[static_cast<std::size_t>(i)][g][y]; }
  double sum() const;
  void validate() const;
};

DiscreteJoint build_joint(const SampleTable& table, const Codebook& codebook);

/// Every marginal/conditional slice of the joint used by the fairness
/// programs. Conditional views whose conditioning event has zero mass are
/// flagged and left as zero vectors.
struct ProbabilityViews {
  int cells = 0;

  Vec p1, p0;  // P(X = x_i, Y = y)

  // indexed by group: [0] = a, [1] = b
  std::array<double, 2> prior{};                      // P(A = g)
  std::array<Vec, 2> cond_group;                      // P(X | A = g)
  std::array<std::array<Vec, 2>, 2> cond_group_label; // [g][y]: P(X | A = g, Y = y)
  std::array<std::array<Vec, 2>, 2> label_in_group;   // [g][y]: P(X, Y = y | A = g)
  std::array<std::array<Vec, 2>, 2> joint_gy;         // [g][y]: P(X, A = g, Y = y)

  std::array<bool, 2> group_mass{};                       // P(A = g) > 0
  std::array<std::array<bool, 2>, 2> group_label_mass{};  // P(A = g, Y = y) > 0
};

ProbabilityViews views(const DiscreteJoint& joint);

}  // namespace fairvq

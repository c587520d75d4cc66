#include "fairvq/joint.hpp"

#include <cmath>
#include <stdexcept>

namespace fairvq {

double DiscreteJoint::sum() const {
  double total = 0.0;
  for (const auto& cell : p) {
    for (const auto& g : cell) total += g[0] + g[1];
  }
  return total;
}

void DiscreteJoint::validate() const {
  if (cells < 1 || p.size() != static_cast<std::size_t>(cells)) {
    throw std::invalid_argument("joint: inconsistent cell count");
  }
  for (const auto& cell : p) {
    for (const auto& g : cell) {
      for (double value : g) {
        if (!(value >= 0.0) || !std::isfinite(value)) {
          throw std::invalid_argument("joint: entries must be finite and non-negative");
        }
      }
    }
  }
  if (std::abs(sum() - 1.0) > 1e-9) {
    throw std::invalid_argument("joint: entries must sum to 1");
  }
}

DiscreteJoint build_joint(const SampleTable& table, const Codebook& codebook) {
  if (table.rows.empty()) {
    throw std::invalid_argument("build_joint: empty table");
  }
  DiscreteJoint joint;
  joint.cells = codebook.size();
  joint.p.assign(static_cast<std::size_t>(joint.cells), {});

  const double weight = 1.0 / static_cast<double>(table.rows.size());
  for (const auto& row : table.rows) {
    const int cell = assign_cell(row.x, codebook);
    joint.at(cell, row.group, row.label) += weight;
  }
  return joint;
}

ProbabilityViews views(const DiscreteJoint& joint) {
  joint.validate();
  const int n = joint.cells;

  ProbabilityViews v;
  v.cells = n;
  v.p1 = Vec::Zero(n);
  v.p0 = Vec::Zero(n);
  for (int g = 0; g < 2; ++g) {
    v.cond_group[g] = Vec::Zero(n);
    for (int y = 0; y < 2; ++y) {
      v.cond_group_label[g][y] = Vec::Zero(n);
      v.label_in_group[g][y] = Vec::Zero(n);
      v.joint_gy[g][y] = Vec::Zero(n);
    }
  }

  std::array<std::array<double, 2>, 2> mass_gy{};  // P(A=g, Y=y)
  for (int i = 0; i < n; ++i) {
    for (int g = 0; g < 2; ++g) {
      for (int y = 0; y < 2; ++y) {
        const double value = joint.at(i, g, y);
        v.joint_gy[g][y](i) = value;
        mass_gy[g][y] += value;
        (y == 1 ? v.p1 : v.p0)(i) += value;
      }
    }
  }

  for (int g = 0; g < 2; ++g) {
    v.prior[g] = mass_gy[g][0] + mass_gy[g][1];
    v.group_mass[g] = v.prior[g] > 0.0;
    for (int y = 0; y < 2; ++y) {
      v.group_label_mass[g][y] = mass_gy[g][y] > 0.0;
    }
    if (v.group_mass[g]) {
      for (int i = 0; i < n; ++i) {
        const double cell_mass = joint.at(i, g, 0) + joint.at(i, g, 1);
        v.cond_group[g](i) = cell_mass / v.prior[g];
        for (int y = 0; y < 2; ++y) {
          v.label_in_group[g][y](i) = joint.at(i, g, y) / v.prior[g];
        }
      }
    }
    for (int y = 0; y < 2; ++y) {
      if (v.group_label_mass[g][y]) {
        for (int i = 0; i < n; ++i) {
          v.cond_group_label[g][y](i) = joint.at(i, g, y) / mass_gy[g][y];
        }
      }
    }
  }
  return v;
}

}  // namespace fairvq

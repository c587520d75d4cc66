#pragma once

// Shared test utilities: deterministic random generators and the independent
// brute-force oracles the suites check the implementation against.

#include <algorithm>
#include <limits>
#include <random>
#include <vector>

#include "fairvq/decorrelate.hpp"
#include "fairvq/joint.hpp"
#include "fairvq/lp.hpp"
#include "fairvq/neighbors.hpp"

namespace testutil {

using fairvq::Mat;
using fairvq::Vec;

inline double unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * unit(rng);
}

/// Random joint with every (group, label) stratum carrying positive mass.
inline fairvq::DiscreteJoint random_joint(int cells, std::mt19937_64& rng,
                                          double floor_mass = 0.05) {
  fairvq::DiscreteJoint joint;
  joint.cells = cells;
  joint.p.assign(static_cast<std::size_t>(cells), {});
  double total = 0.0;
  for (auto& cell : joint.p) {
    for (auto& g : cell) {
      for (auto& value : g) {
        value = floor_mass + unit(rng);
        total += value;
      }
    }
  }
  for (auto& cell : joint.p) {
    for (auto& g : cell) {
      for (auto& value : g) value /= total;
    }
  }
  return joint;
}

inline Vec random_simplex(int n, std::mt19937_64& rng) {
  Vec v(n);
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    v(i) = -std::log(1.0 - unit(rng));
    total += v(i);
  }
  return v / total;
}

inline Mat random_stochastic(int rows, int cols, std::mt19937_64& rng) {
  Mat t(rows, cols);
  for (int c = 0; c < cols; ++c) t.col(c) = random_simplex(rows, rng);
  return t;
}

/// Codebook of random continuous centroids, for neighbor-matrix construction.
inline fairvq::Codebook random_codebook(int cells, int dims, std::mt19937_64& rng) {
  fairvq::Codebook book;
  book.kinds.assign(static_cast<std::size_t>(dims), fairvq::ColumnKind::Continuous);
  for (int k = 0; k < cells; ++k) {
    std::vector<double> c(static_cast<std::size_t>(dims));
    for (auto& value : c) value = uniform(rng, -1.0, 1.0);
    book.centroids.push_back(std::move(c));
  }
  book.converged = true;
  return book;
}

/// Exhaustive lattice minimization of an LpProblem: every variable ranges over
/// lower..upper in `step` increments. The innermost variable is resolved
/// analytically over the same lattice (identical minimizer set, fewer visits);
/// grid_search_lp_naive below is the plain nested-loop reference used to
/// validate the shortcut.
struct GridResult {
  bool feasible = false;
  double objective = std::numeric_limits<double>::infinity();
};

inline GridResult grid_search_lp(const fairvq::LpProblem& lp, double step = 0.01,
                                 double slack = 1e-9) {
  const int n = lp.n();
  const int rows = lp.rows();
  std::vector<std::vector<double>> levels(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    for (double v = lp.lower(i); v <= lp.upper(i) + 1e-12; v += step) {
      levels[static_cast<std::size_t>(i)].push_back(std::min(v, lp.upper(i)));
    }
  }

  GridResult result;
  std::vector<std::size_t> idx(static_cast<std::size_t>(n - 1), 0);
  Vec row_acc = Vec::Zero(rows);
  double obj_acc = 0.0;

  // partial sums over the first n-1 coordinates, maintained incrementally
  std::vector<Vec> row_stack(static_cast<std::size_t>(n), Vec::Zero(rows));
  std::vector<double> obj_stack(static_cast<std::size_t>(n), 0.0);
  for (int level = 0; level < n - 1; ++level) {
    const double v = levels[static_cast<std::size_t>(level)][0];
    obj_stack[static_cast<std::size_t>(level + 1)] =
        obj_stack[static_cast<std::size_t>(level)] + lp.c(level) * v;
    row_stack[static_cast<std::size_t>(level + 1)] =
        row_stack[static_cast<std::size_t>(level)] +
        (rows > 0 ? Vec(lp.a.col(level) * v) : Vec::Zero(0));
  }

  while (true) {
    obj_acc = obj_stack[static_cast<std::size_t>(n - 1)];
    row_acc = row_stack[static_cast<std::size_t>(n - 1)];

    // best value of the last coordinate over the lattice, by interval math
    const auto& last = levels[static_cast<std::size_t>(n - 1)];
    double lo = last.front(), hi = last.back();
    bool ok = true;
    for (int r = 0; r < rows && ok; ++r) {
      const double coef = lp.a(r, n - 1);
      const double room = lp.b(r) + slack - row_acc(r);
      if (std::abs(coef) < 1e-15) {
        ok = room >= 0.0;
      } else if (coef > 0.0) {
        hi = std::min(hi, room / coef);
      } else {
        lo = std::max(lo, room / coef);
      }
    }
    if (ok && lo <= hi + 1e-12) {
      // snap to lattice points inside [lo, hi]
      const double base = last.front();
      const auto k_lo =
          static_cast<long>(std::ceil((lo - base - 1e-12) / step));
      const auto k_hi = std::min<long>(
          static_cast<long>(std::floor((hi - base + 1e-12) / step)),
          static_cast<long>(last.size()) - 1);
      if (k_hi >= std::max<long>(k_lo, 0)) {
        const long k = lp.c(n - 1) >= 0.0 ? std::max<long>(k_lo, 0) : k_hi;
        const double v = last[static_cast<std::size_t>(k)];
        const double objective = obj_acc + lp.c(n - 1) * v;
        if (objective < result.objective) {
          result.objective = objective;
          result.feasible = true;
        }
      }
    }

    // odometer over the outer n-1 coordinates
    int level = n - 2;
    while (level >= 0) {
      auto& i = idx[static_cast<std::size_t>(level)];
      if (++i < levels[static_cast<std::size_t>(level)].size()) break;
      i = 0;
      --level;
    }
    if (level < 0) break;
    for (int l = level; l < n - 1; ++l) {
      const double v = levels[static_cast<std::size_t>(l)][idx[static_cast<std::size_t>(l)]];
      obj_stack[static_cast<std::size_t>(l + 1)] =
          obj_stack[static_cast<std::size_t>(l)] + lp.c(l) * v;
      if (rows > 0) {
        row_stack[static_cast<std::size_t>(l + 1)] =
            row_stack[static_cast<std::size_t>(l)] + Vec(lp.a.col(l) * v);
      }
    }
  }
  return result;
}

/// Plain nested-loop reference, only usable for tiny n.
inline GridResult grid_search_lp_naive(const fairvq::LpProblem& lp, double step = 0.01,
                                       double slack = 1e-9) {
  const int n = lp.n();
  std::vector<std::vector<double>> levels(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    for (double v = lp.lower(i); v <= lp.upper(i) + 1e-12; v += step) {
      levels[static_cast<std::size_t>(i)].push_back(std::min(v, lp.upper(i)));
    }
  }
  GridResult result;
  std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
  while (true) {
    Vec m(n);
    for (int i = 0; i < n; ++i) {
      m(i) = levels[static_cast<std::size_t>(i)][idx[static_cast<std::size_t>(i)]];
    }
    bool ok = true;
    for (int r = 0; r < lp.rows() && ok; ++r) {
      ok = lp.a.row(r).dot(m) <= lp.b(r) + slack;
    }
    if (ok) {
      const double objective = lp.c.dot(m);
      if (objective < result.objective) {
        result.objective = objective;
        result.feasible = true;
      }
    }
    int level = n - 1;
    while (level >= 0) {
      auto& i = idx[static_cast<std::size_t>(level)];
      if (++i < levels[static_cast<std::size_t>(level)].size()) break;
      i = 0;
      --level;
    }
    if (level < 0) break;
  }
  return result;
}

/// Literal block-matrix route to the unaware violation vector: expands T with
/// the mask/expansion identity, stacks P as printed, and evaluates
/// [max(P Tt st - f, 0); max(-P Tt st - f, 0)].
inline Vec violation_by_blocks(const Mat& t, const Vec& s_fair,
                               const fairvq::ProbabilityViews& v,
                               const fairvq::NeighborMatrix& w,
                               const fairvq::TransferBudget& f) {
  const int n = v.cells;
  const int b = w.rows();

  Mat mask = Mat::Zero(2 * n, 2 * n);
  mask.topLeftCorner(n, n).setOnes();
  mask.bottomRightCorner(n, n).setOnes();
  Mat expand(2 * n, n);
  expand.topRows(n) = Mat::Identity(n, n);
  expand.bottomRows(n) = Mat::Identity(n, n);
  const Mat t_tilde = mask.cwiseProduct(expand * t * expand.transpose());

  Mat p = Mat::Zero(4 + b, 2 * n);
  p.block(0, 0, 1, n) = (v.cond_group[0] - v.cond_group[1]).transpose();
  p.block(1, 0, 1, n) =
      (v.cond_group_label[0][1] - v.cond_group_label[1][1]).transpose();
  p.block(2, n, 1, n) =
      (v.cond_group_label[0][0] - v.cond_group_label[1][0]).transpose();
  p.block(3, 0, 1, n) = (v.label_in_group[0][1] - v.label_in_group[1][1]).transpose();
  p.block(3, n, 1, n) = (v.label_in_group[0][0] - v.label_in_group[1][0]).transpose();
  p.block(4, 0, b, n) = w.dense();

  Vec s_tilde(2 * n);
  s_tilde.head(n) = s_fair;
  s_tilde.tail(n) = Vec::Ones(n) - s_fair;

  Vec budgets(4 + b);
  budgets(0) = f.dp;
  budgets(1) = f.eop;
  budgets(2) = f.pe;
  budgets(3) = f.ea;
  budgets.tail(b).setConstant(f.ind);

  const Vec expr = p * t_tilde * s_tilde;
  Vec g(2 * (4 + b));
  g.head(4 + b) = (expr - budgets).cwiseMax(0.0);
  g.tail(4 + b) = (-expr - budgets).cwiseMax(0.0);
  return g;
}

/// Literal block-matrix route to the aware violation vector: both transforms
/// expand through the aware mask/expansion identity, the per-group stacks
/// carry [p_g, p_{g,1}, 0, p_g^y1, +/-W^T] on top of [0, 0, p_{g,0}, p_g^y0, 0],
/// and the row vector s~^T (T~_a P_a - T~_b P_b) feeds the signed max.
inline Vec violation_by_blocks_aware(const Mat& ta, const Mat& tb, const Vec& s_fair,
                                     const fairvq::ProbabilityViews& v,
                                     const fairvq::NeighborMatrix& w,
                                     const fairvq::TransferBudget& f) {
  const int n = v.cells;
  const int b = w.rows();

  auto expand_transform = [&](const Mat& t) {
    Mat mask = Mat::Zero(4 * n, 2 * n);
    mask.topLeftCorner(2 * n, n).setOnes();
    mask.bottomRightCorner(2 * n, n).setOnes();
    Mat i2(4 * n, 2 * n);
    i2.topRows(2 * n) = Mat::Identity(2 * n, 2 * n);
    i2.bottomRows(2 * n) = Mat::Identity(2 * n, 2 * n);
    Mat i1t(n, 2 * n);
    i1t.leftCols(n) = Mat::Identity(n, n);
    i1t.rightCols(n) = Mat::Identity(n, n);
    return Mat(mask.cwiseProduct(i2 * t * i1t));
  };

  auto group_stack = [&](int g, double w_sign) {
    Mat p = Mat::Zero(2 * n, 4 + b);
    p.block(0, 0, n, 1) = v.cond_group[g];
    p.block(0, 1, n, 1) = v.cond_group_label[g][1];
    p.block(n, 2, n, 1) = v.cond_group_label[g][0];
    p.block(0, 3, n, 1) = v.label_in_group[g][1];
    p.block(n, 3, n, 1) = v.label_in_group[g][0];
    p.block(0, 4, n, b) = w_sign * w.dense().transpose();
    return p;
  };

  Vec s_tilde(4 * n);
  s_tilde.head(2 * n) = s_fair;
  s_tilde.tail(2 * n) = Vec::Ones(2 * n) - s_fair;

  const Vec expr = ((expand_transform(ta) * group_stack(0, 1.0) -
                     expand_transform(tb) * group_stack(1, -1.0))
                        .transpose() *
                    s_tilde);

  Vec budgets(4 + b);
  budgets(0) = f.dp;
  budgets(1) = f.eop;
  budgets(2) = f.pe;
  budgets(3) = f.ea;
  budgets.tail(b).setConstant(f.ind);

  Vec g(2 * (4 + b));
  g.head(4 + b) = (expr - budgets).cwiseMax(0.0);
  g.tail(4 + b) = (-expr - budgets).cwiseMax(0.0);
  return g;
}

}  // namespace testutil

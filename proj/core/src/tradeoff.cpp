#include "fairvq/tradeoff.hpp"

#include <cmath>
#include <stdexcept>

namespace fairvq {

namespace {

// One fairness constraint in deviation form: |constant + coef.m| <= budget.
struct BaseConstraint {
  std::string name;
  Vec coef;
  double constant = 0.0;
  double budget = 0.0;
};

void append_group_rows(std::vector<BaseConstraint>& out, const ProbabilityViews& v,
                       const Vec& s, bool aware, const FairnessBudget& budget,
                       std::vector<std::string>& warnings) {
  const int n = v.cells;
  const auto s_a = aware ? s.head(n) : s;
  const auto s_b = aware ? s.tail(n) : s;

  auto push_simple = [&](const std::string& name, const Vec& va, const Vec& vb,
                         double eps) {
    // |va.(s_a - m_a) - vb.(s_b - m_b)| <= eps (unaware collapses to one block)
    BaseConstraint c;
    c.name = name;
    c.budget = eps;
    if (aware) {
      c.constant = va.dot(s_a) - vb.dot(s_b);
      c.coef = Vec(2 * n);
      c.coef.head(n) = -va;
      c.coef.tail(n) = vb;
    } else {
      const Vec d = va - vb;
      c.constant = d.dot(s);
      c.coef = -d;
    }
    out.push_back(std::move(c));
  };

  if (budget.dp) {
    if (v.group_mass[0] && v.group_mass[1]) {
      push_simple("dp", v.cond_group[0], v.cond_group[1], *budget.dp);
    } else {
      warnings.push_back("dp omitted: a group carries zero mass");
    }
  }
  if (auto eps = budget.effective_eop()) {
    if (v.group_label_mass[0][1] && v.group_label_mass[1][1]) {
      push_simple("eop", v.cond_group_label[0][1], v.cond_group_label[1][1], *eps);
    } else {
      warnings.push_back("eop omitted: P(A=g, Y=1) = 0 for a group");
    }
  }
  if (auto eps = budget.effective_pe()) {
    if (v.group_label_mass[0][0] && v.group_label_mass[1][0]) {
      push_simple("pe", v.cond_group_label[0][0], v.cond_group_label[1][0], *eps);
    } else {
      warnings.push_back("pe omitted: P(A=g, Y=0) = 0 for a group");
    }
  }
  if (budget.ea) {
    if (v.group_mass[0] && v.group_mass[1]) {
      const Vec& qa1 = v.label_in_group[0][1];
      const Vec& qa0 = v.label_in_group[0][0];
      const Vec& qb1 = v.label_in_group[1][1];
      const Vec& qb0 = v.label_in_group[1][0];
      BaseConstraint c;
      c.name = "ea";
      c.budget = *budget.ea;
      if (aware) {
        c.constant = qa1.dot(s_a) + qa0.dot(Vec::Ones(n) - s_a) - qb1.dot(s_b) -
                     qb0.dot(Vec::Ones(n) - s_b);
        c.coef = Vec(2 * n);
        c.coef.head(n) = qa0 - qa1;
        c.coef.tail(n) = qb1 - qb0;
      } else {
        const Vec d1 = qa1 - qb1;
        const Vec d0 = qa0 - qb0;
        c.constant = d1.dot(s) + d0.dot(Vec::Ones(n) - s);
        c.coef = d0 - d1;
      }
      out.push_back(std::move(c));
    } else {
      warnings.push_back("ea omitted: a group carries zero mass");
    }
  }
}

void append_individual_rows(std::vector<BaseConstraint>& out, const ProbabilityViews& v,
                            const Vec& s, bool aware, const NeighborMatrix& w,
                            double eps, std::vector<std::string>& warnings) {
  const int n = v.cells;
  if (w.cells != n) {
    throw std::invalid_argument("assemble_tradeoff_lp: neighbor matrix built on a "
                                "different codebook size");
  }
  if (aware && (!v.group_mass[0] || !v.group_mass[1])) {
    warnings.push_back("ind omitted: a group carries zero mass");
    return;
  }
  for (std::size_t r = 0; r < w.pairs.size(); ++r) {
    const auto& pair = w.pairs[r];
    const double k = w.kernel(r);
    BaseConstraint c;
    c.name = "ind";
    c.budget = eps;
    if (aware) {
      // |w_r . sum_g diag(p_g) (s_g - m_g)| <= eps
      const double pai = v.cond_group[0](pair.i), paj = v.cond_group[0](pair.j);
      const double pbi = v.cond_group[1](pair.i), pbj = v.cond_group[1](pair.j);
      c.constant = k * (pai * s(pair.i) - paj * s(pair.j) + pbi * s(n + pair.i) -
                        pbj * s(n + pair.j));
      c.coef = Vec::Zero(2 * n);
      c.coef(pair.i) = -k * pai;
      c.coef(pair.j) = k * paj;
      c.coef(n + pair.i) = -k * pbi;
      c.coef(n + pair.j) = k * pbj;
    } else {
      c.constant = k * (s(pair.i) - s(pair.j));
      c.coef = Vec::Zero(n);
      c.coef(pair.i) = -k;
      c.coef(pair.j) = k;
    }
    out.push_back(std::move(c));
  }
}

std::vector<BaseConstraint> build_constraints(const ProbabilityViews& v,
                                              const ScoreVector& s_star,
                                              const NeighborMatrix& w,
                                              const FairnessBudget& budget, bool aware,
                                              std::vector<std::string>& warnings) {
  budget.validate();
  if (s_star.aware != aware) {
    throw std::invalid_argument("assemble_tradeoff_lp: score awareness mismatch");
  }
  const Eigen::Index expected = aware ? 2 * v.cells : v.cells;
  if (s_star.s.size() != expected) {
    throw std::invalid_argument("assemble_tradeoff_lp: score dimension mismatch");
  }
  std::vector<BaseConstraint> constraints;
  append_group_rows(constraints, v, s_star.s, aware, budget, warnings);
  if (budget.ind) {
    append_individual_rows(constraints, v, s_star.s, aware, w, *budget.ind, warnings);
  }
  return constraints;
}

Vec objective_coefficients(const ProbabilityViews& v, bool aware) {
  if (!aware) return v.p1 - v.p0;
  Vec c(2 * v.cells);
  c.head(v.cells) = v.joint_gy[0][1] - v.joint_gy[0][0];
  c.tail(v.cells) = v.joint_gy[1][1] - v.joint_gy[1][0];
  return c;
}

LpProblem to_lp(const std::vector<BaseConstraint>& constraints, const Vec& c,
                const Vec& s, std::vector<std::string> warnings) {
  const auto n = s.size();
  LpProblem lp;
  lp.c = c;
  lp.warnings = std::move(warnings);

  // sign bounds: deviations shrink scores toward the opposite label only
  lp.lower = Vec(n);
  lp.upper = Vec(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (s(i) == 1.0) {
      lp.lower(i) = 0.0;
      lp.upper(i) = 1.0;
    } else {
      lp.lower(i) = -1.0;
      lp.upper(i) = 0.0;
    }
  }

  lp.a = Mat::Zero(2 * static_cast<Eigen::Index>(constraints.size()), n);
  lp.b = Vec::Zero(2 * static_cast<Eigen::Index>(constraints.size()));
  int r = 0;
  for (const auto& bc : constraints) {
    // |constant + coef.m| <= budget, split into the two signed rows
    lp.a.row(r) = bc.coef.transpose();
    lp.b(r) = bc.budget - bc.constant;
    lp.row_labels.push_back(bc.name + "+");
    ++r;
    lp.a.row(r) = -bc.coef.transpose();
    lp.b(r) = bc.budget + bc.constant;
    lp.row_labels.push_back(bc.name + "-");
    ++r;
  }
  return lp;
}

}  // namespace

void FairnessBudget::validate() const {
  if (eod && (eop || pe)) {
    throw std::invalid_argument(
        "budget: eod shares one epsilon between eop and pe; do not set them separately");
  }
  for (const auto* eps : {&dp, &eop, &pe, &ea, &eod, &ind}) {
    if (*eps && !(**eps >= 0.0)) {
      throw std::invalid_argument("budget: epsilon values must be non-negative");
    }
  }
}

bool FairnessBudget::any_active() const {
  return dp || eop || pe || ea || eod || ind;
}

std::string FairnessBudget::label() const {
  std::string out;
  auto add = [&](const char* name, const std::optional<double>& eps) {
    if (!eps) return;
    if (!out.empty()) out += '+';
    out += name;
  };
  add("dp", dp);
  add("eop", eop);
  add("pe", pe);
  add("eod", eod);
  add("ea", ea);
  add("ind", ind);
  return out.empty() ? "none" : out;
}

LpProblem assemble_tradeoff_lp(const ProbabilityViews& v, const ScoreVector& s_star,
                               const NeighborMatrix& w, const FairnessBudget& budget,
                               bool aware) {
  std::vector<std::string> warnings;
  const auto constraints = build_constraints(v, s_star, w, budget, aware, warnings);
  return to_lp(constraints, objective_coefficients(v, aware), s_star.s,
               std::move(warnings));
}

FairLpResult fair_solution(const ProbabilityViews& v, const FairnessBudget& budget,
                           bool aware, const NeighborMatrix& w) {
  const BayesResult bayes = aware ? bayes_scores_aware(v) : bayes_scores_unaware(v);

  std::vector<std::string> warnings;
  const auto constraints = build_constraints(v, bayes.scores, w, budget, aware, warnings);
  const Vec c = objective_coefficients(v, aware);
  const LpProblem lp = to_lp(constraints, c, bayes.scores.s, warnings);

  FairLpResult out;
  out.acc_star = bayes.accuracy;
  out.warnings = std::move(warnings);

  const LpSolution primary = solve_lp(lp);
  out.status = primary.status;
  if (primary.status != LpStatus::Optimal) return out;

  // The optimal face can hold several vertices (flat objective); pick the one
  // maximizing 1.m, i.e. the fair classifier scoring the fewest positives.
  // Consistent with the tie-to-zero rule for Bayes scores and deterministic.
  Vec m = primary.x;
  {
    LpProblem tie = lp;
    const auto rows = tie.a.rows();
    tie.a.conservativeResize(rows + 1, Eigen::NoChange);
    tie.b.conservativeResize(rows + 1);
    tie.a.row(rows) = c.transpose();
    tie.b(rows) = primary.objective + 1e-11;
    tie.row_labels.push_back("optimal-face");
    tie.c = -Vec::Ones(c.size());
    const LpSolution refined = solve_lp(tie);
    if (refined.status == LpStatus::Optimal) m = refined.x;
  }

  out.m = m;
  out.objective = c.dot(m);
  out.acc_fair = out.acc_star - out.objective;
  out.s_fair.aware = aware;
  out.s_fair.s = (bayes.scores.s - m).cwiseMax(0.0).cwiseMin(1.0);

  out.residuals.reserve(constraints.size());
  for (const auto& bc : constraints) {
    const double attained = std::abs(bc.constant + bc.coef.dot(m));
    if (!out.residuals.empty() && out.residuals.back().name == bc.name) {
      out.residuals.back().attained = std::max(out.residuals.back().attained, attained);
    } else {
      out.residuals.push_back({bc.name, attained, bc.budget});
    }
  }
  return out;
}

std::vector<SweepPoint> pareto_sweep(const ProbabilityViews& v,
                                     const std::vector<FairnessBudget>& grid,
                                     bool aware, const NeighborMatrix& w) {
  if (grid.empty()) {
    throw std::invalid_argument("pareto_sweep: empty budget grid");
  }
  std::vector<SweepPoint> points;
  points.reserve(grid.size());
  for (const auto& budget : grid) {
    points.push_back({budget, fair_solution(v, budget, aware, w)});
  }
  return points;
}

}  // namespace fairvq

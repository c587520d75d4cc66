#include "fairvq/decorrelate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace fairvq {

namespace {

// Budgets at or above this value are treated as disengaged slack slots; rows
// whose conditional views are unavailable are tolerated only at slack.
constexpr double kSlackBudget = 10.0;

Vec sign_of(const Vec& v) {
  Vec s(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    s(i) = v(i) > 0.0 ? 1.0 : (v(i) < 0.0 ? -1.0 : 0.0);  // subgradient 0 at kinks
  }
  return s;
}

void check_scores(const ScoreVector& s_fair, int cells, bool aware) {
  if (s_fair.aware != aware) {
    throw std::invalid_argument("decorrelate: score awareness mismatch");
  }
  const Eigen::Index expected = aware ? 2 * cells : cells;
  if (s_fair.s.size() != expected) {
    throw std::invalid_argument("decorrelate: score dimension mismatch");
  }
}

void check_transform(const Mat& t, int cells, bool aware) {
  const Eigen::Index rows = aware ? 2 * cells : cells;
  if (t.rows() != rows || t.cols() != cells) {
    throw std::invalid_argument("decorrelate: transform dimension mismatch");
  }
}

void require_groups(const ProbabilityViews& v) {
  if (!v.group_mass[0] || !v.group_mass[1]) {
    throw std::invalid_argument("decorrelate: both groups need positive mass");
  }
}

void check_config(const DecorrelationConfig& config) {
  if (!(config.lambda > 0.0 && config.beta > 0.0 && config.tau > 0.0)) {
    throw std::invalid_argument("decorrelate: lambda, beta and tau must be positive");
  }
  if (!(config.lr_initial > config.lr_final && config.lr_final > 0.0)) {
    throw std::invalid_argument(
        "decorrelate: learning rate must decay from a larger positive initial value");
  }
  if (config.inner_iterations < 1 || config.outer_iterations < 1) {
    throw std::invalid_argument("decorrelate: iteration budgets must be positive");
  }
}

// Constraint rows of the transformed domain in the unaware representation:
// expr(T) = L (T s) + R (T (1 - s)), rows ordered [dp, eop, pe, ea, ind...].
struct Stack {
  Mat l, r;  // rows x N
  Vec budgets;
  int base_rows = 0;  // 4 + B

  Vec expressions(const Mat& t, const Vec& s) const {
    const Vec ts = t * s;
    const Vec tq = t * (Vec::Ones(s.size()) - s);
    return l * ts + r * tq;
  }
  Vec violation(const Mat& t, const Vec& s) const {
    const Vec e = expressions(t, s);
    Vec g(2 * base_rows);
    g.head(base_rows) = (e - budgets).cwiseMax(0.0);
    g.tail(base_rows) = (-e - budgets).cwiseMax(0.0);
    return g;
  }
  // gradient of <weights, expr> over T
  Mat weighted_gradient(const Vec& weights, const Vec& s) const {
    return (l.transpose() * weights) * s.transpose() +
           (r.transpose() * weights) * (Vec::Ones(s.size()) - s).transpose();
  }
};

void check_views_for_budget(const ProbabilityViews& v, const TransferBudget& f) {
  require_groups(v);
  auto bound = [](double eps) { return eps < kSlackBudget - 1e-12; };
  if (bound(f.eop) && (!v.group_label_mass[0][1] || !v.group_label_mass[1][1])) {
    throw std::invalid_argument("decorrelate: eop budget set but P(A=g, Y=1) = 0");
  }
  if (bound(f.pe) && (!v.group_label_mass[0][0] || !v.group_label_mass[1][0])) {
    throw std::invalid_argument("decorrelate: pe budget set but P(A=g, Y=0) = 0");
  }
}

Stack build_stack(const ProbabilityViews& v, const NeighborMatrix& w,
                  const TransferBudget& f) {
  check_views_for_budget(v, f);
  const int n = v.cells;
  const int b = w.rows();
  Stack s;
  s.base_rows = 4 + b;
  s.l = Mat::Zero(s.base_rows, n);
  s.r = Mat::Zero(s.base_rows, n);
  s.budgets = Vec(s.base_rows);

  s.l.row(0) = (v.cond_group[0] - v.cond_group[1]).transpose();
  s.budgets(0) = f.dp;
  s.l.row(1) = (v.cond_group_label[0][1] - v.cond_group_label[1][1]).transpose();
  s.budgets(1) = f.eop;
  s.r.row(2) = (v.cond_group_label[0][0] - v.cond_group_label[1][0]).transpose();
  s.budgets(2) = f.pe;
  s.l.row(3) = (v.label_in_group[0][1] - v.label_in_group[1][1]).transpose();
  s.r.row(3) = (v.label_in_group[0][0] - v.label_in_group[1][0]).transpose();
  s.budgets(3) = f.ea;
  for (int k = 0; k < b; ++k) {
    const auto& pair = w.pairs[static_cast<std::size_t>(k)];
    const double kern = w.kernel(static_cast<std::size_t>(k));
    s.l(4 + k, pair.i) = kern;
    s.l(4 + k, pair.j) = -kern;
    s.budgets(4 + k) = f.ind;
  }
  return s;
}

// Aware representation: expr(Ta, Tb) = sum over the a-part minus the b-part,
// each part top (T^T s) plus bottom (T^T (1-s)) against its row vectors.
struct AwareStack {
  Mat top_a, bot_a, top_b, bot_b;  // rows x N
  Vec budgets;
  int base_rows = 0;

  Vec expressions(const Mat& ta, const Mat& tb, const Vec& s) const {
    const Vec ones = Vec::Ones(s.size());
    const Vec alpha_a = ta.transpose() * s;
    const Vec beta_a = ta.transpose() * (ones - s);
    const Vec alpha_b = tb.transpose() * s;
    const Vec beta_b = tb.transpose() * (ones - s);
    return top_a * alpha_a + bot_a * beta_a - top_b * alpha_b - bot_b * beta_b;
  }
  Vec violation(const Mat& ta, const Mat& tb, const Vec& s) const {
    const Vec e = expressions(ta, tb, s);
    Vec g(2 * base_rows);
    g.head(base_rows) = (e - budgets).cwiseMax(0.0);
    g.tail(base_rows) = (-e - budgets).cwiseMax(0.0);
    return g;
  }
  Mat weighted_gradient_a(const Vec& weights, const Vec& s) const {
    const Vec ones = Vec::Ones(s.size());
    return s * (top_a.transpose() * weights).transpose() +
           (ones - s) * (bot_a.transpose() * weights).transpose();
  }
  Mat weighted_gradient_b(const Vec& weights, const Vec& s) const {
    const Vec ones = Vec::Ones(s.size());
    return -(s * (top_b.transpose() * weights).transpose() +
             (ones - s) * (bot_b.transpose() * weights).transpose());
  }
};

AwareStack build_stack_aware(const ProbabilityViews& v, const NeighborMatrix& wa,
                             const NeighborMatrix& wb, const TransferBudget& f) {
  check_views_for_budget(v, f);
  if (wa.rows() != wb.rows()) {
    throw std::invalid_argument("decorrelate: the per-group neighbor matrices must pair "
                                "the same rows");
  }
  const int n = v.cells;
  const int b = wa.rows();
  AwareStack s;
  s.base_rows = 4 + b;
  s.top_a = Mat::Zero(s.base_rows, n);
  s.bot_a = Mat::Zero(s.base_rows, n);
  s.top_b = Mat::Zero(s.base_rows, n);
  s.bot_b = Mat::Zero(s.base_rows, n);
  s.budgets = Vec(s.base_rows);

  s.top_a.row(0) = v.cond_group[0].transpose();
  s.top_b.row(0) = v.cond_group[1].transpose();
  s.budgets(0) = f.dp;
  s.top_a.row(1) = v.cond_group_label[0][1].transpose();
  s.top_b.row(1) = v.cond_group_label[1][1].transpose();
  s.budgets(1) = f.eop;
  s.bot_a.row(2) = v.cond_group_label[0][0].transpose();
  s.bot_b.row(2) = v.cond_group_label[1][0].transpose();
  s.budgets(2) = f.pe;
  s.top_a.row(3) = v.label_in_group[0][1].transpose();
  s.top_b.row(3) = v.label_in_group[1][1].transpose();
  s.bot_a.row(3) = v.label_in_group[0][0].transpose();
  s.bot_b.row(3) = v.label_in_group[1][0].transpose();
  s.budgets(3) = f.ea;
  for (int k = 0; k < b; ++k) {
    const auto& pa = wa.pairs[static_cast<std::size_t>(k)];
    const auto& pb = wb.pairs[static_cast<std::size_t>(k)];
    const double ka = wa.kernel(static_cast<std::size_t>(k));
    const double kb = wb.kernel(static_cast<std::size_t>(k));
    s.top_a(4 + k, pa.i) = ka;
    s.top_a(4 + k, pa.j) = -ka;
    // the b-side block carries -W, turning the a-minus-b difference into the
    // summed within-group score gaps of the pair
    s.top_b(4 + k, pb.i) = -kb;
    s.top_b(4 + k, pb.j) = kb;
    s.budgets(4 + k) = f.ind;
  }
  return s;
}

// multiplier-plus-penalty weights on the signed violation blocks, collapsed
// onto the base rows: omega_r = (rho+ + tau g+) [g+ > 0] - (rho- + tau g-) [g- > 0]
Vec collapse_weights(const Vec& g, const Vec& rho, double tau, int base_rows) {
  Vec omega = Vec::Zero(base_rows);
  for (int r = 0; r < base_rows; ++r) {
    if (g(r) > 0.0) omega(r) += rho(r) + tau * g(r);
    const int neg = base_rows + r;
    if (g(neg) > 0.0) omega(r) -= rho(neg) + tau * g(neg);
  }
  return omega;
}

void project_columns(Mat& t) {
  for (Eigen::Index c = 0; c < t.cols(); ++c) {
    t.col(c) = project_simplex(t.col(c));
  }
}

double penalty_value(const Vec& g, const Vec& rho, double tau) {
  return rho.dot(g) + 0.5 * tau * g.squaredNorm();
}

// Projected subgradient descent with momentum and a geometric learning-rate
// decay; every step re-projects the columns. Returns the best iterate seen.
template <typename ValueFn, typename GradFn>
Mat minimize_inner(Mat t, const DecorrelationConfig& config, ValueFn&& value,
                   GradFn&& grad) {
  Mat best = t;
  double best_value = value(t);
  Mat velocity = Mat::Zero(t.rows(), t.cols());

  const int steps = std::max(config.inner_iterations, 1);
  const double decay =
      steps > 1 ? std::pow(config.lr_final / config.lr_initial, 1.0 / (steps - 1)) : 1.0;
  double lr = config.lr_initial;
  for (int k = 0; k < steps; ++k) {
    velocity = config.momentum * velocity - lr * grad(t);
    t += velocity;
    if (!t.allFinite()) {
      throw numeric_error("decorrelation solver produced non-finite iterates");
    }
    project_columns(t);
    const double v = value(t);
    if (v < best_value) {
      best_value = v;
      best = t;
    }
    lr *= decay;
  }
  return best;
}

}  // namespace

Vec project_simplex(const Vec& v) {
  const auto n = v.size();
  if (n == 0) throw std::invalid_argument("project_simplex: empty vector");
  if (!v.allFinite()) throw std::invalid_argument("project_simplex: non-finite entries");

  std::vector<double> u(v.data(), v.data() + n);
  std::sort(u.begin(), u.end(), std::greater<double>());

  // largest support whose shifted values stay positive fixes the threshold
  double cumulative = 0.0;
  double threshold = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    cumulative += u[j];
    const double candidate = (cumulative - 1.0) / static_cast<double>(j + 1);
    if (u[j] - candidate > 0.0) threshold = candidate;
  }
  return (v.array() - threshold).cwiseMax(0.0);
}

Mat identity_transform(int cells) { return Mat::Identity(cells, cells); }

void identity_transform_aware(int cells, Mat& ta, Mat& tb) {
  ta = Mat::Zero(2 * cells, cells);
  tb = Mat::Zero(2 * cells, cells);
  ta.topRows(cells) = Mat::Identity(cells, cells);
  tb.bottomRows(cells) = Mat::Identity(cells, cells);
}

double accuracy_term(const Mat& t, const ScoreVector& s_fair, const ProbabilityViews& v) {
  check_scores(s_fair, v.cells, false);
  check_transform(t, v.cells, false);
  const Vec& s = s_fair.s;
  return s.dot(t * v.p1) + (Vec::Ones(v.cells) - s).dot(t * v.p0);
}

double accuracy_term(const Mat& ta, const Mat& tb, const ScoreVector& s_fair,
                     const ProbabilityViews& v) {
  check_scores(s_fair, v.cells, true);
  check_transform(ta, v.cells, true);
  check_transform(tb, v.cells, true);
  const Vec& s = s_fair.s;
  const Vec ones = Vec::Ones(2 * v.cells);
  return s.dot(ta * v.joint_gy[0][1]) + (ones - s).dot(ta * v.joint_gy[0][0]) +
         s.dot(tb * v.joint_gy[1][1]) + (ones - s).dot(tb * v.joint_gy[1][0]);
}

double correlation_term(const Mat& t, const ProbabilityViews& v) {
  require_groups(v);
  check_transform(t, v.cells, false);
  return (t * (v.cond_group[0] - v.cond_group[1])).cwiseAbs().sum();
}

double correlation_term(const Mat& ta, const Mat& tb, const ProbabilityViews& v) {
  require_groups(v);
  check_transform(ta, v.cells, true);
  check_transform(tb, v.cells, true);
  return (ta * v.cond_group[0] - tb * v.cond_group[1]).cwiseAbs().sum();
}

Vec fairness_violation(const Mat& t, const ScoreVector& s_fair, const ProbabilityViews& v,
                       const NeighborMatrix& w, const TransferBudget& f) {
  check_scores(s_fair, v.cells, false);
  check_transform(t, v.cells, false);
  return build_stack(v, w, f).violation(t, s_fair.s);
}

Vec fairness_violation(const Mat& ta, const Mat& tb, const ScoreVector& s_fair,
                       const ProbabilityViews& v, const NeighborMatrix& wa,
                       const NeighborMatrix& wb, const TransferBudget& f) {
  check_scores(s_fair, v.cells, true);
  check_transform(ta, v.cells, true);
  check_transform(tb, v.cells, true);
  return build_stack_aware(v, wa, wb, f).violation(ta, tb, s_fair.s);
}

double lagrangian(const Mat& t, const Vec& rho, const DecorrelationConfig& config,
                  const ScoreVector& s_fair, const ProbabilityViews& v,
                  const NeighborMatrix& w) {
  const Vec g = fairness_violation(t, s_fair, v, w, config.budget);
  if (rho.size() != g.size()) {
    throw std::invalid_argument("lagrangian: multiplier dimension mismatch");
  }
  return -config.lambda * accuracy_term(t, s_fair, v) +
         config.beta * correlation_term(t, v) + penalty_value(g, rho, config.tau);
}

double lagrangian(const Mat& ta, const Mat& tb, const Vec& rho,
                  const DecorrelationConfig& config, const ScoreVector& s_fair,
                  const ProbabilityViews& v, const NeighborMatrix& wa,
                  const NeighborMatrix& wb) {
  const Vec g = fairness_violation(ta, tb, s_fair, v, wa, wb, config.budget);
  if (rho.size() != g.size()) {
    throw std::invalid_argument("lagrangian: multiplier dimension mismatch");
  }
  return -config.lambda * accuracy_term(ta, tb, s_fair, v) +
         config.beta * correlation_term(ta, tb, v) + penalty_value(g, rho, config.tau);
}

TransferReport evaluate_transfer(const Mat& t, const ScoreVector& s_fair,
                                 const ProbabilityViews& v, const NeighborMatrix& w,
                                 const TransferBudget& f) {
  TransferReport report;
  const Mat id = identity_transform(v.cells);
  report.baseline_correlation = correlation_term(id, v);
  report.final_correlation = correlation_term(t, v);
  report.correlation_reduction = report.baseline_correlation - report.final_correlation;
  report.acc_before = accuracy_term(id, s_fair, v);
  report.acc_after = accuracy_term(t, s_fair, v);
  report.acc_reduction = report.acc_before - report.acc_after;
  const Vec g = fairness_violation(t, s_fair, v, w, f);
  report.max_violation = g.size() > 0 ? g.maxCoeff() : 0.0;
  return report;
}

TransferReport evaluate_transfer(const Mat& ta, const Mat& tb, const ScoreVector& s_fair,
                                 const ProbabilityViews& v, const NeighborMatrix& wa,
                                 const NeighborMatrix& wb, const TransferBudget& f) {
  TransferReport report;
  Mat ia, ib;
  identity_transform_aware(v.cells, ia, ib);
  report.baseline_correlation = correlation_term(ia, ib, v);
  report.final_correlation = correlation_term(ta, tb, v);
  report.correlation_reduction = report.baseline_correlation - report.final_correlation;
  report.acc_before = accuracy_term(ia, ib, s_fair, v);
  report.acc_after = accuracy_term(ta, tb, s_fair, v);
  report.acc_reduction = report.acc_before - report.acc_after;
  const Vec g = fairness_violation(ta, tb, s_fair, v, wa, wb, f);
  report.max_violation = g.size() > 0 ? g.maxCoeff() : 0.0;
  return report;
}

TransformSolution solve_decorrelation_unaware(const ScoreVector& s_fair,
                                              const ProbabilityViews& v,
                                              const NeighborMatrix& w,
                                              const DecorrelationConfig& config) {
  check_scores(s_fair, v.cells, false);
  check_config(config);
  const Stack stack = build_stack(v, w, config.budget);
  const Vec& s = s_fair.s;
  const Vec ones = Vec::Ones(v.cells);
  const Vec group_gap = v.cond_group[0] - v.cond_group[1];
  const Mat acc_grad = -config.lambda * (s * v.p1.transpose() + (ones - s) * v.p0.transpose());

  TransformSolution solution;
  solution.aware = false;
  solution.t = identity_transform(v.cells);
  solution.state.rho = Vec::Zero(2 * stack.base_rows);

  auto value = [&](const Mat& t) {
    const Vec g = stack.violation(t, s);
    return -config.lambda * (s.dot(t * v.p1) + (ones - s).dot(t * v.p0)) +
           config.beta * (t * group_gap).cwiseAbs().sum() +
           penalty_value(g, solution.state.rho, config.tau);
  };
  auto grad = [&](const Mat& t) {
    const Vec g = stack.violation(t, s);
    const Vec omega = collapse_weights(g, solution.state.rho, config.tau, stack.base_rows);
    Mat out = acc_grad;
    out.noalias() += config.beta * sign_of(t * group_gap) * group_gap.transpose();
    out += stack.weighted_gradient(omega, s);
    return out;
  };

  bool converged = false;
  for (int outer = 0; outer < config.outer_iterations; ++outer) {
    const Mat t_prev = solution.t;
    solution.t = minimize_inner(solution.t, config, value, grad);
    const Vec g = stack.violation(solution.t, s);
    const Vec rho_step = config.tau * g;
    solution.state.rho += rho_step;
    solution.state.outer_iterations = outer + 1;

    const double residual =
        (solution.t - t_prev).squaredNorm() + rho_step.squaredNorm();
    solution.state.residual_history.push_back(residual);
    if (residual < config.stop_tol) {
      converged = true;
      break;
    }
  }

  solution.report = evaluate_transfer(solution.t, s_fair, v, w, config.budget);
  solution.report.converged = converged;
  return solution;
}

TransformSolution solve_decorrelation_aware(const ScoreVector& s_fair,
                                            const ProbabilityViews& v,
                                            const NeighborMatrix& wa,
                                            const NeighborMatrix& wb,
                                            const DecorrelationConfig& config) {
  check_scores(s_fair, v.cells, true);
  check_config(config);
  const AwareStack stack = build_stack_aware(v, wa, wb, config.budget);
  const Vec& s = s_fair.s;
  const Vec ones = Vec::Ones(2 * v.cells);
  const Mat acc_grad_a =
      -config.lambda *
      (s * v.joint_gy[0][1].transpose() + (ones - s) * v.joint_gy[0][0].transpose());
  const Mat acc_grad_b =
      -config.lambda *
      (s * v.joint_gy[1][1].transpose() + (ones - s) * v.joint_gy[1][0].transpose());

  TransformSolution solution;
  solution.aware = true;
  identity_transform_aware(v.cells, solution.t_a, solution.t_b);
  solution.state.rho = Vec::Zero(2 * stack.base_rows);

  auto value_pair = [&](const Mat& ta, const Mat& tb) {
    const Vec g = stack.violation(ta, tb, s);
    return -config.lambda *
               (s.dot(ta * v.joint_gy[0][1]) + (ones - s).dot(ta * v.joint_gy[0][0]) +
                s.dot(tb * v.joint_gy[1][1]) + (ones - s).dot(tb * v.joint_gy[1][0])) +
           config.beta *
               (ta * v.cond_group[0] - tb * v.cond_group[1]).cwiseAbs().sum() +
           penalty_value(g, solution.state.rho, config.tau);
  };

  bool converged = false;
  for (int outer = 0; outer < config.outer_iterations; ++outer) {
    const Mat ta_prev = solution.t_a;
    const Mat tb_prev = solution.t_b;

    // alternate the two blocks, each against the other's latest iterate
    solution.t_a = minimize_inner(
        solution.t_a, config, [&](const Mat& ta) { return value_pair(ta, solution.t_b); },
        [&](const Mat& ta) {
          const Vec g = stack.violation(ta, solution.t_b, s);
          const Vec omega =
              collapse_weights(g, solution.state.rho, config.tau, stack.base_rows);
          Mat out = acc_grad_a;
          out.noalias() += config.beta *
                           sign_of(ta * v.cond_group[0] - solution.t_b * v.cond_group[1]) *
                           v.cond_group[0].transpose();
          out += stack.weighted_gradient_a(omega, s);
          return out;
        });
    solution.t_b = minimize_inner(
        solution.t_b, config, [&](const Mat& tb) { return value_pair(solution.t_a, tb); },
        [&](const Mat& tb) {
          const Vec g = stack.violation(solution.t_a, tb, s);
          const Vec omega =
              collapse_weights(g, solution.state.rho, config.tau, stack.base_rows);
          Mat out = acc_grad_b;
          out.noalias() -= config.beta *
                           sign_of(solution.t_a * v.cond_group[0] - tb * v.cond_group[1]) *
                           v.cond_group[1].transpose();
          out += stack.weighted_gradient_b(omega, s);
          return out;
        });

    const Vec g = stack.violation(solution.t_a, solution.t_b, s);
    const Vec rho_step = config.tau * g;
    solution.state.rho += rho_step;
    solution.state.outer_iterations = outer + 1;

    const double residual = (solution.t_a - ta_prev).squaredNorm() +
                            (solution.t_b - tb_prev).squaredNorm() +
                            rho_step.squaredNorm();
    solution.state.residual_history.push_back(residual);
    if (residual < config.stop_tol) {
      converged = true;
      break;
    }
  }

  solution.report =
      evaluate_transfer(solution.t_a, solution.t_b, s_fair, v, wa, wb, config.budget);
  solution.report.converged = converged;
  return solution;
}

}  // namespace fairvq

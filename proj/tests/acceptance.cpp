// Acceptance suite: prints one PASS/FAIL line per criterion and exits
// non-zero if any fail. Each check pins its tolerance and time budget.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <random>
#include <vector>

#include "fairvq/decorrelate.hpp"
#include "fairvq/metrics.hpp"
#include "fairvq/pac.hpp"
#include "fairvq/tradeoff.hpp"
#include "helpers.hpp"

using namespace fairvq;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void report(int criterion, bool ok, const std::string& what, double elapsed) {
  if (!ok) ++failures;
  std::printf("criterion %d: %s  %s (%.3f s)\n", criterion, ok ? "PASS" : "FAIL",
              what.c_str(), elapsed);
  std::fflush(stdout);
}

DiscreteJoint hand_joint() {
  DiscreteJoint joint;
  joint.cells = 2;
  joint.p = {{{{0.05, 0.35}, {0.05, 0.05}}}, {{{0.05, 0.05}, {0.35, 0.05}}}};
  return joint;
}

NeighborMatrix no_neighbors(int cells) {
  NeighborMatrix w;
  w.cells = cells;
  return w;
}

// ---------------------------------------------------------------- criterion 1
void criterion_pac_exactness() {
  const auto start = Clock::now();
  bool ok = true;
  for (int repeat = 0; repeat < 10; ++repeat) {
    ok = ok && pac_sample_bound(256, 0.05, 0.95) == 259849;
    ok = ok && pac_max_cells(48842, 0.05, 0.95) == 48;
    ok = ok && pac_max_cells(20798, 0.05, 0.95) == 20;
    ok = ok && pac_max_cells(60420, 0.05, 0.95) == 59;
  }
  const double elapsed = seconds_since(start);
  ok = ok && elapsed < 1e-3 * 10;  // 10 repeats, < 1 ms each
  report(1, ok, "PAC bounds reproduce 259849 and 48/20/59 exactly", elapsed);
}

// ---------------------------------------------------------------- criterion 2
void criterion_lp_oracle() {
  const auto start = Clock::now();
  std::mt19937_64 rng(1001);
  bool ok = true;
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const int cells = 2 + static_cast<int>(rng() % 3);  // N <= 4
    const auto joint = testutil::random_joint(cells, rng);
    const ProbabilityViews v = views(joint);
    const auto bayes = bayes_scores_unaware(v);
    const auto book = testutil::random_codebook(cells, 2, rng);
    const auto w = build_neighbor_matrix(book, 60.0, 1.0);

    FairnessBudget budget;
    const double eps = testutil::uniform(rng, 0.05, 0.45);
    switch (rng() % 5) {
      case 0: budget.dp = eps; break;
      case 1: budget.eop = eps; break;
      case 2: budget.pe = eps; break;
      case 3: budget.ea = eps; break;
      default: budget.ind = eps; break;
    }

    const LpProblem lp = assemble_tradeoff_lp(v, bayes.scores, w, budget, false);
    const LpSolution sol = solve_lp(lp);
    const auto oracle = testutil::grid_search_lp(lp, 0.01);
    if (sol.status != LpStatus::Optimal || !oracle.feasible) {
      ok = false;
      continue;
    }
    worst = std::max(worst, std::abs(sol.objective - oracle.objective));
  }
  const double elapsed = seconds_since(start);
  ok = ok && worst <= 1e-2 && elapsed < 10.0;
  char what[128];
  std::snprintf(what, sizeof(what),
                "LP matches the 0.01-step grid oracle on 50 joints (worst gap %.2e)",
                worst);
  report(2, ok, what, elapsed);
}

// ---------------------------------------------------------------- criterion 3
void criterion_hand_instance() {
  const auto start = Clock::now();
  const ProbabilityViews v = views(hand_joint());
  FairnessBudget budget;
  budget.dp = 0.0;
  const auto result = fair_solution(v, budget, false, no_neighbors(2));
  bool ok = result.status == LpStatus::Optimal;
  ok = ok && std::abs(result.objective - 0.3) <= 1e-8;
  ok = ok && std::abs(result.s_fair.s(0)) <= 1e-8;
  ok = ok && std::abs(result.s_fair.s(1)) <= 1e-8;
  ok = ok && std::abs(result.acc_fair - 0.5) <= 1e-8;
  report(3, ok, "N=2 strict-DP instance: objective 0.3, s_F=(0,0), acc 0.5",
         seconds_since(start));
}

// ---------------------------------------------------------------- criterion 4
void criterion_pareto_monotonicity() {
  const auto start = Clock::now();
  bool ok = true;
  for (std::uint64_t seed : {7ULL, 19ULL}) {
    std::mt19937_64 rng(seed);
    const auto joint = testutil::random_joint(64, rng);
    const ProbabilityViews v = views(joint);
    const auto book = testutil::random_codebook(64, 3, rng);
    const auto w = build_neighbor_matrix(book, 3.5, 1.0);

    const std::vector<std::vector<std::string>> combos = {
        {"dp"}, {"ea"}, {"eod"}, {"dp", "ea"}, {"eod", "ind"}};
    for (const auto& combo : combos) {
      auto make = [&](double eps, double ind_eps) {
        FairnessBudget b;
        for (const auto& name : combo) {
          if (name == "dp") b.dp = eps;
          if (name == "ea") b.ea = eps;
          if (name == "eod") b.eod = eps;
          if (name == "ind") b.ind = ind_eps;
        }
        return b;
      };

      std::vector<FairnessBudget> grid;
      for (double eps = 0.0; eps <= 0.30 + 1e-12; eps += 0.05) {
        grid.push_back(make(eps, 0.05));
      }
      const auto points = pareto_sweep(v, grid, false, w);
      for (std::size_t k = 0; k < points.size(); ++k) {
        if (points[k].result.status != LpStatus::Optimal) continue;
        ok = ok && points[k].result.acc_fair <= points[k].result.acc_star + 1e-9;
        if (k > 0 && points[k - 1].result.status == LpStatus::Optimal) {
          ok = ok && points[k].result.acc_fair >= points[k - 1].result.acc_fair - 1e-9;
        }
      }

      // once every budget covers the residuals of m = 0, Acc* is attained
      FairnessBudget probe;
      probe.dp = probe.eop = probe.pe = probe.ea = probe.ind = 10.0;
      const auto unconstrained = fair_solution(v, probe, false, w);
      FairnessBudget cover = make(0.0, 0.0);
      for (const auto& residual : unconstrained.residuals) {
        const double eps = residual.attained + 1e-9;
        if (residual.name == "dp" && cover.dp) cover.dp = eps;
        if (residual.name == "ea" && cover.ea) cover.ea = eps;
        if (residual.name == "eop" && cover.eod) {
          cover.eod = std::max(*cover.eod, eps);
        }
        if (residual.name == "pe" && cover.eod) {
          cover.eod = std::max(*cover.eod, eps);
        }
        if (residual.name == "ind" && cover.ind) cover.ind = eps;
      }
      const auto saturated = fair_solution(v, cover, false, w);
      ok = ok && saturated.status == LpStatus::Optimal &&
           std::abs(saturated.acc_fair - saturated.acc_star) <= 1e-7;
    }
  }
  const double elapsed = seconds_since(start);
  ok = ok && elapsed < 30.0;
  report(4, ok, "nested sweeps on N=64 joints are monotone and saturate at Acc*",
         elapsed);
}

// ---------------------------------------------------------------- criterion 5
void criterion_residual_feasibility() {
  const auto start = Clock::now();
  std::mt19937_64 rng(2002);
  bool ok = true;
  int solved = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int cells = 2 + static_cast<int>(rng() % 7);
    const auto joint = testutil::random_joint(cells, rng);
    const ProbabilityViews v = views(joint);
    const bool aware = rng() % 2 == 0;
    const auto book = testutil::random_codebook(cells, 2, rng);
    const auto w = build_neighbor_matrix(book, 40.0, 1.0);

    FairnessBudget budget;
    if (rng() % 2 == 0) budget.dp = testutil::uniform(rng, 0.0, 0.3);
    if (rng() % 2 == 0) budget.ea = testutil::uniform(rng, 0.0, 0.3);
    if (rng() % 4 == 0) {
      budget.eod = testutil::uniform(rng, 0.0, 0.3);
    } else {
      if (rng() % 2 == 0) budget.eop = testutil::uniform(rng, 0.0, 0.3);
      if (rng() % 2 == 0) budget.pe = testutil::uniform(rng, 0.0, 0.3);
    }
    if (rng() % 3 == 0) budget.ind = testutil::uniform(rng, 0.0, 0.3);

    const auto result = fair_solution(v, budget, aware, w);
    if (result.status != LpStatus::Optimal) continue;
    ++solved;
    for (const auto& residual : result.residuals) {
      ok = ok && residual.attained <= residual.budget + 1e-6;
    }
    const auto bayes = aware ? bayes_scores_aware(v) : bayes_scores_unaware(v);
    for (Eigen::Index i = 0; i < result.m.size(); ++i) {
      if (bayes.scores.s(i) == 1.0) {
        ok = ok && result.m(i) >= 0.0 && result.m(i) <= 1.0;
      } else {
        ok = ok && result.m(i) >= -1.0 && result.m(i) <= 0.0;
      }
    }
  }
  ok = ok && solved >= 100;
  char what[128];
  std::snprintf(what, sizeof(what),
                "all active residuals within budget + 1e-6 on %d solved instances",
                solved);
  report(5, ok, what, seconds_since(start));
}

// ---------------------------------------------------------------- criterion 6
void criterion_convexity() {
  const auto start = Clock::now();
  std::mt19937_64 rng(3003);
  const int n = 8;
  const auto joint = testutil::random_joint(n, rng);
  const ProbabilityViews v = views(joint);
  const auto book = testutil::random_codebook(n, 2, rng);
  const auto w = build_neighbor_matrix(book, 30.0, 1.0);

  DecorrelationConfig config;
  config.budget.dp = 0.05;
  config.budget.eop = 0.10;
  config.budget.pe = 0.10;
  config.budget.ea = 0.08;
  config.budget.ind = 0.05;

  bool ok = true;

  {  // convexity over single transforms
    Vec s(n);
    for (int i = 0; i < n; ++i) s(i) = testutil::unit(rng);
    const ScoreVector scores{s, false};
    Vec rho(2 * (4 + w.rows()));
    for (Eigen::Index i = 0; i < rho.size(); ++i) rho(i) = testutil::uniform(rng, 0, 4);
    for (int trial = 0; trial < 1000; ++trial) {
      const Mat t1 = testutil::random_stochastic(n, n, rng);
      const Mat t2 = testutil::random_stochastic(n, n, rng);
      const double theta = testutil::unit(rng);
      const double lhs =
          lagrangian(theta * t1 + (1 - theta) * t2, rho, config, scores, v, w);
      const double rhs = theta * lagrangian(t1, rho, config, scores, v, w) +
                         (1 - theta) * lagrangian(t2, rho, config, scores, v, w);
      ok = ok && lhs <= rhs + 1e-9;
    }
  }

  {  // joint convexity over transform pairs
    Vec s(2 * n);
    for (int i = 0; i < 2 * n; ++i) s(i) = testutil::unit(rng);
    const ScoreVector scores{s, true};
    Vec rho(2 * (4 + w.rows()));
    for (Eigen::Index i = 0; i < rho.size(); ++i) rho(i) = testutil::uniform(rng, 0, 4);
    for (int trial = 0; trial < 1000; ++trial) {
      const Mat a1 = testutil::random_stochastic(2 * n, n, rng);
      const Mat a2 = testutil::random_stochastic(2 * n, n, rng);
      const Mat b1 = testutil::random_stochastic(2 * n, n, rng);
      const Mat b2 = testutil::random_stochastic(2 * n, n, rng);
      const double theta = testutil::unit(rng);
      const double lhs =
          lagrangian(theta * a1 + (1 - theta) * a2, theta * b1 + (1 - theta) * b2, rho,
                     config, scores, v, w, w);
      const double rhs = theta * lagrangian(a1, b1, rho, config, scores, v, w, w) +
                         (1 - theta) * lagrangian(a2, b2, rho, config, scores, v, w, w);
      ok = ok && lhs <= rhs + 1e-9;
    }
  }
  report(6, ok, "convex-combination inequalities for both solver objectives at N=8",
         seconds_since(start));
}

// ---------------------------------------------------------------- criterion 7
DiscreteJoint transfer_joint() {
  // 16 cells: groups concentrated on opposite halves, labels alternating, a
  // little cross mass so every view exists
  DiscreteJoint joint;
  joint.cells = 16;
  joint.p.assign(16, {});
  double total = 0.0;
  for (int i = 0; i < 16; ++i) {
    const double share_a = i < 8 ? 0.9 : 0.1;
    const double p1 = i % 2 == 0 ? 0.8 : 0.2;
    const double mass = 1.0;
    joint.p[static_cast<std::size_t>(i)][0][1] = mass * share_a * p1;
    joint.p[static_cast<std::size_t>(i)][0][0] = mass * share_a * (1 - p1);
    joint.p[static_cast<std::size_t>(i)][1][1] = mass * (1 - share_a) * p1;
    joint.p[static_cast<std::size_t>(i)][1][0] = mass * (1 - share_a) * (1 - p1);
    total += mass;
  }
  for (auto& cell : joint.p) {
    for (auto& g : cell) {
      for (auto& value : g) value /= total;
    }
  }
  return joint;
}

void criterion_transfer() {
  const auto start = Clock::now();
  const DiscreteJoint joint = transfer_joint();
  const ProbabilityViews v = views(joint);

  std::mt19937_64 rng(4004);
  const auto book = testutil::random_codebook(16, 3, rng);
  const auto w = build_neighbor_matrix(book, 3.5, 1.0);

  DecorrelationConfig config;  // default weights and schedule: lambda 15, beta 25
  config.budget.dp = 0.05;
  config.budget.ind = 0.05;

  bool ok = true;
  std::string note;

  {  // unaware
    FairnessBudget budget;
    budget.dp = 0.05;
    budget.ind = 0.05;
    const auto fair = fair_solution(v, budget, false, w);
    ok = ok && fair.status == LpStatus::Optimal;
    const auto t0 = Clock::now();
    const auto solution = solve_decorrelation_unaware(fair.s_fair, v, w, config);
    const double solve_time = seconds_since(t0);
    const auto& r = solution.report;
    ok = ok && r.baseline_correlation >= 0.5;
    ok = ok && r.max_violation <= 1e-3;
    ok = ok && r.correlation_reduction >= 0.8 * r.baseline_correlation;
    ok = ok && solve_time < 300.0;
    char buf[160];
    std::snprintf(buf, sizeof(buf), "unaware base %.3f red %.3f viol %.1e; ",
                  r.baseline_correlation, r.correlation_reduction, r.max_violation);
    note += buf;
  }

  {  // aware, on the 2N representation
    FairnessBudget budget;
    budget.dp = 0.05;
    budget.ind = 0.05;
    const auto fair = fair_solution(v, budget, true, w);
    ok = ok && fair.status == LpStatus::Optimal;
    const auto t0 = Clock::now();
    const auto solution = solve_decorrelation_aware(fair.s_fair, v, w, w, config);
    const double solve_time = seconds_since(t0);
    const auto& r = solution.report;
    ok = ok && r.baseline_correlation >= 0.5;
    ok = ok && r.max_violation <= 1e-3;
    ok = ok && r.correlation_reduction >= 0.8 * r.baseline_correlation;
    ok = ok && solve_time < 300.0;
    char buf[160];
    std::snprintf(buf, sizeof(buf), "aware base %.3f red %.3f viol %.1e",
                  r.baseline_correlation, r.correlation_reduction, r.max_violation);
    note += buf;
  }
  report(7, ok, "decorrelation transfer at N=16 (" + note + ")", seconds_since(start));
}

// ---------------------------------------------------------------- criterion 8
void criterion_projection() {
  const auto start = Clock::now();
  std::mt19937_64 rng(5005);
  bool ok = true;
  for (int trial = 0; trial < 10000; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 256);
    Vec v(n);
    for (int i = 0; i < n; ++i) v(i) = testutil::uniform(rng, -5.0, 5.0);
    const Vec p = project_simplex(v);
    ok = ok && p.minCoeff() >= -1e-9;
    ok = ok && std::abs(p.sum() - 1.0) <= 1e-9;
    ok = ok && (project_simplex(p) - p).cwiseAbs().maxCoeff() <= 1e-9;
    const Vec other = testutil::random_simplex(n, rng);
    ok = ok && (p - v).norm() <= (other - v).norm() + 1e-9;
  }
  report(8, ok, "simplex projection: feasibility, idempotence, nearest-point",
         seconds_since(start));
}

// ---------------------------------------------------------------- criterion 9
void criterion_quantizer_fidelity() {
  const auto start = Clock::now();
  const int cells = 16;
  const auto samples = pac_sample_bound(cells, 0.05, 0.95);

  std::mt19937_64 joint_rng(6006);
  const auto truth = testutil::random_joint(cells, joint_rng, 0.4);

  // one distinct feature point per cell; training on them recovers an exact
  // codebook so the rebuild exercises assign_cell + build_joint end to end
  FeatureSchema schema;
  schema.columns = {{"x", ColumnKind::Continuous, {}}};
  schema.group_column = "g";
  schema.group_values = {"a", "b"};
  schema.label_column = "y";
  SampleTable support;
  support.schema = schema;
  for (int i = 0; i < cells; ++i) {
    support.rows.push_back({{static_cast<double>(i)}, 0, 0});
  }
  const Codebook book = train_codebook(support, cells, 0.01, 1);
  std::vector<int> cell_of_value(static_cast<std::size_t>(cells));
  for (int value = 0; value < cells; ++value) {
    cell_of_value[static_cast<std::size_t>(value)] =
        assign_cell(std::vector<double>{static_cast<double>(value)}, book);
  }

  bool ok = true;
  double worst = 0.0;
  for (int seed = 0; seed < 20; ++seed) {
    std::mt19937_64 rng(7000 + static_cast<std::uint64_t>(seed));
    SampleTable table;
    table.schema = schema;
    table.rows.reserve(static_cast<std::size_t>(samples));
    for (std::int64_t s = 0; s < samples; ++s) {
      double u = testutil::unit(rng);
      for (int i = 0; i < cells; ++i) {
        for (int g = 0; g < 2; ++g) {
          for (int y = 0; y < 2; ++y) {
            u -= truth.at(i, g, y);
            if (u < 0.0) {
              table.rows.push_back({{static_cast<double>(i)}, g, y});
              goto drawn;
            }
          }
        }
      }
      table.rows.push_back({{static_cast<double>(cells - 1)}, 1, 1});
    drawn:;
    }

    const DiscreteJoint rebuilt = build_joint(table, book);
    for (int g = 0; g < 2; ++g) {
      for (int y = 0; y < 2; ++y) {
        Vec true_vec(cells), emp_vec(cells);
        for (int value = 0; value < cells; ++value) {
          const int cell = cell_of_value[static_cast<std::size_t>(value)];
          true_vec(cell) = truth.at(value, g, y);
          emp_vec(cell) = rebuilt.at(cell, g, y);
        }
        const double tv = tv_distance(true_vec / true_vec.sum(),
                                      emp_vec.sum() > 0 ? Vec(emp_vec / emp_vec.sum())
                                                        : emp_vec);
        worst = std::max(worst, tv);
        ok = ok && tv <= 0.06;
      }
    }
  }
  char what[128];
  std::snprintf(what, sizeof(what),
                "per-(g,y) TV <= 0.06 at the PAC sample size over 20 seeds (worst %.4f)",
                worst);
  report(9, ok, what, seconds_since(start));
}

}  // namespace

int main() {
  criterion_pac_exactness();
  criterion_lp_oracle();
  criterion_hand_instance();
  criterion_pareto_monotonicity();
  criterion_residual_feasibility();
  criterion_convexity();
  criterion_transfer();
  criterion_projection();
  criterion_quantizer_fidelity();

  if (failures == 0) {
    std::printf("acceptance: all 9 criteria PASS\n");
    return 0;
  }
  std::printf("acceptance: %d criterion(s) FAILED\n", failures);
  return 1;
}

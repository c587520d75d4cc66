#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>

#include "fairvq/metrics.hpp"
#include "fairvq/normalize.hpp"
#include "fairvq/pac.hpp"
#include "fairvq/serialize.hpp"
#include "json.hpp"

namespace fairvq::cli {

namespace {

using nlohmann::json;

std::string fmt(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

std::string fmt_short(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%g", value);
  return buf;
}

json config_to_json(const RunConfig& c) {
  json j;
  j["samples"] = c.samples.string();
  j["schema"] = c.schema.string();
  j["output_dir"] = c.output_dir.string();
  if (c.reference_samples) j["reference_samples"] = c.reference_samples->string();
  j["quantizer"] = {{"cells", c.quantizer.cells},
                    {"error", c.quantizer.error},
                    {"confidence", c.quantizer.confidence},
                    {"rel_tol", c.quantizer.rel_tol},
                    {"seed", c.quantizer.seed}};
  j["neighbors"] = {{"percentile", c.neighbors.percentile},
                    {"theta", c.neighbors.theta}};
  json combos = json::array();
  for (const auto& combo : c.tradeoff.combinations) {
    json cj = {{"constraints", combo.constraints},
               {"grid", combo.grid},
               {"ind_epsilon", combo.ind_epsilon}};
    if (!combo.ind_grid.empty()) cj["ind_grid"] = combo.ind_grid;
    combos.push_back(std::move(cj));
  }
  j["tradeoff"] = {{"awareness", c.tradeoff.awareness}, {"combinations", std::move(combos)}};
  j["decorrelate"] = {{"awareness", c.decorrelate.awareness},
                      {"constraints", c.decorrelate.constraints},
                      {"grid", c.decorrelate.grid},
                      {"ind_epsilon", c.decorrelate.ind_epsilon},
                      {"lambda", c.decorrelate.lambda},
                      {"beta", c.decorrelate.beta},
                      {"tau", c.decorrelate.tau},
                      {"momentum", c.decorrelate.momentum},
                      {"lr_initial", c.decorrelate.lr_initial},
                      {"lr_final", c.decorrelate.lr_final},
                      {"stop_tol", c.decorrelate.stop_tol},
                      {"inner_iterations", c.decorrelate.inner_iterations},
                      {"outer_iterations", c.decorrelate.outer_iterations}};
  return j;
}

void check_constraint_names(const std::vector<std::string>& names) {
  for (const auto& name : names) {
    if (name != "dp" && name != "eop" && name != "pe" && name != "eod" && name != "ea" &&
        name != "ind") {
      throw std::invalid_argument("unknown constraint '" + name +
                                  "' (expected dp, eop, pe, eod, ea or ind)");
    }
  }
}

FairnessBudget make_budget(const std::vector<std::string>& constraints, double eps,
                           double ind_eps) {
  FairnessBudget budget;
  for (const auto& name : constraints) {
    if (name == "dp") budget.dp = eps;
    if (name == "eop") budget.eop = eps;
    if (name == "pe") budget.pe = eps;
    if (name == "eod") budget.eod = eps;
    if (name == "ea") budget.ea = eps;
    if (name == "ind") budget.ind = ind_eps;
  }
  budget.validate();
  return budget;
}

std::string status_string(LpStatus status) {
  switch (status) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Degenerate: return "degenerate";
  }
  return "degenerate";
}

std::optional<double> residual_of(const FairLpResult& result, const std::string& name) {
  for (const auto& r : result.residuals) {
    if (r.name == name) return r.attained;
  }
  return std::nullopt;
}

void write_sweep_csv(const std::filesystem::path& path, const std::string& label,
                     const std::string& awareness, const std::vector<SweepPoint>& points,
                     const std::string& config_hash) {
  std::ostringstream out;
  out << "# config_hash=" << config_hash << "\n";
  out << "label,awareness,eps_dp,eps_eop,eps_pe,eps_eod,eps_ea,eps_ind,status,"
         "acc_star,acc_fair,objective,res_dp,res_eop,res_pe,res_ea,res_ind\n";
  for (const auto& point : points) {
    const auto& b = point.budget;
    const auto& r = point.result;
    auto opt = [&](const std::optional<double>& v) { return v ? fmt(*v) : ""; };
    out << label << ',' << awareness << ',' << opt(b.dp) << ',' << opt(b.eop) << ','
        << opt(b.pe) << ',' << opt(b.eod) << ',' << opt(b.ea) << ',' << opt(b.ind) << ','
        << status_string(r.status) << ',';
    if (r.status == LpStatus::Optimal) {
      out << fmt(r.acc_star) << ',' << fmt(r.acc_fair) << ',' << fmt(r.objective);
    } else {
      out << fmt(r.acc_star) << ",,";
    }
    for (const char* name : {"dp", "eop", "pe", "ea", "ind"}) {
      const auto res = residual_of(r, name);
      out << ',' << (res ? fmt(*res) : "");
    }
    out << '\n';
  }
  write_text_file(path, out.str());
}

struct Artifacts {
  Codebook codebook;
  NormalizationParams norm;
  DiscreteJoint joint;
};

Artifacts load_artifacts(const RunConfig& config) {
  Artifacts a;
  const auto codebook_path = config.output_dir / "codebook.json";
  const auto joint_path = config.output_dir / "joint.json";
  std::tie(a.codebook, a.norm) = codebook_from_json(read_text_file(codebook_path));
  a.joint = joint_from_json(read_text_file(joint_path));
  if (a.joint.cells != a.codebook.size()) {
    throw std::invalid_argument("codebook and joint disagree on the cell count");
  }
  return a;
}

Vec conditional_of(const Vec& joint_slice) {
  const double mass = joint_slice.sum();
  if (mass <= 0.0) return Vec::Zero(joint_slice.size());
  return joint_slice / mass;
}

json fidelity_report(const DiscreteJoint& a, const DiscreteJoint& b) {
  const ProbabilityViews va = views(a);
  const ProbabilityViews vb = views(b);
  json rows = json::array();
  const char* group_names[2] = {"a", "b"};
  for (int g = 0; g < 2; ++g) {
    for (int y = 0; y < 2; ++y) {
      json row;
      row["group"] = group_names[g];
      row["label"] = y;
      const Vec& ja = va.joint_gy[g][y];
      const Vec& jb = vb.joint_gy[g][y];
      try {
        row["pcc"] = pcc(ja, jb);
      } catch (const std::invalid_argument&) {
        row["pcc"] = nullptr;  // constant slice
      }
      row["tv"] = 0.5 * (conditional_of(ja) - conditional_of(jb)).cwiseAbs().sum();
      rows.push_back(std::move(row));
    }
  }
  json report;
  report["per_group_label"] = std::move(rows);

  Vec flat_a(4 * a.cells), flat_b(4 * b.cells);
  int k = 0;
  for (int i = 0; i < a.cells; ++i) {
    for (int g = 0; g < 2; ++g) {
      for (int y = 0; y < 2; ++y) {
        flat_a(k) = a.at(i, g, y);
        flat_b(k) = b.at(i, g, y);
        ++k;
      }
    }
  }
  report["overall_tv"] = tv_distance(flat_a, flat_b);
  return report;
}

double population_stddev(const std::vector<double>& values, double mean) {
  if (values.empty()) return 0.0;
  double acc = 0.0;
  for (double v : values) acc += (v - mean) * (v - mean);
  return std::sqrt(acc / static_cast<double>(values.size()));
}

}  // namespace

std::string RunConfig::hash() const {
  const std::string canonical = config_to_json(*this).dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (const unsigned char c : canonical) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  const json j = json::parse(read_text_file(path), nullptr, false);
  if (j.is_discarded()) throw io_error("config '" + path.string() + "' is malformed JSON");

  RunConfig c;
  try {
    if (j.contains("samples")) c.samples = j.at("samples").get<std::string>();
    if (j.contains("schema")) c.schema = j.at("schema").get<std::string>();
    if (j.contains("output_dir")) c.output_dir = j.at("output_dir").get<std::string>();
    if (j.contains("reference_samples") && !j.at("reference_samples").is_null()) {
      c.reference_samples = j.at("reference_samples").get<std::string>();
    }
    if (j.contains("quantizer")) {
      const auto& q = j.at("quantizer");
      if (q.contains("cells")) c.quantizer.cells = q.at("cells").get<int>();
      if (q.contains("error")) c.quantizer.error = q.at("error").get<double>();
      if (q.contains("confidence")) c.quantizer.confidence = q.at("confidence").get<double>();
      if (q.contains("rel_tol")) c.quantizer.rel_tol = q.at("rel_tol").get<double>();
      if (q.contains("seed")) c.quantizer.seed = q.at("seed").get<std::uint64_t>();
    }
    if (j.contains("neighbors")) {
      const auto& n = j.at("neighbors");
      if (n.contains("percentile")) c.neighbors.percentile = n.at("percentile").get<double>();
      if (n.contains("theta")) c.neighbors.theta = n.at("theta").get<double>();
    }
    if (j.contains("tradeoff")) {
      const auto& t = j.at("tradeoff");
      if (t.contains("awareness")) {
        c.tradeoff.awareness = t.at("awareness").get<std::vector<std::string>>();
      }
      if (t.contains("combinations")) {
        for (const auto& combo : t.at("combinations")) {
          TradeoffCombination tc;
          tc.constraints = combo.at("constraints").get<std::vector<std::string>>();
          tc.grid = combo.at("grid").get<std::vector<double>>();
          if (combo.contains("ind_epsilon")) {
            tc.ind_epsilon = combo.at("ind_epsilon").get<double>();
          }
          if (combo.contains("ind_grid")) {
            tc.ind_grid = combo.at("ind_grid").get<std::vector<double>>();
          }
          c.tradeoff.combinations.push_back(std::move(tc));
        }
      }
    }
    if (j.contains("decorrelate")) {
      const auto& d = j.at("decorrelate");
      auto get = [&](const char* key, auto& field) {
        if (d.contains(key)) field = d.at(key).get<std::decay_t<decltype(field)>>();
      };
      get("awareness", c.decorrelate.awareness);
      get("constraints", c.decorrelate.constraints);
      get("grid", c.decorrelate.grid);
      get("ind_epsilon", c.decorrelate.ind_epsilon);
      get("lambda", c.decorrelate.lambda);
      get("beta", c.decorrelate.beta);
      get("tau", c.decorrelate.tau);
      get("momentum", c.decorrelate.momentum);
      get("lr_initial", c.decorrelate.lr_initial);
      get("lr_final", c.decorrelate.lr_final);
      get("stop_tol", c.decorrelate.stop_tol);
      get("inner_iterations", c.decorrelate.inner_iterations);
      get("outer_iterations", c.decorrelate.outer_iterations);
    }
  } catch (const json::exception& e) {
    throw io_error(std::string("config document: ") + e.what());
  }
  return c;
}

void cmd_quantize(const RunConfig& config) {
  if (config.samples.empty() || config.schema.empty()) {
    throw std::invalid_argument("quantize needs --samples and --schema");
  }
  const FeatureSchema schema = load_schema(config.schema);
  const SampleTable raw = load_samples(config.samples, schema);
  if (raw.rows.empty()) {
    throw std::invalid_argument("quantize: sample file has no data rows");
  }

  const auto& q = config.quantizer;
  const std::int64_t required = pac_sample_bound(q.cells, q.error, q.confidence);
  const std::int64_t supportable =
      pac_max_cells(static_cast<std::int64_t>(raw.count()), q.error, q.confidence);
  std::cout << "pac_sample_bound: cells=" << q.cells << " error=" << fmt_short(q.error)
            << " confidence=" << fmt_short(q.confidence)
            << " -> samples_required=" << required << "\n";
  std::cout << "pac_max_cells: samples=" << raw.count() << " -> max_cells=" << supportable
            << "\n";
  if (static_cast<std::int64_t>(raw.count()) < required) {
    std::cerr << "warning: " << raw.count() << " samples fall below the PAC bound "
              << required << " for " << q.cells << " cells\n";
  }

  const NormalizationParams norm = fit_normalization(raw);
  const SampleTable normalized = norm.apply(raw);
  const Codebook codebook = train_codebook(normalized, q.cells, q.rel_tol, q.seed);
  if (!codebook.converged) {
    std::cerr << "warning: codebook training hit the iteration cap before reaching "
              << fmt_short(q.rel_tol) << " relative improvement\n";
  }
  const DiscreteJoint joint = build_joint(normalized, codebook);

  std::filesystem::create_directories(config.output_dir);
  write_text_file(config.output_dir / "codebook.json", codebook_to_json(codebook, norm));
  write_text_file(config.output_dir / "joint.json", joint_to_json(joint));

  if (config.reference_samples) {
    const SampleTable reference = load_samples(*config.reference_samples, schema);
    if (reference.rows.empty()) {
      throw std::invalid_argument("quantize: reference sample file has no data rows");
    }
    const DiscreteJoint reference_joint = build_joint(norm.apply(reference), codebook);
    json report = fidelity_report(reference_joint, joint);
    report["config_hash"] = config.hash();
    write_text_file(config.output_dir / "fidelity.json", report.dump(2) + "\n");
  }
}

void cmd_tradeoff(const RunConfig& config) {
  if (config.tradeoff.combinations.empty()) {
    throw std::invalid_argument("tradeoff needs at least one constraint combination");
  }
  const Artifacts artifacts = load_artifacts(config);
  const ProbabilityViews v = views(artifacts.joint);
  const NeighborMatrix w = build_neighbor_matrix(
      artifacts.codebook, config.neighbors.percentile, config.neighbors.theta);
  const std::string hash = config.hash();

  std::vector<FairSolutionRecord> records;
  for (const auto& awareness : config.tradeoff.awareness) {
    if (awareness != "aware" && awareness != "unaware") {
      throw std::invalid_argument("awareness must be 'aware' or 'unaware'");
    }
    const bool aware = awareness == "aware";
    for (const auto& combo : config.tradeoff.combinations) {
      check_constraint_names(combo.constraints);
      if (combo.grid.empty()) {
        throw std::invalid_argument("tradeoff combination has an empty grid");
      }
      if (!combo.ind_grid.empty() && combo.ind_grid.size() != combo.grid.size()) {
        throw std::invalid_argument("ind_grid must match the grid length");
      }
      std::vector<FairnessBudget> grid;
      grid.reserve(combo.grid.size());
      for (std::size_t k = 0; k < combo.grid.size(); ++k) {
        const double ind_eps =
            combo.ind_grid.empty() ? combo.ind_epsilon : combo.ind_grid[k];
        grid.push_back(make_budget(combo.constraints, combo.grid[k], ind_eps));
      }

      const auto points = pareto_sweep(v, grid, aware, w);
      const std::string label = grid.front().label();
      write_sweep_csv(config.output_dir /
                          ("tradeoff_" + label + "_" + awareness + ".csv"),
                      label, awareness, points, hash);

      const BayesResult bayes = aware ? bayes_scores_aware(v) : bayes_scores_unaware(v);
      for (const auto& point : points) {
        records.push_back({label, aware, point.budget, point.result, bayes.scores.s});
      }
    }
  }
  write_text_file(config.output_dir / "fair_solutions.json",
                  fair_solutions_to_json(records, hash));
}

void cmd_decorrelate(const RunConfig& config) {
  const auto& d = config.decorrelate;
  check_constraint_names(d.constraints);
  if (d.constraints.empty()) {
    throw std::invalid_argument("decorrelate needs a constraint set");
  }
  if (d.grid.empty()) {
    throw std::invalid_argument("decorrelate needs a non-empty budget grid");
  }
  if (d.awareness != "aware" && d.awareness != "unaware") {
    throw std::invalid_argument("awareness must be 'aware' or 'unaware'");
  }
  const bool aware = d.awareness == "aware";

  const Artifacts artifacts = load_artifacts(config);
  const ProbabilityViews v = views(artifacts.joint);
  const NeighborMatrix w = build_neighbor_matrix(
      artifacts.codebook, config.neighbors.percentile, config.neighbors.theta);
  const auto records = fair_solutions_from_json(
      read_text_file(config.output_dir / "fair_solutions.json"));
  const std::string hash = config.hash();

  const std::string label = make_budget(d.constraints, 0.0, d.ind_epsilon).label();
  auto find_record = [&](double eps) -> const FairSolutionRecord& {
    const FairnessBudget wanted = make_budget(d.constraints, eps, d.ind_epsilon);
    for (const auto& record : records) {
      if (record.aware != aware || record.label != label) continue;
      auto same = [](const std::optional<double>& x, const std::optional<double>& y) {
        if (x.has_value() != y.has_value()) return false;
        return !x || std::abs(*x - *y) <= 1e-12;
      };
      const auto& b = record.budget;
      if (same(b.dp, wanted.dp) && same(b.eop, wanted.eop) && same(b.pe, wanted.pe) &&
          same(b.eod, wanted.eod) && same(b.ea, wanted.ea) && same(b.ind, wanted.ind)) {
        return record;
      }
    }
    throw std::invalid_argument("no fair solution for " + label + "/" + d.awareness +
                                " at epsilon " + fmt_short(eps) +
                                "; run the tradeoff command with a matching grid first");
  };

  DecorrelationConfig solver;
  solver.lambda = d.lambda;
  solver.beta = d.beta;
  solver.tau = d.tau;
  solver.momentum = d.momentum;
  solver.lr_initial = d.lr_initial;
  solver.lr_final = d.lr_final;
  solver.stop_tol = d.stop_tol;
  solver.inner_iterations = d.inner_iterations;
  solver.outer_iterations = d.outer_iterations;

  auto has = [&](const char* name) {
    for (const auto& c : d.constraints) {
      if (c == name) return true;
    }
    return false;
  };

  std::ostringstream csv;
  csv << "# config_hash=" << hash << "\n";
  csv << "label,awareness,row_type,eps,baseline_correlation,final_correlation,"
         "correlation_reduction,acc_before,acc_after,acc_reduction,max_violation,"
         "converged\n";

  std::vector<double> corr_reductions, acc_reductions;
  double baseline = 0.0;
  for (const double eps : d.grid) {
    const FairSolutionRecord& record = find_record(eps);
    if (record.result.status != LpStatus::Optimal) {
      throw std::invalid_argument("fair solution for epsilon " + fmt_short(eps) +
                                  " is not optimal; nothing to transfer");
    }

    TransferBudget budget;
    if (has("dp")) budget.dp = eps;
    if (has("eop") || has("eod")) budget.eop = eps;
    if (has("pe") || has("eod")) budget.pe = eps;
    if (has("ea")) budget.ea = eps;
    if (has("ind")) budget.ind = d.ind_epsilon;
    solver.budget = budget;

    const TransformSolution solution =
        aware ? solve_decorrelation_aware(record.result.s_fair, v, w, w, solver)
              : solve_decorrelation_unaware(record.result.s_fair, v, w, solver);
    if (!solution.report.converged) {
      std::cerr << "warning: decorrelation at epsilon " << fmt_short(eps)
                << " hit the outer iteration cap\n";
    }

    write_text_file(config.output_dir / ("transform_" + label + "_" + d.awareness + "_" +
                                         fmt_short(eps) + ".json"),
                    transform_to_json(solution, hash));

    const auto& r = solution.report;
    baseline = r.baseline_correlation;
    corr_reductions.push_back(r.correlation_reduction);
    acc_reductions.push_back(r.acc_reduction);
    csv << label << ',' << d.awareness << ",point," << fmt_short(eps) << ','
        << fmt(r.baseline_correlation) << ',' << fmt(r.final_correlation) << ','
        << fmt(r.correlation_reduction) << ',' << fmt(r.acc_before) << ','
        << fmt(r.acc_after) << ',' << fmt(r.acc_reduction) << ','
        << fmt(r.max_violation) << ',' << (r.converged ? "true" : "false") << '\n';
  }

  const double corr_mean =
      std::accumulate(corr_reductions.begin(), corr_reductions.end(), 0.0) /
      static_cast<double>(corr_reductions.size());
  const double acc_mean =
      std::accumulate(acc_reductions.begin(), acc_reductions.end(), 0.0) /
      static_cast<double>(acc_reductions.size());
  csv << label << ',' << d.awareness << ",mean,," << fmt(baseline) << ",,"
      << fmt(corr_mean) << ",,," << fmt(acc_mean) << ",,\n";
  csv << label << ',' << d.awareness << ",stddev,,,,"
      << fmt(population_stddev(corr_reductions, corr_mean)) << ",,,"
      << fmt(population_stddev(acc_reductions, acc_mean)) << ",,\n";
  write_text_file(config.output_dir / "transfer_report.csv", csv.str());
}

void cmd_metrics(const std::filesystem::path& joint_a, const std::filesystem::path& joint_b,
                 const std::optional<std::filesystem::path>& output) {
  const DiscreteJoint a = joint_from_json(read_text_file(joint_a));
  const DiscreteJoint b = joint_from_json(read_text_file(joint_b));
  if (a.cells != b.cells) {
    throw std::invalid_argument("metrics: joints have different cell counts");
  }
  const json report = fidelity_report(a, b);
  for (const auto& row : report.at("per_group_label")) {
    std::cout << "group=" << row.at("group").get<std::string>()
              << " label=" << row.at("label").get<int>() << " pcc=";
    if (row.at("pcc").is_null()) {
      std::cout << "nan";
    } else {
      std::cout << fmt_short(row.at("pcc").get<double>());
    }
    std::cout << " tv=" << fmt_short(row.at("tv").get<double>()) << "\n";
  }
  std::cout << "overall_tv=" << fmt_short(report.at("overall_tv").get<double>()) << "\n";
  if (output) {
    write_text_file(*output, report.dump(2) + "\n");
  }
}

void cmd_bound(std::optional<std::int64_t> cells, std::optional<std::int64_t> samples,
               double error, double confidence) {
  if (!cells && !samples) {
    throw std::invalid_argument("bound needs --cells and/or --samples");
  }
  if (cells) {
    std::cout << "samples_required=" << pac_sample_bound(*cells, error, confidence)
              << "\n";
  }
  if (samples) {
    std::cout << "max_cells=" << pac_max_cells(*samples, error, confidence) << "\n";
  }
}

}  // namespace fairvq::cli

#include "fairvq/serialize.hpp"

#include <fstream>
#include <sstream>

#include "fairvq/types.hpp"
#include "json.hpp"

namespace fairvq {

namespace {

using nlohmann::json;

json vec_to_json(const Vec& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Vec vec_from_json(const json& j) {
  Vec v(j.size());
  Eigen::Index i = 0;
  for (const auto& value : j) v(i++) = value.get<double>();
  return v;
}

json mat_to_json(const Mat& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Mat mat_from_json(const json& j) {
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = rows > 0 ? static_cast<Eigen::Index>(j.at(0).size()) : 0;
  Mat m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& row = j.at(static_cast<std::size_t>(r));
    for (Eigen::Index c = 0; c < cols; ++c) {
      m(r, c) = row.at(static_cast<std::size_t>(c)).get<double>();
    }
  }
  return m;
}

std::string kind_name(ColumnKind kind) {
  return kind == ColumnKind::Continuous ? "continuous" : "categorical";
}

ColumnKind kind_from_name(const std::string& name) {
  if (name == "continuous") return ColumnKind::Continuous;
  if (name == "categorical") return ColumnKind::Categorical;
  throw io_error("unknown column kind '" + name + "'");
}

json budget_to_json(const FairnessBudget& budget) {
  json out = json::object();
  auto put = [&](const char* key, const std::optional<double>& eps) {
    if (eps) out[key] = *eps;
  };
  put("dp", budget.dp);
  put("eop", budget.eop);
  put("pe", budget.pe);
  put("ea", budget.ea);
  put("eod", budget.eod);
  put("ind", budget.ind);
  return out;
}

FairnessBudget budget_from_json(const json& j) {
  FairnessBudget budget;
  auto get = [&](const char* key, std::optional<double>& eps) {
    if (j.contains(key)) eps = j.at(key).get<double>();
  };
  get("dp", budget.dp);
  get("eop", budget.eop);
  get("pe", budget.pe);
  get("ea", budget.ea);
  get("eod", budget.eod);
  get("ind", budget.ind);
  return budget;
}

std::string status_name(LpStatus status) {
  switch (status) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Degenerate: return "degenerate";
  }
  return "degenerate";
}

LpStatus status_from_name(const std::string& name) {
  if (name == "optimal") return LpStatus::Optimal;
  if (name == "infeasible") return LpStatus::Infeasible;
  if (name == "degenerate") return LpStatus::Degenerate;
  throw io_error("unknown lp status '" + name + "'");
}

json parse(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw io_error("malformed JSON document");
  return j;
}

}  // namespace

std::string schema_to_json(const FeatureSchema& schema) {
  json j;
  json cols = json::array();
  for (const auto& col : schema.columns) {
    json c;
    c["name"] = col.name;
    c["kind"] = kind_name(col.kind);
    if (col.kind == ColumnKind::Categorical) c["categories"] = col.categories;
    cols.push_back(std::move(c));
  }
  j["columns"] = std::move(cols);
  j["group_column"] = schema.group_column;
  j["group_values"] = schema.group_values;
  j["label_column"] = schema.label_column;
  return j.dump(2) + "\n";
}

FeatureSchema schema_from_json(const std::string& text) {
  const json j = parse(text);
  FeatureSchema schema;
  try {
    for (const auto& c : j.at("columns")) {
      Column col;
      col.name = c.at("name").get<std::string>();
      col.kind = kind_from_name(c.at("kind").get<std::string>());
      if (col.kind == ColumnKind::Categorical) {
        col.categories = c.at("categories").get<std::vector<std::string>>();
      }
      schema.columns.push_back(std::move(col));
    }
    schema.group_column = j.at("group_column").get<std::string>();
    const auto values = j.at("group_values").get<std::vector<std::string>>();
    if (values.size() != 2) throw io_error("schema: group_values must list two values");
    schema.group_values = {values[0], values[1]};
    schema.label_column = j.at("label_column").get<std::string>();
  } catch (const json::exception& e) {
    throw io_error(std::string("schema document: ") + e.what());
  }
  schema.validate();
  return schema;
}

std::string codebook_to_json(const Codebook& codebook, const NormalizationParams& norm) {
  json j;
  j["cells"] = codebook.size();
  json kinds = json::array();
  for (const auto kind : codebook.kinds) kinds.push_back(kind_name(kind));
  j["column_kinds"] = std::move(kinds);
  json centroids = json::array();
  for (const auto& c : codebook.centroids) centroids.push_back(c);
  j["centroids"] = std::move(centroids);
  j["distortion"] = codebook.distortion;
  j["distortion_history"] = codebook.distortion_history;
  j["converged"] = codebook.converged;
  j["iterations"] = codebook.iterations;

  json cols = json::array();
  for (const auto& p : norm.columns) {
    cols.push_back({{"mean", p.mean}, {"stddev", p.stddev}, {"scale", p.scale}});
  }
  j["normalization"] = {{"columns", std::move(cols)}};
  return j.dump(2) + "\n";
}

std::pair<Codebook, NormalizationParams> codebook_from_json(const std::string& text) {
  const json j = parse(text);
  Codebook codebook;
  NormalizationParams norm;
  try {
    for (const auto& kind : j.at("column_kinds")) {
      codebook.kinds.push_back(kind_from_name(kind.get<std::string>()));
    }
    for (const auto& c : j.at("centroids")) {
      codebook.centroids.push_back(c.get<std::vector<double>>());
    }
    codebook.distortion = j.at("distortion").get<double>();
    codebook.distortion_history = j.at("distortion_history").get<std::vector<double>>();
    codebook.converged = j.at("converged").get<bool>();
    codebook.iterations = j.at("iterations").get<int>();
    if (j.at("cells").get<int>() != codebook.size()) {
      throw io_error("codebook document: centroid count mismatch");
    }
    for (const auto& c : j.at("normalization").at("columns")) {
      norm.columns.push_back({c.at("mean").get<double>(), c.at("stddev").get<double>(),
                              c.at("scale").get<double>()});
    }
  } catch (const json::exception& e) {
    throw io_error(std::string("codebook document: ") + e.what());
  }
  return {std::move(codebook), std::move(norm)};
}

std::string joint_to_json(const DiscreteJoint& joint) {
  json j;
  j["cells"] = joint.cells;
  json cells = json::array();
  for (const auto& cell : joint.p) {
    cells.push_back({{cell[0][0], cell[0][1]}, {cell[1][0], cell[1][1]}});
  }
  j["p"] = std::move(cells);
  return j.dump(2) + "\n";
}

DiscreteJoint joint_from_json(const std::string& text) {
  const json j = parse(text);
  DiscreteJoint joint;
  try {
    joint.cells = j.at("cells").get<int>();
    for (const auto& cell : j.at("p")) {
      std::array<std::array<double, 2>, 2> entry{};
      for (int g = 0; g < 2; ++g) {
        for (int y = 0; y < 2; ++y) {
          entry[g][y] = cell.at(g).at(y).get<double>();
        }
      }
      joint.p.push_back(entry);
    }
  } catch (const json::exception& e) {
    throw io_error(std::string("joint document: ") + e.what());
  }
  joint.validate();
  return joint;
}

std::string fair_solutions_to_json(const std::vector<FairSolutionRecord>& records,
                                   const std::string& config_hash) {
  json j;
  j["config_hash"] = config_hash;
  json solutions = json::array();
  for (const auto& record : records) {
    json s;
    s["label"] = record.label;
    s["awareness"] = record.aware ? "aware" : "unaware";
    s["budget"] = budget_to_json(record.budget);
    s["status"] = status_name(record.result.status);
    s["acc_star"] = record.result.acc_star;
    s["acc_fair"] = record.result.acc_fair;
    s["objective"] = record.result.objective;
    s["m"] = vec_to_json(record.result.m);
    s["s_fair"] = vec_to_json(record.result.s_fair.s);
    s["s_star"] = vec_to_json(record.s_star);
    json residuals = json::array();
    for (const auto& r : record.result.residuals) {
      residuals.push_back(
          {{"name", r.name}, {"attained", r.attained}, {"budget", r.budget}});
    }
    s["residuals"] = std::move(residuals);
    s["warnings"] = record.result.warnings;
    solutions.push_back(std::move(s));
  }
  j["solutions"] = std::move(solutions);
  return j.dump(2) + "\n";
}

std::vector<FairSolutionRecord> fair_solutions_from_json(const std::string& text) {
  const json j = parse(text);
  std::vector<FairSolutionRecord> records;
  try {
    for (const auto& s : j.at("solutions")) {
      FairSolutionRecord record;
      record.label = s.at("label").get<std::string>();
      record.aware = s.at("awareness").get<std::string>() == "aware";
      record.budget = budget_from_json(s.at("budget"));
      record.result.status = status_from_name(s.at("status").get<std::string>());
      record.result.acc_star = s.at("acc_star").get<double>();
      record.result.acc_fair = s.at("acc_fair").get<double>();
      record.result.objective = s.at("objective").get<double>();
      record.result.m = vec_from_json(s.at("m"));
      record.result.s_fair.s = vec_from_json(s.at("s_fair"));
      record.result.s_fair.aware = record.aware;
      record.s_star = vec_from_json(s.at("s_star"));
      for (const auto& r : s.at("residuals")) {
        record.result.residuals.push_back({r.at("name").get<std::string>(),
                                           r.at("attained").get<double>(),
                                           r.at("budget").get<double>()});
      }
      record.result.warnings = s.at("warnings").get<std::vector<std::string>>();
      records.push_back(std::move(record));
    }
  } catch (const json::exception& e) {
    throw io_error(std::string("fair solutions document: ") + e.what());
  }
  return records;
}

std::string transform_to_json(const TransformSolution& solution,
                              const std::string& config_hash) {
  json j;
  j["config_hash"] = config_hash;
  j["awareness"] = solution.aware ? "aware" : "unaware";
  if (solution.aware) {
    j["t_a"] = mat_to_json(solution.t_a);
    j["t_b"] = mat_to_json(solution.t_b);
  } else {
    j["t"] = mat_to_json(solution.t);
  }
  j["rho"] = vec_to_json(solution.state.rho);
  j["outer_iterations"] = solution.state.outer_iterations;
  j["residual_history"] = solution.state.residual_history;
  j["report"] = {{"baseline_correlation", solution.report.baseline_correlation},
                 {"final_correlation", solution.report.final_correlation},
                 {"correlation_reduction", solution.report.correlation_reduction},
                 {"acc_before", solution.report.acc_before},
                 {"acc_after", solution.report.acc_after},
                 {"acc_reduction", solution.report.acc_reduction},
                 {"max_violation", solution.report.max_violation},
                 {"converged", solution.report.converged}};
  return j.dump(2) + "\n";
}

TransformSolution transform_from_json(const std::string& text) {
  const json j = parse(text);
  TransformSolution solution;
  try {
    solution.aware = j.at("awareness").get<std::string>() == "aware";
    if (solution.aware) {
      solution.t_a = mat_from_json(j.at("t_a"));
      solution.t_b = mat_from_json(j.at("t_b"));
    } else {
      solution.t = mat_from_json(j.at("t"));
    }
    solution.state.rho = vec_from_json(j.at("rho"));
    solution.state.outer_iterations = j.at("outer_iterations").get<int>();
    solution.state.residual_history =
        j.at("residual_history").get<std::vector<double>>();
    const auto& r = j.at("report");
    solution.report.baseline_correlation = r.at("baseline_correlation").get<double>();
    solution.report.final_correlation = r.at("final_correlation").get<double>();
    solution.report.correlation_reduction = r.at("correlation_reduction").get<double>();
    solution.report.acc_before = r.at("acc_before").get<double>();
    solution.report.acc_after = r.at("acc_after").get<double>();
    solution.report.acc_reduction = r.at("acc_reduction").get<double>();
    solution.report.max_violation = r.at("max_violation").get<double>();
    solution.report.converged = r.at("converged").get<bool>();
  } catch (const json::exception& e) {
    throw io_error(std::string("transform document: ") + e.what());
  }
  return solution;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw io_error("failed while writing '" + path.string() + "'");
}

FeatureSchema load_schema(const std::filesystem::path& path) {
  return schema_from_json(read_text_file(path));
}

}  // namespace fairvq

#include "fairvq/table.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "fairvq/types.hpp"

namespace fairvq {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  fields.push_back(cur);
  return fields;
}

double parse_double(const std::string& token, std::size_t row, const std::string& column) {
  double value = 0.0;
  const char* begin = token.data();
  const char* end = begin + token.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || token.empty() || !std::isfinite(value)) {
    throw std::invalid_argument("row " + std::to_string(row) + " column '" + column +
                                "': unparseable numeric value '" + token + "'");
  }
  return value;
}

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

}  // namespace

SampleTable load_samples(const std::filesystem::path& path, const FeatureSchema& schema) {
  schema.validate();
  std::ifstream in(path);
  if (!in) {
    throw io_error("cannot open sample file '" + path.string() + "'");
  }

  std::string line;
  if (!std::getline(in, line)) {
    throw io_error("sample file '" + path.string() + "' is empty (header required)");
  }
  const auto header = split_csv_line(line);

  auto find_column = [&](const std::string& name) -> std::size_t {
    for (std::size_t k = 0; k < header.size(); ++k) {
      if (header[k] == name) return k;
    }
    throw std::invalid_argument("missing column '" + name + "' in header of '" +
                                path.string() + "'");
  };

  std::vector<std::size_t> feature_pos;
  feature_pos.reserve(schema.columns.size());
  for (const auto& col : schema.columns) feature_pos.push_back(find_column(col.name));
  const std::size_t group_pos = find_column(schema.group_column);
  const std::size_t label_pos = find_column(schema.label_column);

  SampleTable table;
  table.schema = schema;

  std::size_t row_index = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ++row_index;
    const auto fields = split_csv_line(line);
    if (fields.size() != header.size()) {
      throw std::invalid_argument("row " + std::to_string(row_index) + ": expected " +
                                  std::to_string(header.size()) + " fields, got " +
                                  std::to_string(fields.size()));
    }

    Sample sample;
    sample.x.resize(schema.columns.size());
    for (std::size_t c = 0; c < schema.columns.size(); ++c) {
      const auto& col = schema.columns[c];
      const std::string& token = fields[feature_pos[c]];
      if (col.kind == ColumnKind::Continuous) {
        sample.x[c] = parse_double(token, row_index, col.name);
      } else {
        const int id = schema.category_id(c, token);
        if (id < 0) {
          throw std::invalid_argument("row " + std::to_string(row_index) + " column '" +
                                      col.name + "': category '" + token +
                                      "' not in category set");
        }
        sample.x[c] = static_cast<double>(id);
      }
    }

    const std::string& group_token = fields[group_pos];
    if (group_token == schema.group_values[0]) {
      sample.group = 0;
    } else if (group_token == schema.group_values[1]) {
      sample.group = 1;
    } else {
      throw std::invalid_argument("row " + std::to_string(row_index) + " column '" +
                                  schema.group_column + "': value '" + group_token +
                                  "' outside group domain");
    }

    const std::string& label_token = fields[label_pos];
    if (label_token == "0") {
      sample.label = 0;
    } else if (label_token == "1") {
      sample.label = 1;
    } else {
      throw std::invalid_argument("row " + std::to_string(row_index) + " column '" +
                                  schema.label_column + "': value '" + label_token +
                                  "' outside label domain {0,1}");
    }

    table.rows.push_back(std::move(sample));
  }
  return table;
}

void save_samples(const std::filesystem::path& path, const SampleTable& table) {
  std::ofstream out(path);
  if (!out) {
    throw io_error("cannot write sample file '" + path.string() + "'");
  }
  const auto& schema = table.schema;
  for (std::size_t c = 0; c < schema.columns.size(); ++c) {
    out << schema.columns[c].name << ',';
  }
  out << schema.group_column << ',' << schema.label_column << '\n';

  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < schema.columns.size(); ++c) {
      const auto& col = schema.columns[c];
      if (col.kind == ColumnKind::Continuous) {
        out << format_double(row.x[c]);
      } else {
        out << col.categories.at(static_cast<std::size_t>(row.x[c]));
      }
      out << ',';
    }
    out << schema.group_values[row.group] << ',' << row.label << '\n';
  }
  if (!out) {
    throw io_error("failed while writing '" + path.string() + "'");
  }
}

}  // namespace fairvq

#include "fairvq/schema.hpp"

#include <set>
#include <stdexcept>

namespace fairvq {

void FeatureSchema::validate() const {
  if (columns.empty()) {
    throw std::invalid_argument("schema: at least one feature column required");
  }
  std::set<std::string> names;
  for (const auto& col : columns) {
    if (col.name.empty()) {
      throw std::invalid_argument("schema: empty column name");
    }
    if (!names.insert(col.name).second) {
      throw std::invalid_argument("schema: duplicate column name '" + col.name + "'");
    }
    if (col.kind == ColumnKind::Categorical && col.categories.empty()) {
      throw std::invalid_argument("schema: categorical column '" + col.name +
                                  "' has an empty category set");
    }
    std::set<std::string> cats(col.categories.begin(), col.categories.end());
    if (cats.size() != col.categories.size()) {
      throw std::invalid_argument("schema: duplicate category in column '" + col.name + "'");
    }
  }
  if (group_column.empty() || label_column.empty()) {
    throw std::invalid_argument("schema: group and label columns must be named");
  }
  if (names.count(group_column) || names.count(label_column)) {
    throw std::invalid_argument("schema: group/label columns may not repeat a feature column");
  }
  if (group_column == label_column) {
    throw std::invalid_argument("schema: group and label columns must differ");
  }
  if (group_values[0].empty() || group_values[1].empty() ||
      group_values[0] == group_values[1]) {
    throw std::invalid_argument("schema: group column needs two distinct values");
  }
}

std::vector<ColumnKind> FeatureSchema::kinds() const {
  std::vector<ColumnKind> out;
  out.reserve(columns.size());
  for (const auto& col : columns) out.push_back(col.kind);
  return out;
}

int FeatureSchema::category_id(std::size_t column, const std::string& value) const {
  const auto& cats = columns.at(column).categories;
  for (std::size_t k = 0; k < cats.size(); ++k) {
    if (cats[k] == value) return static_cast<int>(k);
  }
  return -1;
}

}  // namespace fairvq

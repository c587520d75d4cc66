#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

namespace fairvq {

enum class ColumnKind { Continuous, Categorical };

struct Column {
  std::string name;
  ColumnKind kind = ColumnKind::Continuous;
  std::vector<std::string> categories;  // categorical only; position = interned id
};

/// Column layout of a sample table: the feature columns plus the designated
/// group and label columns. The group column takes exactly two values, mapped
/// onto groups a and b in the order given by group_values. Labels are 0/1.
struct FeatureSchema {
  std::vector<Column> columns;
  std::string group_column;
  std::string label_column;
  std::array<std::string, 2> group_values;

  void validate() const;
  std::vector<ColumnKind> kinds() const;

  /// Interned id of a categorical value, or -1 if it is not in the set.
  int category_id(std::size_t column, const std::string& value) const;
};

}  // namespace fairvq

#pragma once

#include <filesystem>
#include <vector>

#include "fairvq/schema.hpp"

namespace fairvq {

/// One sample row. Categorical feature entries hold interned category ids
/// stored exactly as small integers; continuous entries hold raw or
/// normalized values. group: 0 = a, 1 = b.
struct Sample {
  std::vector<double> x;
  int group = 0;
  int label = 0;
};

struct SampleTable {
  FeatureSchema schema;
  std::vector<Sample> rows;

  std::size_t count() const { return rows.size(); }
};

/// Parse a CSV file (comma separated, UTF-8, header row required) against the
/// schema. Row order is preserved. Parse failures name the offending data row
/// (1-based) and column.
SampleTable load_samples(const std::filesystem::path& path, const FeatureSchema& schema);

/// Inverse of load_samples: categorical ids map back to category strings,
/// continuous values are written with round-trip precision.
void save_samples(const std::filesystem::path& path, const SampleTable& table);

}  // namespace fairvq

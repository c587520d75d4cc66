#include "fairvq/normalize.hpp"

#include <cmath>
#include <stdexcept>

namespace fairvq {

NormalizationParams fit_normalization(const SampleTable& table) {
  if (table.rows.empty()) {
    throw std::invalid_argument("fit_normalization: empty table");
  }
  const auto& schema = table.schema;
  const double n = static_cast<double>(table.rows.size());

  NormalizationParams params;
  params.columns.resize(schema.columns.size());
  for (std::size_t c = 0; c < schema.columns.size(); ++c) {
    if (schema.columns[c].kind != ColumnKind::Continuous) continue;

    double mean = 0.0;
    for (const auto& row : table.rows) mean += row.x[c];
    mean /= n;

    double var = 0.0;  // population variance: whole-table transform, not an estimator
    for (const auto& row : table.rows) {
      const double d = row.x[c] - mean;
      var += d * d;
    }
    var /= n;

    auto& p = params.columns[c];
    p.mean = mean;
    p.stddev = std::sqrt(var);
    // Target variance 1/2; degenerate columns collapse to constant 0 so their
    // distance contribution vanishes.
    p.scale = p.stddev > 0.0 ? std::sqrt(0.5) / p.stddev : 0.0;
  }
  return params;
}

void NormalizationParams::apply_in_place(std::vector<double>& x) const {
  if (x.size() != columns.size()) {
    throw std::invalid_argument("normalization: dimension mismatch");
  }
  for (std::size_t c = 0; c < columns.size(); ++c) {
    x[c] = (x[c] - columns[c].mean) * columns[c].scale;
  }
}

SampleTable NormalizationParams::apply(const SampleTable& table) const {
  SampleTable out = table;
  for (auto& row : out.rows) apply_in_place(row.x);
  return out;
}

}  // namespace fairvq

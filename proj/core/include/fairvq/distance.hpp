#pragma once

#include <span>

#include "fairvq/schema.hpp"

namespace fairvq {

/// Mean over columns of the per-column distance: indicator of inequality for
/// categorical columns, absolute difference for continuous ones. Continuous
/// entries are expected in normalized space so every column contributes on a
/// comparable scale.
double mixed_distance(std::span<const double> u, std::span<const double> v,
                      std::span<const ColumnKind> kinds);

double mixed_distance(std::span<const double> u, std::span<const double> v,
                      const FeatureSchema& schema);

}  // namespace fairvq

#include "fairvq/distance.hpp"

#include <cmath>
#include <stdexcept>

namespace fairvq {

double mixed_distance(std::span<const double> u, std::span<const double> v,
                      std::span<const ColumnKind> kinds) {
  if (u.size() != v.size() || u.size() != kinds.size() || kinds.empty()) {
    throw std::invalid_argument("mixed_distance: dimension mismatch");
  }
  double total = 0.0;
  for (std::size_t c = 0; c < kinds.size(); ++c) {
    if (kinds[c] == ColumnKind::Categorical) {
      total += u[c] != v[c] ? 1.0 : 0.0;
    } else {
      total += std::abs(u[c] - v[c]);
    }
  }
  return total / static_cast<double>(kinds.size());
}

double mixed_distance(std::span<const double> u, std::span<const double> v,
                      const FeatureSchema& schema) {
  const auto kinds = schema.kinds();
  return mixed_distance(u, v, kinds);
}

}  // namespace fairvq

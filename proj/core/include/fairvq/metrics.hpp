#pragma once

#include "fairvq/types.hpp"

namespace fairvq {

/// Pearson correlation coefficient. Both vectors must have length >= 2 and
/// be non-constant.
double pcc(const Vec& p, const Vec& q);

/// Total variation distance (1/2) * sum_i |p[i] - q[i]| between two
/// distribution vectors of equal length, each summing to 1 within 1e-6.
double tv_distance(const Vec& p, const Vec& q);

}  // namespace fairvq

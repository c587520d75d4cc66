#include "fairvq/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace fairvq {

double pcc(const Vec& p, const Vec& q) {
  if (p.size() != q.size() || p.size() < 2) {
    throw std::invalid_argument("pcc: vectors must have equal length >= 2");
  }
  const Vec dp = p.array() - p.mean();
  const Vec dq = q.array() - q.mean();
  const double sp = dp.squaredNorm();
  const double sq = dq.squaredNorm();
  if (sp <= 0.0 || sq <= 0.0) {
    throw std::invalid_argument("pcc: constant input vector");
  }
  return dp.dot(dq) / std::sqrt(sp * sq);
}

double tv_distance(const Vec& p, const Vec& q) {
  if (p.size() != q.size()) {
    throw std::invalid_argument("tv_distance: length mismatch");
  }
  if (std::abs(p.sum() - 1.0) > 1e-6 || std::abs(q.sum() - 1.0) > 1e-6) {
    throw std::invalid_argument("tv_distance: inputs must each sum to 1");
  }
  return 0.5 * (p - q).cwiseAbs().sum();
}

}  // namespace fairvq

#include "fairvq/pac.hpp"

#include <cmath>
#include <stdexcept>

namespace fairvq {

namespace {

double log_term(double confidence) { return std::log(8.0 / (1.0 - confidence)); }

void check_params(double error, double confidence) {
  if (!(error > 0.0 && error < 1.0)) {
    throw std::invalid_argument("pac: error must lie in (0,1)");
  }
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw std::invalid_argument("pac: confidence must lie in (0,1)");
  }
}

}  // namespace

std::int64_t pac_sample_bound(std::int64_t cells, double error, double confidence) {
  if (cells < 1) throw std::invalid_argument("pac: cells must be >= 1");
  check_params(error, confidence);
  const double m = static_cast<double>(cells) * log_term(confidence) / (2.0 * error * error);
  return static_cast<std::int64_t>(std::ceil(m));
}

std::int64_t pac_max_cells(std::int64_t samples, double error, double confidence) {
  if (samples < 1) throw std::invalid_argument("pac: samples must be >= 1");
  check_params(error, confidence);
  const double n = 2.0 * error * error * static_cast<double>(samples) / log_term(confidence);
  const auto cells = static_cast<std::int64_t>(std::floor(n));
  return cells < 0 ? 0 : cells;
}

}  // namespace fairvq

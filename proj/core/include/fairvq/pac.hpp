#pragma once

#include <cstdint>

namespace fairvq {

/// Samples required so that, averaged over the cells of an n_cells
/// decomposition, every per-cell (group, label) frequency stays within
/// `error` of truth except with probability 1 - confidence:
/// ceil(n_cells * ln(8 / (1 - confidence)) / (2 * error^2)).
std::int64_t pac_sample_bound(std::int64_t cells, double error, double confidence);

/// Largest cell count the same guarantee supports with `samples` draws:
/// floor(2 * error^2 * samples / ln(8 / (1 - confidence))).
std::int64_t pac_max_cells(std::int64_t samples, double error, double confidence);

}  // namespace fairvq

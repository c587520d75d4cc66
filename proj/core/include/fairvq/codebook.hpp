#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fairvq/table.hpp"

namespace fairvq {

/// LBG/Lloyd codebook over normalized feature space. Centroids use the same
/// mixed representation as samples: categorical entries hold category ids.
struct Codebook {
  std::vector<ColumnKind> kinds;
  std::vector<std::vector<double>> centroids;
  double distortion = 0.0;  // mean sample-to-centroid distance at the last pass
  bool converged = true;    // false when the iteration cap cut training short
  int iterations = 0;
  std::vector<double> distortion_history;  // one entry per Lloyd pass

  int size() const { return static_cast<int>(centroids.size()); }
};

/// Train an n_cells codebook with Lloyd updates under the mixed distance:
/// assign each sample to its nearest centroid, then recompute centroids as the
/// per-column mean (continuous) / mode (categorical, lowest id on ties).
/// Seeding is k-means++ style on the given RNG seed; empty cells are re-seeded
/// at the sample farthest from its centroid. Stops when the relative
/// distortion improvement falls below rel_tol, capped at 500 passes.
Codebook train_codebook(const SampleTable& table, int n_cells, double rel_tol,
                        std::uint64_t seed);

/// Index of the nearest centroid; ties resolve to the lowest index.
int assign_cell(std::span<const double> x, const Codebook& codebook);

}  // namespace fairvq

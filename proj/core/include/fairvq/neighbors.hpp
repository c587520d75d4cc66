#pragma once

#include <cstddef>
#include <vector>

#include "fairvq/codebook.hpp"
#include "fairvq/types.hpp"

namespace fairvq {

/// Sparse pairwise score-similarity constraint matrix: one row per centroid
/// pair within the eta-neighborhood, carrying +exp(-theta d^2) at the first
/// index and -exp(-theta d^2) at the second.
struct NeighborMatrix {
  int cells = 0;
  double theta = 1.0;
  double eta = 0.0;

  struct Pair {
    int i = 0;
    int j = 0;
    double distance = 0.0;
  };
  std::vector<Pair> pairs;

  int rows() const { return static_cast<int>(pairs.size()); }
  double kernel(std::size_t row) const;
  Mat dense() const;  // rows() x cells
};

/// eta is the percentile-th value (nearest rank) of all pairwise centroid
/// distances; rows cover every pair with distance <= eta. percentile 0 yields
/// an empty neighborhood, percentile 100 the complete graph.
NeighborMatrix build_neighbor_matrix(const Codebook& codebook, double percentile,
                                     double theta);

}  // namespace fairvq

#include "fairvq/neighbors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fairvq/distance.hpp"

namespace fairvq {

double NeighborMatrix::kernel(std::size_t row) const {
  const double d = pairs.at(row).distance;
  return std::exp(-theta * d * d);
}

Mat NeighborMatrix::dense() const {
  Mat w = Mat::Zero(rows(), cells);
  for (int r = 0; r < rows(); ++r) {
    const double k = kernel(static_cast<std::size_t>(r));
    w(r, pairs[static_cast<std::size_t>(r)].i) = k;
    w(r, pairs[static_cast<std::size_t>(r)].j) = -k;
  }
  return w;
}

NeighborMatrix build_neighbor_matrix(const Codebook& codebook, double percentile,
                                     double theta) {
  if (codebook.size() < 2) {
    throw std::invalid_argument("build_neighbor_matrix: need at least 2 centroids");
  }
  if (percentile < 0.0 || percentile > 100.0) {
    throw std::invalid_argument("build_neighbor_matrix: percentile outside [0,100]");
  }

  NeighborMatrix w;
  w.cells = codebook.size();
  w.theta = theta;

  struct Entry {
    int i, j;
    double d;
  };
  std::vector<Entry> all;
  all.reserve(static_cast<std::size_t>(w.cells) * (w.cells - 1) / 2);
  for (int i = 0; i < w.cells; ++i) {
    for (int j = i + 1; j < w.cells; ++j) {
      all.push_back({i, j,
                     mixed_distance(codebook.centroids[static_cast<std::size_t>(i)],
                                    codebook.centroids[static_cast<std::size_t>(j)],
                                    codebook.kinds)});
    }
  }

  if (percentile == 0.0) {
    w.eta = 0.0;  // empty neighborhood
    return w;
  }

  std::vector<double> distances;
  distances.reserve(all.size());
  for (const auto& e : all) distances.push_back(e.d);
  std::sort(distances.begin(), distances.end());

  // nearest-rank percentile
  const auto count = static_cast<double>(distances.size());
  auto rank = static_cast<std::size_t>(std::ceil(percentile / 100.0 * count));
  if (rank == 0) rank = 1;
  w.eta = distances[rank - 1];

  for (const auto& e : all) {
    if (e.d <= w.eta) w.pairs.push_back({e.i, e.j, e.d});
  }
  return w;
}

}  // namespace fairvq

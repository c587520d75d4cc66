#include "fairvq/codebook.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <stdexcept>

#include "fairvq/distance.hpp"

namespace fairvq {

namespace {

constexpr int kMaxLloydPasses = 500;

// Uniform in [0,1) from the raw engine stream; std::uniform_real_distribution
// is implementation-defined, this mapping is not.
double next_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::size_t pick_weighted(std::mt19937_64& rng, const std::vector<double>& weights,
                          double total) {
  const double target = next_unit(rng) * total;
  double acc = 0.0;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    acc += weights[k];
    if (target < acc) return k;
  }
  // target == total can slip past on rounding; take the last positive weight
  for (std::size_t k = weights.size(); k-- > 0;) {
    if (weights[k] > 0.0) return k;
  }
  return 0;
}

std::size_t count_distinct(const SampleTable& table) {
  std::set<std::vector<double>> seen;
  for (const auto& row : table.rows) seen.insert(row.x);
  return seen.size();
}

bool has_duplicates(const std::vector<std::vector<double>>& centroids) {
  std::set<std::vector<double>> seen;
  for (const auto& c : centroids) {
    if (!seen.insert(c).second) return true;
  }
  return false;
}

}  // namespace

Codebook train_codebook(const SampleTable& table, int n_cells, double rel_tol,
                        std::uint64_t seed) {
  if (n_cells < 1) {
    throw std::invalid_argument("train_codebook: n_cells must be >= 1");
  }
  if (rel_tol <= 0.0) {
    throw std::invalid_argument("train_codebook: rel_tol must be positive");
  }
  if (table.rows.empty()) {
    throw std::invalid_argument("train_codebook: empty table");
  }
  const std::size_t n = table.rows.size();
  const std::size_t cells = static_cast<std::size_t>(n_cells);
  if (count_distinct(table) < cells) {
    throw std::invalid_argument("train_codebook: fewer distinct feature vectors than cells");
  }

  const auto kinds = table.schema.kinds();
  const std::size_t dims = kinds.size();
  auto dist = [&](std::span<const double> u, std::span<const double> v) {
    return mixed_distance(u, v, kinds);
  };

  Codebook book;
  book.kinds = kinds;

  // k-means++ seeding: first centroid uniform, then squared-distance weighted.
  std::mt19937_64 rng(seed);
  std::vector<std::vector<double>> centroids;
  centroids.reserve(cells);
  {
    std::size_t first = static_cast<std::size_t>(next_unit(rng) * static_cast<double>(n));
    if (first >= n) first = n - 1;
    centroids.push_back(table.rows[first].x);

    std::vector<double> d2(n);
    while (centroids.size() < cells) {
      double total = 0.0;
      for (std::size_t r = 0; r < n; ++r) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& c : centroids) {
          best = std::min(best, dist(table.rows[r].x, c));
        }
        d2[r] = best * best;
        total += d2[r];
      }
      if (total <= 0.0) {
        // remaining mass only on already-chosen points; distinct-count
        // precondition guarantees this cannot happen
        throw std::invalid_argument("train_codebook: seeding exhausted distinct points");
      }
      centroids.push_back(table.rows[pick_weighted(rng, d2, total)].x);
    }
  }

  std::vector<int> assign(n, 0);
  std::vector<double> sample_dist(n, 0.0);
  double prev_distortion = std::numeric_limits<double>::infinity();
  bool converged = false;
  int pass = 0;

  while (pass < kMaxLloydPasses) {
    ++pass;

    // assignment, ties to the lowest index
    double total_dist = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      int best_idx = 0;
      double best = dist(table.rows[r].x, centroids[0]);
      for (std::size_t k = 1; k < centroids.size(); ++k) {
        const double d = dist(table.rows[r].x, centroids[k]);
        if (d < best) {
          best = d;
          best_idx = static_cast<int>(k);
        }
      }
      assign[r] = best_idx;
      sample_dist[r] = best;
      total_dist += best;
    }
    const double distortion = total_dist / static_cast<double>(n);
    book.distortion_history.push_back(distortion);
    book.distortion = distortion;
    book.iterations = pass;

    // The mean update is not the exact minimizer of the absolute-difference
    // distance, so the last pass may fail to improve; any non-improvement
    // (including a slight regression) ends training. Collapsed (duplicate)
    // centroids defer convergence: the next update pass re-seeds the emptied
    // cell at the farthest sample.
    if (!has_duplicates(centroids)) {
      if (std::isfinite(prev_distortion)) {
        const double improvement =
            prev_distortion > 0.0 ? (prev_distortion - distortion) / prev_distortion
                                  : 0.0;
        if (improvement < rel_tol || distortion == 0.0) {
          converged = true;
          break;
        }
      } else if (distortion == 0.0) {
        converged = true;
        break;
      }
    }
    prev_distortion = distortion;

    // centroid update: mean for continuous, mode for categorical (lowest id
    // wins ties); empty cells re-seed at the farthest sample
    std::vector<std::size_t> counts(cells, 0);
    std::vector<std::vector<double>> sums(cells, std::vector<double>(dims, 0.0));
    std::vector<std::vector<std::map<double, std::size_t>>> modes(
        cells, std::vector<std::map<double, std::size_t>>(dims));
    for (std::size_t r = 0; r < n; ++r) {
      const auto cell = static_cast<std::size_t>(assign[r]);
      ++counts[cell];
      for (std::size_t c = 0; c < dims; ++c) {
        if (kinds[c] == ColumnKind::Continuous) {
          sums[cell][c] += table.rows[r].x[c];
        } else {
          ++modes[cell][c][table.rows[r].x[c]];
        }
      }
    }
    for (std::size_t k = 0; k < cells; ++k) {
      if (counts[k] == 0) {
        std::size_t farthest = 0;
        for (std::size_t r = 1; r < n; ++r) {
          if (sample_dist[r] > sample_dist[farthest]) farthest = r;
        }
        centroids[k] = table.rows[farthest].x;
        sample_dist[farthest] = 0.0;  // do not hand the same sample to two empty cells
        continue;
      }
      for (std::size_t c = 0; c < dims; ++c) {
        if (kinds[c] == ColumnKind::Continuous) {
          centroids[k][c] = sums[k][c] / static_cast<double>(counts[k]);
        } else {
          double best_id = centroids[k][c];
          std::size_t best_count = 0;
          for (const auto& [id, cnt] : modes[k][c]) {  // map order = ascending id
            if (cnt > best_count) {
              best_count = cnt;
              best_id = id;
            }
          }
          centroids[k][c] = best_id;
        }
      }
    }
  }

  book.centroids = std::move(centroids);
  book.converged = converged;
  return book;
}

int assign_cell(std::span<const double> x, const Codebook& codebook) {
  if (codebook.centroids.empty()) {
    throw std::invalid_argument("assign_cell: empty codebook");
  }
  int best_idx = 0;
  double best = mixed_distance(x, codebook.centroids[0], codebook.kinds);
  for (std::size_t k = 1; k < codebook.centroids.size(); ++k) {
    const double d = mixed_distance(x, codebook.centroids[k], codebook.kinds);
    if (d < best) {
      best = d;
      best_idx = static_cast<int>(k);
    }
  }
  return best_idx;
}

}  // namespace fairvq

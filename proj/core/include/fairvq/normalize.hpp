#pragma once

#include "fairvq/table.hpp"

namespace fairvq {

/// Per-column affine transform x -> (x - mean) * scale taking every
/// non-degenerate continuous column of the fitting table to mean 0 and
/// variance 1/2 (population variance). Zero-variance columns map to the
/// constant 0 via scale = 0. Categorical columns carry the identity.
struct NormalizationParams {
  struct ColumnParams {
    double mean = 0.0;
    double stddev = 0.0;
    double scale = 1.0;
  };
  std::vector<ColumnParams> columns;  // aligned with schema columns

  void apply_in_place(std::vector<double>& x) const;
  SampleTable apply(const SampleTable& table) const;
};

NormalizationParams fit_normalization(const SampleTable& table);

}  // namespace fairvq

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fairvq/decorrelate.hpp"

namespace fairvq::cli {

struct QuantizerOptions {
  int cells = 16;
  double error = 0.05;
  double confidence = 0.95;
  double rel_tol = 0.01;
  std::uint64_t seed = 1;
};

struct NeighborOptions {
  double percentile = 3.5;
  double theta = 1.0;
};

struct TradeoffCombination {
  std::vector<std::string> constraints;  // of dp, eop, pe, eod, ea, ind
  std::vector<double> grid;              // shared group-relaxation values
  double ind_epsilon = 0.05;             // fixed ind budget when "ind" is active
  std::vector<double> ind_grid;          // optional per-point ind budgets
};

struct TradeoffOptions {
  std::vector<std::string> awareness = {"unaware"};
  std::vector<TradeoffCombination> combinations;
};

struct DecorrelateOptions {
  std::string awareness = "unaware";
  std::vector<std::string> constraints;
  std::vector<double> grid = {0.0, 0.05, 0.10};
  double ind_epsilon = 0.05;
  double lambda = 15.0;
  double beta = 25.0;
  double tau = 10.0;
  double momentum = 0.9;
  double lr_initial = 1e-2;
  double lr_final = 1e-12;
  double stop_tol = 1e-4;
  int inner_iterations = 2000;
  int outer_iterations = 200;
};

struct RunConfig {
  std::filesystem::path samples;
  std::filesystem::path schema;
  std::filesystem::path output_dir = "out";
  std::optional<std::filesystem::path> reference_samples;
  QuantizerOptions quantizer;
  NeighborOptions neighbors;
  TradeoffOptions tradeoff;
  DecorrelateOptions decorrelate;

  /// FNV-1a over the canonical serialized configuration; stamped into every
  /// emitted artifact for provenance.
  std::string hash() const;
};

RunConfig load_run_config(const std::filesystem::path& path);

void cmd_quantize(const RunConfig& config);
void cmd_tradeoff(const RunConfig& config);
void cmd_decorrelate(const RunConfig& config);
void cmd_metrics(const std::filesystem::path& joint_a, const std::filesystem::path& joint_b,
                 const std::optional<std::filesystem::path>& output);
void cmd_bound(std::optional<std::int64_t> cells, std::optional<std::int64_t> samples,
               double error, double confidence);

}  // namespace fairvq::cli

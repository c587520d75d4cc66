#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "commands.hpp"
#include "fairvq/types.hpp"

namespace {

using fairvq::cli::RunConfig;

struct CommonArgs {
  std::string config_path;
  std::string samples, schema, output_dir, reference;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "JSON run configuration");
  cmd->add_option("--samples", args.samples, "sample CSV (overrides config)");
  cmd->add_option("--schema", args.schema, "schema JSON (overrides config)");
  cmd->add_option("--output-dir", args.output_dir, "artifact directory (overrides config)");
  cmd->add_option("--reference-samples", args.reference,
                  "reference CSV for the fidelity report");
}

RunConfig resolve_config(const CommonArgs& args) {
  RunConfig config;
  if (!args.config_path.empty()) {
    config = fairvq::cli::load_run_config(args.config_path);
  }
  if (!args.samples.empty()) config.samples = args.samples;
  if (!args.schema.empty()) config.schema = args.schema;
  if (!args.output_dir.empty()) config.output_dir = args.output_dir;
  if (!args.reference.empty()) config.reference_samples = args.reference;
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fairness-accuracy trade-off analysis on vector-quantized distributions"};
  app.require_subcommand(1);

  CommonArgs args;

  auto* quantize = app.add_subcommand(
      "quantize", "build the codebook and discrete joint from a sample file");
  add_common(quantize, args);
  std::optional<int> cells;
  std::optional<double> q_error, q_confidence, q_rel_tol;
  std::optional<std::uint64_t> q_seed;
  quantize->add_option("--cells", cells, "codebook size N");
  quantize->add_option("--error", q_error, "PAC error tolerance");
  quantize->add_option("--confidence", q_confidence, "PAC confidence");
  quantize->add_option("--rel-tol", q_rel_tol, "Lloyd stopping tolerance");
  quantize->add_option("--seed", q_seed, "codebook seeding RNG seed");

  auto* tradeoff = app.add_subcommand(
      "tradeoff", "sweep the fairness-accuracy trade-off LPs over budget grids");
  add_common(tradeoff, args);
  std::optional<double> percentile, theta;
  tradeoff->add_option("--percentile", percentile, "neighborhood distance percentile");
  tradeoff->add_option("--theta", theta, "individual-fairness kernel parameter");

  auto* decorrelate = app.add_subcommand(
      "decorrelate", "optimize decorrelation transforms that preserve fairness");
  add_common(decorrelate, args);
  std::optional<std::string> d_awareness;
  std::vector<std::string> d_constraints;
  std::vector<double> d_grid;
  std::optional<double> d_ind_eps, d_lambda, d_beta, d_tau, d_momentum;
  std::optional<double> d_lr_initial, d_lr_final, d_stop_tol;
  std::optional<int> d_inner, d_outer;
  decorrelate->add_option("--awareness", d_awareness, "aware or unaware");
  decorrelate->add_option("--constraints", d_constraints,
                          "active constraints (dp eop pe eod ea ind)");
  decorrelate->add_option("--grid", d_grid, "group budget grid");
  decorrelate->add_option("--ind-epsilon", d_ind_eps, "individual fairness budget");
  decorrelate->add_option("--lambda", d_lambda, "accuracy weight");
  decorrelate->add_option("--beta", d_beta, "correlation weight");
  decorrelate->add_option("--tau", d_tau, "penalty parameter");
  decorrelate->add_option("--momentum", d_momentum, "inner-step momentum");
  decorrelate->add_option("--lr-initial", d_lr_initial, "initial learning rate");
  decorrelate->add_option("--lr-final", d_lr_final, "final learning rate");
  decorrelate->add_option("--stop-tol", d_stop_tol, "residual stopping tolerance");
  decorrelate->add_option("--inner-iterations", d_inner, "subgradient steps per outer pass");
  decorrelate->add_option("--outer-iterations", d_outer, "multiplier update cap");

  auto* metrics = app.add_subcommand("metrics", "PCC/TV distances between two joint files");
  std::string joint_a, joint_b, metrics_output;
  metrics->add_option("--joint-a", joint_a, "first joint JSON")->required();
  metrics->add_option("--joint-b", joint_b, "second joint JSON")->required();
  metrics->add_option("--output", metrics_output, "write the report JSON here");

  auto* bound = app.add_subcommand("bound", "PAC sampling-bound calculator");
  std::optional<std::int64_t> b_cells, b_samples;
  double b_error = 0.05, b_confidence = 0.95;
  bound->add_option("--cells", b_cells, "cells, to compute the required samples");
  bound->add_option("--samples", b_samples, "samples, to compute the supportable cells");
  bound->add_option("--error", b_error, "PAC error tolerance");
  bound->add_option("--confidence", b_confidence, "PAC confidence");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    if (*quantize) {
      RunConfig config = resolve_config(args);
      if (cells) config.quantizer.cells = *cells;
      if (q_error) config.quantizer.error = *q_error;
      if (q_confidence) config.quantizer.confidence = *q_confidence;
      if (q_rel_tol) config.quantizer.rel_tol = *q_rel_tol;
      if (q_seed) config.quantizer.seed = *q_seed;
      fairvq::cli::cmd_quantize(config);
    } else if (*tradeoff) {
      RunConfig config = resolve_config(args);
      if (percentile) config.neighbors.percentile = *percentile;
      if (theta) config.neighbors.theta = *theta;
      fairvq::cli::cmd_tradeoff(config);
    } else if (*decorrelate) {
      RunConfig config = resolve_config(args);
      auto& d = config.decorrelate;
      if (d_awareness) d.awareness = *d_awareness;
      if (!d_constraints.empty()) d.constraints = d_constraints;
      if (!d_grid.empty()) d.grid = d_grid;
      if (d_ind_eps) d.ind_epsilon = *d_ind_eps;
      if (d_lambda) d.lambda = *d_lambda;
      if (d_beta) d.beta = *d_beta;
      if (d_tau) d.tau = *d_tau;
      if (d_momentum) d.momentum = *d_momentum;
      if (d_lr_initial) d.lr_initial = *d_lr_initial;
      if (d_lr_final) d.lr_final = *d_lr_final;
      if (d_stop_tol) d.stop_tol = *d_stop_tol;
      if (d_inner) d.inner_iterations = *d_inner;
      if (d_outer) d.outer_iterations = *d_outer;
      fairvq::cli::cmd_decorrelate(config);
    } else if (*metrics) {
      std::optional<std::filesystem::path> out;
      if (!metrics_output.empty()) out = metrics_output;
      fairvq::cli::cmd_metrics(joint_a, joint_b, out);
    } else if (*bound) {
      fairvq::cli::cmd_bound(b_cells, b_samples, b_error, b_confidence);
    }
  } catch (const fairvq::numeric_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const fairvq::io_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "diffnet/metrics.hpp"
#include "diffnet/scenario.hpp"
#include "diffnet/theory.hpp"

namespace diffnet {

struct RunOptions {
  int workers = 0;       // 0 = all available threads
  bool parallel = true;  // false = serial reference path (same math, same bytes)
};

struct ExperimentResult {
  ScenarioConfig resolved;
  LearningCurve curve;
  double steady_state_nmsd_db = 0.0;  // NaN when the curve is empty
  RateEstimate rate;
};

// Runs the scenario's Monte Carlo batch. Runs are distributed over a fixed
// number of accumulation lanes that are merged in lane order, so the result
// is bit-identical for any worker count, including the serial path.
ExperimentResult run_experiment(const ScenarioConfig& config, const RunOptions& options = {});

// Builds the network a scenario describes (exposed for tests that need to
// drive steps directly).
Network make_network(const ScenarioConfig& resolved, const NetworkTopology& topology);

void write_curve_csv(const std::string& path, const LearningCurve& curve);
void write_metadata_json(const std::string& path, const ExperimentResult& result,
                         const std::string& curve_csv_name);
void write_plot_sidecar(const std::string& path, const nlohmann::json& description);

// Convenience wrapper: writes <name>_curve.csv, <name>_metadata.json and the
// plot sidecar into out_dir. Returns the metadata path.
std::string emit_experiment_files(const std::string& out_dir, const ExperimentResult& result);

struct TheoryRun {
  StabilityReport stability;
  SteadyStateResult steady_state;
};

TheoryRun run_theory(const ScenarioConfig& config, const SteadyStateOptions& options = {});
void write_theory_csv(const std::string& path, const TheoryRun& run);

// Two-node toy sweep over fixed combination weights. Node 0 is the slow
// adapter, node 1 the fast one; the grid spans [0, 1] on both cross weights.
struct Sweep2Spec {
  int grid = 21;
  int runs = 50;
  long iterations = 4000;
  int filter_length = 50;
  double input_variance = 1.0;
  double noise_variance = 0.01;
  double step_slow = 0.1;
  double step_fast = 1.0;
  double nlms_regularizer = 1e-6;
  uint64_t seed = 1;
};

struct SweepSurface {
  Eigen::MatrixXd ss_db;  // (i, j) = grid point (c12_i, c21_j)
  Eigen::MatrixXd rate;   // NaN where undefined

  double min_ss_db() const { return ss_db.minCoeff(); }
  void argmin_ss(int& i, int& j) const;
};

struct SweepResult {
  Eigen::VectorXd grid_values;
  SweepSurface datc;
  SweepSurface atc;
};

SweepResult sweep_2node(const Sweep2Spec& spec, const RunOptions& options = {});
void write_sweep_csv(const std::string& path, const SweepResult& result);

// Theory-vs-simulation cross-check on the 15-node presets: four stationary
// step/noise scalings compared per node, plus a tracking sweep compared on
// the network value.
struct ValidationEntry {
  std::string scenario;
  Eigen::VectorXd theory_db;
  Eigen::VectorXd sim_db;
  double theory_nmsd_db = 0.0;
  double sim_nmsd_db = 0.0;
  double max_abs_diff_db = 0.0;  // per-node for stationary, network for tracking
  bool per_node = true;
};

struct ValidationReport {
  std::vector<ValidationEntry> entries;
  double max_abs_diff_db = 0.0;
};

ValidationReport run_validation_suite(uint64_t seed, const RunOptions& options = {},
                                      int runs_override = -1,
                                      const std::string& out_dir = "");
void write_validation_csv(const std::string& path, const ValidationReport& report);

// Learning-curve comparison of the adaptive-combiner scheme against static
// rules and the noncooperative baseline, per regime.
struct ComparisonEntry {
  std::string regime;
  std::string algorithm;
  double steady_state_nmsd_db = 0.0;
  RateEstimate rate;
};

struct ComparisonReport {
  std::vector<ComparisonEntry> entries;

  const ComparisonEntry* find(const std::string& regime, const std::string& algorithm) const;
};

ComparisonReport run_comparison_suite(uint64_t seed, const RunOptions& options = {},
                                      int runs_override = -1, long iterations_override = -1,
                                      const std::string& out_dir = "",
                                      const std::vector<std::string>& regimes = {});

int cli_main(int argc, char** argv);

}  // namespace diffnet

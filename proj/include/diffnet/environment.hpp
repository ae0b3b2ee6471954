#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "diffnet/rng.hpp"

namespace diffnet {

enum class RegressorModel { kIidGaussian, kTappedDelayLine };

RegressorModel regressor_model_from_string(const std::string& name);
std::string to_string(RegressorModel model);

// Fully resolved description of the data-generating process. All vectors are
// explicit; drawing of unset fields (initial parameter vector, noise powers)
// happens at scenario-resolution time, not here.
struct EnvironmentConfig {
  int filter_length = 0;            // M
  Eigen::VectorXd w_init;           // length M
  double tracking_cov_trace = 0.0;  // Tr{Q}; 0 means stationary
  Eigen::VectorXd q_diag;           // optional diag(Q); empty -> (Tr{Q}/M) * I
  Eigen::VectorXd input_variance;   // per node
  Eigen::VectorXd noise_variance;   // per node
  RegressorModel regressor_model = RegressorModel::kIidGaussian;
  uint64_t seed = 1;

  // Throws std::invalid_argument listing every problem found.
  void validate(int num_nodes) const;
};

struct Measurement {
  Eigen::VectorXd u;  // regressor, length M
  double d = 0.0;     // desired value, d = u' w_true + v
  double v = 0.0;     // noise sample, kept for diagnostics
};

// One realization of the environment for a single Monte Carlo run. The true
// parameter vector follows a random walk with increment covariance Q;
// regressors and noise are white Gaussian per node. Streams are derived from
// (seed, run_index, node), so runs are independent and replayable.
class Environment {
 public:
  Environment(const EnvironmentConfig& config, int num_nodes, uint64_t run_index);

  // Advances the true parameter vector by one random-walk increment.
  void step();

  // Draws one measurement per node at the current time. `out` is resized.
  void draw_measurements(std::vector<Measurement>& out);

  const Eigen::VectorXd& w_true() const { return w_true_; }
  int num_nodes() const { return num_nodes_; }
  int filter_length() const { return config_.filter_length; }

 private:
  EnvironmentConfig config_;
  int num_nodes_;
  Eigen::VectorXd w_true_;
  Eigen::VectorXd q_std_;  // per-coordinate increment std deviations
  RngStream walk_rng_;
  std::vector<RngStream> regressor_rng_;
  std::vector<RngStream> noise_rng_;
  std::vector<Eigen::VectorXd> delay_lines_;  // tapped-delay-line mode only
};

}  // namespace diffnet

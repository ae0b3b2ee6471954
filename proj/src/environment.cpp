#include "diffnet/environment.hpp"

#include <cmath>
#include <stdexcept>

namespace diffnet {

RegressorModel regressor_model_from_string(const std::string& name) {
  if (name == "iid_gaussian") return RegressorModel::kIidGaussian;
  if (name == "tapped_delay_line") return RegressorModel::kTappedDelayLine;
  throw std::invalid_argument("unknown regressor model: " + name);
}

std::string to_string(RegressorModel model) {
  return model == RegressorModel::kIidGaussian ? "iid_gaussian" : "tapped_delay_line";
}

void EnvironmentConfig::validate(int num_nodes) const {
  std::string problems;
  auto add = [&problems](const std::string& p) {
    if (!problems.empty()) problems += "; ";
    problems += p;
  };
  if (filter_length < 1) add("filter_length must be >= 1");
  if (w_init.size() != filter_length) add("w_init length does not match filter_length");
  if (tracking_cov_trace < 0.0) add("tracking_cov_trace must be >= 0");
  if (q_diag.size() != 0) {
    if (q_diag.size() != filter_length) add("q_diag length does not match filter_length");
    if ((q_diag.array() < 0.0).any()) add("q_diag entries must be >= 0");
  }
  if (input_variance.size() != num_nodes) add("input_variance length does not match node count");
  if ((input_variance.array() < 0.0).any()) add("input_variance entries must be >= 0");
  if (noise_variance.size() != num_nodes) add("noise_variance length does not match node count");
  if ((noise_variance.array() < 0.0).any()) add("noise_variance entries must be >= 0");
  if (!problems.empty()) throw std::invalid_argument("environment config: " + problems);
}

Environment::Environment(const EnvironmentConfig& config, int num_nodes, uint64_t run_index)
    : config_(config),
      num_nodes_(num_nodes),
      w_true_(config.w_init),
      walk_rng_(derive_key(config.seed, {kStreamWalk, run_index})) {
  config_.validate(num_nodes);
  const int m = config_.filter_length;
  if (config_.q_diag.size() != 0) {
    q_std_ = config_.q_diag.array().sqrt();
  } else {
    q_std_ = Eigen::VectorXd::Constant(m, std::sqrt(config_.tracking_cov_trace / m));
  }
  regressor_rng_.reserve(num_nodes);
  noise_rng_.reserve(num_nodes);
  for (int k = 0; k < num_nodes; ++k) {
    regressor_rng_.emplace_back(derive_key(config_.seed, {kStreamRegressor, run_index, (uint64_t)k}));
    noise_rng_.emplace_back(derive_key(config_.seed, {kStreamNoise, run_index, (uint64_t)k}));
  }
  if (config_.regressor_model == RegressorModel::kTappedDelayLine) {
    delay_lines_.assign(num_nodes, Eigen::VectorXd::Zero(m));
  }
}

void Environment::step() {
  if (config_.tracking_cov_trace == 0.0 && config_.q_diag.size() == 0) return;
  for (Eigen::Index i = 0; i < w_true_.size(); ++i) {
    w_true_[i] += q_std_[i] * walk_rng_.next_gaussian();
  }
}

void Environment::draw_measurements(std::vector<Measurement>& out) {
  const int m = config_.filter_length;
  out.resize(num_nodes_);
  for (int k = 0; k < num_nodes_; ++k) {
    Measurement& meas = out[k];
    if (meas.u.size() != m) meas.u.resize(m);
    const double sigma_u = std::sqrt(config_.input_variance[k]);
    if (config_.regressor_model == RegressorModel::kIidGaussian) {
      for (int i = 0; i < m; ++i) meas.u[i] = sigma_u * regressor_rng_[k].next_gaussian();
    } else {
      // shift in one new scalar sample; u(n) = [x(n), x(n-1), ..., x(n-M+1)]
      Eigen::VectorXd& line = delay_lines_[k];
      for (int i = m - 1; i > 0; --i) line[i] = line[i - 1];
      line[0] = sigma_u * regressor_rng_[k].next_gaussian();
      meas.u = line;
    }
    meas.v = std::sqrt(config_.noise_variance[k]) * noise_rng_[k].next_gaussian();
    meas.d = meas.u.dot(w_true_) + meas.v;
  }
}

}  // namespace diffnet

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "diffnet/diffusion.hpp"
#include "diffnet/environment.hpp"
#include "diffnet/theory.hpp"
#include "diffnet/topology.hpp"

namespace diffnet {

struct TopologySource {
  enum class Kind { kBuiltin15, kEdges, kFile };
  Kind kind = Kind::kBuiltin15;
  int num_nodes = -1;  // required for kEdges; optional (inferred) for kFile
  std::vector<std::pair<int, int>> edges;
  std::string path;

  NetworkTopology build() const;
};

struct CombinerSetup {
  enum class Kind { kStatic, kApa, kLs, kMatrix };
  Kind kind = Kind::kStatic;
  CombinerRule rule = CombinerRule::kMetropolis;
  AdaptiveCombinerParams adaptive;
  Eigen::MatrixXd matrix;  // explicit weights, kMatrix only

  bool is_adaptive() const { return kind == Kind::kApa || kind == Kind::kLs; }
};

// A complete, replayable description of one experiment. Scalar step sizes and
// variances may be given as a single value and are broadcast to all nodes
// when the scenario is resolved; unset draws (initial parameter vector,
// uniform noise powers) are frozen from the seed at the same point, so the
// emitted form of a resolved scenario replays bit-exactly.
struct ScenarioConfig {
  int schema_version = 1;
  std::string name = "unnamed";
  TopologySource topology;
  Strategy strategy = Strategy::kDatc;
  CombinerSetup combiners;

  Eigen::VectorXd step_sizes;  // per node, or length 1 to broadcast
  double nlms_regularizer = 1e-6;

  int filter_length = 0;
  Eigen::VectorXd w_init;           // empty: draw uniform [-1, 1] from seed
  double noise_uniform_max = -1.0;  // >= 0: draw noise powers uniform [0, max]
  Eigen::VectorXd noise_variance;   // per node, or length 1 to broadcast
  Eigen::VectorXd input_variance;   // per node, or length 1 to broadcast
  double tracking_cov_trace = 0.0;
  Eigen::VectorXd q_diag;  // optional explicit diag(Q)
  RegressorModel regressor_model = RegressorModel::kIidGaussian;

  long iterations = 0;
  int runs = 1;
  uint64_t seed = 1;
  double steady_state_window_fraction = 0.1;

  // Every violated field, empty when the scenario is runnable.
  std::vector<std::string> validate() const;

  // Broadcasts scalars and freezes seed-dependent draws. Throws if validate()
  // reports problems.
  ScenarioConfig resolved() const;

  bool is_resolved() const;

  // The following require a resolved scenario.
  EnvironmentConfig environment_config() const;
  std::vector<NlmsFilter> make_filters() const;
  CombinerMatrix static_combiner_matrix(const NetworkTopology& topo) const;
  TheoryInputs theory_inputs() const;  // static combiners only

  static ScenarioConfig from_json(const nlohmann::json& j);
  static ScenarioConfig load(const std::string& path);
  nlohmann::json to_json() const;
};

}  // namespace diffnet

#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "diffnet/adaptation.hpp"
#include "diffnet/combiners.hpp"
#include "diffnet/environment.hpp"
#include "diffnet/topology.hpp"

namespace diffnet {

// The decoupled scheme keeps a purely local estimate per node and combines it
// with the neighbors' previous combined estimates; the coupled scheme feeds
// the combined estimate back into adaptation and combines the neighbors'
// current intermediate estimates.
enum class Strategy { kDatc, kAtc, kNoncooperative };

Strategy strategy_from_string(const std::string& name);
std::string to_string(Strategy strategy);

struct AdaptiveCombinerParams {
  enum class Kind { kApa, kLs } kind = Kind::kLs;
  int apa_order = 500;
  double apa_step = 1.0;
  double apa_regularizer = 1e-6;
  double ls_forgetting = 0.99;
  double ls_regularizer = 1e-12;
};

// One network of NLMS nodes stepped under a diffusion strategy. Within a
// step, all nodes adapt, then all combiner updates run, then all
// combinations; only previous-iteration neighbor data is read, so results do
// not depend on node visitation order.
class Network {
 public:
  // Static combination weights (any strategy).
  Network(NetworkTopology topology, Strategy strategy, std::vector<NlmsFilter> filters,
          CombinerMatrix static_weights);

  // Adaptive combination weights, decoupled strategy only. Weights start
  // uniform over each closed neighborhood.
  Network(NetworkTopology topology, std::vector<NlmsFilter> filters,
          const AdaptiveCombinerParams& params);

  void step(const std::vector<Measurement>& measurements);

  long iteration() const { return iteration_; }
  int num_nodes() const { return topology_.num_nodes(); }
  const NetworkTopology& topology() const { return topology_; }
  Strategy strategy() const { return strategy_; }

  const Eigen::VectorXd& combined_estimate(int k) const { return w_[k]; }
  const std::vector<Eigen::VectorXd>& combined_estimates() const { return w_; }
  const Eigen::VectorXd& local_estimate(int k) const { return filters_[k].psi(); }
  double last_error(int k) const { return last_error_[k]; }
  double last_output(int k) const { return last_output_[k]; }

  // Weight node k currently assigns to itself / to its p-th neighbor.
  double self_weight(int k) const;
  Eigen::VectorXd neighbor_weights(int k) const;
  Eigen::MatrixXd combiner_snapshot() const;

  bool adaptive_combiners() const { return adaptive_; }

 private:
  void check_measurements(const std::vector<Measurement>& measurements) const;

  NetworkTopology topology_;
  Strategy strategy_;
  std::vector<NlmsFilter> filters_;
  bool adaptive_ = false;
  AdaptiveCombinerParams::Kind adaptive_kind_ = AdaptiveCombinerParams::Kind::kLs;
  CombinerMatrix static_weights_;
  std::vector<ApaCombiner> apa_;
  std::vector<LsCombiner> ls_;
  std::vector<Eigen::VectorXd> w_;        // latest combined estimates
  std::vector<Eigen::VectorXd> w_next_;   // scratch for the combination phase
  std::vector<double> last_error_;
  std::vector<double> last_output_;
  long iteration_ = 0;
};

}  // namespace diffnet

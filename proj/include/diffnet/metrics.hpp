#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <vector>

namespace diffnet {

inline double to_db(double linear) { return 10.0 * std::log10(linear); }

// Squared deviation of every node's combined estimate from the true vector.
Eigen::VectorXd record_msd(const Eigen::VectorXd& w_true,
                           const std::vector<Eigen::VectorXd>& estimates);

// Per-iteration deviation curves averaged over Monte Carlo runs. Values are
// kept linear; conversion to dB happens at output time.
struct LearningCurve {
  Eigen::MatrixXd msd;   // iterations x N
  Eigen::VectorXd nmsd;  // iterations (network average, = rowwise mean of msd)
  int runs = 0;

  long iterations() const { return msd.rows(); }
  int num_nodes() const { return static_cast<int>(msd.cols()); }
};

// Sum of per-run squared deviations; runs are added sample by sample and
// merged across accumulators with a fixed order so results do not depend on
// scheduling.
class CurveAccumulator {
 public:
  CurveAccumulator(long iterations, int num_nodes);

  void add_sample(long iteration, const Eigen::VectorXd& per_node_sq_dev);
  void finish_run() { ++runs_; }
  void merge(const CurveAccumulator& other);
  LearningCurve finalize() const;

  int runs() const { return runs_; }

 private:
  Eigen::MatrixXd sum_;
  int runs_ = 0;
};

// Mean of the network curve over the last `window` iterations, in dB. A
// non-positive window defaults to the last 10% of the run (at least one
// sample).
double steady_state_db(const LearningCurve& curve, long window = -1);
double steady_state_db(const Eigen::VectorXd& linear_curve, long window = -1);

// Per-node steady-state estimates, in dB.
Eigen::VectorXd per_node_steady_state_db(const LearningCurve& curve, long window = -1);

struct RateEstimate {
  bool defined = false;
  double db_per_iteration = 0.0;
  long region_end = 0;  // last iteration included in the slope fit
};

// Least-squares slope of the dB learning curve over its initial region: from
// the first sample until the curve first comes within 5 dB of the
// steady-state estimate. Undefined when the curve has no transient (initial
// value less than 3 dB above steady state) or the region is too short to fit.
RateEstimate convergence_rate(const LearningCurve& curve, long steady_window = -1);
RateEstimate convergence_rate(const Eigen::VectorXd& linear_curve, long steady_window = -1);

}  // namespace diffnet

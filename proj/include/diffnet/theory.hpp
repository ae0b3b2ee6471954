#pragma once

#include <Eigen/Dense>

#include "diffnet/topology.hpp"

namespace diffnet {

// Inputs of the steady-state deviation model: static convex combiners, NLMS
// step sizes, and white-Gaussian input/noise statistics with isotropic
// per-node regressor covariance sigma_u,k^2 * I.
struct TheoryInputs {
  CombinerMatrix combiners;
  Eigen::VectorXd step_sizes;       // mu_k
  Eigen::VectorXd noise_variance;   // sigma_{v,k}^2
  Eigen::VectorXd input_variance;   // sigma_{u,k}^2
  int filter_length = 0;            // M
  double tracking_cov_trace = 0.0;  // Tr{Q} of the random-walk increments

  void validate() const;  // throws std::invalid_argument on bad fields
};

// Large-M approximations of the normalized regressor moments
//   Rbar = E{u u' / ||u||^2}      ~ I / (M - 2)
//   Rtil = E{u u' / ||u||^4}      ~ I / (sigma_u^2 (M - 2)(M - 4))
// for tapped-delay-line Gaussian inputs. Both matrices are multiples of the
// identity; only the scales are returned. Requires M > 4.
struct NormalizedMoments {
  double rbar_scale;
  double rtil_scale;
};
NormalizedMoments approx_moments(double input_variance, int filter_length);

struct StabilityReport {
  bool step_ok = false;      // 0 < mu_k < 2 for all nodes
  bool combiner_ok = false;  // nonnegative, columns sum to one
  double rho_bound = 0.0;    // upper bound on the mean transition spectral radius
  double rho_c2_exact = 0.0; // exact spectral radius of the off-diagonal block
};

StabilityReport mean_stability(const TheoryInputs& inputs);

struct SteadyStateOptions {
  double tolerance = 1e-12;  // linear deviation units, applied to the network term
  int j_max = 10000;         // hard cap on the series index
};

struct SteadyStateResult {
  Eigen::VectorXd msd_linear;  // per node
  Eigen::VectorXd msd_db;
  double nmsd_linear = 0.0;
  double nmsd_db = 0.0;
  int terms_used = 0;
  bool tolerance_reached = false;  // false when stopped by j_max
  double truncation_bound = 0.0;   // geometric tail bound on the dropped terms
};

// Evaluates the steady-state deviation series for the decoupled diffusion
// scheme. Terms are summed until the network term stays below the tolerance
// for three consecutive indices or j_max is reached; sustained term growth
// over 50 indices raises an error naming the stability violation.
SteadyStateResult steady_state_msd(const TheoryInputs& inputs,
                                   const SteadyStateOptions& options = {});

// Consistency check: the network value must equal the mean of the per-node
// values (the network weighting is the average of the per-node weightings).
bool nmsd_identity_holds(const SteadyStateResult& result, double rel_tol = 1e-10);

// Reduced (node-level) cross factor of the j-th power of the mean transition
// matrix, computed by the recursion the series uses. Exposed so independent
// evaluations of the explicit sum can be checked against it.
Eigen::MatrixXd transition_cross_factor(const TheoryInputs& inputs, int j);

}  // namespace diffnet

#pragma once

#include <Eigen/Dense>
#include <vector>

namespace diffnet {

// Combination weights of one node, neighbor part only (ordered by the node's
// neighbor list). The self-weight is implied: c_kk = 1 - sum(cbar).
struct CombinerVector {
  Eigen::VectorXd cbar;

  double self_weight() const { return 1.0 - cbar.sum(); }
  bool in_simplex(double tol = 1e-12) const;
};

// Clip-and-rescale projection onto the probability simplex over the closed
// neighborhood: negative entries (including the implied self-weight) are set
// to zero and the rest rescaled to sum to one. If no entry is positive the
// node falls back to trusting itself (cbar = 0), which signals a degenerate
// solve upstream.
CombinerVector project_simplex(const Eigen::VectorXd& raw_cbar);

struct OutputDifferences {
  Eigen::VectorXd ytilde;            // y_{lk} - y_k per neighbor
  Eigen::VectorXd neighbor_outputs;  // y_{lk} = w_l(n-1)' u_k
};

// Outputs of the neighbors' previous combined estimates on this node's
// regressor, differenced against the node's own local output.
OutputDifferences output_differences(const std::vector<Eigen::VectorXd>& estimates,
                                     const std::vector<int>& neighbor_ids,
                                     double local_output, const Eigen::VectorXd& u);

// One affine-projection step on the combiner vector, computed directly from
// an explicit window (rows = recent ytilde samples, newest first). The two
// forms are algebraically identical for regularizer > 0; the first solves an
// Nbar x Nbar system, the second an L x L one.
Eigen::VectorXd apa_solve_primal(const Eigen::MatrixXd& window, const Eigen::VectorXd& errors,
                                 const Eigen::VectorXd& cbar, double step_size,
                                 double regularizer);
Eigen::VectorXd apa_solve_dual(const Eigen::MatrixXd& window, const Eigen::VectorXd& errors,
                               const Eigen::VectorXd& cbar, double step_size, double regularizer);

// Affine-projection learning of one node's combiner vector over a sliding
// window of the last `order` output differences and errors, followed by the
// simplex projection. The normal-equation form is used when the window is at
// least as long as the neighbor count, the dual form otherwise.
class ApaCombiner {
 public:
  ApaCombiner(int num_neighbors, int order, double step_size, double regularizer,
              const Eigen::VectorXd& initial_cbar);

  void update(const Eigen::VectorXd& ytilde, double error);

  const CombinerVector& weights() const { return weights_; }
  int order() const { return order_; }

  // Window contents in newest-first order (min(count, order) valid rows).
  Eigen::MatrixXd window_rows() const;
  Eigen::VectorXd window_errors() const;

 private:
  void rebuild_accumulators();

  int num_neighbors_;
  int order_;
  double step_size_;
  double regularizer_;
  CombinerVector weights_;
  Eigen::MatrixXd rows_;    // order x Nbar ring buffer
  Eigen::VectorXd errors_;  // order
  long count_ = 0;
  int head_ = 0;
  Eigen::MatrixXd gram_;   // window' * window
  Eigen::VectorXd cross_;  // window' * errors
};

// Least-squares learning of one node's combiner vector under an exponential
// window: the normal-equation accumulators are updated recursively with
// forgetting factor gamma and solved with Tikhonov regularization, followed
// by the simplex projection.
class LsCombiner {
 public:
  LsCombiner(int num_neighbors, double forgetting, double regularizer,
             const Eigen::VectorXd& initial_cbar);

  void update(const Eigen::VectorXd& ytilde, double error);

  const CombinerVector& weights() const { return weights_; }
  const Eigen::MatrixXd& gram() const { return gram_; }
  const Eigen::VectorXd& cross() const { return cross_; }

 private:
  double forgetting_;
  double regularizer_;
  CombinerVector weights_;
  Eigen::MatrixXd gram_;   // P_k
  Eigen::VectorXd cross_;  // z_k
};

}  // namespace diffnet

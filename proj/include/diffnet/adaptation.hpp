#pragma once

#include <Eigen/Dense>

namespace diffnet {

// Local NLMS filter of one node. The update direction is u scaled by the
// inverse regressor energy; a degenerate input (||u||^2 + delta == 0) skips
// the update but still reports the error.
class NlmsFilter {
 public:
  struct Result {
    double error;   // e = d - y
    double output;  // y = u' psi(n-1), a-priori output
  };

  NlmsFilter(int filter_length, double step_size, double regularizer);

  // Adapt from the filter's own previous estimate.
  Result adapt(const Eigen::VectorXd& u, double d) { return adapt_from(psi_, u, d); }

  // Adapt treating `base` as the previous estimate (psi is overwritten by the
  // updated vector). Used by schemes that feed the combined estimate back
  // into adaptation.
  Result adapt_from(const Eigen::VectorXd& base, const Eigen::VectorXd& u, double d);

  const Eigen::VectorXd& psi() const { return psi_; }
  void set_psi(const Eigen::VectorXd& psi) { psi_ = psi; }
  double step_size() const { return step_size_; }
  double regularizer() const { return regularizer_; }

 private:
  Eigen::VectorXd psi_;
  double step_size_;
  double regularizer_;
};

}  // namespace diffnet

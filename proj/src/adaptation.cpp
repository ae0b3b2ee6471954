#include "diffnet/adaptation.hpp"

#include <stdexcept>

namespace diffnet {

NlmsFilter::NlmsFilter(int filter_length, double step_size, double regularizer)
    : psi_(Eigen::VectorXd::Zero(filter_length)),
      step_size_(step_size),
      regularizer_(regularizer) {
  if (filter_length < 1) throw std::invalid_argument("nlms: filter_length must be >= 1");
  if (step_size < 0.0) throw std::invalid_argument("nlms: step_size must be >= 0");
  if (regularizer < 0.0) throw std::invalid_argument("nlms: regularizer must be >= 0");
}

NlmsFilter::Result NlmsFilter::adapt_from(const Eigen::VectorXd& base, const Eigen::VectorXd& u,
                                          double d) {
  if (u.size() != psi_.size()) throw std::invalid_argument("nlms: regressor dimension mismatch");
  const double y = u.dot(base);
  const double e = d - y;
  const double denom = regularizer_ + u.squaredNorm();
  if (denom == 0.0) {
    // degenerate input: no direction to move in, error still reported
    if (&base != &psi_) psi_ = base;
    return {e, y};
  }
  psi_ = base + (step_size_ * e / denom) * u;
  return {e, y};
}

}  // namespace diffnet

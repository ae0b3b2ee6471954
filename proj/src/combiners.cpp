#include "diffnet/combiners.hpp"

#include <cmath>
#include <stdexcept>

namespace diffnet {

namespace {

constexpr long kAccumulatorRebuildInterval = 2048;

void require_finite(const Eigen::VectorXd& ytilde, double error, const char* who) {
  if (!ytilde.allFinite() || !std::isfinite(error)) {
    throw std::invalid_argument(std::string(who) + ": non-finite input");
  }
}

}  // namespace

bool CombinerVector::in_simplex(double tol) const {
  if ((cbar.array() < -tol).any() || (cbar.array() > 1.0 + tol).any()) return false;
  const double self = self_weight();
  return self >= -tol && self <= 1.0 + tol;
}

CombinerVector project_simplex(const Eigen::VectorXd& raw_cbar) {
  const double self = 1.0 - raw_cbar.sum();
  if (raw_cbar.allFinite() && self >= 0.0 && (raw_cbar.array() >= 0.0).all()) {
    return {raw_cbar};  // already convex: exact fixed point
  }
  Eigen::VectorXd clipped = raw_cbar.cwiseMax(0.0);
  const double self_clipped = std::max(self, 0.0);
  const double total = clipped.sum() + self_clipped;
  if (!std::isfinite(total) || total <= 0.0) {
    return {Eigen::VectorXd::Zero(raw_cbar.size())};  // degenerate solve: trust self
  }
  clipped /= total;
  return {clipped};
}

OutputDifferences output_differences(const std::vector<Eigen::VectorXd>& estimates,
                                     const std::vector<int>& neighbor_ids,
                                     double local_output, const Eigen::VectorXd& u) {
  const int nbar = static_cast<int>(neighbor_ids.size());
  OutputDifferences out;
  out.ytilde.resize(nbar);
  out.neighbor_outputs.resize(nbar);
  for (int p = 0; p < nbar; ++p) {
    const double y_lk = estimates[neighbor_ids[p]].dot(u);
    out.neighbor_outputs[p] = y_lk;
    out.ytilde[p] = y_lk - local_output;
  }
  return out;
}

Eigen::VectorXd apa_solve_primal(const Eigen::MatrixXd& window, const Eigen::VectorXd& errors,
                                 const Eigen::VectorXd& cbar, double step_size,
                                 double regularizer) {
  const int nbar = static_cast<int>(window.cols());
  Eigen::MatrixXd lhs = window.transpose() * window;
  lhs.diagonal().array() += regularizer;
  const Eigen::VectorXd rhs = window.transpose() * (errors - window * cbar);
  return cbar + step_size * lhs.ldlt().solve(rhs);
}

Eigen::VectorXd apa_solve_dual(const Eigen::MatrixXd& window, const Eigen::VectorXd& errors,
                               const Eigen::VectorXd& cbar, double step_size, double regularizer) {
  const int rows = static_cast<int>(window.rows());
  Eigen::MatrixXd lhs = window * window.transpose();
  lhs.diagonal().array() += regularizer;
  const Eigen::VectorXd s = lhs.ldlt().solve(errors - window * cbar);
  return cbar + step_size * window.transpose() * s;
}

ApaCombiner::ApaCombiner(int num_neighbors, int order, double step_size, double regularizer,
                         const Eigen::VectorXd& initial_cbar)
    : num_neighbors_(num_neighbors),
      order_(order),
      step_size_(step_size),
      regularizer_(regularizer),
      weights_{initial_cbar},
      rows_(Eigen::MatrixXd::Zero(order, num_neighbors)),
      errors_(Eigen::VectorXd::Zero(order)),
      gram_(Eigen::MatrixXd::Zero(num_neighbors, num_neighbors)),
      cross_(Eigen::VectorXd::Zero(num_neighbors)) {
  if (num_neighbors < 1) throw std::invalid_argument("apa: node has no neighbors");
  if (order < 1) throw std::invalid_argument("apa: projection order must be >= 1");
  if (step_size < 0.0) throw std::invalid_argument("apa: step_size must be >= 0");
  if (regularizer < 0.0) throw std::invalid_argument("apa: regularizer must be >= 0");
  if (initial_cbar.size() != num_neighbors) {
    throw std::invalid_argument("apa: initial weight length mismatch");
  }
}

void ApaCombiner::rebuild_accumulators() {
  const int filled = static_cast<int>(std::min<long>(count_, order_));
  gram_.setZero();
  cross_.setZero();
  for (int i = 0; i < filled; ++i) {
    gram_.noalias() += rows_.row(i).transpose() * rows_.row(i);
    cross_.noalias() += errors_[i] * rows_.row(i).transpose();
  }
}

void ApaCombiner::update(const Eigen::VectorXd& ytilde, double error) {
  require_finite(ytilde, error, "apa");
  if (ytilde.size() != num_neighbors_) throw std::invalid_argument("apa: ytilde length mismatch");

  if (count_ >= order_) {
    // evict the row leaving the window
    gram_.noalias() -= rows_.row(head_).transpose() * rows_.row(head_);
    cross_.noalias() -= errors_[head_] * rows_.row(head_).transpose();
  }
  rows_.row(head_) = ytilde.transpose();
  errors_[head_] = error;
  head_ = (head_ + 1) % order_;
  ++count_;
  if (count_ % kAccumulatorRebuildInterval == 0) {
    // periodic rebuild caps rounding drift from the rank-one add/evict updates
    rebuild_accumulators();
  }

  Eigen::VectorXd raw;
  if (order_ >= num_neighbors_) {
    Eigen::MatrixXd lhs = gram_;
    lhs.diagonal().array() += regularizer_;
    const Eigen::VectorXd rhs = cross_ - gram_ * weights_.cbar;
    raw = weights_.cbar + step_size_ * lhs.ldlt().solve(rhs);
  } else {
    raw = apa_solve_dual(window_rows(), window_errors(), weights_.cbar, step_size_,
                         regularizer_);
  }
  weights_ = project_simplex(raw);
}

Eigen::MatrixXd ApaCombiner::window_rows() const {
  const int filled = static_cast<int>(std::min<long>(count_, order_));
  Eigen::MatrixXd out(filled, num_neighbors_);
  for (int i = 0; i < filled; ++i) {
    out.row(i) = rows_.row((head_ - 1 - i + 2 * order_) % order_);
  }
  return out;
}

Eigen::VectorXd ApaCombiner::window_errors() const {
  const int filled = static_cast<int>(std::min<long>(count_, order_));
  Eigen::VectorXd out(filled);
  for (int i = 0; i < filled; ++i) {
    out[i] = errors_[(head_ - 1 - i + 2 * order_) % order_];
  }
  return out;
}

LsCombiner::LsCombiner(int num_neighbors, double forgetting, double regularizer,
                       const Eigen::VectorXd& initial_cbar)
    : forgetting_(forgetting),
      regularizer_(regularizer),
      weights_{initial_cbar},
      gram_(Eigen::MatrixXd::Zero(num_neighbors, num_neighbors)),
      cross_(Eigen::VectorXd::Zero(num_neighbors)) {
  if (num_neighbors < 1) throw std::invalid_argument("ls: node has no neighbors");
  if (forgetting < 0.0 || forgetting >= 1.0) {
    throw std::invalid_argument("ls: forgetting factor must be in [0, 1)");
  }
  if (regularizer <= 0.0) throw std::invalid_argument("ls: regularizer must be > 0");
  if (initial_cbar.size() != num_neighbors) {
    throw std::invalid_argument("ls: initial weight length mismatch");
  }
}

void LsCombiner::update(const Eigen::VectorXd& ytilde, double error) {
  require_finite(ytilde, error, "ls");
  if (ytilde.size() != cross_.size()) throw std::invalid_argument("ls: ytilde length mismatch");
  gram_ *= forgetting_;
  gram_.noalias() += ytilde * ytilde.transpose();
  cross_ *= forgetting_;
  cross_.noalias() += error * ytilde;
  Eigen::MatrixXd lhs = gram_;
  lhs.diagonal().array() += regularizer_;
  weights_ = project_simplex(lhs.ldlt().solve(cross_));
}

}  // namespace diffnet

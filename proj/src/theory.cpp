#include "diffnet/theory.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "diffnet/metrics.hpp"

namespace diffnet {

void TheoryInputs::validate() const {
  const Eigen::Index n = combiners.weights.rows();
  std::string problems;
  auto add = [&problems](const std::string& p) {
    if (!problems.empty()) problems += "; ";
    problems += p;
  };
  if (n < 1 || combiners.weights.cols() != n) add("combiner matrix must be square and nonempty");
  if (step_sizes.size() != n) add("step_sizes length does not match combiner matrix");
  if (noise_variance.size() != n) add("noise_variance length does not match combiner matrix");
  if (input_variance.size() != n) add("input_variance length does not match combiner matrix");
  if ((noise_variance.array() < 0.0).any()) add("noise_variance entries must be >= 0");
  if ((input_variance.array() <= 0.0).any()) add("input_variance entries must be > 0");
  if (filter_length < 1) add("filter_length must be >= 1");
  if (tracking_cov_trace < 0.0) add("tracking_cov_trace must be >= 0");
  if (!problems.empty()) throw std::invalid_argument("theory inputs: " + problems);
}

NormalizedMoments approx_moments(double input_variance, int filter_length) {
  if (filter_length <= 4) {
    throw std::invalid_argument("approx_moments: filter_length must exceed 4");
  }
  if (input_variance <= 0.0) {
    throw std::invalid_argument("approx_moments: input_variance must be > 0");
  }
  const double m2 = filter_length - 2.0;
  const double m4 = filter_length - 4.0;
  return {1.0 / m2, 1.0 / (input_variance * m2 * m4)};
}

namespace {

// Off-diagonal combiner block, transposed: entry (k, l) = c_{lk}, l != k.
Eigen::MatrixXd off_diagonal_transposed(const Eigen::MatrixXd& weights) {
  Eigen::MatrixXd c2t = weights.transpose();
  c2t.diagonal().setZero();
  return c2t;
}

}  // namespace

StabilityReport mean_stability(const TheoryInputs& inputs) {
  inputs.validate();
  const int n = static_cast<int>(inputs.step_sizes.size());
  StabilityReport report;

  report.step_ok = (inputs.step_sizes.array() > 0.0).all() &&
                   (inputs.step_sizes.array() < 2.0).all();

  const auto violations = [&] {
    bool ok = true;
    for (int k = 0; k < n; ++k) {
      if ((inputs.combiners.weights.col(k).array() < -1e-10).any()) ok = false;
      if (std::abs(inputs.combiners.weights.col(k).sum() - 1.0) > 1e-10) ok = false;
    }
    return ok;
  };
  report.combiner_ok = violations();

  const double rbar = approx_moments(inputs.input_variance[0], inputs.filter_length).rbar_scale;
  double step_part = 0.0;
  for (int k = 0; k < n; ++k) {
    step_part = std::max(step_part, std::abs(1.0 - inputs.step_sizes[k] * rbar));
  }
  const double combiner_part = (1.0 - inputs.combiners.weights.diagonal().array()).maxCoeff();
  report.rho_bound = std::max(step_part, combiner_part);

  const Eigen::MatrixXd c2t = off_diagonal_transposed(inputs.combiners.weights);
  Eigen::EigenSolver<Eigen::MatrixXd> solver(c2t, /*computeEigenvectors=*/false);
  report.rho_c2_exact = solver.eigenvalues().cwiseAbs().maxCoeff();
  return report;
}

Eigen::MatrixXd transition_cross_factor(const TheoryInputs& inputs, int j) {
  inputs.validate();
  const int n = static_cast<int>(inputs.step_sizes.size());
  const double rbar = approx_moments(inputs.input_variance[0], inputs.filter_length).rbar_scale;
  const Eigen::MatrixXd c2t = off_diagonal_transposed(inputs.combiners.weights);
  const Eigen::VectorXd c1 = inputs.combiners.weights.diagonal();
  const Eigen::VectorXd a = Eigen::VectorXd::Ones(n) - rbar * inputs.step_sizes;

  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd pl = Eigen::VectorXd::Ones(n);
  for (int i = 0; i < j; ++i) {
    pl = pl.cwiseProduct(a);
    x = (c2t * x).eval();
    x.diagonal() += c1.cwiseProduct(pl);
  }
  return x;
}

SteadyStateResult steady_state_msd(const TheoryInputs& inputs,
                                   const SteadyStateOptions& options) {
  inputs.validate();
  const int n = static_cast<int>(inputs.step_sizes.size());
  const int m = inputs.filter_length;
  const double tr_q = inputs.tracking_cov_trace;

  // per-node scales of the identity-shaped moment matrices
  const double rbar = approx_moments(inputs.input_variance[0], m).rbar_scale;
  Eigen::VectorXd s(n);  // mu_k^2 sigma_v,k^2 rtil_k
  for (int k = 0; k < n; ++k) {
    const double rtil = approx_moments(inputs.input_variance[k], m).rtil_scale;
    s[k] = inputs.step_sizes[k] * inputs.step_sizes[k] * inputs.noise_variance[k] * rtil;
  }
  const Eigen::VectorXd a = Eigen::VectorXd::Ones(n) - rbar * inputs.step_sizes;
  const Eigen::VectorXd c1 = inputs.combiners.weights.diagonal();
  const Eigen::MatrixXd c2t = off_diagonal_transposed(inputs.combiners.weights);

  // series state at index j: x = cross factor, p2 = j-th power of the
  // off-diagonal block, pl = j-th power of the adaptation contraction
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd p2 = Eigen::MatrixXd::Identity(n, n);
  Eigen::VectorXd pl = Eigen::VectorXd::Ones(n);

  Eigen::VectorXd msd = Eigen::VectorXd::Zero(n);
  double nmsd = 0.0;

  const double rho = mean_stability(inputs).rho_bound;
  double prev_term = std::numeric_limits<double>::infinity();
  double last_term = 0.0;
  int below_streak = 0;
  int grow_streak = 0;
  SteadyStateResult result;

  int j = 0;
  for (; j <= options.j_max; ++j) {
    const Eigen::MatrixXd y = x + p2 * c1.asDiagonal();
    const Eigen::VectorXd row_sums = (x + p2).rowwise().sum();
    const Eigen::VectorXd term =
        m * (y.array().square().matrix() * s) +
        tr_q * row_sums.array().square().matrix();

    msd += term;
    const double nmsd_term = term.mean();
    nmsd += nmsd_term;
    last_term = std::abs(nmsd_term);

    if (last_term > prev_term) {
      if (++grow_streak >= 50) {
        throw std::runtime_error(
            "steady_state_msd: series term grew for 50 consecutive indices; "
            "mean-stability condition violated (rho_bound = " + std::to_string(rho) + ")");
      }
    } else {
      grow_streak = 0;
    }
    prev_term = last_term;

    if (last_term < options.tolerance) {
      if (++below_streak >= 3) {
        result.tolerance_reached = true;
        ++j;
        break;
      }
    } else {
      below_streak = 0;
    }

    pl = pl.cwiseProduct(a);
    x = (c2t * x).eval();
    x.diagonal() += c1.cwiseProduct(pl);
    p2 = (c2t * p2).eval();
  }

  result.terms_used = std::min(j, options.j_max + 1);
  result.msd_linear = msd;
  result.msd_db = msd.unaryExpr([](double v) { return to_db(v); });
  result.nmsd_linear = nmsd;
  result.nmsd_db = to_db(nmsd);
  result.truncation_bound = rho < 1.0
                                ? last_term * rho * rho / (1.0 - rho * rho)
                                : std::numeric_limits<double>::quiet_NaN();
  return result;
}

bool nmsd_identity_holds(const SteadyStateResult& result, double rel_tol) {
  const double mean_msd = result.msd_linear.mean();
  const double scale = std::max({std::abs(mean_msd), std::abs(result.nmsd_linear), 1e-300});
  return std::abs(mean_msd - result.nmsd_linear) <= rel_tol * scale;
}

}  // namespace diffnet

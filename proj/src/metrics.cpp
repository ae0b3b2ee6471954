#include "diffnet/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace diffnet {

namespace {
constexpr double kDbFloor = 1e-300;  // keeps slope fits finite on noiseless curves
}

Eigen::VectorXd record_msd(const Eigen::VectorXd& w_true,
                           const std::vector<Eigen::VectorXd>& estimates) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(estimates.size()));
  for (size_t k = 0; k < estimates.size(); ++k) {
    out[static_cast<Eigen::Index>(k)] = (w_true - estimates[k]).squaredNorm();
  }
  return out;
}

CurveAccumulator::CurveAccumulator(long iterations, int num_nodes)
    : sum_(Eigen::MatrixXd::Zero(iterations, num_nodes)) {
  if (iterations < 0 || num_nodes < 1) {
    throw std::invalid_argument("curve accumulator: bad dimensions");
  }
}

void CurveAccumulator::add_sample(long iteration, const Eigen::VectorXd& per_node_sq_dev) {
  sum_.row(iteration) += per_node_sq_dev.transpose();
}

void CurveAccumulator::merge(const CurveAccumulator& other) {
  if (other.sum_.rows() != sum_.rows() || other.sum_.cols() != sum_.cols()) {
    throw std::invalid_argument("curve accumulator: merge shape mismatch");
  }
  sum_ += other.sum_;
  runs_ += other.runs_;
}

LearningCurve CurveAccumulator::finalize() const {
  if (runs_ == 0 && sum_.rows() > 0) {
    throw std::logic_error("curve accumulator: no runs recorded");
  }
  LearningCurve curve;
  curve.runs = runs_;
  curve.msd = runs_ > 0 ? (sum_ / static_cast<double>(runs_)).eval() : sum_;
  curve.nmsd = curve.msd.rowwise().mean();
  return curve;
}

namespace {

long resolve_window(long total, long window) {
  if (window <= 0) window = total / 10;
  if (window < 1) window = 1;
  if (window > total) window = total;
  return window;
}

}  // namespace

double steady_state_db(const Eigen::VectorXd& linear_curve, long window) {
  const long total = linear_curve.size();
  if (total == 0) throw std::invalid_argument("steady_state: empty curve");
  const long w = resolve_window(total, window);
  return to_db(linear_curve.tail(w).mean());
}

double steady_state_db(const LearningCurve& curve, long window) {
  return steady_state_db(curve.nmsd, window);
}

Eigen::VectorXd per_node_steady_state_db(const LearningCurve& curve, long window) {
  const long total = curve.iterations();
  if (total == 0) throw std::invalid_argument("steady_state: empty curve");
  const long w = resolve_window(total, window);
  Eigen::VectorXd out(curve.num_nodes());
  for (int k = 0; k < curve.num_nodes(); ++k) {
    out[k] = to_db(curve.msd.col(k).tail(w).mean());
  }
  return out;
}

RateEstimate convergence_rate(const Eigen::VectorXd& linear_curve, long steady_window) {
  RateEstimate est;
  const long total = linear_curve.size();
  if (total < 2) return est;

  const double ss_db = steady_state_db(linear_curve, steady_window);
  const double first_db = to_db(std::max(linear_curve[0], kDbFloor));
  if (!(first_db >= ss_db + 3.0)) return est;  // no usable transient

  long end = total - 1;
  for (long n = 0; n < total; ++n) {
    if (to_db(std::max(linear_curve[n], kDbFloor)) <= ss_db + 5.0) {
      end = n;
      break;
    }
  }
  if (end < 1) return est;

  // ordinary least squares on the dB curve over [0, end]
  const double count = static_cast<double>(end + 1);
  double sum_x = 0.0, sum_y = 0.0, sum_xx = 0.0, sum_xy = 0.0;
  for (long n = 0; n <= end; ++n) {
    const double x = static_cast<double>(n);
    const double y = to_db(std::max(linear_curve[n], kDbFloor));
    sum_x += x;
    sum_y += y;
    sum_xx += x * x;
    sum_xy += x * y;
  }
  const double denom = count * sum_xx - sum_x * sum_x;
  if (denom == 0.0) return est;
  est.defined = true;
  est.db_per_iteration = (count * sum_xy - sum_x * sum_y) / denom;
  est.region_end = end;
  return est;
}

RateEstimate convergence_rate(const LearningCurve& curve, long steady_window) {
  return convergence_rate(curve.nmsd, steady_window);
}

}  // namespace diffnet

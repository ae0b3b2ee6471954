#include "diffnet/diffusion.hpp"

#include <stdexcept>

namespace diffnet {

Strategy strategy_from_string(const std::string& name) {
  if (name == "datc") return Strategy::kDatc;
  if (name == "atc") return Strategy::kAtc;
  if (name == "noncooperative") return Strategy::kNoncooperative;
  throw std::invalid_argument("unknown strategy: " + name);
}

std::string to_string(Strategy strategy) {
  switch (strategy) {
    case Strategy::kDatc: return "datc";
    case Strategy::kAtc: return "atc";
    case Strategy::kNoncooperative: return "noncooperative";
  }
  return "?";
}

namespace {

std::vector<Eigen::VectorXd> zero_estimates(const std::vector<NlmsFilter>& filters) {
  std::vector<Eigen::VectorXd> out;
  out.reserve(filters.size());
  for (const auto& f : filters) out.push_back(Eigen::VectorXd::Zero(f.psi().size()));
  return out;
}

}  // namespace

Network::Network(NetworkTopology topology, Strategy strategy, std::vector<NlmsFilter> filters,
                 CombinerMatrix static_weights)
    : topology_(std::move(topology)),
      strategy_(strategy),
      filters_(std::move(filters)),
      static_weights_(std::move(static_weights)) {
  if (static_cast<int>(filters_.size()) != topology_.num_nodes()) {
    throw std::invalid_argument("network: one filter per node required");
  }
  const auto violations = validate_combiners(static_weights_, topology_);
  if (!violations.empty()) {
    throw std::invalid_argument("network: invalid static combiners: " +
                                violations.front().describe());
  }
  w_ = zero_estimates(filters_);
  w_next_ = w_;
  last_error_.assign(filters_.size(), 0.0);
  last_output_.assign(filters_.size(), 0.0);
}

Network::Network(NetworkTopology topology, std::vector<NlmsFilter> filters,
                 const AdaptiveCombinerParams& params)
    : topology_(std::move(topology)),
      strategy_(Strategy::kDatc),
      filters_(std::move(filters)),
      adaptive_(true),
      adaptive_kind_(params.kind) {
  if (static_cast<int>(filters_.size()) != topology_.num_nodes()) {
    throw std::invalid_argument("network: one filter per node required");
  }
  for (int k = 0; k < topology_.num_nodes(); ++k) {
    const int nbar = static_cast<int>(topology_.neighbors(k).size());
    if (nbar == 0) {
      throw std::invalid_argument("network: adaptive combiners need at least one neighbor");
    }
    const Eigen::VectorXd initial =
        Eigen::VectorXd::Constant(nbar, 1.0 / topology_.closed_degree(k));
    if (params.kind == AdaptiveCombinerParams::Kind::kApa) {
      apa_.emplace_back(nbar, params.apa_order, params.apa_step, params.apa_regularizer,
                        initial);
    } else {
      ls_.emplace_back(nbar, params.ls_forgetting, params.ls_regularizer, initial);
    }
  }
  w_ = zero_estimates(filters_);
  w_next_ = w_;
  last_error_.assign(filters_.size(), 0.0);
  last_output_.assign(filters_.size(), 0.0);
}

double Network::self_weight(int k) const {
  if (!adaptive_) return static_weights_.weights(k, k);
  return adaptive_kind_ == AdaptiveCombinerParams::Kind::kApa ? apa_[k].weights().self_weight()
                                                              : ls_[k].weights().self_weight();
}

Eigen::VectorXd Network::neighbor_weights(int k) const {
  if (!adaptive_) {
    const auto& nb = topology_.neighbors(k);
    Eigen::VectorXd out(nb.size());
    for (size_t p = 0; p < nb.size(); ++p) out[p] = static_weights_.weights(nb[p], k);
    return out;
  }
  return adaptive_kind_ == AdaptiveCombinerParams::Kind::kApa ? apa_[k].weights().cbar
                                                              : ls_[k].weights().cbar;
}

Eigen::MatrixXd Network::combiner_snapshot() const {
  const int n = topology_.num_nodes();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    out(k, k) = self_weight(k);
    const Eigen::VectorXd nbw = neighbor_weights(k);
    const auto& nb = topology_.neighbors(k);
    for (size_t p = 0; p < nb.size(); ++p) out(nb[p], k) = nbw[p];
  }
  return out;
}

void Network::check_measurements(const std::vector<Measurement>& measurements) const {
  if (static_cast<int>(measurements.size()) != topology_.num_nodes()) {
    throw std::invalid_argument("network: one measurement per node required");
  }
  for (size_t k = 0; k < measurements.size(); ++k) {
    if (measurements[k].u.size() != filters_[k].psi().size()) {
      throw std::invalid_argument("network: regressor dimension mismatch at node " +
                                  std::to_string(k));
    }
  }
}

void Network::step(const std::vector<Measurement>& measurements) {
  check_measurements(measurements);
  const int n = topology_.num_nodes();
  ++iteration_;

  // adaptation phase
  for (int k = 0; k < n; ++k) {
    const NlmsFilter::Result r =
        strategy_ == Strategy::kAtc ? filters_[k].adapt_from(w_[k], measurements[k].u,
                                                             measurements[k].d)
                                    : filters_[k].adapt(measurements[k].u, measurements[k].d);
    last_error_[k] = r.error;
    last_output_[k] = r.output;
  }

  // combiner update phase (decoupled scheme with adaptive weights)
  if (adaptive_) {
    for (int k = 0; k < n; ++k) {
      const OutputDifferences od = output_differences(w_, topology_.neighbors(k),
                                                      last_output_[k], measurements[k].u);
      if (adaptive_kind_ == AdaptiveCombinerParams::Kind::kApa) {
        apa_[k].update(od.ytilde, last_error_[k]);
      } else {
        ls_[k].update(od.ytilde, last_error_[k]);
      }
    }
  }

  // combination phase; w_ still holds the previous iteration's estimates
  switch (strategy_) {
    case Strategy::kNoncooperative:
      for (int k = 0; k < n; ++k) w_next_[k] = filters_[k].psi();
      break;
    case Strategy::kDatc:
      for (int k = 0; k < n; ++k) {
        Eigen::VectorXd& wk = w_next_[k];
        wk = self_weight(k) * filters_[k].psi();
        const Eigen::VectorXd nbw = neighbor_weights(k);
        const auto& nb = topology_.neighbors(k);
        for (size_t p = 0; p < nb.size(); ++p) wk.noalias() += nbw[p] * w_[nb[p]];
      }
      break;
    case Strategy::kAtc:
      for (int k = 0; k < n; ++k) {
        Eigen::VectorXd& wk = w_next_[k];
        wk = static_weights_.weights(k, k) * filters_[k].psi();
        for (int l : topology_.neighbors(k)) {
          wk.noalias() += static_weights_.weights(l, k) * filters_[l].psi();
        }
      }
      break;
  }
  std::swap(w_, w_next_);
}

}  // namespace diffnet

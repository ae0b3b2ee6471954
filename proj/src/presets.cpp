#include "diffnet/presets.hpp"

#include <stdexcept>

namespace diffnet {

namespace {

// 15-node heterogeneous network: odd nodes adapt slowly (mu = 0.1), even
// nodes fast (mu = 1); noise powers are drawn once per seed, uniform on
// [0, 0.4], and frozen into the resolved scenario.
ScenarioConfig base_15node(uint64_t seed) {
  ScenarioConfig cfg;
  cfg.name = "base-15node";
  cfg.topology.kind = TopologySource::Kind::kBuiltin15;
  cfg.strategy = Strategy::kDatc;
  cfg.combiners.kind = CombinerSetup::Kind::kStatic;
  cfg.combiners.rule = CombinerRule::kMetropolis;
  cfg.step_sizes.resize(15);
  for (int k = 0; k < 15; ++k) cfg.step_sizes[k] = (k % 2 == 1) ? 0.1 : 1.0;
  cfg.nlms_regularizer = 1e-6;
  cfg.filter_length = 50;
  cfg.noise_uniform_max = 0.4;
  cfg.input_variance = Eigen::VectorXd::Constant(1, 1.0);
  cfg.regressor_model = RegressorModel::kIidGaussian;
  cfg.iterations = 20000;
  cfg.runs = 100;
  cfg.seed = seed;
  return cfg;
}

ScenarioConfig validation_scaling(uint64_t seed, bool slow_steps, bool low_noise,
                                  const std::string& name) {
  ScenarioConfig cfg = base_15node(seed).resolved();
  cfg.name = name;
  if (slow_steps) {
    cfg.step_sizes *= 0.1;
    cfg.iterations = 60000;  // slower modes need longer to settle
  }
  if (low_noise) cfg.noise_variance *= 0.1;
  return cfg;
}

ScenarioConfig tracking_validation(uint64_t seed, double tr_q, const std::string& name) {
  ScenarioConfig cfg = base_15node(seed).resolved();
  cfg.name = name;
  cfg.tracking_cov_trace = tr_q;
  return cfg;
}

void apply_algorithm(ScenarioConfig& cfg, const std::string& algorithm, int apa_order,
                     double apa_reg, double ls_forgetting, double ls_reg) {
  if (algorithm == "datc-apa") {
    cfg.strategy = Strategy::kDatc;
    cfg.combiners.kind = CombinerSetup::Kind::kApa;
    cfg.combiners.adaptive.kind = AdaptiveCombinerParams::Kind::kApa;
    cfg.combiners.adaptive.apa_order = apa_order;
    cfg.combiners.adaptive.apa_step = 1.0;
    cfg.combiners.adaptive.apa_regularizer = apa_reg;
  } else if (algorithm == "datc-ls") {
    cfg.strategy = Strategy::kDatc;
    cfg.combiners.kind = CombinerSetup::Kind::kLs;
    cfg.combiners.adaptive.kind = AdaptiveCombinerParams::Kind::kLs;
    cfg.combiners.adaptive.ls_forgetting = ls_forgetting;
    cfg.combiners.adaptive.ls_regularizer = ls_reg;
  } else if (algorithm == "datc-uniform") {
    cfg.strategy = Strategy::kDatc;
    cfg.combiners.kind = CombinerSetup::Kind::kStatic;
    cfg.combiners.rule = CombinerRule::kUniform;
  } else if (algorithm == "datc-metropolis") {
    cfg.strategy = Strategy::kDatc;
    cfg.combiners.kind = CombinerSetup::Kind::kStatic;
    cfg.combiners.rule = CombinerRule::kMetropolis;
  } else if (algorithm == "atc-metropolis") {
    cfg.strategy = Strategy::kAtc;
    cfg.combiners.kind = CombinerSetup::Kind::kStatic;
    cfg.combiners.rule = CombinerRule::kMetropolis;
  } else if (algorithm == "noncooperative") {
    cfg.strategy = Strategy::kNoncooperative;
    cfg.combiners.kind = CombinerSetup::Kind::kStatic;
    cfg.combiners.rule = CombinerRule::kUniform;  // unused by the strategy
  } else {
    throw std::invalid_argument("unknown comparison algorithm: " + algorithm);
  }
}

ScenarioConfig comparison_preset(uint64_t seed, const std::string& regime,
                                 const std::string& algorithm) {
  ScenarioConfig cfg = base_15node(seed);
  cfg.name = regime + "-" + algorithm;
  if (regime == "stationary") {
    apply_algorithm(cfg, algorithm, 500, 1e-6, 0.99, 1e-12);
  } else if (regime == "tracking-fast") {
    cfg.tracking_cov_trace = 1e-4;
    apply_algorithm(cfg, algorithm, 10, 1e-6, 0.9999, 1e-10);
  } else if (regime == "tracking-slow") {
    cfg.tracking_cov_trace = 1e-8;
    cfg.iterations = 100000;
    apply_algorithm(cfg, algorithm, 500, 1e-6, 0.99, 1e-10);
  } else {
    throw std::invalid_argument("unknown comparison regime: " + regime);
  }
  return cfg;
}

ScenarioConfig two_node_toy(uint64_t seed) {
  ScenarioConfig cfg;
  cfg.name = "two-node-toy";
  cfg.topology.kind = TopologySource::Kind::kEdges;
  cfg.topology.num_nodes = 2;
  cfg.topology.edges = {{0, 1}};
  cfg.strategy = Strategy::kDatc;
  cfg.combiners.kind = CombinerSetup::Kind::kStatic;
  cfg.combiners.rule = CombinerRule::kUniform;
  cfg.step_sizes.resize(2);
  cfg.step_sizes << 0.1, 1.0;
  cfg.nlms_regularizer = 1e-6;
  cfg.filter_length = 50;
  cfg.noise_variance = Eigen::VectorXd::Constant(1, 0.01);
  cfg.input_variance = Eigen::VectorXd::Constant(1, 1.0);
  cfg.iterations = 4000;
  cfg.runs = 50;
  cfg.seed = seed;
  return cfg;
}

std::vector<PresetInfo> build_registry() {
  std::vector<PresetInfo> reg;
  reg.push_back({"two-node-toy", "heterogeneous two-node network, fixed uniform combiners",
                 two_node_toy});
  reg.push_back({"validation-a", "15-node model check: base steps, base noise",
                 [](uint64_t s) { return validation_scaling(s, false, false, "validation-a"); }});
  reg.push_back({"validation-b", "15-node model check: steps / 10, base noise",
                 [](uint64_t s) { return validation_scaling(s, true, false, "validation-b"); }});
  reg.push_back({"validation-c", "15-node model check: base steps, noise / 10",
                 [](uint64_t s) { return validation_scaling(s, false, true, "validation-c"); }});
  reg.push_back({"validation-d", "15-node model check: steps / 10, noise / 10",
                 [](uint64_t s) { return validation_scaling(s, true, true, "validation-d"); }});
  reg.push_back({"tracking-validation-fast", "15-node model check, random walk Tr{Q} = 1e-4",
                 [](uint64_t s) { return tracking_validation(s, 1e-4, "tracking-validation-fast"); }});
  reg.push_back({"tracking-validation-medium", "15-node model check, random walk Tr{Q} = 1e-6",
                 [](uint64_t s) { return tracking_validation(s, 1e-6, "tracking-validation-medium"); }});
  reg.push_back({"tracking-validation-slow", "15-node model check, random walk Tr{Q} = 1e-8",
                 [](uint64_t s) { return tracking_validation(s, 1e-8, "tracking-validation-slow"); }});
  for (const std::string regime : {"stationary", "tracking-fast", "tracking-slow"}) {
    for (const std::string algorithm : {"datc-apa", "datc-ls", "datc-uniform",
                                        "datc-metropolis", "atc-metropolis", "noncooperative"}) {
      reg.push_back({regime + "-" + algorithm, regime + " comparison: " + algorithm,
                     [regime, algorithm](uint64_t s) {
                       return comparison_preset(s, regime, algorithm);
                     }});
    }
  }
  return reg;
}

}  // namespace

const std::vector<PresetInfo>& preset_registry() {
  static const std::vector<PresetInfo> registry = build_registry();
  return registry;
}

bool preset_exists(const std::string& name) {
  for (const auto& p : preset_registry()) {
    if (p.name == name) return true;
  }
  return false;
}

ScenarioConfig make_preset(const std::string& name, uint64_t seed) {
  for (const auto& p : preset_registry()) {
    if (p.name == name) return p.make(seed);
  }
  throw std::invalid_argument("unknown preset: " + name +
                              " (run the preset listing to see what is available)");
}

}  // namespace diffnet

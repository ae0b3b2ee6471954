#include "diffnet/scenario.hpp"

#include <fstream>
#include <stdexcept>

namespace diffnet {

using nlohmann::json;

NetworkTopology TopologySource::build() const {
  switch (kind) {
    case Kind::kBuiltin15:
      return builtin_topology_15();
    case Kind::kEdges:
      return NetworkTopology(num_nodes, edges);
    case Kind::kFile:
      return load_edge_list(path, num_nodes);
  }
  throw std::logic_error("topology source: bad kind");
}

namespace {

Eigen::VectorXd broadcast(const Eigen::VectorXd& v, int n) {
  if (v.size() == n) return v;
  if (v.size() == 1) return Eigen::VectorXd::Constant(n, v[0]);
  throw std::invalid_argument("vector length must be 1 or match the node count");
}

Eigen::VectorXd vector_from_json(const json& j) {
  if (j.is_number()) {
    Eigen::VectorXd v(1);
    v[0] = j.get<double>();
    return v;
  }
  const auto values = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(values.data(), values.size());
}

json vector_to_json(const Eigen::VectorXd& v) {
  return json(std::vector<double>(v.data(), v.data() + v.size()));
}

}  // namespace

std::vector<std::string> ScenarioConfig::validate() const {
  std::vector<std::string> problems;
  auto add = [&problems](const std::string& p) { problems.push_back(p); };

  if (schema_version != 1) add("schema_version: only version 1 is supported");

  int n = -1;
  try {
    n = topology.build().num_nodes();
  } catch (const std::exception& e) {
    add(std::string("topology: ") + e.what());
  }
  auto length_ok = [n](const Eigen::VectorXd& v) {
    return v.size() == 1 || (n > 0 && v.size() == n);
  };

  if (step_sizes.size() == 0) {
    add("adaptation.step_sizes: missing");
  } else {
    if (!length_ok(step_sizes)) add("adaptation.step_sizes: length must be 1 or the node count");
    if ((step_sizes.array() <= 0.0).any() || (step_sizes.array() >= 2.0).any()) {
      add("adaptation.step_sizes: entries must lie in (0, 2)");
    }
  }
  if (nlms_regularizer < 0.0) add("adaptation.regularizer: must be >= 0");

  if (filter_length < 1) add("environment.filter_length: must be >= 1");
  if (w_init.size() != 0 && w_init.size() != filter_length) {
    add("environment.w_init: length must match filter_length");
  }
  if (noise_variance.size() == 0 && noise_uniform_max < 0.0) {
    add("environment.noise_variance: missing (give values or a uniform draw bound)");
  }
  if (noise_variance.size() != 0) {
    if (!length_ok(noise_variance)) add("environment.noise_variance: bad length");
    if ((noise_variance.array() < 0.0).any()) add("environment.noise_variance: must be >= 0");
  }
  if (input_variance.size() == 0) {
    add("environment.input_variance: missing");
  } else {
    if (!length_ok(input_variance)) add("environment.input_variance: bad length");
    if ((input_variance.array() < 0.0).any()) add("environment.input_variance: must be >= 0");
  }
  if (tracking_cov_trace < 0.0) add("environment.tracking_cov_trace: must be >= 0");
  if (q_diag.size() != 0) {
    if (q_diag.size() != filter_length) add("environment.q_diag: length must match filter_length");
    if ((q_diag.array() < 0.0).any()) add("environment.q_diag: entries must be >= 0");
  }

  switch (combiners.kind) {
    case CombinerSetup::Kind::kApa:
      if (combiners.adaptive.apa_order < 1) add("combiners.order: must be >= 1");
      if (combiners.adaptive.apa_step <= 0.0) add("combiners.step_size: must be > 0");
      if (combiners.adaptive.apa_regularizer <= 0.0) add("combiners.regularizer: must be > 0");
      break;
    case CombinerSetup::Kind::kLs:
      if (combiners.adaptive.ls_forgetting < 0.0 || combiners.adaptive.ls_forgetting >= 1.0) {
        add("combiners.forgetting: must lie in [0, 1)");
      }
      if (combiners.adaptive.ls_regularizer <= 0.0) add("combiners.regularizer: must be > 0");
      break;
    case CombinerSetup::Kind::kMatrix:
      if (n > 0 && (combiners.matrix.rows() != n || combiners.matrix.cols() != n)) {
        add("combiners.weights: matrix shape must match the node count");
      }
      break;
    case CombinerSetup::Kind::kStatic:
      break;
  }
  if (strategy == Strategy::kAtc && combiners.is_adaptive()) {
    add("strategy: adaptive combiners are only supported by the decoupled scheme");
  }

  if (iterations < 0) add("iterations: must be >= 0");
  if (runs < 1) add("runs: must be >= 1");
  if (steady_state_window_fraction <= 0.0 || steady_state_window_fraction > 1.0) {
    add("steady_state_window_fraction: must lie in (0, 1]");
  }
  return problems;
}

bool ScenarioConfig::is_resolved() const {
  int n = 0;
  try {
    n = topology.build().num_nodes();
  } catch (const std::exception&) {
    return false;
  }
  return w_init.size() == filter_length && noise_variance.size() == n &&
         input_variance.size() == n && step_sizes.size() == n && noise_uniform_max < 0.0;
}

ScenarioConfig ScenarioConfig::resolved() const {
  const auto problems = validate();
  if (!problems.empty()) {
    std::string all = "invalid scenario:";
    for (const auto& p : problems) all += "\n  - " + p;
    throw std::invalid_argument(all);
  }
  ScenarioConfig out = *this;
  const int n = topology.build().num_nodes();
  out.step_sizes = broadcast(step_sizes, n);
  out.input_variance = broadcast(input_variance, n);
  if (noise_variance.size() != 0) {
    out.noise_variance = broadcast(noise_variance, n);
  } else {
    RngStream rng(derive_key(seed, {kStreamNoiseVar}));
    out.noise_variance.resize(n);
    for (int k = 0; k < n; ++k) out.noise_variance[k] = noise_uniform_max * rng.next_double();
  }
  out.noise_uniform_max = -1.0;
  if (w_init.size() == 0) {
    RngStream rng(derive_key(seed, {kStreamWInit}));
    out.w_init.resize(filter_length);
    for (int i = 0; i < filter_length; ++i) out.w_init[i] = 2.0 * rng.next_double() - 1.0;
  }
  return out;
}

EnvironmentConfig ScenarioConfig::environment_config() const {
  EnvironmentConfig env;
  env.filter_length = filter_length;
  env.w_init = w_init;
  env.tracking_cov_trace = q_diag.size() != 0 ? q_diag.sum() : tracking_cov_trace;
  env.q_diag = q_diag;
  env.input_variance = input_variance;
  env.noise_variance = noise_variance;
  env.regressor_model = regressor_model;
  env.seed = seed;
  return env;
}

std::vector<NlmsFilter> ScenarioConfig::make_filters() const {
  std::vector<NlmsFilter> filters;
  filters.reserve(step_sizes.size());
  for (Eigen::Index k = 0; k < step_sizes.size(); ++k) {
    filters.emplace_back(filter_length, step_sizes[k], nlms_regularizer);
  }
  return filters;
}

CombinerMatrix ScenarioConfig::static_combiner_matrix(const NetworkTopology& topo) const {
  switch (combiners.kind) {
    case CombinerSetup::Kind::kStatic:
      return static_combiners(topo, combiners.rule);
    case CombinerSetup::Kind::kMatrix:
      return CombinerMatrix{combiners.matrix};
    default:
      throw std::logic_error("scenario: combiners are adaptive, no static matrix available");
  }
}

TheoryInputs ScenarioConfig::theory_inputs() const {
  if (combiners.is_adaptive()) {
    throw std::invalid_argument(
        "theory model requires static combiners; this scenario uses an adaptive rule");
  }
  const NetworkTopology topo = topology.build();
  TheoryInputs inputs;
  inputs.combiners = static_combiner_matrix(topo);
  inputs.step_sizes = step_sizes;
  inputs.noise_variance = noise_variance;
  inputs.input_variance = input_variance;
  inputs.filter_length = filter_length;
  inputs.tracking_cov_trace = q_diag.size() != 0 ? q_diag.sum() : tracking_cov_trace;
  return inputs;
}

ScenarioConfig ScenarioConfig::from_json(const json& j) {
  ScenarioConfig cfg;
  cfg.schema_version = j.value("schema_version", 1);
  cfg.name = j.value("name", std::string("unnamed"));

  if (j.contains("topology")) {
    const json& t = j.at("topology");
    const std::string source = t.value("source", std::string("builtin15"));
    if (source == "builtin15") {
      cfg.topology.kind = TopologySource::Kind::kBuiltin15;
    } else if (source == "edges") {
      cfg.topology.kind = TopologySource::Kind::kEdges;
      cfg.topology.num_nodes = t.at("num_nodes").get<int>();
      for (const auto& e : t.at("edges")) {
        cfg.topology.edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
      }
    } else if (source == "file") {
      cfg.topology.kind = TopologySource::Kind::kFile;
      cfg.topology.path = t.at("path").get<std::string>();
      cfg.topology.num_nodes = t.value("num_nodes", -1);
    } else {
      throw std::invalid_argument("scenario: unknown topology source: " + source);
    }
  }

  cfg.strategy = strategy_from_string(j.value("strategy", std::string("datc")));

  if (j.contains("combiners")) {
    const json& c = j.at("combiners");
    const std::string kind = c.at("kind").get<std::string>();
    if (kind == "static") {
      cfg.combiners.kind = CombinerSetup::Kind::kStatic;
      cfg.combiners.rule = combiner_rule_from_string(c.at("rule").get<std::string>());
    } else if (kind == "apa") {
      cfg.combiners.kind = CombinerSetup::Kind::kApa;
      cfg.combiners.adaptive.kind = AdaptiveCombinerParams::Kind::kApa;
      cfg.combiners.adaptive.apa_order = c.at("order").get<int>();
      cfg.combiners.adaptive.apa_step = c.value("step_size", 1.0);
      cfg.combiners.adaptive.apa_regularizer = c.value("regularizer", 1e-6);
    } else if (kind == "ls") {
      cfg.combiners.kind = CombinerSetup::Kind::kLs;
      cfg.combiners.adaptive.kind = AdaptiveCombinerParams::Kind::kLs;
      cfg.combiners.adaptive.ls_forgetting = c.at("forgetting").get<double>();
      cfg.combiners.adaptive.ls_regularizer = c.value("regularizer", 1e-12);
    } else if (kind == "matrix") {
      cfg.combiners.kind = CombinerSetup::Kind::kMatrix;
      const auto rows = c.at("weights").get<std::vector<std::vector<double>>>();
      const int n = static_cast<int>(rows.size());
      cfg.combiners.matrix.resize(n, n);
      for (int r = 0; r < n; ++r) {
        if (static_cast<int>(rows[r].size()) != n) {
          throw std::invalid_argument("scenario: combiner weight matrix must be square");
        }
        for (int col = 0; col < n; ++col) cfg.combiners.matrix(r, col) = rows[r][col];
      }
    } else {
      throw std::invalid_argument("scenario: unknown combiner kind: " + kind);
    }
  }

  if (j.contains("adaptation")) {
    const json& a = j.at("adaptation");
    if (a.contains("step_sizes")) cfg.step_sizes = vector_from_json(a.at("step_sizes"));
    cfg.nlms_regularizer = a.value("regularizer", 1e-6);
  }

  if (j.contains("environment")) {
    const json& e = j.at("environment");
    cfg.filter_length = e.value("filter_length", 0);
    if (e.contains("w_init")) cfg.w_init = vector_from_json(e.at("w_init"));
    if (e.contains("noise_variance")) {
      const json& nv = e.at("noise_variance");
      if (nv.is_object()) {
        cfg.noise_uniform_max = nv.at("uniform_max").get<double>();
      } else {
        cfg.noise_variance = vector_from_json(nv);
      }
    }
    if (e.contains("input_variance")) cfg.input_variance = vector_from_json(e.at("input_variance"));
    cfg.tracking_cov_trace = e.value("tracking_cov_trace", 0.0);
    if (e.contains("q_diag")) cfg.q_diag = vector_from_json(e.at("q_diag"));
    cfg.regressor_model =
        regressor_model_from_string(e.value("regressor_model", std::string("iid_gaussian")));
  }

  cfg.iterations = j.value("iterations", 0L);
  cfg.runs = j.value("runs", 1);
  cfg.seed = j.value("seed", static_cast<uint64_t>(1));
  cfg.steady_state_window_fraction = j.value("steady_state_window_fraction", 0.1);
  return cfg;
}

ScenarioConfig ScenarioConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("scenario: cannot open " + path);
  json j;
  in >> j;
  return from_json(j);
}

json ScenarioConfig::to_json() const {
  json j;
  j["schema_version"] = schema_version;
  j["name"] = name;

  json t;
  switch (topology.kind) {
    case TopologySource::Kind::kBuiltin15:
      t["source"] = "builtin15";
      break;
    case TopologySource::Kind::kEdges: {
      t["source"] = "edges";
      t["num_nodes"] = topology.num_nodes;
      json edges = json::array();
      for (const auto& [a, b] : topology.edges) edges.push_back({a, b});
      t["edges"] = edges;
      break;
    }
    case TopologySource::Kind::kFile:
      t["source"] = "file";
      t["path"] = topology.path;
      t["num_nodes"] = topology.num_nodes;
      break;
  }
  j["topology"] = t;
  j["strategy"] = to_string(strategy);

  json c;
  switch (combiners.kind) {
    case CombinerSetup::Kind::kStatic:
      c["kind"] = "static";
      c["rule"] = to_string(combiners.rule);
      break;
    case CombinerSetup::Kind::kApa:
      c["kind"] = "apa";
      c["order"] = combiners.adaptive.apa_order;
      c["step_size"] = combiners.adaptive.apa_step;
      c["regularizer"] = combiners.adaptive.apa_regularizer;
      break;
    case CombinerSetup::Kind::kLs:
      c["kind"] = "ls";
      c["forgetting"] = combiners.adaptive.ls_forgetting;
      c["regularizer"] = combiners.adaptive.ls_regularizer;
      break;
    case CombinerSetup::Kind::kMatrix: {
      c["kind"] = "matrix";
      json rows = json::array();
      for (Eigen::Index r = 0; r < combiners.matrix.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index col = 0; col < combiners.matrix.cols(); ++col) {
          row.push_back(combiners.matrix(r, col));
        }
        rows.push_back(row);
      }
      c["weights"] = rows;
      break;
    }
  }
  j["combiners"] = c;

  j["adaptation"] = {{"step_sizes", vector_to_json(step_sizes)},
                     {"regularizer", nlms_regularizer}};

  json e;
  e["filter_length"] = filter_length;
  if (w_init.size() != 0) e["w_init"] = vector_to_json(w_init);
  if (noise_variance.size() != 0) {
    e["noise_variance"] = vector_to_json(noise_variance);
  } else if (noise_uniform_max >= 0.0) {
    e["noise_variance"] = {{"uniform_max", noise_uniform_max}};
  }
  e["input_variance"] = vector_to_json(input_variance);
  e["tracking_cov_trace"] = tracking_cov_trace;
  if (q_diag.size() != 0) e["q_diag"] = vector_to_json(q_diag);
  e["regressor_model"] = to_string(regressor_model);
  j["environment"] = e;

  j["iterations"] = iterations;
  j["runs"] = runs;
  j["seed"] = seed;
  j["steady_state_window_fraction"] = steady_state_window_fraction;
  return j;
}

}  // namespace diffnet

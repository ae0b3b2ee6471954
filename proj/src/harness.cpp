#include "diffnet/harness.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "diffnet/presets.hpp"

namespace diffnet {

namespace {

// Runs are spread over a fixed number of accumulation lanes (run r goes to
// lane r mod kLanes, processed in increasing r). Lane results are merged in
// lane order, so the floating-point result is independent of the number of
// worker threads actually used.
constexpr int kLanes = 8;

int resolve_workers(const RunOptions& options) {
  if (!options.parallel) return 1;
  if (options.workers > 0) return options.workers;
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

long steady_window(const ScenarioConfig& cfg) {
  const long w = static_cast<long>(cfg.steady_state_window_fraction * cfg.iterations);
  return std::max<long>(w, 1);
}

void simulate_one_run(const ScenarioConfig& resolved, const NetworkTopology& topo,
                      uint64_t run_index, CurveAccumulator& acc,
                      std::vector<Measurement>& scratch_meas, Eigen::VectorXd& scratch_dev) {
  Environment env(resolved.environment_config(), topo.num_nodes(), run_index);
  Network net = make_network(resolved, topo);
  const int n = topo.num_nodes();
  for (long iter = 0; iter < resolved.iterations; ++iter) {
    env.step();
    env.draw_measurements(scratch_meas);
    net.step(scratch_meas);
    for (int k = 0; k < n; ++k) {
      scratch_dev[k] = (env.w_true() - net.combined_estimate(k)).squaredNorm();
    }
    acc.add_sample(iter, scratch_dev);
  }
  acc.finish_run();
}

}  // namespace

Network make_network(const ScenarioConfig& resolved, const NetworkTopology& topology) {
  if (resolved.combiners.is_adaptive()) {
    return Network(topology, resolved.make_filters(), resolved.combiners.adaptive);
  }
  return Network(topology, resolved.strategy, resolved.make_filters(),
                 resolved.static_combiner_matrix(topology));
}

ExperimentResult run_experiment(const ScenarioConfig& config, const RunOptions& options) {
  ExperimentResult result;
  result.resolved = config.resolved();
  const ScenarioConfig& cfg = result.resolved;
  const NetworkTopology topo = cfg.topology.build();
  const int n = topo.num_nodes();

  std::vector<CurveAccumulator> lanes;
  lanes.reserve(kLanes);
  for (int lane = 0; lane < kLanes; ++lane) lanes.emplace_back(cfg.iterations, n);

  const int workers = resolve_workers(options);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(workers) if (workers > 1)
#endif
  for (int lane = 0; lane < kLanes; ++lane) {
    std::vector<Measurement> meas;
    Eigen::VectorXd dev(n);
    for (int run = lane; run < cfg.runs; run += kLanes) {
      simulate_one_run(cfg, topo, static_cast<uint64_t>(run), lanes[lane], meas, dev);
    }
  }

  CurveAccumulator total(cfg.iterations, n);
  for (const auto& lane : lanes) total.merge(lane);
  result.curve = total.finalize();

  if (cfg.iterations > 0) {
    result.steady_state_nmsd_db = steady_state_db(result.curve, steady_window(cfg));
    result.rate = convergence_rate(result.curve, steady_window(cfg));
  } else {
    result.steady_state_nmsd_db = std::numeric_limits<double>::quiet_NaN();
  }
  return result;
}

void write_curve_csv(const std::string& path, const LearningCurve& curve) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "iteration,nmsd_db";
  for (int k = 0; k < curve.num_nodes(); ++k) out << ",msd_db_" << k;
  out << "\n";
  for (long i = 0; i < curve.iterations(); ++i) {
    out << (i + 1) << ',' << format_double(to_db(curve.nmsd[i]));
    for (int k = 0; k < curve.num_nodes(); ++k) {
      out << ',' << format_double(to_db(curve.msd(i, k)));
    }
    out << "\n";
  }
}

void write_metadata_json(const std::string& path, const ExperimentResult& result,
                         const std::string& curve_csv_name) {
  nlohmann::json j = result.resolved.to_json();
  nlohmann::json res;
  res["steady_state_nmsd_db"] = result.steady_state_nmsd_db;
  if (result.rate.defined) {
    res["convergence_rate_db_per_iter"] = result.rate.db_per_iteration;
    res["rate_region_end"] = result.rate.region_end;
  } else {
    res["convergence_rate_db_per_iter"] = nullptr;
  }
  res["curve_csv"] = curve_csv_name;
  res["monte_carlo_runs"] = result.curve.runs;
  j["results"] = res;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << "\n";
}

void write_plot_sidecar(const std::string& path, const nlohmann::json& description) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << description.dump(2) << "\n";
}

std::string emit_experiment_files(const std::string& out_dir, const ExperimentResult& result) {
  std::filesystem::create_directories(out_dir);
  const std::string base = out_dir + "/" + result.resolved.name;
  const std::string curve_name = result.resolved.name + "_curve.csv";
  write_curve_csv(base + "_curve.csv", result.curve);
  write_metadata_json(base + "_metadata.json", result, curve_name);
  write_plot_sidecar(base + "_plot.json",
                     {{"kind", "line"},
                      {"title", result.resolved.name},
                      {"data", curve_name},
                      {"x", "iteration"},
                      {"y", "nmsd_db"}});
  return base + "_metadata.json";
}

TheoryRun run_theory(const ScenarioConfig& config, const SteadyStateOptions& options) {
  const ScenarioConfig cfg = config.resolved();
  TheoryRun run;
  const TheoryInputs inputs = cfg.theory_inputs();
  run.stability = mean_stability(inputs);
  run.steady_state = steady_state_msd(inputs, options);
  return run;
}

void write_theory_csv(const std::string& path, const TheoryRun& run) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "entity,msd_db,msd_linear,terms_used,tolerance_reached,truncation_bound,rho_bound,"
         "rho_offdiag_exact\n";
  const auto& ss = run.steady_state;
  for (Eigen::Index k = 0; k < ss.msd_linear.size(); ++k) {
    out << "node_" << k << ',' << format_double(ss.msd_db[k]) << ','
        << format_double(ss.msd_linear[k]) << ',' << ss.terms_used << ','
        << (ss.tolerance_reached ? 1 : 0) << ',' << format_double(ss.truncation_bound) << ','
        << format_double(run.stability.rho_bound) << ','
        << format_double(run.stability.rho_c2_exact) << "\n";
  }
  out << "network," << format_double(ss.nmsd_db) << ',' << format_double(ss.nmsd_linear) << ','
      << ss.terms_used << ',' << (ss.tolerance_reached ? 1 : 0) << ','
      << format_double(ss.truncation_bound) << ',' << format_double(run.stability.rho_bound)
      << ',' << format_double(run.stability.rho_c2_exact) << "\n";
}

void SweepSurface::argmin_ss(int& i, int& j) const {
  Eigen::Index r, c;
  ss_db.minCoeff(&r, &c);
  i = static_cast<int>(r);
  j = static_cast<int>(c);
}

SweepResult sweep_2node(const Sweep2Spec& spec, const RunOptions& options) {
  if (spec.grid < 2) throw std::invalid_argument("sweep: grid must have at least 2 points");
  SweepResult result;
  result.grid_values.resize(spec.grid);
  for (int i = 0; i < spec.grid; ++i) {
    result.grid_values[i] = static_cast<double>(i) / (spec.grid - 1);
  }
  result.datc.ss_db.resize(spec.grid, spec.grid);
  result.datc.rate.resize(spec.grid, spec.grid);
  result.atc.ss_db.resize(spec.grid, spec.grid);
  result.atc.rate.resize(spec.grid, spec.grid);

  ScenarioConfig base;
  base.name = "two-node-sweep-point";
  base.topology.kind = TopologySource::Kind::kEdges;
  base.topology.num_nodes = 2;
  base.topology.edges = {{0, 1}};
  base.combiners.kind = CombinerSetup::Kind::kMatrix;
  base.step_sizes.resize(2);
  base.step_sizes << spec.step_slow, spec.step_fast;
  base.nlms_regularizer = spec.nlms_regularizer;
  base.filter_length = spec.filter_length;
  base.noise_variance = Eigen::VectorXd::Constant(1, spec.noise_variance);
  base.input_variance = Eigen::VectorXd::Constant(1, spec.input_variance);
  base.iterations = spec.iterations;
  base.runs = spec.runs;
  base.seed = spec.seed;
  const ScenarioConfig resolved_base = [&] {
    ScenarioConfig b = base;
    b.combiners.matrix = Eigen::Matrix2d::Identity();
    return b.resolved();
  }();

  const int workers = resolve_workers(options);
  const int tasks = spec.grid * spec.grid;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(workers) if (workers > 1)
#endif
  for (int t = 0; t < tasks; ++t) {
    const int i = t / spec.grid;  // index of c12
    const int j = t % spec.grid;  // index of c21
    const double c12 = result.grid_values[i];
    const double c21 = result.grid_values[j];
    Eigen::Matrix2d weights;
    // column k holds the weights node k assigns; entry (l, k) is c_{lk}
    weights << 1.0 - c21, c12,
               c21,       1.0 - c12;
    for (int variant = 0; variant < 2; ++variant) {
      ScenarioConfig cfg = resolved_base;
      cfg.combiners.matrix = weights;
      cfg.strategy = variant == 0 ? Strategy::kDatc : Strategy::kAtc;
      const ExperimentResult r = run_experiment(cfg, RunOptions{1, false});
      SweepSurface& surface = variant == 0 ? result.datc : result.atc;
      surface.ss_db(i, j) = r.steady_state_nmsd_db;
      surface.rate(i, j) = r.rate.defined ? r.rate.db_per_iteration
                                          : std::numeric_limits<double>::quiet_NaN();
    }
  }
  return result;
}

void write_sweep_csv(const std::string& path, const SweepResult& result) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "c12,c21,strategy,steady_state_nmsd_db,convergence_rate_db_per_iter\n";
  const int g = static_cast<int>(result.grid_values.size());
  for (int i = 0; i < g; ++i) {
    for (int j = 0; j < g; ++j) {
      for (int variant = 0; variant < 2; ++variant) {
        const SweepSurface& s = variant == 0 ? result.datc : result.atc;
        out << format_double(result.grid_values[i]) << ',' << format_double(result.grid_values[j])
            << ',' << (variant == 0 ? "datc" : "atc") << ',' << format_double(s.ss_db(i, j))
            << ',' << format_double(s.rate(i, j)) << "\n";
      }
    }
  }
}

ValidationReport run_validation_suite(uint64_t seed, const RunOptions& options,
                                      int runs_override, const std::string& out_dir) {
  ValidationReport report;
  const SteadyStateOptions theory_opts;

  auto run_entry = [&](const std::string& preset, bool per_node) {
    ScenarioConfig cfg = make_preset(preset, seed);
    if (runs_override > 0) cfg.runs = runs_override;
    const TheoryRun theory = run_theory(cfg, theory_opts);
    const ExperimentResult sim = run_experiment(cfg, options);

    ValidationEntry entry;
    entry.scenario = preset;
    entry.per_node = per_node;
    entry.theory_db = theory.steady_state.msd_db;
    entry.sim_db = per_node_steady_state_db(sim.curve, steady_window(sim.resolved));
    entry.theory_nmsd_db = theory.steady_state.nmsd_db;
    entry.sim_nmsd_db = sim.steady_state_nmsd_db;
    if (per_node) {
      entry.max_abs_diff_db = (entry.theory_db - entry.sim_db).cwiseAbs().maxCoeff();
    } else {
      entry.max_abs_diff_db = std::abs(entry.theory_nmsd_db - entry.sim_nmsd_db);
    }
    report.entries.push_back(std::move(entry));
    if (!out_dir.empty()) emit_experiment_files(out_dir, sim);
  };

  for (const std::string name : {"validation-a", "validation-b", "validation-c", "validation-d"}) {
    run_entry(name, /*per_node=*/true);
  }
  for (const std::string name :
       {"tracking-validation-fast", "tracking-validation-medium", "tracking-validation-slow"}) {
    run_entry(name, /*per_node=*/false);
  }

  report.max_abs_diff_db = 0.0;
  for (const auto& e : report.entries) {
    report.max_abs_diff_db = std::max(report.max_abs_diff_db, e.max_abs_diff_db);
  }
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    write_validation_csv(out_dir + "/validation_report.csv", report);
  }
  return report;
}

void write_validation_csv(const std::string& path, const ValidationReport& report) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "scenario,entity,theory_db,sim_db,abs_diff_db\n";
  for (const auto& e : report.entries) {
    if (e.per_node) {
      for (Eigen::Index k = 0; k < e.theory_db.size(); ++k) {
        out << e.scenario << ",node_" << k << ',' << format_double(e.theory_db[k]) << ','
            << format_double(e.sim_db[k]) << ','
            << format_double(std::abs(e.theory_db[k] - e.sim_db[k])) << "\n";
      }
    }
    out << e.scenario << ",network," << format_double(e.theory_nmsd_db) << ','
        << format_double(e.sim_nmsd_db) << ','
        << format_double(std::abs(e.theory_nmsd_db - e.sim_nmsd_db)) << "\n";
  }
}

const ComparisonEntry* ComparisonReport::find(const std::string& regime,
                                              const std::string& algorithm) const {
  for (const auto& e : entries) {
    if (e.regime == regime && e.algorithm == algorithm) return &e;
  }
  return nullptr;
}

ComparisonReport run_comparison_suite(uint64_t seed, const RunOptions& options,
                                      int runs_override, long iterations_override,
                                      const std::string& out_dir,
                                      const std::vector<std::string>& regimes) {
  static const std::vector<std::string> kAllRegimes = {"stationary", "tracking-fast",
                                                       "tracking-slow"};
  static const std::vector<std::string> kAlgorithms = {
      "datc-apa", "datc-ls", "datc-uniform", "datc-metropolis", "atc-metropolis",
      "noncooperative"};
  const std::vector<std::string>& selected = regimes.empty() ? kAllRegimes : regimes;

  ComparisonReport report;
  for (const auto& regime : selected) {
    std::vector<Eigen::VectorXd> curves;
    long iterations = 0;
    for (const auto& algorithm : kAlgorithms) {
      ScenarioConfig cfg = make_preset(regime + "-" + algorithm, seed);
      if (runs_override > 0) cfg.runs = runs_override;
      if (iterations_override > 0) cfg.iterations = iterations_override;
      const ExperimentResult r = run_experiment(cfg, options);
      ComparisonEntry entry;
      entry.regime = regime;
      entry.algorithm = algorithm;
      entry.steady_state_nmsd_db = r.steady_state_nmsd_db;
      entry.rate = r.rate;
      report.entries.push_back(entry);
      curves.push_back(r.curve.nmsd);
      iterations = r.resolved.iterations;
      if (!out_dir.empty()) emit_experiment_files(out_dir, r);
    }
    if (!out_dir.empty()) {
      std::filesystem::create_directories(out_dir);
      const std::string overlay = out_dir + "/" + regime + "_overlay.csv";
      std::ofstream out(overlay, std::ios::binary);
      if (!out) throw std::runtime_error("cannot write " + overlay);
      out << "iteration";
      for (const auto& a : kAlgorithms) out << ',' << a << "_nmsd_db";
      out << "\n";
      for (long i = 0; i < iterations; ++i) {
        out << (i + 1);
        for (const auto& c : curves) out << ',' << format_double(to_db(c[i]));
        out << "\n";
      }
      write_plot_sidecar(out_dir + "/" + regime + "_overlay_plot.json",
                         {{"kind", "multi-line"},
                          {"title", regime + " comparison"},
                          {"data", regime + "_overlay.csv"},
                          {"x", "iteration"},
                          {"y", "nmsd_db"}});
    }
  }
  return report;
}

}  // namespace diffnet

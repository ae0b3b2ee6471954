#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include "diffnet/harness.hpp"
#include "diffnet/presets.hpp"

namespace diffnet {

namespace {

struct CommonFlags {
  std::string out_dir = "out";
  uint64_t seed = 1;
  bool seed_given = false;
  int runs = -1;
  int workers = 0;
  bool serial = false;
};

void add_common(CLI::App* cmd, CommonFlags& flags, bool with_runs = true) {
  cmd->add_option("--out-dir", flags.out_dir, "Directory for emitted files");
  cmd->add_option("--seed", flags.seed, "Base seed")->each([&flags](const std::string&) {
    flags.seed_given = true;
  });
  if (with_runs) cmd->add_option("--runs", flags.runs, "Override the Monte Carlo run count");
  cmd->add_option("--workers", flags.workers, "Worker thread cap (0 = all)");
  cmd->add_flag("--serial", flags.serial, "Force the serial reference path");
}

ScenarioConfig load_scenario_arg(const std::string& arg, const CommonFlags& flags) {
  ScenarioConfig cfg;
  if (arg.rfind("preset:", 0) == 0) {
    cfg = make_preset(arg.substr(7), flags.seed_given ? flags.seed : 1);
  } else {
    cfg = ScenarioConfig::load(arg);
    if (flags.seed_given) cfg.seed = flags.seed;
  }
  if (flags.runs > 0) cfg.runs = flags.runs;
  return cfg;
}

RunOptions run_options(const CommonFlags& flags) {
  RunOptions opts;
  opts.workers = flags.workers;
  opts.parallel = !flags.serial;
  return opts;
}

int do_simulate(const std::string& scenario_arg, const CommonFlags& flags) {
  ScenarioConfig cfg = load_scenario_arg(scenario_arg, flags);
  const auto problems = cfg.validate();
  if (!problems.empty()) {
    std::cerr << "scenario validation failed:\n";
    for (const auto& p : problems) std::cerr << "  - " << p << "\n";
    return 2;
  }
  const ExperimentResult result = run_experiment(cfg, run_options(flags));
  const std::string meta = emit_experiment_files(flags.out_dir, result);
  std::cout << "scenario: " << result.resolved.name << "\n"
            << "runs: " << result.curve.runs << ", iterations: " << result.resolved.iterations
            << "\n"
            << "steady-state NMSD: " << result.steady_state_nmsd_db << " dB\n";
  if (result.rate.defined) {
    std::cout << "convergence rate: " << result.rate.db_per_iteration << " dB/iter (first "
              << result.rate.region_end + 1 << " iterations)\n";
  } else {
    std::cout << "convergence rate: undefined (no usable transient)\n";
  }
  std::cout << "metadata: " << meta << "\n";
  return 0;
}

int do_theory(const std::string& scenario_arg, const CommonFlags& flags, double tolerance,
              int j_max) {
  ScenarioConfig cfg = load_scenario_arg(scenario_arg, flags);
  SteadyStateOptions opts;
  if (tolerance > 0) opts.tolerance = tolerance;
  if (j_max > 0) opts.j_max = j_max;
  const TheoryRun run = run_theory(cfg, opts);
  std::filesystem::create_directories(flags.out_dir);
  const std::string csv = flags.out_dir + "/" + cfg.name + "_theory.csv";
  write_theory_csv(csv, run);
  std::cout << "scenario: " << cfg.name << "\n"
            << "steady-state NMSD (model): " << run.steady_state.nmsd_db << " dB\n"
            << "series terms: " << run.steady_state.terms_used
            << (run.steady_state.tolerance_reached ? "" : " (stopped by j_max)") << "\n"
            << "rho bound: " << run.stability.rho_bound
            << ", step sizes ok: " << (run.stability.step_ok ? "yes" : "no")
            << ", combiners ok: " << (run.stability.combiner_ok ? "yes" : "no") << "\n"
            << "csv: " << csv << "\n";
  return 0;
}

int do_sweep2(const std::string& grid_spec, const CommonFlags& flags, long iterations,
              bool smoke) {
  Sweep2Spec spec;
  spec.seed = flags.seed_given ? flags.seed : 1;
  if (smoke) {
    spec.grid = 5;
    spec.runs = 10;
    spec.iterations = 2000;
  }
  if (!grid_spec.empty()) {
    const auto x = grid_spec.find('x');
    spec.grid = std::stoi(grid_spec.substr(0, x));  // "21x21" and "21" both accepted
  }
  if (flags.runs > 0) spec.runs = flags.runs;
  if (iterations > 0) spec.iterations = iterations;

  const SweepResult result = sweep_2node(spec, run_options(flags));
  std::filesystem::create_directories(flags.out_dir);
  write_sweep_csv(flags.out_dir + "/sweep2.csv", result);
  write_plot_sidecar(flags.out_dir + "/sweep2_plot.json",
                     {{"kind", "surface"},
                      {"title", "two-node combiner sweep"},
                      {"data", "sweep2.csv"},
                      {"x", "c12"},
                      {"y", "c21"},
                      {"z", "steady_state_nmsd_db"},
                      {"series", "strategy"}});
  int di, dj, ai, aj;
  result.datc.argmin_ss(di, dj);
  result.atc.argmin_ss(ai, aj);
  std::cout << "grid: " << spec.grid << "x" << spec.grid << ", runs/point: " << spec.runs << "\n"
            << "datc min steady-state NMSD: " << result.datc.min_ss_db() << " dB at (c12="
            << result.grid_values[di] << ", c21=" << result.grid_values[dj] << ")\n"
            << "atc  min steady-state NMSD: " << result.atc.min_ss_db() << " dB at (c12="
            << result.grid_values[ai] << ", c21=" << result.grid_values[aj] << ")\n"
            << "csv: " << flags.out_dir << "/sweep2.csv\n";
  return 0;
}

int do_validate(const CommonFlags& flags, double threshold_db) {
  const ValidationReport report = run_validation_suite(flags.seed_given ? flags.seed : 1,
                                                       run_options(flags), flags.runs,
                                                       flags.out_dir);
  for (const auto& e : report.entries) {
    std::cout << e.scenario << ": max |theory - sim| = " << e.max_abs_diff_db << " dB"
              << (e.per_node ? " (per node)" : " (network)") << "\n";
  }
  std::cout << "overall max deviation: " << report.max_abs_diff_db << " dB (threshold "
            << threshold_db << " dB)\n";
  return report.max_abs_diff_db <= threshold_db ? 0 : 1;
}

int do_compare(const CommonFlags& flags, const std::string& regime, long iterations) {
  std::vector<std::string> regimes;
  if (regime != "all") regimes.push_back(regime);
  const ComparisonReport report = run_comparison_suite(flags.seed_given ? flags.seed : 1,
                                                       run_options(flags), flags.runs,
                                                       iterations, flags.out_dir, regimes);
  for (const auto& e : report.entries) {
    std::cout << e.regime << " / " << e.algorithm << ": " << e.steady_state_nmsd_db << " dB";
    if (e.rate.defined) std::cout << " (rate " << e.rate.db_per_iteration << " dB/iter)";
    std::cout << "\n";
  }
  return 0;
}

}  // namespace

int cli_main(int argc, char** argv) {
  CLI::App app{"Simulation and analysis toolkit for adaptive diffusion networks"};
  app.require_subcommand(1);

  CommonFlags flags;
  std::string scenario_arg;
  std::string grid_spec;
  std::string regime = "all";
  double tolerance = -1.0;
  int j_max = -1;
  long iterations = -1;
  bool smoke = false;
  double threshold_db = 2.0;

  CLI::App* simulate = app.add_subcommand("simulate", "Run one scenario and emit its curves");
  simulate->add_option("scenario", scenario_arg,
                       "Scenario JSON path or preset:<name>")->required();
  add_common(simulate, flags);

  CLI::App* theory = app.add_subcommand("theory", "Evaluate the steady-state model");
  theory->add_option("scenario", scenario_arg, "Scenario JSON path or preset:<name>")->required();
  theory->add_option("--tolerance", tolerance, "Series truncation tolerance (linear)");
  theory->add_option("--j-max", j_max, "Series index cap");
  add_common(theory, flags, /*with_runs=*/false);

  CLI::App* sweep = app.add_subcommand("sweep2", "Two-node combiner sweep");
  sweep->add_option("grid", grid_spec, "Grid spec, e.g. 21x21");
  sweep->add_option("--iterations", iterations, "Iterations per grid point");
  sweep->add_flag("--smoke", smoke, "Small 5x5 grid for quick checks");
  add_common(sweep, flags);

  CLI::App* validate = app.add_subcommand("validate", "Theory-vs-simulation cross-check");
  validate->add_option("--threshold-db", threshold_db, "Failure threshold in dB");
  add_common(validate, flags);

  CLI::App* compare = app.add_subcommand("compare", "Adaptive vs static combiner comparison");
  compare->add_option("--regime", regime,
                      "all, stationary, tracking-fast or tracking-slow");
  compare->add_option("--iterations", iterations, "Override iterations per run");
  add_common(compare, flags);

  CLI::App* presets = app.add_subcommand("presets", "List the bundled experiment presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (simulate->parsed()) return do_simulate(scenario_arg, flags);
    if (theory->parsed()) return do_theory(scenario_arg, flags, tolerance, j_max);
    if (sweep->parsed()) return do_sweep2(grid_spec, flags, iterations, smoke);
    if (validate->parsed()) return do_validate(flags, threshold_db);
    if (compare->parsed()) return do_compare(flags, regime, iterations);
    if (presets->parsed()) {
      for (const auto& p : preset_registry()) {
        std::printf("%-32s %s\n", p.name.c_str(), p.description.c_str());
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace diffnet

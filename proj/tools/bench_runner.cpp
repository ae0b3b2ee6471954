// Benchmark of the Monte Carlo runner: serial reference path vs the
// OpenMP-parallel lane path on the same scenario, with a bitwise equality
// check of the resulting curves.

#include <chrono>
#include <cstdio>

#include "diffnet/harness.hpp"
#include "diffnet/presets.hpp"

using namespace diffnet;

namespace {

double run_timed(const ScenarioConfig& cfg, const RunOptions& opts, ExperimentResult& out) {
  const auto t0 = std::chrono::steady_clock::now();
  out = run_experiment(cfg, opts);
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(t1 - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  int runs = 16;
  long iterations = 4000;
  if (argc > 1) runs = std::atoi(argv[1]);
  if (argc > 2) iterations = std::atol(argv[2]);

  ScenarioConfig cfg = make_preset("stationary-datc-ls", 1);
  cfg.runs = runs;
  cfg.iterations = iterations;

  std::printf("benchmark scenario: %s, %d runs x %ld iterations\n", cfg.name.c_str(), runs,
              iterations);

  ExperimentResult serial, parallel;
  const double t_serial = run_timed(cfg, RunOptions{0, false}, serial);
  const double t_parallel = run_timed(cfg, RunOptions{0, true}, parallel);

  const bool identical = serial.curve.nmsd == parallel.curve.nmsd &&
                         serial.curve.msd == parallel.curve.msd;

  std::printf("serial reference: %8.3f s\n", t_serial);
  std::printf("openmp lanes:     %8.3f s\n", t_parallel);
  std::printf("speedup:          %8.2fx\n", t_serial / t_parallel);
  std::printf("curves bitwise identical: %s\n", identical ? "yes" : "NO");
  return identical ? 0 : 1;
}

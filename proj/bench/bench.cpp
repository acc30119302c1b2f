// Serial reference against OpenMP kernels: wall time per kernel and the largest difference between
// the two results (expected 0 for every kernel).

#include <omp.h>

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <vector>

#include "fopa/cli/runs.hpp"
#include "fopa/cli/scenario.hpp"
#include "fopa/meanfield/split_step.hpp"
#include "fopa/quantum/fopa_chain.hpp"
#include "fopa/quantum/wigner.hpp"

using namespace fopa;
using namespace fopa::cli;

namespace {

template <class F>
double best_of(int repeats, F&& f) {
  double best = INFINITY;
  for (int r = 0; r < repeats; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

void report(const char* name, double serial_s, double parallel_s, double max_diff) {
  std::printf("%-22s %12.4f %12.4f %8.2fx %12.3g\n", name, serial_s, parallel_s, serial_s / parallel_s, max_diff);
}

void bench_kerr(int repeats) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> n;
  std::vector<cplx> base(1 << 20);
  for (auto& v : base) v = {n(rng), n(rng)};
  std::vector<cplx> a = base, b = base;
  const double ts = best_of(repeats, [&] { apply_kerr_phase(a, 1e-3, Execution::serial); });
  const double tp = best_of(repeats, [&] { apply_kerr_phase(b, 1e-3, Execution::parallel); });
  double diff = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) diff = std::max(diff, std::abs(a[k] - b[k]));
  report("kerr phase (2^20)", ts, tp, diff);
}

void bench_split_step(int repeats) {
  const FiberSpec fiber = FiberSpec::dispersion_shifted(300.0, 2.0, 1551.0, 0.075);
  const OpticalPulse in = gaussian_pulse(10.0, 4.0, 1552.5, 0.0, TimeGrid(8192, 0.025));
  StepControl serial, parallel;
  serial.execution = Execution::serial;
  parallel.execution = Execution::parallel;
  OpticalPulse a = in, b = in;
  const double ts = best_of(repeats, [&] { a = split_step_propagate(in, fiber, serial); });
  const double tp = best_of(repeats, [&] { b = split_step_propagate(in, fiber, parallel); });
  double diff = 0.0;
  for (std::size_t k = 0; k < in.grid().size; ++k) diff = std::max(diff, std::abs(a.envelope()[k] - b.envelope()[k]));
  report("split-step (8192)", ts, tp, diff);
}

void bench_wigner(int repeats) {
  RamanSpec raman;
  raman.raman_fraction = 1e-4;
  const FopaChain c = build_fopa_chain({20.0, 19.5, 0.1}, SaturationModel{0.05, 0.3}, raman);
  QuantumScenario q;
  q.input = seed_state({1e4, 4.7});
  q.channels = c.channels;
  q.seed_mean_in = 1e4;
  MonteCarloObservables a, b;
  const double ts = best_of(repeats, [&] { a = wigner_monte_carlo(q, 200000, 3, Execution::serial); });
  const double tp = best_of(repeats, [&] { b = wigner_monte_carlo(q, 200000, 3, Execution::parallel); });
  report("wigner (2e5 samples)", ts, tp, std::abs(a.value.R_t - b.value.R_t));
}

void bench_sweep(const std::string& scenario, int repeats) {
  Scenario s = load_scenario(scenario);
  Table a, b;
  const double ts = best_of(repeats, [&] { a = run_rt_vs_gain(s, Execution::serial); });
  const double tp = best_of(repeats, [&] { b = run_rt_vs_gain(s, Execution::parallel); });
  double diff = 0.0;
  for (std::size_t r = 0; r < a.rows.size(); ++r) {
    for (std::size_t c = 0; c < a.rows[r].size(); ++c) diff = std::max(diff, std::abs(a.rows[r][c] - b.rows[r][c]));
  }
  report("rt-vs-gain sweep", ts, tp, diff);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"serial vs OpenMP kernel benchmark"};
  int repeats = 3;
  int threads = 0;
  std::string scenario;
  app.add_option("--repeats", repeats, "timing repeats (best is reported)")->check(CLI::PositiveNumber);
  app.add_option("--threads", threads, "OpenMP threads")->check(CLI::PositiveNumber);
  app.add_option("--scenario", scenario, "scenario for the sweep benchmark")->check(CLI::ExistingFile);
  CLI11_PARSE(app, argc, argv);
  if (threads > 0) omp_set_num_threads(threads);

  std::printf("threads: %d\n", omp_get_max_threads());
  std::printf("%-22s %12s %12s %9s %12s\n", "kernel", "serial_s", "parallel_s", "speedup", "max_diff");
  bench_kerr(repeats);
  bench_split_step(1);
  bench_wigner(repeats);
  if (!scenario.empty()) bench_sweep(scenario, 1);
  return 0;
}

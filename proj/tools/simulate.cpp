// simulate <subcommand> --config <path> --out <path> [--seed <u64>] [--threads <n>]
//
// Exit status: 0 success, 2 configuration error, 3 numerical failure, 1 anything else (I/O).

#include <omp.h>

#include <CLI11.hpp>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "fopa/cli/output.hpp"
#include "fopa/cli/runs.hpp"
#include "fopa/cli/scenario.hpp"
#include "fopa/core/error.hpp"

using namespace fopa;
using namespace fopa::cli;

namespace {

constexpr int kConfigError = 2;
constexpr int kNumericalError = 3;

struct Options {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  int threads = 0;
};

std::string stem(const std::string& path) {
  const std::string ext = ".csv";
  if (path.size() > ext.size() && path.compare(path.size() - ext.size(), ext.size(), ext) == 0) {
    return path.substr(0, path.size() - ext.size());
  }
  return path;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  f << text;
  if (!f) throw std::ios_base::failure("cannot write " + path);
}

std::string csv_text(const Table& t, const std::vector<std::string>& comments) {
  std::ostringstream ss;
  write_csv(ss, t, comments);
  return ss.str();
}

std::map<std::string, double> tolerances() {
  return {{"ladder_rel_tol", 1e-8},          {"ladder_abs_tol", 1e-10},   {"split_step_max_phase_rad", 0.005},
          {"split_step_edge_fraction", 1e-6}, {"voa_tolerance", 1e-4},    {"physicality_tol", 1e-9},
          {"fock_rel_tol", 1e-4},             {"wigner_sigma", 3.0},       {"wigner_samples", 1e5}};
}

int run(const std::string& sub, const Options& opt) {
  const auto start = std::chrono::steady_clock::now();
  Scenario s;
  if (!opt.config.empty()) {
    s = load_scenario(opt.config);
  } else if (sub != "oracle") {
    throw ConfigError({"--config is required for " + sub});
  }
  if (opt.seed) s.rng_seed = *opt.seed;

  if (sub == "validate") {
    std::cout << "ok: " << s.name << " (" << s.sweep.points.size() << " sweep points, axis "
              << axis_name(s.sweep.axis) << ")\n";
    if (!opt.out.empty()) write_file(opt.out, s.canonical());
    return 0;
  }
  if (opt.out.empty()) throw ConfigError({"--out is required for " + sub});

  const std::string canonical = opt.config.empty() ? std::string("oracle\n") : s.canonical();
  const std::string hash = run_hash(canonical, s.rng_seed, sub, tool_version());
  const std::vector<std::string> comments = {"simulate " + sub + " " + tool_version(), "scenario " + s.name,
                                             "manifest " + hash};
  RunManifest manifest;
  manifest.subcommand = sub;
  manifest.scenario_name = s.name;
  manifest.scenario_hash = hash;
  manifest.tool_version = tool_version();
  manifest.rng_seed = s.rng_seed;
  manifest.tolerances = tolerances();
  manifest.outputs.push_back(opt.out);

  int status = 0;
  if (sub == "rt-vs-gain") {
    write_file(opt.out, csv_text(run_rt_vs_gain(s), comments));
  } else if (sub == "xi-vs-gain") {
    write_file(opt.out, csv_text(run_xi_vs_gain(s), comments));
  } else if (sub == "gain-vs-pump") {
    write_file(opt.out, csv_text(run_gain_vs_pump(s), comments));
  } else if (sub == "spectrum") {
    const SpectrumRun r = run_spectrum(s);
    std::vector<std::string> extra = comments;
    extra.push_back("pump_peak_W = " + format_value(r.pump_peak_W));
    extra.push_back("split_step_gain = " + format_value(r.split_step_gain));
    extra.push_back("r2_db = " + format_value(r.r2_db));
    extra.push_back("r3_db = " + format_value(r.r3_db));
    extra.push_back("ladder_r2_db = " + format_value(r.ladder_r2_db));
    extra.push_back("ladder_r3_db = " + format_value(r.ladder_r3_db));
    write_file(opt.out, csv_text(r.spectrum, comments));
    const std::string side = stem(opt.out) + "_sidebands.csv";
    write_file(side, csv_text(r.sidebands, extra));
    manifest.outputs.push_back(side);
    std::cout << "r2_db " << format_value(r.r2_db) << " (ladder " << format_value(r.ladder_r2_db) << ")\n";
  } else if (sub == "oracle") {
    const OracleReport rep = run_oracle(s.rng_seed);
    write_file(opt.out, csv_text(rep.table, comments));
    std::cout << rep.checks - rep.failures << "/" << rep.checks << " oracle checks passed\n";
    if (rep.failures > 0) status = kNumericalError;
  } else {
    throw ConfigError({"unknown subcommand " + sub});
  }

  manifest.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_file(stem(opt.out) + ".manifest.json", manifest.to_json());
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pulse-pumped fiber OPA twin-beam simulator"};
  app.require_subcommand(1, 1);
  Options opt;
  const std::vector<std::pair<std::string, std::string>> subs = {
      {"rt-vs-gain", "noise reduction versus gain, VOA re-balanced per point"},
      {"gain-vs-pump", "seeded gain versus pump power for each seed power"},
      {"spectrum", "output spectrum and sideband table"},
      {"xi-vs-gain", "photon-number asymmetry versus gain"},
      {"validate", "check a configuration file"},
      {"oracle", "Fock and Wigner cross-checks of the Gaussian moment code"},
  };
  for (const auto& [name, help] : subs) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", opt.config, "scenario file")->check(CLI::ExistingFile);
    sub->add_option("--out", opt.out, "output CSV path");
    sub->add_option("--seed", opt.seed, "random seed (overrides scenario.rng_seed)");
    sub->add_option("--threads", opt.threads, "thread count (default: FOPA_THREADS or all cores)")
        ->check(CLI::PositiveNumber);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  if (opt.threads > 0) {
    omp_set_num_threads(opt.threads);
  } else if (const char* env = std::getenv("FOPA_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) omp_set_num_threads(n);
  }

  const std::string sub = app.get_subcommands().front()->get_name();
  try {
    return run(sub, opt);
  } catch (const ConfigError& e) {
    for (const auto& issue : e.issues()) std::cerr << "config error: " << issue << "\n";
    return kConfigError;
  } catch (const DomainError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumericalError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

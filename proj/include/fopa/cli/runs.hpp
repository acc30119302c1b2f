#pragma once

#include <cstdint>
#include <string>

#include "fopa/cli/output.hpp"
#include "fopa/cli/scenario.hpp"
#include "fopa/core/error.hpp"
#include "fopa/core/execution.hpp"
#include "fopa/meanfield/gain.hpp"
#include "fopa/quantum/twin_beam.hpp"

namespace fopa::cli {

/// A solver failure tagged with the sweep point that caused it.
class SweepPointError : public NumericalError {
 public:
  SweepPointError(const std::string& what, std::size_t index, double value)
      : NumericalError(what), index_(index), value_(value) {}
  std::size_t index() const { return index_; }
  double value() const { return value_; }

 private:
  std::size_t index_;
  double value_;
};

struct OperatingPoint {
  double pump_avg_mW = 0.0;
  double pump_peak_W = 0.0;
  double seed_uW = 0.0;
};

/// Detected observables at one operating point, with the VOA re-optimised when the scenario asks.
struct QuantumPoint {
  OperatingPoint op;
  double g = 1.0;
  double idler_photon_ratio = 0.0;
  double pump_depletion = 0.0;
  double voa_opt = 1.0;
  TwinBeamObservables obs;
  double R_t_raw = 1.0;  // with the electronic floor added back
};

/// Operating point for sweep point i (pump found by inversion on the gain axis; gain 1 means no pump).
OperatingPoint resolve_point(const Scenario& s, double sweep_value);
GainPoint classical_point(const Scenario& s, const OperatingPoint& op);
QuantumPoint quantum_point(const Scenario& s, const OperatingPoint& op);

Table run_rt_vs_gain(const Scenario& s, Execution exec = Execution::parallel);
Table run_xi_vs_gain(const Scenario& s, Execution exec = Execution::parallel);
Table run_gain_vs_pump(const Scenario& s, Execution exec = Execution::parallel);

struct SpectrumRun {
  Table spectrum;   // wavelength_nm, power_dBm per FFT bin
  Table sidebands;  // per ladder order: split-step band energy and ladder energy, relative to m = +1
  double pump_peak_W = 0.0;
  double split_step_gain = 1.0;
  double r2_db = 0.0;  // split-step, strongest |m| = 2 over strongest |m| = 1
  double r3_db = 0.0;
  double ladder_r2_db = 0.0;
  double ladder_r3_db = 0.0;
};

/// Split-step propagation of pump plus seed and the mean-field sideband table at the same pump.
/// The split-step run resolves walk-off itself, so it uses the full Kerr coefficient.
SpectrumRun run_spectrum(const Scenario& s, Execution exec = Execution::parallel);

/// Pump peak power at which the split-step signal gain reaches the target.
double split_step_pump_for_gain(const Scenario& s, double target_g, Execution exec = Execution::parallel);

struct OracleReport {
  Table table;  // suite, case, observable, value, reference, deviation, tolerance, pass
  int checks = 0;
  int failures = 0;
};

/// Gaussian moments against the Fock brute force on the small-instance grid (relative 1e-4), and
/// the analytic observables against truncated-Wigner sampling (3 sigma at 1e5 samples) on 20
/// randomized scenarios drawn from `rng_seed`.
OracleReport run_oracle(std::uint64_t rng_seed, Execution exec = Execution::parallel);

}  // namespace fopa::cli

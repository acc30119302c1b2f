#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fopa/detection/detection.hpp"
#include "fopa/meanfield/fiber.hpp"
#include "fopa/meanfield/gain.hpp"
#include "fopa/meanfield/ladder.hpp"
#include "fopa/quantum/fopa_chain.hpp"
#include "fopa/quantum/twin_beam.hpp"

namespace fopa::cli {

/// Every problem found in a configuration file, each as "section.key: reason".
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> issues);
  const std::vector<std::string>& issues() const { return issues_; }

 private:
  std::vector<std::string> issues_;
};

enum class SweepAxis { pump_power, gain, seed_power };

struct FiberConfig {
  double length_m = 300.0;
  double gamma_per_W_km = 2.0;
  double zdw_nm = 1551.0;
  double dispersion_slope_ps_per_nm2_km = 0.075;
  double beta2_ref_ps2_per_km = 0.0;
  double temperature_K = 300.0;
  double propagation_loss_dB = 0.0;
  double overlap_factor = 0.55;
};

struct PumpConfig {
  double wavelength_nm = 1552.5;
  double fwhm_nm = 0.9;
  double avg_power_mW = 1.7;
};

struct SeedConfig {
  double wavelength_nm = 1569.8;
  double fwhm_nm = 1.2;
  double avg_power_uW = 2.0;
  double excess_noise_db = 0.0;
};

struct SweepConfig {
  SweepAxis axis = SweepAxis::gain;
  std::vector<double> points;          // mW, gain or uW depending on the axis
  std::vector<double> seed_powers_uW;  // extra curves for gain-vs-pump; empty means the seed power
};

struct ModelConfig {
  bool pulse_averaging = true;
  int slices = 33;
  int sideband_order = 3;
  double rep_rate_MHz = 40.0;
};

struct SpectrumConfig {
  int grid_points = 8192;
  double dt_ps = 0.025;
  std::optional<double> target_gain;  // otherwise the pump runs at pump.avg_power_mW
};

struct Scenario {
  std::string name = "unnamed";
  std::uint64_t rng_seed = 1;
  FiberConfig fiber;
  PumpConfig pump;
  SeedConfig seed;
  double raman_fraction = 0.0;
  SaturationModel saturation;
  DetectionChain detection;
  bool optimize_voa = true;
  BalanceControl balance;
  SweepConfig sweep;
  ModelConfig model;
  SpectrumConfig spectrum;

  FiberSpec fiber_spec() const;
  LadderSpec ladder_spec() const;
  PulseAveraging averaging() const;
  RamanSpec raman() const;
  double detuning_thz() const;
  double pump_fwhm_ps() const;
  double seed_fwhm_ps() const;
  double pump_peak_W(double avg_power_mW) const;
  double seed_peak_W(double avg_power_uW) const;
  double seed_photons(double avg_power_uW) const;
  double rep_rate_Hz() const { return model.rep_rate_MHz * 1e6; }

  /// Stable key = value rendering of every field; the run hash is taken over this text.
  std::string canonical() const;
};

Scenario parse_scenario(std::istream& in);
Scenario load_scenario(const std::string& path);

/// Range and consistency checks; returns "section.key: reason" for each violation.
std::vector<std::string> check_scenario(const Scenario& s);

const char* axis_name(SweepAxis axis);

}  // namespace fopa::cli

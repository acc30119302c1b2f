#pragma once

#include <complex>
#include <vector>

#include "fopa/meanfield/fiber.hpp"

namespace fopa {

/// Discrete set of FWM frequencies around the pump. Mode m sits at nu_p - m * detuning, so m = +1
/// is the (longer-wavelength) signal, m = -1 the idler, |m| = 2 the second-order products.
struct LadderSpec {
  double pump_nm = 1552.5;
  double detuning_thz = 2.14;  // > 0
  int order = 2;

  int size() const { return 2 * order + 1; }
  double frequency_thz(int m) const;
  double wavelength_nm(int m) const;
};

/// Ladder amplitudes in sqrt(W), stored in order m = -M .. M (index m + M).
class ModeLadder {
 public:
  explicit ModeLadder(LadderSpec spec);

  const LadderSpec& spec() const { return spec_; }
  int order() const { return spec_.order; }
  std::complex<double>& at(int m) { return amps_[static_cast<std::size_t>(m + spec_.order)]; }
  const std::complex<double>& at(int m) const { return amps_[static_cast<std::size_t>(m + spec_.order)]; }
  const std::vector<std::complex<double>>& amplitudes() const { return amps_; }
  std::vector<std::complex<double>>& amplitudes() { return amps_; }

  double power(int m) const { return std::norm(at(m)); }
  double total_power() const;
  /// Sum |A_m|^2 / (h nu_m), photons per second.
  double photon_flux() const;

 private:
  LadderSpec spec_;
  std::vector<std::complex<double>> amps_;
};

struct LadderOptions {
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
  // Scale each mode's Kerr coupling by omega_m / omega_p; this makes photon number and energy
  // exact invariants. Off reproduces the textbook constant-gamma equations.
  bool frequency_scaled_coupling = true;
  double min_step_m = 1e-9;
  long max_steps = 2'000'000;
};

/// Integrates the degenerate-pump chi(3) coupled-amplitude equations (SPM, XPM and every
/// energy-conserving FWM term among ladder modes) plus lumped m = +-1 Raman and linear loss.
/// Throws StepSizeError (carrying z) when the adaptive step underflows.
ModeLadder coupled_mode_propagate(const ModeLadder& input, const FiberSpec& fiber, const LadderOptions& opts = {});

/// Same, with the m = 0 pump and m = +1 seed amplitudes replaced by real fields of the given powers (W).
ModeLadder coupled_mode_propagate(const ModeLadder& ladder, const FiberSpec& fiber, double pump_power_W,
                                  double seed_power_W, const LadderOptions& opts = {});

struct SidebandReport {
  std::vector<double> power_W;  // index m + M
  double r2_db = 0.0;           // strongest |m| = 2 over strongest |m| = 1
  double r3_db = 0.0;           // only when M >= 3, otherwise -inf
};

SidebandReport sideband_ratios(const ModeLadder& ladder);

}  // namespace fopa

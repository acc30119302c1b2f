#pragma once

#include "fopa/meanfield/fiber.hpp"
#include "fopa/meanfield/ladder.hpp"

namespace fopa {

/// Quasi-CW bridge: the pulse is cut into temporal slices, each propagated as a CW ladder at the
/// local pump and seed peak powers, then combined with seed-energy weights.
struct PulseAveraging {
  bool enabled = true;
  int slices = 33;  // odd, >= 33 when enabled
  double pump_fwhm_ps = 4.0;
  double seed_fwhm_ps = 3.0;
  double span_fwhm = 1.5;  // slices cover +-span_fwhm * max(FWHM)

  void validate() const;
};

struct GainPoint {
  double pump_power_W = 0.0;  // peak
  double seed_power_W = 0.0;  // peak
  double g = 1.0;             // output / input signal energy
  double idler_photon_ratio = 0.0;  // idler photons out / seed photons in
  double pump_depletion = 0.0;      // seed-weighted fraction of pump photons converted
  ModeLadder output;                // slice-summed sideband energies, as amplitudes sqrt(energy)

  explicit GainPoint(const LadderSpec& spec) : output(spec) {}
};

GainPoint seeded_gain(const FiberSpec& fiber, const LadderSpec& ladder, double pump_peak_W, double seed_peak_W,
                      const PulseAveraging& averaging, const LadderOptions& opts = {});

/// Smallest pump peak power that reaches the target seeded gain. The gain curve is not monotone
/// at low power (phase-mismatched oscillation), so the first upward crossing is bracketed by a
/// geometric scan before the root is polished.
double pump_for_gain(const FiberSpec& fiber, const LadderSpec& ladder, double target_g, double seed_peak_W,
                     const PulseAveraging& averaging, const LadderOptions& opts = {});

}  // namespace fopa

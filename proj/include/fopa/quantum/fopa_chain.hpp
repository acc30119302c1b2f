#pragma once

#include <vector>

#include "fopa/core/gaussian_state.hpp"
#include "fopa/detection/detection.hpp"
#include "fopa/quantum/twin_beam.hpp"

namespace fopa {

/// Above the depletion knee a share of the parametric gain acts as independent phase-insensitive
/// amplification on each beam: phi = fraction * max(0, 1 - knee / depletion).
struct SaturationModel {
  double depletion_knee = 0.15;
  double decorrelation_fraction = 0.0;

  double incoherent_share(double pump_depletion) const;
  void validate() const;
};

/// Classical amplifier figures for one operating point (from the mean-field solver).
struct AmplifierPoint {
  double g = 1.0;                   // signal energy gain
  double idler_photon_ratio = 0.0;  // idler photons out / seed photons in
  double pump_depletion = 0.0;
};

struct FopaChain {
  double parametric_gain = 1.0;
  double raman_transfer = 1.0;  // extra signal gain (> 1) or idler gain (< 1) from Stokes transfer
  double coherent_gain = 1.0;
  double incoherent_gain = 1.0;
  std::vector<GaussianChannel> channels;  // in application order, detection excluded

  GaussianChannel combined() const;
};

/// seed -> two-mode squeeze (coherent gain) -> Raman transfer -> incoherent amplifiers -> Raman noise.
/// The Raman transfer t solves g = t g_p and r_i = (g_p - 1) / t so that the ideal point
/// (r_i = g - 1) gives t = 1.
FopaChain build_fopa_chain(const AmplifierPoint& point, const SaturationModel& saturation, const RamanSpec& raman,
                           double squeeze_phase = 0.0);

/// Everything needed to evaluate the detected observables of one operating point.
struct QuantumScenario {
  GaussianTwoModeState input;
  std::vector<GaussianChannel> channels;
  DetectionChain detection;
  double seed_mean_in = 0.0;  // photons at the amplifier input

  GaussianTwoModeState output() const;  // before detection
};

TwinBeamObservables analytic_observables(const QuantumScenario& scenario);

}  // namespace fopa

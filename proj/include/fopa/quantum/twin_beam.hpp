#pragma once

#include "fopa/core/gaussian_state.hpp"
#include "fopa/detection/detection.hpp"

namespace fopa {

struct SeedSpec {
  double mean_photons_per_pulse = 0.0;
  double excess_noise_db = 0.0;  // intensity noise above shot noise

  double excess_factor() const;
  void validate() const;
};

struct RamanSpec {
  double detuning_THz = 2.14;
  double temperature_K = 300.0;
  double raman_fraction = 0.0;  // f_R

  double thermal_occupation() const;
  void validate() const;
};

struct TwinBeamObservables {
  double R_t = 1.0;
  double R_s = 1.0;
  double R_i = 1.0;
  double xi = 1.0;
  double snl_photons = 0.0;
  double i1_over_i2 = 1.0;
};

/// Bose occupation of the phonon mode at the Stokes shift.
double thermal_occupation(double detuning_THz, double temperature_K);

/// Signal: displaced by sqrt(n) with amplitude-quadrature variance E = 10^(E_db/10) and a vacuum
/// phase quadrature. Idler: vacuum. The bright-limit Fano factor of the signal is E.
GaussianTwoModeState seed_state(const SeedSpec& seed);

/// Two-mode squeezer with cosh^2 r = g. `phase` rotates the squeezing axis.
GaussianChannel parametric_gain_channel(double g, double phase = 0.0);
GaussianTwoModeState apply_parametric_gain(const GaussianTwoModeState& state, double g, double phase = 0.0);

/// Independent phase-insensitive amplifiers (G >= 1) or attenuators (G < 1) on each beam.
GaussianChannel single_mode_gain_channel(double g_s, double g_i);

/// Lumped Raman noise: 4 f_R (g - 1)(n_th + 1) on both signal quadratures and 4 f_R (g - 1) n_th on
/// the idler.
GaussianChannel raman_noise_channel(double g, const RamanSpec& raman);
GaussianTwoModeState inject_raman_noise(const GaussianTwoModeState& state, double g, const RamanSpec& raman);

/// Detected-photon observables. xi uses intensities corrected back through the detection
/// efficiencies, with `seed_mean_in` the input signal photon number.
TwinBeamObservables twin_beam_observables(const GaussianTwoModeState& state, const DetectionChain& detection,
                                          double seed_mean_in);

/// Same, from already-detected photon statistics.
TwinBeamObservables observables_from_statistics(const PhotonStatistics& detected, const DetectionChain& detection,
                                                double seed_mean_in);

}  // namespace fopa

#pragma once

#include <string>
#include <vector>

#include "fopa/core/gaussian_state.hpp"

namespace fopa {

struct DetectionChain {
  double eta_signal = 0.55;  // collection x quantum efficiency
  double eta_idler = 0.58;
  double voa_transmission = 1.0;  // signal arm only
  double electronic_noise_db_below_snl = 10.0;
  // Where the spectrum analyser reads the noise; carried as metadata.
  double detection_frequency_MHz = 3.0;
  double resolution_bandwidth_kHz = 100.0;

  double signal_efficiency() const { return eta_signal * voa_transmission; }
  void validate() const;
};

struct CalibrationRecord {
  double dc_sum_reference = 0.0;
  double snl_variance = 0.0;
  std::string method_note;
};

/// Beam splitter on each arm: transmission eta_s * voa on the signal, eta_i on the idler.
GaussianChannel detection_channel(const DetectionChain& chain);
GaussianTwoModeState apply_loss(const GaussianTwoModeState& state, const DetectionChain& chain);

/// Var(n_s - n_i) / (<n_s> + <n_i>) after the detection chain.
double noise_reduction(const GaussianTwoModeState& state, const DetectionChain& chain);

struct BalanceControl {
  double voa_min = 0.5;
  double voa_max = 1.0;
  double tolerance = 1e-4;
  int scan_points = 41;  // coarse grid used to check unimodality
};

struct BalanceResult {
  double voa_opt = 1.0;
  double R_t_min = 1.0;
  double i1_over_i2 = 1.0;
  bool unimodal = true;
  std::vector<double> local_minima;  // VOA settings of every interior or boundary minimum on the scan
};

/// Minimises R_t over the signal-arm VOA by golden-section search. A coarse scan checks the
/// bracket first; if it finds several minima the flag is cleared and the deepest one is refined.
BalanceResult balance_voa(const GaussianTwoModeState& state, const DetectionChain& chain,
                          const BalanceControl& control = {});

/// Shot-noise level for the detected mean photon numbers (Poisson sum).
CalibrationRecord snl_calibrate(double detected_mean_s, double detected_mean_i);

double subtract_electronic_noise(double measured_var, double electronic_var);

/// Electronic noise variance for a given SNL and dB-below-SNL setting.
double electronic_noise_variance(double snl_variance, double db_below_snl);

enum class LossConvention { mean, per_arm };

/// Infers the source noise reduction from a measured one. The mean convention treats both arms
/// as having the average efficiency; the per-arm convention inverts the unequal-loss formula for a
/// balanced twin-beam source, neglecting the arm-imbalance term (harmonic-mean efficiency).
double loss_correct(double R_meas, double eta_s, double eta_i, LossConvention convention = LossConvention::mean);

}  // namespace fopa

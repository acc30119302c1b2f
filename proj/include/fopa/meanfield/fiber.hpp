#pragma once

namespace fopa {

/// Dispersion-shifted fiber. Dispersion is a cubic Taylor expansion about the zero-dispersion
/// frequency, so beta2 vanishes at the ZDW by construction.
struct FiberSpec {
  double length_m = 300.0;
  double gamma_per_W_km = 2.0;
  double zdw_nm = 1551.0;
  double beta3_ps3_per_km = 0.0;
  // beta2 at zdw_nm; zero for a true zero-dispersion wavelength.
  double beta2_ref_ps2_per_km = 0.0;
  double temperature_K = 300.0;
  double propagation_loss_dB = 0.0;  // total over the length
  // Temporal overlap of pump and signal/idler (walk-off); scales the effective nonlinearity.
  double overlap_factor = 1.0;
  // Lumped stimulated Raman gain between pump and the m = +-1 sidebands.
  double raman_gain_per_W_km = 0.0;

  static FiberSpec dispersion_shifted(double length_m, double gamma_per_W_km, double zdw_nm,
                                      double slope_ps_per_nm2_km, double temperature_K = 300.0);

  /// beta3 from the dispersion slope S at the ZDW: beta3 = S lambda0^4 / (2 pi c)^2.
  static double beta3_from_slope(double slope_ps_per_nm2_km, double zdw_nm);

  double length_km() const { return length_m * 1e-3; }
  double effective_gamma() const { return gamma_per_W_km * overlap_factor; }
  double loss_per_km() const;
  /// beta2 (ps^2/km) at a wavelength: beta2_ref + beta3 * (omega - omega_zdw).
  double beta2_at(double wavelength_nm) const;
  /// beta(omega) relative to the pump, minus the group-delay term, for an offset delta (rad/ps).
  double relative_beta(double pump_nm, double delta_rad_per_ps) const;

  void validate() const;
};

/// 2 beta(w_p) - beta(w_p + W) - beta(w_p - W) in 1/km for a detuning W = 2 pi * detuning_THz.
/// Equals -beta2(w_p) W^2 for a cubic dispersion model. The linear mismatch entering the FWM gain
/// kappa = beta_s + beta_i - 2 beta_p + 2 gamma P is the negative of this value.
double phase_mismatch(const FiberSpec& fiber, double pump_nm, double detuning_THz);

}  // namespace fopa

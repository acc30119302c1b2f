#pragma once

#include <cmath>
#include <numbers>

namespace fopa::units {

inline constexpr double kSpeedOfLight = 299792458.0;          // m/s
inline constexpr double kPlanck = 6.62607015e-34;             // J s
inline constexpr double kHbar = kPlanck / (2.0 * std::numbers::pi);
inline constexpr double kBoltzmann = 1.380649e-23;            // J/K
inline constexpr double kSpeedOfLightNmPerPs = 299792.458;    // nm/ps

// Mode-locked fiber laser pulse train.
inline constexpr double kRepetitionRateHz = 40.0e6;

// Gaussian: FWHM-to-1/e half width of |A|^2, and area factor sqrt(pi/(4 ln 2)).
inline const double kFwhmToT0 = 1.0 / (2.0 * std::sqrt(std::numbers::ln2));
inline const double kGaussianAreaFactor = std::sqrt(std::numbers::pi / (4.0 * std::numbers::ln2));
inline constexpr double kGaussianTbp = 0.4412712003053032;  // 2 ln2 / pi

inline double frequency_thz(double wavelength_nm) { return kSpeedOfLightNmPerPs / wavelength_nm; }
inline double wavelength_nm(double frequency_thz) { return kSpeedOfLightNmPerPs / frequency_thz; }
inline double angular_frequency(double wavelength_nm) {
  return 2.0 * std::numbers::pi * frequency_thz(wavelength_nm);  // rad/ps
}

inline double photon_energy_J(double wavelength_nm) {
  return kPlanck * kSpeedOfLight / (wavelength_nm * 1e-9);
}

inline double pulse_energy_J(double average_power_W, double rep_rate_Hz = kRepetitionRateHz) {
  return average_power_W / rep_rate_Hz;
}

inline double photons_per_pulse(double average_power_W, double wavelength_nm,
                                double rep_rate_Hz = kRepetitionRateHz) {
  return pulse_energy_J(average_power_W, rep_rate_Hz) / photon_energy_J(wavelength_nm);
}

// Peak power of a Gaussian |A|^2 profile carrying the given pulse energy.
inline double gaussian_peak_power_W(double pulse_energy_J, double fwhm_ps) {
  return pulse_energy_J / (fwhm_ps * 1e-12 * kGaussianAreaFactor);
}

// Transform-limited Gaussian duration for a spectral FWHM given in nm.
inline double transform_limited_fwhm_ps(double spectral_fwhm_nm, double center_nm) {
  const double dnu_thz = kSpeedOfLightNmPerPs * spectral_fwhm_nm / (center_nm * center_nm);
  return kGaussianTbp / dnu_thz;
}

inline double to_db(double linear) { return 10.0 * std::log10(linear); }
inline double from_db(double db) { return std::pow(10.0, db / 10.0); }

}  // namespace fopa::units

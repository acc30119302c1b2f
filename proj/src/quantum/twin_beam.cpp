#include "fopa/quantum/twin_beam.hpp"

#include <cmath>
#include <limits>

#include "fopa/core/error.hpp"
#include "fopa/core/units.hpp"

namespace fopa {

double SeedSpec::excess_factor() const { return units::from_db(excess_noise_db); }

void SeedSpec::validate() const {
  if (!(mean_photons_per_pulse >= 0.0)) throw DomainError("seed mean photon number must be non-negative");
  if (!(excess_noise_db >= 0.0)) throw DomainError("seed excess noise must be >= 0 dB");
}

double RamanSpec::thermal_occupation() const { return fopa::thermal_occupation(detuning_THz, temperature_K); }

void RamanSpec::validate() const {
  if (!(detuning_THz > 0.0)) throw DomainError("Raman detuning must be positive");
  if (!(temperature_K > 0.0)) throw DomainError("temperature must be positive");
  if (!(raman_fraction >= 0.0 && raman_fraction <= 1.0)) throw DomainError("Raman fraction must be in [0, 1]");
}

double thermal_occupation(double detuning_THz, double temperature_K) {
  if (!(detuning_THz > 0.0) || !(temperature_K > 0.0)) {
    throw DomainError("thermal_occupation: detuning and temperature must be positive");
  }
  const double x = units::kPlanck * detuning_THz * 1e12 / (units::kBoltzmann * temperature_K);
  return 1.0 / std::expm1(x);
}

GaussianTwoModeState seed_state(const SeedSpec& seed) {
  seed.validate();
  if (seed.mean_photons_per_pulse == 0.0) return GaussianTwoModeState::vacuum();
  Vec4 mean(2.0 * std::sqrt(seed.mean_photons_per_pulse), 0.0, 0.0, 0.0);
  Mat4 cov = Mat4::Identity();
  cov(0, 0) = seed.excess_factor();
  return {mean, cov};
}

GaussianChannel parametric_gain_channel(double g, double phase) {
  if (!(g >= 1.0)) throw DomainError("parametric gain must be >= 1");
  const double c = std::sqrt(g);
  const double s = std::sqrt(g - 1.0);
  const double cp = std::cos(phase), sp = std::sin(phase);
  // a_s -> c a_s + s e^{i phase} a_i^dag, a_i -> c a_i + s e^{i phase} a_s^dag
  Eigen::Matrix2d rz;
  rz << cp, sp, sp, -cp;
  GaussianChannel ch;
  ch.transfer.setZero();
  ch.transfer.block<2, 2>(0, 0) = c * Eigen::Matrix2d::Identity();
  ch.transfer.block<2, 2>(2, 2) = c * Eigen::Matrix2d::Identity();
  ch.transfer.block<2, 2>(0, 2) = s * rz;
  ch.transfer.block<2, 2>(2, 0) = s * rz;
  return ch;
}

GaussianTwoModeState apply_parametric_gain(const GaussianTwoModeState& state, double g, double phase) {
  return parametric_gain_channel(g, phase).apply(state);
}

GaussianChannel single_mode_gain_channel(double g_s, double g_i) {
  if (!(g_s > 0.0) || !(g_i > 0.0)) throw DomainError("single-mode gains must be positive");
  GaussianChannel ch;
  ch.transfer.diagonal() << std::sqrt(g_s), std::sqrt(g_s), std::sqrt(g_i), std::sqrt(g_i);
  // Amplifier adds (G - 1), attenuator adds (1 - G): both are |1 - G| in vacuum units.
  ch.noise.diagonal() << std::abs(g_s - 1.0), std::abs(g_s - 1.0), std::abs(g_i - 1.0), std::abs(g_i - 1.0);
  return ch;
}

GaussianChannel raman_noise_channel(double g, const RamanSpec& raman) {
  raman.validate();
  if (!(g >= 1.0)) throw DomainError("Raman noise needs g >= 1");
  GaussianChannel ch;
  if (raman.raman_fraction == 0.0) return ch;
  const double nth = raman.thermal_occupation();
  const double base = 4.0 * raman.raman_fraction * (g - 1.0);
  ch.noise.diagonal() << base * (nth + 1.0), base * (nth + 1.0), base * nth, base * nth;
  return ch;
}

GaussianTwoModeState inject_raman_noise(const GaussianTwoModeState& state, double g, const RamanSpec& raman) {
  if (!state.is_physical()) throw DomainError("inject_raman_noise: unphysical input state");
  return raman_noise_channel(g, raman).apply(state);
}

TwinBeamObservables observables_from_statistics(const PhotonStatistics& st, const DetectionChain& detection,
                                                double seed_mean_in) {
  TwinBeamObservables o;
  o.snl_photons = st.mean_s + st.mean_i;
  if (!(o.snl_photons > 0.0)) throw DomainError("twin_beam_observables: no detected photons");
  o.R_t = st.difference_variance() / o.snl_photons;
  o.R_s = st.mean_s > 0.0 ? st.var_s / st.mean_s : 1.0;
  o.R_i = st.mean_i > 0.0 ? st.var_i / st.mean_i : 1.0;
  o.i1_over_i2 = st.mean_i > 0.0 ? st.mean_s / st.mean_i : std::numeric_limits<double>::infinity();
  if (st.mean_i > 0.0) {
    const double is = st.mean_s / detection.signal_efficiency();
    const double ii = st.mean_i / detection.eta_idler;
    o.xi = (is - seed_mean_in) / ii;
  } else {
    o.xi = std::numeric_limits<double>::quiet_NaN();
  }
  return o;
}

TwinBeamObservables twin_beam_observables(const GaussianTwoModeState& state, const DetectionChain& detection,
                                          double seed_mean_in) {
  const PhotonStatistics st = photon_statistics(apply_loss(state, detection));
  if (!(st.mean_i > 1e-12 * std::max(1.0, st.mean_s))) {
    throw DomainError("twin_beam_observables: xi undefined, detected idler is empty");
  }
  return observables_from_statistics(st, detection, seed_mean_in);
}

}  // namespace fopa

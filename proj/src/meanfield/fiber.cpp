#include "fopa/meanfield/fiber.hpp"

#include <cmath>
#include <numbers>

#include "fopa/core/error.hpp"
#include "fopa/core/units.hpp"

namespace fopa {

FiberSpec FiberSpec::dispersion_shifted(double length_m, double gamma_per_W_km, double zdw_nm,
                                        double slope_ps_per_nm2_km, double temperature_K) {
  FiberSpec f;
  f.length_m = length_m;
  f.gamma_per_W_km = gamma_per_W_km;
  f.zdw_nm = zdw_nm;
  f.beta3_ps3_per_km = beta3_from_slope(slope_ps_per_nm2_km, zdw_nm);
  f.temperature_K = temperature_K;
  f.validate();
  return f;
}

double FiberSpec::beta3_from_slope(double slope_ps_per_nm2_km, double zdw_nm) {
  const double k = zdw_nm * zdw_nm / (2.0 * std::numbers::pi * units::kSpeedOfLightNmPerPs);  // nm ps
  return slope_ps_per_nm2_km * k * k;
}

double FiberSpec::loss_per_km() const {
  return propagation_loss_dB * std::numbers::ln10 / 10.0 / length_km();
}

double FiberSpec::beta2_at(double wavelength_nm) const {
  return beta2_ref_ps2_per_km +
         beta3_ps3_per_km * (units::angular_frequency(wavelength_nm) - units::angular_frequency(zdw_nm));
}

double FiberSpec::relative_beta(double pump_nm, double delta) const {
  // beta(w) = beta2_ref/2 (w - w0)^2 + beta3/6 (w - w0)^3, constant and linear terms dropped
  const double x = units::angular_frequency(pump_nm) - units::angular_frequency(zdw_nm);
  return 0.5 * beta2_ref_ps2_per_km * delta * delta +
         beta3_ps3_per_km / 6.0 * (3.0 * x * delta * delta + delta * delta * delta);
}

void FiberSpec::validate() const {
  if (!(length_m > 0.0)) throw DomainError("fiber length must be positive");
  if (!(gamma_per_W_km >= 0.0)) throw DomainError("fiber gamma must be non-negative");
  if (!(temperature_K > 0.0)) throw DomainError("fiber temperature must be positive");
  if (!(zdw_nm > 0.0)) throw DomainError("fiber ZDW must be positive");
  if (!(overlap_factor > 0.0 && overlap_factor <= 1.0)) throw DomainError("overlap factor must be in (0, 1]");
  if (!(propagation_loss_dB >= 0.0)) throw DomainError("propagation loss must be non-negative");
  if (!(raman_gain_per_W_km >= 0.0)) throw DomainError("Raman gain must be non-negative");
}

double phase_mismatch(const FiberSpec& fiber, double pump_nm, double detuning_THz) {
  if (std::abs(pump_nm - fiber.zdw_nm) > 20.0) {
    throw DomainError("phase_mismatch: pump must lie within 20 nm of the ZDW");
  }
  const double w = 2.0 * std::numbers::pi * detuning_THz;
  return -(fiber.relative_beta(pump_nm, w) + fiber.relative_beta(pump_nm, -w));
}

}  // namespace fopa

#include "fopa/meanfield/split_step.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "fopa/core/error.hpp"
#include "fopa/core/units.hpp"

namespace fopa {
namespace {

constexpr double kPeakTransmission = 0.8;
constexpr double kStopBand = 1e-4;

double edge_fraction(std::span<const cplx> spectrum) {
  const std::size_t n = spectrum.size();
  const std::size_t band = std::max<std::size_t>(1, n / 32);
  double total = 0.0, edge = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double e = std::norm(spectrum[k]);
    total += e;
    // Unshifted order: the highest |frequency| bins sit around index n/2.
    const std::size_t dist = k < n / 2 ? n / 2 - k : k - n / 2;
    if (dist < band) edge += e;
  }
  return total > 0.0 ? edge / total : 0.0;
}

}  // namespace

void apply_kerr_phase(std::span<cplx> a, double gamma_h, Execution exec) {
  const auto n = static_cast<std::ptrdiff_t>(a.size());
  if (exec == Execution::parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) a[static_cast<std::size_t>(i)] *= std::polar(1.0, gamma_h * std::norm(a[static_cast<std::size_t>(i)]));
  } else {
    for (std::ptrdiff_t i = 0; i < n; ++i) a[static_cast<std::size_t>(i)] *= std::polar(1.0, gamma_h * std::norm(a[static_cast<std::size_t>(i)]));
  }
}

OpticalPulse split_step_propagate(const OpticalPulse& field, const FiberSpec& fiber, const StepControl& control) {
  fiber.validate();
  if (!(control.max_nonlinear_phase_rad > 0.0) || !(control.max_step_m > 0.0)) {
    throw DomainError("step control limits must be positive");
  }
  const TimeGrid& grid = field.grid();
  const std::size_t n = grid.size;
  const double beta2 = fiber.beta2_at(field.carrier_nm());
  const double beta3 = fiber.beta3_ps3_per_km;
  const double half_alpha = 0.5 * fiber.loss_per_km();
  const double gamma = fiber.effective_gamma();

  std::vector<double> phase_rate(n);  // rad per km
  for (std::size_t k = 0; k < n; ++k) {
    const double w = 2.0 * std::numbers::pi * grid.frequency_thz(k);
    phase_rate[k] = beta2 * w * w / 2.0 + beta3 * w * w * w / 6.0;
  }
  const auto half_linear = [&](std::vector<cplx>& s, double h) {
    const double decay = std::exp(-half_alpha * h / 2.0);
    for (std::size_t k = 0; k < n; ++k) s[k] *= decay * std::polar(1.0, phase_rate[k] * h / 2.0);
  };

  std::vector<cplx> a(field.envelope().begin(), field.envelope().end());
  if (edge_fraction(to_spectrum(a)) > control.edge_fraction_limit) {
    throw AliasingError("split_step_propagate: input spectrum already reaches the grid edge");
  }
  const double length = fiber.length_km();
  const double max_step = control.max_step_m * 1e-3;
  double z = 0.0;
  while (z < length) {
    double peak = 0.0;
    for (const auto& v : a) peak = std::max(peak, std::norm(v));
    double h = max_step;
    if (gamma * peak > 0.0) h = std::min(h, control.max_nonlinear_phase_rad / (gamma * peak));
    h = std::min(h, length - z);

    auto s = to_spectrum(a);
    half_linear(s, h);
    a = to_time(s);
    apply_kerr_phase(a, gamma * h, control.execution);
    s = to_spectrum(a);
    if (edge_fraction(s) > control.edge_fraction_limit) {
      throw AliasingError("split_step_propagate: spectral energy reached the grid edge at z = " +
                          std::to_string((z + h) * 1e3) + " m");
    }
    half_linear(s, h);
    a = to_time(s);
    z += h;
    if (length - z < 1e-12 * length) z = length;
  }
  return OpticalPulse(field.carrier_nm(), grid, std::move(a));
}

double band_transmission(double offset_thz, double one_db_width_thz) {
  // 10^(-0.1 (2 d / B)^8) is exactly -1 dB at the band edges d = +-B/2.
  const double x = 2.0 * offset_thz / one_db_width_thz;
  const double x2 = x * x;
  return kPeakTransmission * std::max(std::pow(10.0, -0.1 * x2 * x2 * x2 * x2), kStopBand);
}

OpticalPulse extract_band(const OpticalPulse& field, double center_nm, double one_db_bandwidth_nm) {
  if (!(one_db_bandwidth_nm > 0.0)) throw DomainError("filter bandwidth must be positive");
  const TimeGrid& grid = field.grid();
  const double carrier_thz = units::frequency_thz(field.carrier_nm());
  const double centre_offset = units::frequency_thz(center_nm) - carrier_thz;
  const double width_thz = units::kSpeedOfLightNmPerPs * one_db_bandwidth_nm / (center_nm * center_nm);
  const double nyquist = 0.5 * grid.span_thz();
  if (std::abs(centre_offset) + 0.5 * width_thz > nyquist) {
    throw DomainError("extract_band: pass band overlaps the grid edge");
  }
  auto s = to_spectrum(field.envelope());
  for (std::size_t k = 0; k < grid.size; ++k) {
    s[k] *= std::sqrt(band_transmission(grid.frequency_thz(k) - centre_offset, width_thz));
  }
  return OpticalPulse(field.carrier_nm(), grid, to_time(s));
}

}  // namespace fopa

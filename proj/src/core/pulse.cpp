#include "fopa/core/pulse.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>
#include <unsupported/Eigen/FFT>

#include "fopa/core/error.hpp"
#include "fopa/core/units.hpp"

namespace fopa {

TimeGrid::TimeGrid(std::size_t n, double dt) : size(n), dt_ps(dt) {
  if (n < 2 || !std::has_single_bit(n)) {
    throw DomainError("time grid size must be a power of two, got " + std::to_string(n));
  }
  if (!(dt > 0.0)) throw DomainError("time grid spacing must be positive");
}

double TimeGrid::frequency_thz(std::size_t k) const {
  const auto n = static_cast<std::ptrdiff_t>(size);
  auto kk = static_cast<std::ptrdiff_t>(k);
  if (kk >= n / 2) kk -= n;
  return static_cast<double>(kk) * df_thz();
}

OpticalPulse::OpticalPulse(double carrier_nm, TimeGrid grid)
    : OpticalPulse(carrier_nm, grid, std::vector<cplx>(grid.size)) {}

OpticalPulse::OpticalPulse(double carrier_nm, TimeGrid grid, std::vector<cplx> envelope)
    : carrier_nm_(carrier_nm), grid_(grid), envelope_(std::move(envelope)) {
  if (!(carrier_nm > 0.0)) throw DomainError("carrier wavelength must be positive");
  if (envelope_.size() != grid_.size) throw DomainError("envelope length does not match grid");
}

double OpticalPulse::energy_pJ() const {
  double sum = 0.0;
  for (const auto& a : envelope_) sum += std::norm(a);
  return sum * grid_.dt_ps;  // W * ps = pJ
}

double OpticalPulse::spectral_energy_pJ() const {
  const auto spec = to_spectrum(envelope_);
  double sum = 0.0;
  for (const auto& s : spec) sum += std::norm(s);
  return sum * grid_.dt_ps / static_cast<double>(grid_.size);
}

bool OpticalPulse::spans_bandwidth(double bandwidth_nm) const {
  const double bw_thz = units::kSpeedOfLightNmPerPs * bandwidth_nm / (carrier_nm_ * carrier_nm_);
  return grid_.span_thz() >= 4.0 * bw_thz;
}

std::vector<cplx> to_spectrum(std::span<const cplx> field) {
  Eigen::FFT<double> fft;
  std::vector<cplx> in(field.begin(), field.end());
  std::vector<cplx> out;
  fft.inv(out, in);
  const auto n = static_cast<double>(field.size());
  for (auto& s : out) s *= n;
  return out;
}

std::vector<cplx> to_time(std::span<const cplx> spectrum) {
  Eigen::FFT<double> fft;
  std::vector<cplx> in(spectrum.begin(), spectrum.end());
  std::vector<cplx> out;
  fft.fwd(out, in);
  const auto n = static_cast<double>(spectrum.size());
  for (auto& a : out) a /= n;
  return out;
}

OpticalPulse gaussian_pulse(double peak_power_W, double fwhm_ps, double carrier_nm, double chirp,
                            const TimeGrid& grid) {
  if (!(peak_power_W >= 0.0)) throw DomainError("peak power must be non-negative");
  if (!(fwhm_ps > 0.0)) throw DomainError("pulse FWHM must be positive");
  OpticalPulse pulse(carrier_nm, grid);
  if (peak_power_W == 0.0) return pulse;

  if (fwhm_ps / grid.dt_ps < 16.0) {
    throw DomainError("grid too coarse: fewer than 16 samples across the FWHM");
  }
  const double t0 = fwhm_ps * units::kFwhmToT0;
  const double half_window = 0.5 * grid.window_ps();
  // |A|^2 ~ exp(-t^2/t0^2): fraction of energy beyond +-T is erfc(T/t0).
  if (std::erfc(half_window / t0) > 1e-6) {
    throw DomainError("grid too short: more than 1e-6 of the pulse energy falls outside");
  }
  const double amp = std::sqrt(peak_power_W);
  auto env = pulse.envelope();
  for (std::size_t i = 0; i < grid.size; ++i) {
    const double t = grid.time_ps(i);
    env[i] = amp * std::exp(-cplx(1.0, chirp) * (t * t / (2.0 * t0 * t0)));
  }
  return pulse;
}

double fwhm_linear(std::span<const double> y, double dx, bool* ambiguous) {
  if (y.size() < 2) return 0.0;
  const auto peak_it = std::max_element(y.begin(), y.end());
  const double half = 0.5 * *peak_it;
  if (!(half > 0.0)) return 0.0;
  std::size_t first = 0;
  while (y[first] < half) ++first;
  std::size_t last = y.size() - 1;
  while (y[last] < half) --last;

  if (ambiguous != nullptr) {
    *ambiguous = false;
    for (std::size_t i = first; i <= last; ++i) {
      if (y[i] < half) {
        *ambiguous = true;
        break;
      }
    }
  }
  double left = static_cast<double>(first);
  if (first > 0) left -= (y[first] - half) / (y[first] - y[first - 1]);
  double right = static_cast<double>(last);
  if (last + 1 < y.size()) right += (y[last] - half) / (y[last] - y[last + 1]);
  return (right - left) * dx;
}

PulseMetrics pulse_metrics(const OpticalPulse& pulse) {
  const auto& grid = pulse.grid();
  const auto env = pulse.envelope();
  PulseMetrics m;
  m.energy_pJ = pulse.energy_pJ();
  if (!(m.energy_pJ > 0.0)) throw DomainError("pulse_metrics needs a nonzero pulse");

  std::vector<double> intensity(grid.size);
  for (std::size_t i = 0; i < grid.size; ++i) intensity[i] = std::norm(env[i]);
  bool ambiguous_t = false;
  m.fwhm_ps = fwhm_linear(intensity, grid.dt_ps, &ambiguous_t);

  // Zero-pad 4x in time for a finer spectral sampling; shift to ascending frequency.
  const std::size_t pad = 4 * grid.size;
  std::vector<cplx> padded(pad);
  std::copy(env.begin(), env.end(), padded.begin() + static_cast<std::ptrdiff_t>((pad - grid.size) / 2));
  const auto spec = to_spectrum(padded);
  std::vector<double> psd(pad);
  for (std::size_t k = 0; k < pad; ++k) psd[(k + pad / 2) % pad] = std::norm(spec[k]);
  bool ambiguous_f = false;
  const double df = 1.0 / (static_cast<double>(pad) * grid.dt_ps);
  m.spectral_fwhm_thz = fwhm_linear(psd, df, &ambiguous_f);

  const auto peak = static_cast<double>(std::max_element(psd.begin(), psd.end()) - psd.begin());
  const double peak_thz = units::frequency_thz(pulse.carrier_nm()) + (peak - static_cast<double>(pad / 2)) * df;
  const double peak_nm = units::wavelength_nm(peak_thz);
  m.spectral_fwhm_nm = peak_nm * peak_nm * m.spectral_fwhm_thz / units::kSpeedOfLightNmPerPs;
  m.tbp = m.fwhm_ps * m.spectral_fwhm_thz;
  m.photons_per_pulse = m.energy_pJ * 1e-12 / units::photon_energy_J(pulse.carrier_nm());
  m.ambiguous = ambiguous_t || ambiguous_f;
  return m;
}

}  // namespace fopa

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace fopa {

using cplx = std::complex<double>;

/// Uniform time grid of `size` samples centred on t = 0.
struct TimeGrid {
  std::size_t size = 0;
  double dt_ps = 0.0;

  TimeGrid() = default;
  TimeGrid(std::size_t n, double dt);

  double time_ps(std::size_t i) const {
    return (static_cast<double>(i) - static_cast<double>(size / 2)) * dt_ps;
  }
  double window_ps() const { return static_cast<double>(size) * dt_ps; }
  double df_thz() const { return 1.0 / window_ps(); }
  double span_thz() const { return 1.0 / dt_ps; }
  /// Frequency offset of FFT bin k (unshifted order), THz; positive means bluer light.
  double frequency_thz(std::size_t k) const;
};

/// Complex envelope (sqrt(W)) sampled on a TimeGrid, referenced to a carrier wavelength.
class OpticalPulse {
 public:
  OpticalPulse(double carrier_nm, TimeGrid grid);
  OpticalPulse(double carrier_nm, TimeGrid grid, std::vector<cplx> envelope);

  double carrier_nm() const { return carrier_nm_; }
  const TimeGrid& grid() const { return grid_; }
  std::span<const cplx> envelope() const { return envelope_; }
  std::span<cplx> envelope() { return envelope_; }

  double energy_pJ() const;
  double spectral_energy_pJ() const;
  /// True when the grid's frequency span is at least 4x the given optical bandwidth.
  bool spans_bandwidth(double bandwidth_nm) const;

 private:
  double carrier_nm_;
  TimeGrid grid_;
  std::vector<cplx> envelope_;
};

// Spectrum convention: A(t) = (1/N) sum_k S_k exp(-i w_k t), so S_k with w_k > 0 is the blue side.
std::vector<cplx> to_spectrum(std::span<const cplx> field);
std::vector<cplx> to_time(std::span<const cplx> spectrum);

OpticalPulse gaussian_pulse(double peak_power_W, double fwhm_ps, double carrier_nm, double chirp,
                            const TimeGrid& grid);

struct PulseMetrics {
  double fwhm_ps = 0.0;
  double spectral_fwhm_thz = 0.0;
  double spectral_fwhm_nm = 0.0;
  double tbp = 0.0;
  double energy_pJ = 0.0;
  double photons_per_pulse = 0.0;
  bool ambiguous = false;  // more than one region above half maximum
};

PulseMetrics pulse_metrics(const OpticalPulse& pulse);

/// Full width at half maximum of sampled data with uniform spacing `dx`, linear interpolation at
/// the outermost half-maximum crossings. Sets `ambiguous` when the above-half region is split.
double fwhm_linear(std::span<const double> y, double dx, bool* ambiguous = nullptr);

}  // namespace fopa

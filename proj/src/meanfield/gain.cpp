#include "fopa/meanfield/gain.hpp"

#include <algorithm>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "fopa/core/error.hpp"
#include "fopa/core/units.hpp"

namespace fopa {

void PulseAveraging::validate() const {
  if (!enabled) return;
  if (slices < 33 || slices % 2 == 0) throw DomainError("pulse averaging needs an odd slice count >= 33");
  if (!(pump_fwhm_ps > 0.0) || !(seed_fwhm_ps > 0.0)) throw DomainError("pulse widths must be positive");
  if (!(span_fwhm > 0.0)) throw DomainError("slice span must be positive");
}

GainPoint seeded_gain(const FiberSpec& fiber, const LadderSpec& ladder, double pump_peak_W, double seed_peak_W,
                      const PulseAveraging& averaging, const LadderOptions& opts) {
  averaging.validate();
  if (!(pump_peak_W >= 0.0)) throw DomainError("pump power must be non-negative");
  if (!(seed_peak_W > 0.0)) throw DomainError("seed power must be positive");

  struct Slice {
    double pump, seed, weight;
  };
  std::vector<Slice> slices;
  if (!averaging.enabled) {
    slices.push_back({pump_peak_W, seed_peak_W, 1.0});
  } else {
    // Symmetric profiles: evaluate t <= 0 and double the weight of each off-centre slice.
    const int n = averaging.slices;
    const double half = averaging.span_fwhm * std::max(averaging.pump_fwhm_ps, averaging.seed_fwhm_ps);
    const double dt = 2.0 * half / (n - 1);
    const double c = 4.0 * std::numbers::ln2;
    for (int j = 0; j <= n / 2; ++j) {
      const double t = -half + j * dt;
      const double pump = pump_peak_W * std::exp(-c * t * t / (averaging.pump_fwhm_ps * averaging.pump_fwhm_ps));
      const double seed = seed_peak_W * std::exp(-c * t * t / (averaging.seed_fwhm_ps * averaging.seed_fwhm_ps));
      slices.push_back({pump, seed, j == n / 2 ? 1.0 : 2.0});
    }
  }

  GainPoint out(ladder);
  out.pump_power_W = pump_peak_W;
  out.seed_power_W = seed_peak_W;
  const double nu_s = ladder.frequency_thz(1);
  const double nu_i = ladder.frequency_thz(-1);
  const double nu_p = ladder.frequency_thz(0);
  std::vector<double> energy(static_cast<std::size_t>(ladder.size()), 0.0);
  double seed_in = 0.0, signal_out = 0.0, idler_photons = 0.0, depletion = 0.0;
  ModeLadder input(ladder);
  for (const auto& s : slices) {
    const ModeLadder o = coupled_mode_propagate(input, fiber, s.pump, s.seed, opts);
    seed_in += s.weight * s.seed;
    signal_out += s.weight * o.power(1);
    idler_photons += s.weight * o.power(-1) / nu_i;
    if (s.pump > 0.0) {
      const double pump_photons_in = s.pump / nu_p;
      const double lost = pump_photons_in - o.power(0) / nu_p;
      depletion += s.weight * s.seed * (lost / pump_photons_in);
    }
    for (int m = -ladder.order; m <= ladder.order; ++m) {
      energy[static_cast<std::size_t>(m + ladder.order)] += s.weight * o.power(m);
    }
  }
  out.g = signal_out / seed_in;
  out.idler_photon_ratio = idler_photons / (seed_in / nu_s);
  out.pump_depletion = depletion / seed_in;
  for (int m = -ladder.order; m <= ladder.order; ++m) {
    out.output.at(m) = std::sqrt(energy[static_cast<std::size_t>(m + ladder.order)]);
  }
  return out;
}

double pump_for_gain(const FiberSpec& fiber, const LadderSpec& ladder, double target_g, double seed_peak_W,
                     const PulseAveraging& averaging, const LadderOptions& opts) {
  if (!(target_g > 1.0)) throw DomainError("target gain must exceed 1");
  const auto log_gain = [&](double p) {
    return std::log(seeded_gain(fiber, ladder, p, seed_peak_W, averaging, opts).g) - std::log(target_g);
  };
  constexpr double kStart = 0.05;
  constexpr double kFactor = 1.25;
  constexpr double kMaxPower = 2000.0;
  double lo = kStart;
  double f_lo = log_gain(lo);
  if (f_lo >= 0.0) throw NumericalError("pump_for_gain: target gain reached below the scan start");
  double hi = lo * kFactor;
  double f_hi = log_gain(hi);
  while (f_hi < 0.0) {
    if (hi > kMaxPower) {
      throw NumericalError("pump_for_gain: gain " + std::to_string(target_g) + " not reached below " +
                           std::to_string(kMaxPower) + " W peak");
    }
    lo = hi;
    f_lo = f_hi;
    hi *= kFactor;
    f_hi = log_gain(hi);
  }
  std::uintmax_t iters = 60;
  const auto [a, b] = boost::math::tools::toms748_solve(log_gain, lo, hi, f_lo, f_hi,
                                                         boost::math::tools::eps_tolerance<double>(40), iters);
  return 0.5 * (a + b);
}

}  // namespace fopa

#include "fopa/quantum/fopa_chain.hpp"

#include <algorithm>
#include <cmath>

#include "fopa/core/error.hpp"

namespace fopa {

double SaturationModel::incoherent_share(double pump_depletion) const {
  if (!(pump_depletion > depletion_knee)) return 0.0;
  return decorrelation_fraction * (1.0 - depletion_knee / pump_depletion);
}

void SaturationModel::validate() const {
  if (!(depletion_knee > 0.0)) throw DomainError("saturation knee must be positive");
  if (!(decorrelation_fraction >= 0.0 && decorrelation_fraction <= 1.0)) {
    throw DomainError("decorrelation fraction must be in [0, 1]");
  }
}

GaussianChannel FopaChain::combined() const {
  GaussianChannel c;
  for (const auto& ch : channels) c = c.then(ch);
  return c;
}

FopaChain build_fopa_chain(const AmplifierPoint& point, const SaturationModel& saturation, const RamanSpec& raman,
                           double squeeze_phase) {
  saturation.validate();
  if (!(point.g >= 1.0)) throw DomainError("amplifier gain must be >= 1");
  if (!(point.idler_photon_ratio >= 0.0)) throw DomainError("idler photon ratio must be non-negative");
  FopaChain chain;
  const double r = point.idler_photon_ratio;
  double t = 1.0;
  if (r > 0.0 && point.g > 1.0) t = (-1.0 + std::sqrt(1.0 + 4.0 * r * point.g)) / (2.0 * r);
  double gp = point.g / t;
  if (gp < 1.0) {
    gp = 1.0;
    t = point.g;
  }
  const double phi = saturation.incoherent_share(point.pump_depletion);
  chain.parametric_gain = gp;
  chain.raman_transfer = t;
  chain.coherent_gain = std::pow(gp, 1.0 - phi);
  chain.incoherent_gain = std::pow(gp, phi);

  chain.channels.push_back(parametric_gain_channel(chain.coherent_gain, squeeze_phase));
  if (t != 1.0) chain.channels.push_back(single_mode_gain_channel(t, 1.0 / t));
  if (chain.incoherent_gain > 1.0) {
    chain.channels.push_back(single_mode_gain_channel(chain.incoherent_gain, chain.incoherent_gain));
  }
  chain.channels.push_back(raman_noise_channel(point.g, raman));
  return chain;
}

GaussianTwoModeState QuantumScenario::output() const {
  GaussianTwoModeState s = input;
  for (const auto& ch : channels) s = ch.apply(s);
  return s;
}

TwinBeamObservables analytic_observables(const QuantumScenario& scenario) {
  return twin_beam_observables(scenario.output(), scenario.detection, scenario.seed_mean_in);
}

}  // namespace fopa

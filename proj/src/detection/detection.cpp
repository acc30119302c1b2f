#include "fopa/detection/detection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fopa/core/error.hpp"

namespace fopa {

void DetectionChain::validate() const {
  const auto in_unit = [](double v) { return v > 0.0 && v <= 1.0; };
  if (!in_unit(eta_signal)) throw DomainError("detection.eta_signal must be in (0, 1]");
  if (!in_unit(eta_idler)) throw DomainError("detection.eta_idler must be in (0, 1]");
  if (!in_unit(voa_transmission)) throw DomainError("detection.voa_transmission must be in (0, 1]");
  if (!(electronic_noise_db_below_snl >= 0.0)) {
    throw DomainError("detection.electronic_noise_db_below_snl must be non-negative");
  }
  if (!(detection_frequency_MHz > 0.0) || !(resolution_bandwidth_kHz > 0.0)) {
    throw DomainError("detection frequencies must be positive");
  }
}

GaussianChannel detection_channel(const DetectionChain& chain) {
  chain.validate();
  const double es = chain.signal_efficiency();
  const double ei = chain.eta_idler;
  GaussianChannel c;
  c.transfer.diagonal() << std::sqrt(es), std::sqrt(es), std::sqrt(ei), std::sqrt(ei);
  c.noise.diagonal() << 1.0 - es, 1.0 - es, 1.0 - ei, 1.0 - ei;
  return c;
}

GaussianTwoModeState apply_loss(const GaussianTwoModeState& state, const DetectionChain& chain) {
  return detection_channel(chain).apply(state);
}

double noise_reduction(const GaussianTwoModeState& state, const DetectionChain& chain) {
  const PhotonStatistics st = photon_statistics(apply_loss(state, chain));
  const double snl = st.mean_s + st.mean_i;
  if (!(snl > 0.0)) throw DomainError("noise_reduction: no detected photons");
  return st.difference_variance() / snl;
}

BalanceResult balance_voa(const GaussianTwoModeState& state, const DetectionChain& chain,
                          const BalanceControl& control) {
  if (!(control.voa_min > 0.0 && control.voa_min < control.voa_max && control.voa_max <= 1.0)) {
    throw DomainError("balance_voa: invalid VOA bracket");
  }
  if (control.scan_points < 3) throw DomainError("balance_voa: need at least 3 scan points");
  const auto rt = [&](double voa) {
    DetectionChain c = chain;
    c.voa_transmission = voa;
    return noise_reduction(state, c);
  };

  const int n = control.scan_points;
  const double step = (control.voa_max - control.voa_min) / (n - 1);
  std::vector<double> v(static_cast<std::size_t>(n)), r(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    v[static_cast<std::size_t>(k)] = control.voa_min + k * step;
    r[static_cast<std::size_t>(k)] = rt(v[static_cast<std::size_t>(k)]);
  }
  BalanceResult res;
  std::size_t best = 0;
  for (std::size_t k = 0; k < r.size(); ++k) {
    const bool left = k == 0 || r[k] <= r[k - 1];
    const bool right = k + 1 == r.size() || r[k] < r[k + 1];
    if (left && right) res.local_minima.push_back(v[k]);
    if (r[k] < r[best]) best = k;
  }
  res.unimodal = res.local_minima.size() <= 1;

  // Golden section inside the scan cell pair around the best sample.
  double a = v[best == 0 ? 0 : best - 1];
  double b = v[std::min(best + 1, v.size() - 1)];
  constexpr double kInvPhi = 0.6180339887498949;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = rt(c), fd = rt(d);
  while (b - a > control.tolerance) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = rt(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = rt(d);
    }
  }
  double x = 0.5 * (a + b);
  double fx = rt(x);
  // The optimum may sit on the bracket edge.
  for (double edge : {control.voa_min, control.voa_max}) {
    const double fe = rt(edge);
    if (fe <= fx) {
      x = edge;
      fx = fe;
    }
  }
  res.voa_opt = x;
  res.R_t_min = fx;
  DetectionChain at = chain;
  at.voa_transmission = x;
  const PhotonStatistics st = photon_statistics(apply_loss(state, at));
  res.i1_over_i2 = st.mean_i > 0.0 ? st.mean_s / st.mean_i : std::numeric_limits<double>::infinity();
  return res;
}

CalibrationRecord snl_calibrate(double detected_mean_s, double detected_mean_i) {
  if (!(detected_mean_s >= 0.0) || !(detected_mean_i >= 0.0)) {
    throw DomainError("snl_calibrate: detected means must be non-negative");
  }
  const double sum = detected_mean_s + detected_mean_i;
  if (!(sum > 0.0)) throw DomainError("snl_calibrate: zero total photocurrent");
  return {sum, sum, "two shot-noise-limited beams matched on the DC current sum"};
}

double subtract_electronic_noise(double measured_var, double electronic_var) {
  if (!(electronic_var >= 0.0)) throw DomainError("electronic noise variance must be non-negative");
  if (!(measured_var > electronic_var)) {
    throw DomainError("non-physical correction: measured noise does not exceed the electronic floor");
  }
  return measured_var - electronic_var;
}

double electronic_noise_variance(double snl_variance, double db_below_snl) {
  return snl_variance * std::pow(10.0, -db_below_snl / 10.0);
}

double loss_correct(double R_meas, double eta_s, double eta_i, LossConvention convention) {
  if (!(eta_s > 0.0 && eta_s <= 1.0) || !(eta_i > 0.0 && eta_i <= 1.0)) {
    throw DomainError("loss_correct: efficiencies must be in (0, 1]");
  }
  const double eta = 0.5 * (eta_s + eta_i);
  if (!(R_meas > 1.0 - eta)) throw DomainError("loss_correct: measurement below vacuum-loss floor");
  if (convention == LossConvention::mean) return (R_meas - (1.0 - eta)) / eta;
  // Balanced source (<n_s> = <n_i> = n, Var n_s = Var n_i = V) with the imbalance term
  // (eta_s - eta_i)^2 (V - n) dropped: the arms then act as one beam splitter whose transmission is
  // the harmonic mean 2 eta_s eta_i / (eta_s + eta_i).
  const double h = 2.0 * eta_s * eta_i / (eta_s + eta_i);
  const double r = (R_meas - (1.0 - h)) / h;
  if (!(r > 0.0)) throw DomainError("loss_correct: measurement below vacuum-loss floor");
  return r;
}

}  // namespace fopa

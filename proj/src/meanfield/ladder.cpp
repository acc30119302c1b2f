#include "fopa/meanfield/ladder.hpp"

#include <algorithm>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "fopa/core/error.hpp"
#include "fopa/core/units.hpp"

namespace fopa {
namespace {

using cplx = std::complex<double>;
using State = std::vector<cplx>;

struct Term {
  int k, l, n, m;  // A_k A_l conj(A_n) feeds mode m; indices are offsets into the state
};

// Right-hand side in the interaction picture B_m = A_m exp(-i beta_m z), z in km.
class LadderRhs {
 public:
  LadderRhs(const LadderSpec& spec, const FiberSpec& fiber, const LadderOptions& opts)
      : order_(spec.order), size_(spec.size()) {
    const double wp = 2.0 * std::numbers::pi * spec.frequency_thz(0);
    beta_.resize(static_cast<std::size_t>(size_));
    gamma_.resize(static_cast<std::size_t>(size_));
    omega_.resize(static_cast<std::size_t>(size_));
    for (int m = -order_; m <= order_; ++m) {
      const auto i = static_cast<std::size_t>(m + order_);
      const double w = 2.0 * std::numbers::pi * spec.frequency_thz(m);
      omega_[i] = w;
      beta_[i] = fiber.relative_beta(spec.pump_nm, w - wp);
      gamma_[i] = fiber.effective_gamma() * (opts.frequency_scaled_coupling ? w / wp : 1.0);
    }
    for (int k = 0; k < size_; ++k)
      for (int l = 0; l < size_; ++l)
        for (int n = 0; n < size_; ++n) {
          const int m = k + l - n;
          if (m >= 0 && m < size_) terms_.push_back({k, l, n, m});
        }
    half_alpha_ = 0.5 * fiber.loss_per_km();
    half_raman_ = 0.5 * fiber.raman_gain_per_W_km;
    phase_.resize(static_cast<std::size_t>(size_));
    lab_.resize(static_cast<std::size_t>(size_));
    nl_.resize(static_cast<std::size_t>(size_));
  }

  void operator()(const State& b, State& dbdz, double z) {
    for (int i = 0; i < size_; ++i) {
      phase_[static_cast<std::size_t>(i)] = std::polar(1.0, beta_[static_cast<std::size_t>(i)] * z);
      lab_[static_cast<std::size_t>(i)] = b[static_cast<std::size_t>(i)] * phase_[static_cast<std::size_t>(i)];
      nl_[static_cast<std::size_t>(i)] = 0.0;
    }
    for (const auto& t : terms_) {
      nl_[static_cast<std::size_t>(t.m)] += lab_[static_cast<std::size_t>(t.k)] * lab_[static_cast<std::size_t>(t.l)] *
                                            std::conj(lab_[static_cast<std::size_t>(t.n)]);
    }
    const cplx i1(0.0, 1.0);
    for (int i = 0; i < size_; ++i) {
      const auto u = static_cast<std::size_t>(i);
      nl_[u] *= i1 * gamma_[u];
      nl_[u] -= half_alpha_ * lab_[u];
    }
    if (half_raman_ > 0.0) {
      const auto p = static_cast<std::size_t>(order_);
      const auto s = p + 1;  // m = +1, Stokes
      const auto a = p - 1;  // m = -1, anti-Stokes
      const double pump = std::norm(lab_[p]);
      nl_[s] += half_raman_ * pump * lab_[s];
      nl_[a] -= half_raman_ * pump * lab_[a];
      nl_[p] += half_raman_ * lab_[p] *
                (-(omega_[p] / omega_[s]) * std::norm(lab_[s]) + (omega_[p] / omega_[a]) * std::norm(lab_[a]));
    }
    for (int i = 0; i < size_; ++i) {
      const auto u = static_cast<std::size_t>(i);
      dbdz[u] = nl_[u] * std::conj(phase_[u]);
    }
  }

  cplx to_lab(const State& b, int i, double z) const {
    return b[static_cast<std::size_t>(i)] * std::polar(1.0, beta_[static_cast<std::size_t>(i)] * z);
  }

 private:
  int order_, size_;
  std::vector<double> beta_, gamma_, omega_;
  std::vector<Term> terms_;
  double half_alpha_ = 0.0, half_raman_ = 0.0;
  State phase_, lab_, nl_;
};

}  // namespace

double LadderSpec::frequency_thz(int m) const { return units::frequency_thz(pump_nm) - m * detuning_thz; }

double LadderSpec::wavelength_nm(int m) const { return units::wavelength_nm(frequency_thz(m)); }

ModeLadder::ModeLadder(LadderSpec spec) : spec_(spec), amps_(static_cast<std::size_t>(spec.size())) {
  if (spec_.order < 1) throw DomainError("ladder order must be >= 1");
  if (!(spec_.detuning_thz > 0.0)) throw DomainError("ladder detuning must be positive");
  if (!(spec_.frequency_thz(spec_.order) > 0.0)) throw DomainError("ladder extends below zero frequency");
}

double ModeLadder::total_power() const {
  double p = 0.0;
  for (const auto& a : amps_) p += std::norm(a);
  return p;
}

double ModeLadder::photon_flux() const {
  double n = 0.0;
  for (int m = -order(); m <= order(); ++m) {
    n += power(m) / (units::kPlanck * spec_.frequency_thz(m) * 1e12);
  }
  return n;
}

ModeLadder coupled_mode_propagate(const ModeLadder& input, const FiberSpec& fiber, const LadderOptions& opts) {
  fiber.validate();
  namespace ode = boost::numeric::odeint;
  using Stepper = ode::runge_kutta_dopri5<State, double, State, double>;
  auto stepper = ode::make_controlled<Stepper>(opts.abs_tol, opts.rel_tol);

  LadderRhs rhs(input.spec(), fiber, opts);
  State b = input.amplitudes();
  const double length = fiber.length_km();
  const double min_step = opts.min_step_m * 1e-3;
  double z = 0.0;
  double dz = length / 100.0;
  long steps = 0;
  while (z < length) {
    if (++steps > opts.max_steps) {
      throw StepSizeError("coupled_mode_propagate: step budget exhausted at z = " + std::to_string(z * 1e3) + " m",
                          z * 1e3);
    }
    dz = std::min(dz, length - z);
    const auto result = stepper.try_step(std::ref(rhs), b, z, dz);
    if (result == ode::fail) {
      if (dz < min_step) {
        throw StepSizeError("coupled_mode_propagate: tolerance not met, step underflow at z = " +
                                std::to_string(z * 1e3) + " m",
                            z * 1e3);
      }
      continue;
    }
    if (length - z < 1e-15 * length) z = length;
  }
  ModeLadder out(input.spec());
  for (int i = 0; i < input.spec().size(); ++i) out.amplitudes()[static_cast<std::size_t>(i)] = rhs.to_lab(b, i, z);
  return out;
}

ModeLadder coupled_mode_propagate(const ModeLadder& ladder, const FiberSpec& fiber, double pump_power_W,
                                  double seed_power_W, const LadderOptions& opts) {
  if (!(pump_power_W >= 0.0) || !(seed_power_W >= 0.0)) throw DomainError("powers must be non-negative");
  ModeLadder in = ladder;
  in.at(0) = std::sqrt(pump_power_W);
  in.at(1) = std::sqrt(seed_power_W);
  return coupled_mode_propagate(in, fiber, opts);
}

SidebandReport sideband_ratios(const ModeLadder& ladder) {
  if (ladder.order() < 2) throw DomainError("sideband_ratios needs a ladder of order >= 2");
  SidebandReport rep;
  for (int m = -ladder.order(); m <= ladder.order(); ++m) rep.power_W.push_back(ladder.power(m));
  const auto strongest = [&](int m) { return std::max(ladder.power(m), ladder.power(-m)); };
  rep.r2_db = units::to_db(strongest(2) / strongest(1));
  rep.r3_db = ladder.order() >= 3 ? units::to_db(strongest(3) / strongest(1))
                                  : -std::numeric_limits<double>::infinity();
  return rep;
}

}  // namespace fopa

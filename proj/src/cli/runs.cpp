#include "fopa/cli/runs.hpp"

#include <algorithm>
#include <array>
#include <boost/math/tools/toms748_solve.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "fopa/core/fock_oracle.hpp"
#include "fopa/core/units.hpp"
#include "fopa/detection/detection.hpp"
#include "fopa/meanfield/split_step.hpp"
#include "fopa/parallel/indexed.hpp"
#include "fopa/quantum/fopa_chain.hpp"
#include "fopa/quantum/wigner.hpp"

namespace fopa::cli {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double pump_avg_mW(const Scenario& s, double peak_W) {
  return peak_W * s.pump_fwhm_ps() * 1e-12 * units::kGaussianAreaFactor * s.rep_rate_Hz() * 1e3;
}

std::string point_label(const Scenario& s, std::size_t i, double v) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "sweep point %zu (%s = %.9g): ", i, axis_name(s.sweep.axis), v);
  return buf;
}

// Evaluates f at every sweep point, rewrapping failures with the offending point.
template <class F>
void sweep(const Scenario& s, const std::vector<double>& values, Execution exec, F&& f) {
  for_each_index(values.size(), exec, [&](std::size_t i) {
    try {
      f(i, values[i]);
    } catch (const DomainError& e) {
      throw DomainError(point_label(s, i, values[i]) + e.what());
    } catch (const SweepPointError&) {
      throw;
    } catch (const std::exception& e) {
      throw SweepPointError(point_label(s, i, values[i]) + e.what(), i, values[i]);
    }
  });
}

struct Bands {
  std::vector<double> energy_pJ;  // index m + M
  int order = 0;
  double at(int m) const { return energy_pJ[static_cast<std::size_t>(m + order)]; }
};

// Energy in windows of one detuning width centred on each ladder frequency.
Bands band_energies(const OpticalPulse& out, double detuning_thz, int order) {
  const std::vector<cplx> spec = to_spectrum(out.envelope());
  double total = 0.0;
  for (const cplx& v : spec) total += std::norm(v);
  Bands b;
  b.order = order;
  b.energy_pJ.assign(static_cast<std::size_t>(2 * order + 1), 0.0);
  if (!(total > 0.0)) return b;
  const double scale = out.energy_pJ() / total;
  for (std::size_t k = 0; k < spec.size(); ++k) {
    const double x = -out.grid().frequency_thz(k) / detuning_thz;
    const long m = std::lround(x);
    if (std::abs(m) <= order && std::abs(x - static_cast<double>(m)) < 0.5) {
      b.energy_pJ[static_cast<std::size_t>(m + order)] += std::norm(spec[k]) * scale;
    }
  }
  return b;
}

OpticalPulse spectrum_input(const Scenario& s, double pump_peak_W, double seed_peak_W) {
  const TimeGrid grid(static_cast<std::size_t>(s.spectrum.grid_points), s.spectrum.dt_ps);
  const OpticalPulse pump = gaussian_pulse(pump_peak_W, s.pump_fwhm_ps(), s.pump.wavelength_nm, 0.0, grid);
  const OpticalPulse seed = gaussian_pulse(seed_peak_W, s.seed_fwhm_ps(), s.pump.wavelength_nm, 0.0, grid);
  std::vector<cplx> field(grid.size);
  const double w = 2.0 * std::numbers::pi * s.detuning_thz();
  for (std::size_t i = 0; i < grid.size; ++i) {
    field[i] = pump.envelope()[i] + seed.envelope()[i] * std::polar(1.0, w * grid.time_ps(i));
  }
  return OpticalPulse(s.pump.wavelength_nm, grid, std::move(field));
}

FiberSpec split_step_fiber(const Scenario& s) {
  FiberSpec f = s.fiber_spec();
  f.overlap_factor = 1.0;
  return f;
}

struct SplitStepResult {
  OpticalPulse out;
  Bands bands;
  double gain;
};

SplitStepResult split_step_run(const Scenario& s, double pump_peak_W, Execution exec) {
  const double seed_peak = s.seed_peak_W(s.seed.avg_power_uW);
  const OpticalPulse in = spectrum_input(s, pump_peak_W, seed_peak);
  StepControl control;
  control.execution = exec;
  OpticalPulse out = split_step_propagate(in, split_step_fiber(s), control);
  Bands bands = band_energies(out, s.detuning_thz(), s.model.sideband_order);
  const double seed_energy = seed_peak * s.seed_fwhm_ps() * units::kGaussianAreaFactor;  // pJ
  const double g = seed_energy > 0.0 ? bands.at(1) / seed_energy : kNaN;
  return {std::move(out), std::move(bands), g};
}

double db_ratio(double num, double den) {
  if (!(den > 0.0)) return kNaN;
  return 10.0 * std::log10(num / den);
}

}  // namespace

OperatingPoint resolve_point(const Scenario& s, double v) {
  OperatingPoint op;
  op.seed_uW = s.seed.avg_power_uW;
  switch (s.sweep.axis) {
    case SweepAxis::pump_power:
      op.pump_avg_mW = v;
      op.pump_peak_W = s.pump_peak_W(v);
      break;
    case SweepAxis::seed_power:
      op.seed_uW = v;
      op.pump_avg_mW = s.pump.avg_power_mW;
      op.pump_peak_W = s.pump_peak_W(s.pump.avg_power_mW);
      break;
    case SweepAxis::gain:
      if (v > 1.0) {
        op.pump_peak_W = pump_for_gain(s.fiber_spec(), s.ladder_spec(), v, s.seed_peak_W(op.seed_uW), s.averaging());
        op.pump_avg_mW = pump_avg_mW(s, op.pump_peak_W);
      }
      break;
  }
  return op;
}

GainPoint classical_point(const Scenario& s, const OperatingPoint& op) {
  return seeded_gain(s.fiber_spec(), s.ladder_spec(), op.pump_peak_W, s.seed_peak_W(op.seed_uW), s.averaging());
}

QuantumPoint quantum_point(const Scenario& s, const OperatingPoint& op) {
  QuantumPoint q;
  q.op = op;
  const GainPoint gp = classical_point(s, op);
  q.g = gp.g;
  q.idler_photon_ratio = gp.idler_photon_ratio;
  q.pump_depletion = gp.pump_depletion;

  const double n_in = s.seed_photons(op.seed_uW);
  const FopaChain chain =
      build_fopa_chain({gp.g, gp.idler_photon_ratio, gp.pump_depletion}, s.saturation, s.raman());
  QuantumScenario qs;
  qs.input = seed_state({n_in, s.seed.excess_noise_db});
  qs.channels = chain.channels;
  qs.detection = s.detection;
  qs.seed_mean_in = n_in;
  const GaussianTwoModeState out = qs.output();
  if (s.optimize_voa) {
    const BalanceResult b = balance_voa(out, s.detection, s.balance);
    qs.detection.voa_transmission = b.voa_opt;
  }
  q.voa_opt = qs.detection.voa_transmission;
  q.obs = observables_from_statistics(photon_statistics(apply_loss(out, qs.detection)), qs.detection, n_in);
  q.R_t_raw = q.obs.R_t + units::from_db(-s.detection.electronic_noise_db_below_snl);
  return q;
}

Table run_rt_vs_gain(const Scenario& s, Execution exec) {
  std::vector<QuantumPoint> pts(s.sweep.points.size());
  sweep(s, s.sweep.points, exec, [&](std::size_t i, double v) { pts[i] = quantum_point(s, resolve_point(s, v)); });
  Table t;
  t.columns = {"g",          "R_t_db",   "R_s_db",      "R_i_db",  "voa_opt",       "i1_over_i2",
               "xi",         "snl_photons", "R_t_raw_db", "pump_avg_mW", "seed_uW", "pump_depletion"};
  for (const auto& p : pts) {
    t.add({p.g, units::to_db(p.obs.R_t), units::to_db(p.obs.R_s), units::to_db(p.obs.R_i), p.voa_opt,
           p.obs.i1_over_i2, p.obs.xi, p.obs.snl_photons, units::to_db(p.R_t_raw), p.op.pump_avg_mW, p.op.seed_uW,
           p.pump_depletion});
  }
  return t;
}

Table run_xi_vs_gain(const Scenario& s, Execution exec) {
  std::vector<QuantumPoint> pts(s.sweep.points.size());
  sweep(s, s.sweep.points, exec, [&](std::size_t i, double v) { pts[i] = quantum_point(s, resolve_point(s, v)); });
  Table t;
  t.columns = {"g", "xi", "i1_over_i2", "idler_photon_ratio", "pump_avg_mW"};
  for (const auto& p : pts) t.add({p.g, p.obs.xi, p.obs.i1_over_i2, p.idler_photon_ratio, p.op.pump_avg_mW});
  return t;
}

Table run_gain_vs_pump(const Scenario& s, Execution exec) {
  if (s.sweep.axis != SweepAxis::pump_power) throw DomainError("gain-vs-pump needs sweep.axis = pump_power");
  const std::vector<double> seeds =
      s.sweep.seed_powers_uW.empty() ? std::vector<double>{s.seed.avg_power_uW} : s.sweep.seed_powers_uW;
  const std::size_t np = s.sweep.points.size();
  std::vector<GainPoint> pts(seeds.size() * np, GainPoint(s.ladder_spec()));
  std::vector<OperatingPoint> ops(pts.size());
  std::vector<double> values(pts.size());
  for (std::size_t k = 0; k < pts.size(); ++k) values[k] = s.sweep.points[k % np];
  sweep(s, values, exec, [&](std::size_t k, double v) {
    ops[k] = resolve_point(s, v);
    ops[k].seed_uW = seeds[k / np];
    pts[k] = classical_point(s, ops[k]);
  });
  Table t;
  t.columns = {"seed_uW", "pump_avg_mW", "pump_peak_W", "g", "idler_photon_ratio", "pump_depletion"};
  for (std::size_t k = 0; k < pts.size(); ++k) {
    t.add({ops[k].seed_uW, ops[k].pump_avg_mW, ops[k].pump_peak_W, pts[k].g, pts[k].idler_photon_ratio,
           pts[k].pump_depletion});
  }
  return t;
}

double split_step_pump_for_gain(const Scenario& s, double target_g, Execution exec) {
  if (!(target_g > 1.0)) throw DomainError("target gain must exceed 1");
  const auto f = [&](double p) { return std::log(split_step_run(s, p, exec).gain / target_g); };
  constexpr double kFactor = 1.25;
  constexpr double kMaxPower = 500.0;
  double lo = 0.5;
  double f_lo = f(lo);
  if (f_lo >= 0.0) throw NumericalError("split-step gain target reached below the scan start");
  double hi = lo * kFactor;
  double f_hi = f(hi);
  while (f_hi < 0.0) {
    if (hi > kMaxPower) throw NumericalError("split-step gain target not reached below 500 W peak");
    lo = hi;
    f_lo = f_hi;
    hi *= kFactor;
    f_hi = f(hi);
  }
  std::uintmax_t iters = 30;
  const auto [a, b] =
      boost::math::tools::toms748_solve(f, lo, hi, f_lo, f_hi, boost::math::tools::eps_tolerance<double>(16), iters);
  return 0.5 * (a + b);
}

SpectrumRun run_spectrum(const Scenario& s, Execution exec) {
  SpectrumRun r;
  const LadderSpec ladder = s.ladder_spec();
  const int order = ladder.order;
  if (order < 2) throw DomainError("spectrum needs model.sideband_order >= 2");
  const bool seeded = s.seed.avg_power_uW > 0.0;

  double ladder_pump = s.pump_peak_W(s.pump.avg_power_mW);
  r.pump_peak_W = ladder_pump;
  if (s.spectrum.target_gain) {
    if (!seeded) throw DomainError("spectrum.target_gain needs a seed");
    r.pump_peak_W = split_step_pump_for_gain(s, *s.spectrum.target_gain, exec);
    ladder_pump = pump_for_gain(s.fiber_spec(), ladder, *s.spectrum.target_gain, s.seed_peak_W(s.seed.avg_power_uW),
                                s.averaging());
  }
  const SplitStepResult ss = split_step_run(s, r.pump_peak_W, exec);
  r.split_step_gain = ss.gain;

  std::vector<double> ladder_energy(static_cast<std::size_t>(2 * order + 1));
  if (seeded) {
    const GainPoint gp = seeded_gain(s.fiber_spec(), ladder, ladder_pump, s.seed_peak_W(s.seed.avg_power_uW),
                                     s.averaging());
    for (int m = -order; m <= order; ++m) ladder_energy[static_cast<std::size_t>(m + order)] = gp.output.power(m);
  } else {
    const ModeLadder out = coupled_mode_propagate(ModeLadder(ladder), s.fiber_spec(), ladder_pump, 0.0);
    for (int m = -order; m <= order; ++m) ladder_energy[static_cast<std::size_t>(m + order)] = out.power(m);
  }
  const auto lad = [&](int m) { return ladder_energy[static_cast<std::size_t>(m + order)]; };

  const auto strongest = [&](auto&& e, int m) { return std::max(e(m), e(-m)); };
  const auto band = [&](int m) { return ss.bands.at(m); };
  r.r2_db = db_ratio(strongest(band, 2), strongest(band, 1));
  r.r3_db = order >= 3 ? db_ratio(strongest(band, 3), strongest(band, 1)) : -std::numeric_limits<double>::infinity();
  r.ladder_r2_db = db_ratio(strongest(lad, 2), strongest(lad, 1));
  r.ladder_r3_db =
      order >= 3 ? db_ratio(strongest(lad, 3), strongest(lad, 1)) : -std::numeric_limits<double>::infinity();

  r.sidebands.columns = {"m", "wavelength_nm", "split_step_energy_pJ", "split_step_db_rel_pump", "ladder_db_rel_pump"};
  for (int m = -order; m <= order; ++m) {
    r.sidebands.add({static_cast<double>(m), ladder.wavelength_nm(m), band(m), db_ratio(band(m), band(0)),
                     db_ratio(lad(m), lad(0))});
  }

  const OpticalPulse& out = ss.out;
  const std::vector<cplx> spec = to_spectrum(out.envelope());
  double total = 0.0;
  for (const cplx& v : spec) total += std::norm(v);
  const double scale = total > 0.0 ? out.energy_pJ() / total : 0.0;
  const double limit = (order + 0.5) * s.detuning_thz();
  const double nu_p = units::frequency_thz(s.pump.wavelength_nm);
  std::vector<std::pair<double, double>> rows;
  for (std::size_t k = 0; k < spec.size(); ++k) {
    const double f = out.grid().frequency_thz(k);
    if (std::abs(f) > limit) continue;
    const double mW = std::norm(spec[k]) * scale * 1e-12 * s.rep_rate_Hz() * 1e3;
    rows.emplace_back(units::wavelength_nm(nu_p + f), 10.0 * std::log10(std::max(mW, 1e-30)));
  }
  std::sort(rows.begin(), rows.end());
  r.spectrum.columns = {"wavelength_nm", "power_dBm"};
  for (const auto& [wl, p] : rows) r.spectrum.add({wl, p});
  return r;
}

OracleReport run_oracle(std::uint64_t rng_seed, Execution exec) {
  OracleReport rep;
  rep.table.columns = {"suite", "case", "observable", "value", "reference", "deviation", "tolerance", "pass"};

  struct FockCase {
    double g, seed, excess;
  };
  std::vector<FockCase> grid;
  for (double g : {1.0, 1.5, 2.0, 3.0, 5.0}) {
    for (double seed : {0.0, 1.0, 5.0}) {
      for (double e : {1.0, 2.0}) grid.push_back({g, seed, e});
    }
  }
  std::vector<std::array<double, 10>> fock(grid.size());
  for_each_index(grid.size(), exec, [&](std::size_t k) {
    const FockCase& c = grid[k];
    const PhotonStatistics gs =
        photon_statistics(apply_parametric_gain(seed_state({c.seed, c.seed > 0.0 ? units::to_db(c.excess) : 0.0}), c.g));
    const FockOracleResult fo = fock_oracle(c.g, c.seed, c.excess, 320);
    fock[k] = {gs.mean_s, fo.mean_s, gs.mean_i, fo.mean_i, gs.var_s, fo.var_s, gs.var_i, fo.var_i, gs.cov_si, fo.cov_si};
  });
  constexpr double kFockTol = 1e-4;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    for (int o = 0; o < 5; ++o) {
      const double v = fock[k][2 * o], ref = fock[k][2 * o + 1];
      const double dev = std::abs(v - ref) / std::max(std::abs(ref), 1e-10);
      const bool ok = dev <= kFockTol;
      rep.table.add({0.0, static_cast<double>(k), static_cast<double>(o), v, ref, dev, kFockTol, ok ? 1.0 : 0.0});
      ++rep.checks;
      rep.failures += ok ? 0 : 1;
    }
  }

  std::mt19937_64 rng(rng_seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  constexpr double kSigma = 3.0;
  for (int k = 0; k < 20; ++k) {
    std::array<double, 11> r{};
    for (auto& v : r) v = u(rng);
    const double g = 1.2 + 60.0 * r[0];
    RamanSpec raman;
    raman.detuning_THz = 2.1;
    raman.raman_fraction = 1e-3 * r[4];
    const FopaChain c = build_fopa_chain({g, (g - 1.0) * (0.9 + 0.1 * r[1]), 0.3 * r[2]},
                                         SaturationModel{0.1, 0.6 * r[3]}, raman, 2.0 * std::numbers::pi * r[5]);
    QuantumScenario q;
    q.input = seed_state({10.0 + 1e5 * r[6], 12.0 * r[7]});
    q.channels = c.channels;
    q.detection.eta_signal = 0.3 + 0.7 * r[8];
    q.detection.eta_idler = 0.3 + 0.7 * r[9];
    q.detection.voa_transmission = 0.5 + 0.5 * r[10];
    q.seed_mean_in = photon_statistics(q.input).mean_s;
    const TwinBeamObservables exact = analytic_observables(q);
    const MonteCarloObservables mc = wigner_monte_carlo(q, 100000, rng_seed + 1000 + static_cast<std::uint64_t>(k), exec);
    const std::array<std::array<double, 3>, 6> obs = {{{mc.value.R_t, exact.R_t, mc.std_error.R_t},
                                                       {mc.value.R_s, exact.R_s, mc.std_error.R_s},
                                                       {mc.value.R_i, exact.R_i, mc.std_error.R_i},
                                                       {mc.value.xi, exact.xi, mc.std_error.xi},
                                                       {mc.value.snl_photons, exact.snl_photons, mc.std_error.snl_photons},
                                                       {mc.value.i1_over_i2, exact.i1_over_i2, mc.std_error.i1_over_i2}}};
    for (int o = 0; o < 6; ++o) {
      const auto& [v, ref, se] = obs[static_cast<std::size_t>(o)];
      const double dev = std::abs(v - ref) / se;
      const bool ok = dev <= kSigma;
      rep.table.add({1.0, static_cast<double>(k), static_cast<double>(o), v, ref, dev, kSigma, ok ? 1.0 : 0.0});
      ++rep.checks;
      rep.failures += ok ? 0 : 1;
    }
  }
  return rep;
}

}  // namespace fopa::cli

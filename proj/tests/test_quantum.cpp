#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include "fopa/core/error.hpp"
#include "fopa/core/fock_oracle.hpp"
#include "fopa/core/gaussian_state.hpp"
#include "fopa/detection/detection.hpp"
#include "fopa/quantum/fopa_chain.hpp"
#include "fopa/quantum/twin_beam.hpp"
#include "fopa/quantum/wigner.hpp"
#include "test_helpers.hpp"

using namespace fopa;
using fopa::test::rel_close;

namespace {

DetectionChain chain(double eta_s, double eta_i, double voa = 1.0) {
  DetectionChain c;
  c.eta_signal = eta_s;
  c.eta_idler = eta_i;
  c.voa_transmission = voa;
  return c;
}

double db(double x) { return 10.0 * std::log10(x); }

// Bose occupation evaluated from SI constants written out here.
double bose(double thz, double kelvin) {
  const double h = 6.62607015e-34, kb = 1.380649e-23;
  return 1.0 / (std::exp(h * thz * 1e12 / (kb * kelvin)) - 1.0);
}

RamanSpec raman(double f, double temperature) {
  RamanSpec r;
  r.detuning_THz = 2.1;
  r.temperature_K = temperature;
  r.raman_fraction = f;
  return r;
}

QuantumScenario ideal_scenario(double g, double seed, double excess_db, const DetectionChain& det) {
  QuantumScenario q;
  q.input = seed_state({seed, excess_db});
  q.channels = {parametric_gain_channel(g)};
  q.detection = det;
  q.seed_mean_in = photon_statistics(q.input).mean_s;
  return q;
}

void check_same(const TwinBeamObservables& a, const TwinBeamObservables& b, double rel) {
  CHECK(rel_close(a.R_t, b.R_t, rel));
  CHECK(rel_close(a.R_s, b.R_s, rel));
  CHECK(rel_close(a.R_i, b.R_i, rel));
  CHECK(rel_close(a.xi, b.xi, rel));
  CHECK(rel_close(a.snl_photons, b.snl_photons, rel));
  CHECK(rel_close(a.i1_over_i2, b.i1_over_i2, rel));
}

}  // namespace

TEST_CASE("thermal occupation at the Raman shift") {
  CHECK(thermal_occupation(2.1, 300.0) == doctest::Approx(2.505).epsilon(0.01 / 2.505));
  CHECK(thermal_occupation(2.1, 77.0) == doctest::Approx(0.370).epsilon(0.005 / 0.370));
  CHECK(thermal_occupation(2.1, 300.0) == doctest::Approx(bose(2.1, 300.0)).epsilon(1e-6));
  CHECK(thermal_occupation(2.1, 1.0) < 1e-40);
  CHECK_THROWS_AS(thermal_occupation(0.0, 300.0), DomainError);
}

TEST_CASE("seed state") {
  SUBCASE("shot-limited seed is coherent times vacuum") {
    const GaussianTwoModeState s = seed_state({25.0, 0.0});
    CHECK((s.cov() - Mat4::Identity()).norm() == 0.0);
    CHECK(s.mean()(0) == doctest::Approx(10.0));
  }
  SUBCASE("12 dB excess noise gives a bright-seed Fano factor of 15.85") {
    const PhotonStatistics st = photon_statistics(seed_state({1e7, 12.0}));
    CHECK(st.var_s / st.mean_s == doctest::Approx(15.85).epsilon(0.1 / 15.85));
    CHECK(st.mean_i == doctest::Approx(0.0));
  }
  SUBCASE("no carrier means vacuum whatever the excess noise") {
    const GaussianTwoModeState s = seed_state({0.0, 12.0});
    CHECK((s.cov() - Mat4::Identity()).norm() == 0.0);
    CHECK(s.mean().norm() == 0.0);
  }
  CHECK_THROWS_AS(seed_state({-1.0, 0.0}), DomainError);
  CHECK_THROWS_AS(seed_state({1.0, -3.0}), DomainError);
}

TEST_CASE("parametric gain") {
  const GaussianTwoModeState coh = GaussianTwoModeState::coherent(2.0);
  const GaussianTwoModeState same = apply_parametric_gain(coh, 1.0);
  CHECK((same.cov() - coh.cov()).norm() < 1e-15);
  CHECK((same.mean() - coh.mean()).norm() < 1e-15);

  const PhotonStatistics vac = photon_statistics(apply_parametric_gain(GaussianTwoModeState::vacuum(), 2.0));
  CHECK(vac.mean_s == doctest::Approx(1.0));
  CHECK(vac.mean_i == doctest::Approx(1.0));
  CHECK(std::abs(vac.difference_variance()) < 1e-12);

  const PhotonStatistics st = photon_statistics(apply_parametric_gain(seed_state({5.0, 0.0}), 3.0));
  const FockOracleResult fock = fock_oracle(3.0, 5.0, 1.0, 120);
  CHECK(rel_close(st.mean_s, fock.mean_s, 1e-4));
  CHECK(rel_close(st.mean_i, fock.mean_i, 1e-4));
  CHECK(rel_close(st.var_s, fock.var_s, 1e-4));
  CHECK(rel_close(st.var_i, fock.var_i, 1e-4));
  CHECK(rel_close(st.cov_si, fock.cov_si, 1e-4));

  CHECK(apply_parametric_gain(coh, 7.0, 1.3).is_physical());
  CHECK_THROWS_AS(apply_parametric_gain(coh, 0.9), DomainError);
}

TEST_CASE("squeezing phase does not change any intensity observable") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 20; ++k) {
    const double g = 1.0 + 80.0 * u(rng);
    std::array<double, 8> x{};
    for (auto& v : x) v = u(rng);
    const GaussianTwoModeState in = seed_state({1e3 + 1e6 * x[0], 12.0 * x[1]});
    const RamanSpec r = raman(1e-3 * x[2], 300.0);
    const DetectionChain det = chain(0.3 + 0.7 * x[3], 0.3 + 0.7 * x[4], 0.5 + 0.5 * x[5]);
    const double n_in = photon_statistics(in).mean_s;
    const auto run = [&](double phase) {
      GaussianTwoModeState s = apply_parametric_gain(in, g, phase);
      s = inject_raman_noise(s, g, r);
      return twin_beam_observables(s, det, n_in);
    };
    check_same(run(0.0), run(2.0 * std::numbers::pi * x[6]), 1e-9);
  }
}

TEST_CASE("lossless amplification preserves Var(n_s - n_i) of the seed") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 100; ++k) {
    const double g = 1.0 + 99.0 * u(rng);
    const double n = 1e6 * u(rng);
    const GaussianTwoModeState in = seed_state({n, 15.0 * u(rng)});
    const double before = photon_statistics(in).var_s;
    const double after = photon_statistics(apply_parametric_gain(in, g)).difference_variance();
    CHECK(rel_close(after, before, 1e-9, 1e-9));
  }
}

TEST_CASE("Raman noise") {
  const GaussianTwoModeState amp = apply_parametric_gain(seed_state({1e5, 0.0}), 20.0);
  SUBCASE("zero fraction is a no-op") {
    const GaussianTwoModeState same = inject_raman_noise(amp, 20.0, raman(0.0, 300.0));
    CHECK((same.cov() - amp.cov()).norm() == 0.0);
  }
  SUBCASE("added variances follow the lumped formula") {
    const RamanSpec r = raman(1e-3, 300.0);
    const GaussianTwoModeState out = inject_raman_noise(amp, 20.0, r);
    const double nth = bose(2.1, 300.0);
    CHECK(out.cov()(0, 0) - amp.cov()(0, 0) == doctest::Approx(4e-3 * 19.0 * (nth + 1.0)).epsilon(1e-9));
    CHECK(out.cov()(3, 3) - amp.cov()(3, 3) == doctest::Approx(4e-3 * 19.0 * nth).epsilon(1e-9));
  }
  SUBCASE("cooling lowers both single-beam noise figures") {
    const DetectionChain det = chain(0.55, 0.58);
    const auto obs = [&](double t) {
      return twin_beam_observables(inject_raman_noise(amp, 20.0, raman(2e-3, t)), det, 1e5);
    };
    const TwinBeamObservables warm = obs(300.0), cold = obs(77.0);
    CHECK(cold.R_s < warm.R_s);
    CHECK(cold.R_i < warm.R_i);
  }
  SUBCASE("added noise always raises the difference variance") {
    const double clean = photon_statistics(amp).difference_variance();
    for (double f : {1e-6, 1e-4, 1e-2}) {
      CHECK(photon_statistics(inject_raman_noise(amp, 20.0, raman(f, 77.0))).difference_variance() > clean);
    }
  }
}

TEST_CASE("twin-beam observables of the ideal amplifier") {
  const double g = 56.0;
  const TwinBeamObservables unit = analytic_observables(ideal_scenario(g, 1e8, 0.0, chain(1.0, 1.0)));
  CHECK(unit.R_t == doctest::Approx(1.0 / 111.0).epsilon(1e-3));
  CHECK(db(unit.R_t) == doctest::Approx(-20.45).epsilon(1e-3));
  const TwinBeamObservables lossy = analytic_observables(ideal_scenario(g, 1e8, 0.0, chain(0.55, 0.55)));
  CHECK(lossy.R_t == doctest::Approx(0.4550).epsilon(1e-3));
  CHECK(db(lossy.R_t) == doctest::Approx(-3.42).epsilon(2e-3));
  CHECK(lossy.xi == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(lossy.i1_over_i2 == doctest::Approx(56.0 / 55.0).epsilon(1e-6));
  CHECK(lossy.snl_photons == doctest::Approx(0.55 * 1e8 * 111.0).epsilon(1e-6));
}

TEST_CASE("no gain: coherent seed sits at the shot-noise level and xi is undefined") {
  const GaussianTwoModeState s = apply_parametric_gain(seed_state({1e4, 0.0}), 1.0);
  for (double eta : {0.3, 0.8}) CHECK(noise_reduction(s, chain(eta, eta)) == doctest::Approx(1.0));
  CHECK_THROWS_AS(twin_beam_observables(s, chain(0.5, 0.5), 1e4), DomainError);
}

TEST_CASE("bright-seed closed form R_t = 1 - eta + eta / (2g - 1)") {
  for (double g : {2.0, 10.0, 56.0}) {
    for (double eta : {0.3, 0.55, 1.0}) {
      const double rt = analytic_observables(ideal_scenario(g, 1e6, 0.0, chain(eta, eta))).R_t;
      CAPTURE(g);
      CAPTURE(eta);
      CHECK(rel_close(rt, 1.0 - eta + eta / (2.0 * g - 1.0), 1e-3));
    }
  }
}

TEST_CASE("12 dB seed noise: R_t crosses the shot-noise level near g = 8.4") {
  const auto rt = [](double g) { return analytic_observables(ideal_scenario(g, 1e6, 12.0, chain(1.0, 1.0))).R_t; };
  CHECK(rt(2.0) > 1.0);
  CHECK(rt(20.0) < 1.0);
  double lo = 2.0, hi = 20.0;
  while (hi - lo > 1e-6) {
    const double mid = 0.5 * (lo + hi);
    (rt(mid) > 1.0 ? lo : hi) = mid;
  }
  CHECK(lo >= 7.0);
  CHECK(lo <= 9.0);
  CHECK(lo == doctest::Approx(0.5 * (std::pow(10.0, 1.2) + 1.0)).epsilon(1e-3));
}

TEST_CASE("R_t monotonicity in efficiency, gain and Raman fraction") {
  double previous = 2.0;
  for (int k = 2; k <= 20; ++k) {
    const double eta = 0.05 * k;
    const double r = analytic_observables(ideal_scenario(10.0, 1e6, 0.0, chain(eta, eta))).R_t;
    CHECK(r <= previous + 1e-12);
    previous = r;
  }
  previous = 2.0;
  for (double g = 1.5; g <= 100.0; g *= 1.3) {
    const double r = analytic_observables(ideal_scenario(g, 1e6, 0.0, chain(0.55, 0.55))).R_t;
    CHECK(r <= previous + 1e-12);
    previous = r;
  }
  previous = 0.0;
  for (double f : {0.0, 1e-5, 1e-4, 1e-3}) {
    QuantumScenario q = ideal_scenario(20.0, 1e5, 0.0, chain(0.55, 0.58));
    q.channels.push_back(raman_noise_channel(20.0, raman(f, 300.0)));
    const double r = analytic_observables(q).R_t;
    CHECK(r > previous);
    previous = r;
  }
}

TEST_CASE("fopa chain: ideal operating point reduces to the bare squeezer") {
  const FopaChain c = build_fopa_chain({30.0, 29.0, 0.01}, SaturationModel{0.15, 0.5}, raman(0.0, 300.0));
  CHECK(c.raman_transfer == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(c.coherent_gain == doctest::Approx(30.0));
  CHECK(c.incoherent_gain == 1.0);
  QuantumScenario q;
  q.input = seed_state({1e6, 0.0});
  q.channels = c.channels;
  q.detection = chain(0.55, 0.58);
  q.seed_mean_in = 1e6;
  const TwinBeamObservables o = analytic_observables(q);
  CHECK(o.xi == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("fopa chain: Raman transfer is recovered from the photon ratio") {
  const double gp = 12.0;
  for (double t : {1.05, 0.97}) {
    const double g = gp * t;
    const double ri = (gp - 1.0) / t;
    const FopaChain c = build_fopa_chain({g, ri, 0.0}, SaturationModel{}, raman(0.0, 300.0));
    CHECK(c.raman_transfer == doctest::Approx(t).epsilon(1e-12));
    CHECK(c.parametric_gain == doctest::Approx(gp).epsilon(1e-12));
    GaussianTwoModeState s = seed_state({1e6, 0.0});
    for (const auto& ch : c.channels) s = ch.apply(s);
    const PhotonStatistics st = photon_statistics(s);
    CHECK(st.mean_s / 1e6 == doctest::Approx(g).epsilon(1e-5));
    CHECK(st.mean_i / 1e6 == doctest::Approx(ri).epsilon(1e-5));
  }
}

TEST_CASE("fopa chain: saturation splits the gain and degrades the correlation") {
  const SaturationModel sat{0.1, 0.5};
  CHECK(sat.incoherent_share(0.05) == 0.0);
  CHECK(sat.incoherent_share(0.2) == doctest::Approx(0.25));
  const FopaChain below = build_fopa_chain({30.0, 29.0, 0.05}, sat, raman(0.0, 300.0));
  const FopaChain above = build_fopa_chain({30.0, 29.0, 0.2}, sat, raman(0.0, 300.0));
  CHECK(above.coherent_gain * above.incoherent_gain == doctest::Approx(30.0));
  CHECK(above.coherent_gain < 30.0);
  const auto rt = [](const FopaChain& c) {
    QuantumScenario q;
    q.input = seed_state({1e6, 0.0});
    q.channels = c.channels;
    q.detection = chain(0.55, 0.58);
    q.seed_mean_in = 1e6;
    return analytic_observables(q).R_t;
  };
  CHECK(rt(above) > rt(below));
  CHECK_THROWS_AS(SaturationModel({0.1, 1.5}).validate(), DomainError);
}

TEST_CASE("Wigner Monte Carlo agrees with the moment formulas on randomized scenarios") {
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 20; ++k) {
    // One draw per statement: argument evaluation order is unspecified.
    std::array<double, 12> r{};
    for (auto& v : r) v = u(rng);
    const double g = 1.2 + 60.0 * r[0];
    const AmplifierPoint point{g, (g - 1.0) * (0.9 + 0.1 * r[1]), 0.3 * r[2]};
    const FopaChain c = build_fopa_chain(point, SaturationModel{0.1, 0.6 * r[3]}, raman(1e-3 * r[4], 300.0),
                                         2.0 * std::numbers::pi * r[5]);
    QuantumScenario q;
    q.input = seed_state({10.0 + 1e5 * r[6], 12.0 * r[7]});
    q.channels = c.channels;
    q.detection = chain(0.3 + 0.7 * r[8], 0.3 + 0.7 * r[9], 0.5 + 0.5 * r[10]);
    q.seed_mean_in = photon_statistics(q.input).mean_s;
    const TwinBeamObservables exact = analytic_observables(q);
    const MonteCarloObservables mc = wigner_monte_carlo(q, 100000, 1000 + static_cast<std::uint64_t>(k));
    CAPTURE(k);
    CHECK(std::abs(mc.value.R_t - exact.R_t) <= 3.0 * mc.std_error.R_t);
    CHECK(std::abs(mc.value.R_s - exact.R_s) <= 3.0 * mc.std_error.R_s);
    CHECK(std::abs(mc.value.R_i - exact.R_i) <= 3.0 * mc.std_error.R_i);
    CHECK(std::abs(mc.value.xi - exact.xi) <= 3.0 * mc.std_error.xi);
    CHECK(std::abs(mc.value.snl_photons - exact.snl_photons) <= 3.0 * mc.std_error.snl_photons);
    CHECK(std::abs(mc.value.i1_over_i2 - exact.i1_over_i2) <= 3.0 * mc.std_error.i1_over_i2);
  }
}

TEST_CASE("Wigner Monte Carlo: coherent input without gain is Poissonian") {
  QuantumScenario q;
  q.input = seed_state({500.0, 0.0});
  q.detection = chain(0.7, 0.7);
  q.seed_mean_in = 500.0;
  const MonteCarloObservables mc = wigner_monte_carlo(q, 100000, 9);
  CHECK(std::abs(mc.value.R_s - 1.0) <= 3.0 * mc.std_error.R_s);
}

TEST_CASE("Wigner Monte Carlo: error scaling, determinism and thread independence") {
  QuantumScenario q = ideal_scenario(10.0, 1e4, 6.0, chain(0.55, 0.58));
  const MonteCarloObservables a = wigner_monte_carlo(q, 100000, 42);
  const MonteCarloObservables b = wigner_monte_carlo(q, 200000, 42);
  const double ratio = b.std_error.R_t / a.std_error.R_t;
  CHECK(ratio == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(0.2));

  const MonteCarloObservables again = wigner_monte_carlo(q, 100000, 42);
  CHECK(again.value.R_t == a.value.R_t);
  const MonteCarloObservables serial = wigner_monte_carlo(q, 100000, 42, Execution::serial);
  CHECK(serial.value.R_t == a.value.R_t);
  CHECK(serial.std_error.R_t == a.std_error.R_t);
  CHECK(wigner_monte_carlo(q, 100000, 43).value.R_t != a.value.R_t);
  CHECK_THROWS_AS(wigner_monte_carlo(q, 100, 1), DomainError);
}

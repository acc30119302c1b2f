#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "fopa/core/error.hpp"
#include "fopa/core/fock_oracle.hpp"
#include "fopa/core/gaussian_state.hpp"
#include "fopa/core/pulse.hpp"
#include "fopa/core/units.hpp"
#include "fopa/numerics/gauss_hermite.hpp"
#include "test_helpers.hpp"

using namespace fopa;
using fopa::test::rel_close;

namespace {

// Seed with classical amplitude noise E (x-variance E) through an ideal squeezer, built by hand.
GaussianTwoModeState squeezed_seed(double g, double seed, double excess) {
  Vec4 mean(2.0 * std::sqrt(seed), 0.0, 0.0, 0.0);
  Mat4 cov = Mat4::Identity();
  if (seed > 0.0) cov(0, 0) = excess;
  const Mat4 s = fopa::test::two_mode_squeeze_matrix(g);
  return {s * mean, s * cov * s.transpose()};
}

}  // namespace

TEST_CASE("units: photon energy and per-pulse photons at 1552.5 nm") {
  CHECK(units::photon_energy_J(1552.5) == doctest::Approx(1.27952e-19).epsilon(1e-4));
  // 1 pJ -> 7.815e6 photons
  CHECK(1e-12 / units::photon_energy_J(1552.5) == doctest::Approx(7.8154e6).epsilon(1e-4));
  // 2 uW at 40 MHz is 50 fJ per pulse
  CHECK(units::pulse_energy_J(2e-6) == doctest::Approx(5e-14));
}

TEST_CASE("time grid rejects non power-of-two sizes") {
  CHECK_THROWS_AS(TimeGrid(1000, 0.1), DomainError);
  CHECK_THROWS_AS(TimeGrid(1024, 0.0), DomainError);
  TimeGrid g(1024, 0.1);
  CHECK(g.frequency_thz(1) == doctest::Approx(1.0 / 102.4));
  CHECK(g.frequency_thz(1023) == doctest::Approx(-1.0 / 102.4));
}

TEST_CASE("gaussian_pulse: transform-limited 4 ps at 1552.5 nm") {
  const TimeGrid grid(4096, 0.05);
  const auto p = gaussian_pulse(1.0, 4.0, 1552.5, 0.0, grid);
  double peak = 0.0;
  for (auto a : p.envelope()) peak = std::max(peak, std::norm(a));
  CHECK(peak == doctest::Approx(1.0));
  const auto m = pulse_metrics(p);
  CHECK(m.fwhm_ps == doctest::Approx(4.0).epsilon(1e-3));
  CHECK(m.tbp == doctest::Approx(0.441).epsilon(0.002 / 0.441));
  // 0.441/4 THz at 1552.5 nm
  CHECK(m.spectral_fwhm_nm == doctest::Approx(0.886).epsilon(5e-3));
  CHECK_FALSE(m.ambiguous);
}

TEST_CASE("gaussian_pulse: zero power gives a zero envelope") {
  const TimeGrid grid(1024, 0.05);
  const auto p = gaussian_pulse(0.0, 3.0, 1569.8, 0.0, grid);
  CHECK(p.energy_pJ() == 0.0);
}

TEST_CASE("gaussian_pulse: chirp 1 keeps temporal width and widens spectrum by sqrt 2") {
  const TimeGrid grid(4096, 0.05);
  const auto p0 = pulse_metrics(gaussian_pulse(1.0, 4.0, 1552.5, 0.0, grid));
  const auto p1 = pulse_metrics(gaussian_pulse(1.0, 4.0, 1552.5, 1.0, grid));
  CHECK(p1.fwhm_ps == doctest::Approx(p0.fwhm_ps).epsilon(1e-9));
  CHECK(p1.spectral_fwhm_thz / p0.spectral_fwhm_thz == doctest::Approx(std::sqrt(2.0)).epsilon(2e-3));
  CHECK(p1.tbp == doctest::Approx(units::kGaussianTbp * std::sqrt(2.0)).epsilon(3e-3));
}

TEST_CASE("gaussian_pulse: rejects coarse or short grids") {
  CHECK_THROWS_AS(gaussian_pulse(1.0, 1.0, 1550.0, 0.0, TimeGrid(1024, 0.1)), DomainError);
  CHECK_THROWS_AS(gaussian_pulse(1.0, 4.0, 1550.0, 0.0, TimeGrid(256, 0.05)), DomainError);
}

TEST_CASE("pulse_metrics: 1 pJ at 1552.5 nm is 7.81e6 photons") {
  const TimeGrid grid(4096, 0.05);
  auto p = gaussian_pulse(1.0, 4.0, 1552.5, 0.0, grid);
  const double scale = std::sqrt(1.0 / p.energy_pJ());
  for (auto& a : p.envelope()) a *= scale;
  const auto m = pulse_metrics(p);
  CHECK(m.energy_pJ == doctest::Approx(1.0));
  CHECK(m.photons_per_pulse == doctest::Approx(7.815e6).epsilon(1e-3));
}

TEST_CASE("pulse_metrics: double-peaked profile is flagged ambiguous") {
  const TimeGrid grid(4096, 0.05);
  auto a = gaussian_pulse(1.0, 4.0, 1550.0, 0.0, grid);
  std::vector<cplx> env(a.envelope().begin(), a.envelope().end());
  const std::size_t shift = 400;  // 20 ps
  for (std::size_t i = 0; i + shift < env.size(); ++i) env[i + shift] += a.envelope()[i];
  const auto m = pulse_metrics(OpticalPulse(1550.0, grid, env));
  CHECK(m.ambiguous);
  CHECK(m.fwhm_ps > 20.0);
}

TEST_CASE("property: Parseval and FWHM round trip over random pulses") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 25; ++trial) {
    const double dt = 0.02 + 0.05 * u(rng);
    const double fwhm = 16.0 * dt * (1.0 + 4.0 * u(rng));
    const TimeGrid grid(4096, dt);
    const auto p = gaussian_pulse(0.1 + 10.0 * u(rng), fwhm, 1530.0 + 40.0 * u(rng), 4.0 * (u(rng) - 0.5), grid);
    CHECK(rel_close(p.energy_pJ(), p.spectral_energy_pJ(), 1e-10));
    CHECK(std::abs(pulse_metrics(p).fwhm_ps - fwhm) <= dt);
  }
}

TEST_CASE("gauss_hermite integrates low moments of exp(-x^2)") {
  const auto rule = numerics::gauss_hermite(64);
  double m0 = 0.0, m2 = 0.0, m4 = 0.0;
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    const double x = rule.nodes[k];
    m0 += rule.weights[k];
    m2 += rule.weights[k] * x * x;
    m4 += rule.weights[k] * x * x * x * x;
  }
  const double sp = std::sqrt(M_PI);
  CHECK(m0 == doctest::Approx(sp).epsilon(1e-12));
  CHECK(m2 == doctest::Approx(sp / 2.0).epsilon(1e-12));
  CHECK(m4 == doctest::Approx(3.0 * sp / 4.0).epsilon(1e-12));
}

TEST_CASE("photon_statistics: coherent, thermal and two-mode squeezed vacuum") {
  const auto coh = photon_statistics(GaussianTwoModeState::coherent(10.0));
  CHECK(coh.mean_s == doctest::Approx(100.0));
  CHECK(coh.var_s == doctest::Approx(100.0));
  CHECK(coh.cov_si == doctest::Approx(0.0));
  CHECK(coh.mean_i == doctest::Approx(0.0));

  Mat4 thermal = Mat4::Identity();
  thermal(0, 0) = thermal(1, 1) = 3.0;  // 2 n + 1 with n = 1
  const auto th = photon_statistics(GaussianTwoModeState(Vec4::Zero(), thermal));
  CHECK(th.mean_s == doctest::Approx(1.0));
  CHECK(th.var_s == doctest::Approx(2.0));

  const auto tmsv = photon_statistics(squeezed_seed(2.0, 0.0, 1.0));
  CHECK(tmsv.mean_s == doctest::Approx(1.0));
  CHECK(tmsv.var_s == doctest::Approx(2.0));
  CHECK(tmsv.var_i == doctest::Approx(2.0));
  CHECK(tmsv.cov_si == doctest::Approx(2.0));
  CHECK(tmsv.difference_variance() == doctest::Approx(0.0).epsilon(1e-12));
  const auto oracle = fock_oracle(2.0, 0.0, 1.0, 60);
  CHECK(oracle.cov_si == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(oracle.var_s == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("photon_statistics rejects unphysical covariance") {
  Mat4 bad = Mat4::Identity() * 0.5;
  CHECK_THROWS_AS(photon_statistics(GaussianTwoModeState(Vec4::Zero(), bad)), DomainError);
  Mat4 asym = Mat4::Identity();
  asym(0, 1) = 0.3;
  CHECK_THROWS_AS(GaussianTwoModeState(Vec4::Zero(), asym), DomainError);
}

TEST_CASE("fock_oracle examples") {
  const auto id = fock_oracle(1.0, 4.0, 1.0, 30);
  CHECK(id.mean_s == doctest::Approx(4.0).epsilon(1e-9));
  CHECK(id.var_s == doctest::Approx(4.0).epsilon(1e-9));
  CHECK(id.mean_i == doctest::Approx(0.0));
  CHECK(id.truncation_error_bound < 1e-8);

  const auto sp = fock_oracle(2.0, 0.0, 1.0, 40);
  CHECK(sp.mean_s == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(sp.mean_i == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(sp.difference_variance() == doctest::Approx(0.0).epsilon(1e-9));

  const auto seeded = fock_oracle(3.0, 5.0, 1.0, 120);
  CHECK(seeded.difference_variance() == doctest::Approx(5.0).epsilon(1e-7));
}

TEST_CASE("fock_oracle signals a too-small cutoff") {
  CHECK_THROWS_AS(fock_oracle(5.0, 5.0, 1.0, 30), TruncationError);
  CHECK_THROWS_AS(fock_oracle(0.5, 1.0, 1.0, 30), DomainError);
}

TEST_CASE("property: Gaussian moments agree with the Fock oracle on the small-instance grid") {
  for (double g : {1.0, 1.5, 2.0, 3.0, 5.0}) {
    for (double seed : {0.0, 1.0, 5.0}) {
      for (double e : {1.0, 2.0}) {
        CAPTURE(g);
        CAPTURE(seed);
        CAPTURE(e);
        const auto gs = photon_statistics(squeezed_seed(g, seed, e));
        const auto fo = fock_oracle(g, seed, e, 320);
        CHECK(rel_close(gs.mean_s, fo.mean_s, 1e-6, 1e-12));
        CHECK(rel_close(gs.mean_i, fo.mean_i, 1e-6, 1e-12));
        CHECK(rel_close(gs.var_s, fo.var_s, 1e-4, 1e-10));
        CHECK(rel_close(gs.var_i, fo.var_i, 1e-4, 1e-10));
        CHECK(rel_close(gs.cov_si, fo.cov_si, 1e-4, 1e-10));
      }
    }
  }
}

TEST_CASE("property: random physical states have non-negative number-difference variance") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const auto s = fopa::test::random_physical_state(rng);
    REQUIRE(s.is_physical());
    const auto st = photon_statistics(s);
    CHECK(st.difference_variance() >= -1e-9 * (st.var_s + st.var_i));
    CHECK(st.var_s >= 0.0);
    CHECK(st.var_i >= 0.0);
    CHECK(st.cov_si * st.cov_si <= st.var_s * st.var_i * (1.0 + 1e-9) + 1e-12);
  }
}

#include "fopa/quantum/wigner.hpp"

#include <Eigen/Eigenvalues>
#include <array>
#include <cmath>
#include <random>
#include <vector>

#include "fopa/core/error.hpp"

namespace fopa {
namespace {

// Symmetric square root of a positive semi-definite matrix.
Mat4 psd_sqrt(const Mat4& m) {
  Eigen::SelfAdjointEigenSolver<Mat4> es(m);
  const Vec4 ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
}

struct Step {
  Mat4 transfer;
  Mat4 noise_sqrt;
  bool noisy;
};

// Wigner moments of W_s = |alpha_s|^2, W_i = |alpha_i|^2 (alpha = (x + i p) / 2), accumulated
// about fixed offsets to keep bright-beam variances free of cancellation.
struct Moments {
  double n = 0.0, s = 0.0, i = 0.0, ss = 0.0, ii = 0.0, si = 0.0;

  Moments& operator+=(const Moments& o) {
    n += o.n;
    s += o.s;
    i += o.i;
    ss += o.ss;
    ii += o.ii;
    si += o.si;
    return *this;
  }
  Moments operator-(const Moments& o) const { return {n - o.n, s - o.s, i - o.i, ss - o.ss, ii - o.ii, si - o.si}; }
};

PhotonStatistics to_statistics(const Moments& m, double shift_s, double shift_i) {
  const double es = m.s / m.n, ei = m.i / m.n;
  PhotonStatistics st;
  st.mean_s = es + shift_s - 0.5;
  st.mean_i = ei + shift_i - 0.5;
  st.var_s = m.ss / m.n - es * es - 0.25;
  st.var_i = m.ii / m.n - ei * ei - 0.25;
  st.cov_si = m.si / m.n - es * ei;
  return st;
}

Moments run_block(const Mat4& input_sqrt, const Vec4& input_mean, const std::vector<Step>& steps, long count,
                  double shift_s, double shift_i, std::uint64_t rng_seed, int block) {
  std::seed_seq seq{static_cast<std::uint32_t>(rng_seed), static_cast<std::uint32_t>(rng_seed >> 32),
                    static_cast<std::uint32_t>(block)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> normal;
  const auto draw = [&] {
    Vec4 z;
    for (int k = 0; k < 4; ++k) z(k) = normal(rng);
    return z;
  };
  Moments m;
  for (long k = 0; k < count; ++k) {
    Vec4 v = input_mean + input_sqrt * draw();
    for (const auto& st : steps) {
      v = st.transfer * v;
      if (st.noisy) v += st.noise_sqrt * draw();
    }
    const double ws = 0.25 * (v(0) * v(0) + v(1) * v(1)) - shift_s;
    const double wi = 0.25 * (v(2) * v(2) + v(3) * v(3)) - shift_i;
    m.n += 1.0;
    m.s += ws;
    m.i += wi;
    m.ss += ws * ws;
    m.ii += wi * wi;
    m.si += ws * wi;
  }
  return m;
}

std::array<double, 6> as_array(const TwinBeamObservables& o) {
  return {o.R_t, o.R_s, o.R_i, o.xi, o.snl_photons, o.i1_over_i2};
}

TwinBeamObservables from_array(const std::array<double, 6>& a) { return {a[0], a[1], a[2], a[3], a[4], a[5]}; }

}  // namespace

MonteCarloObservables wigner_monte_carlo(const QuantumScenario& scenario, long n_samples, std::uint64_t rng_seed,
                                         Execution exec, int blocks) {
  if (n_samples < 10000) throw DomainError("wigner_monte_carlo needs at least 1e4 samples");
  if (blocks < 2 || blocks > n_samples) throw DomainError("wigner_monte_carlo: invalid block count");

  std::vector<Step> steps;
  for (const auto& ch : scenario.channels) {
    steps.push_back({ch.transfer, psd_sqrt(ch.noise), ch.noise.cwiseAbs().maxCoeff() > 0.0});
  }
  const GaussianChannel det = detection_channel(scenario.detection);
  steps.push_back({det.transfer, psd_sqrt(det.noise), det.noise.cwiseAbs().maxCoeff() > 0.0});
  const Mat4 input_sqrt = psd_sqrt(scenario.input.cov());
  const Vec4 input_mean = scenario.input.mean();
  Vec4 out_mean = input_mean;
  for (const auto& st : steps) out_mean = st.transfer * out_mean;
  const double shift_s = 0.25 * out_mean.head<2>().squaredNorm();
  const double shift_i = 0.25 * out_mean.tail<2>().squaredNorm();

  std::vector<Moments> per_block(static_cast<std::size_t>(blocks));
  const auto count_for = [&](int b) { return n_samples / blocks + (b < n_samples % blocks ? 1 : 0); };
  if (exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int b = 0; b < blocks; ++b) {
      per_block[static_cast<std::size_t>(b)] = run_block(input_sqrt, input_mean, steps, count_for(b), shift_s, shift_i, rng_seed, b);
    }
  } else {
    for (int b = 0; b < blocks; ++b) {
      per_block[static_cast<std::size_t>(b)] = run_block(input_sqrt, input_mean, steps, count_for(b), shift_s, shift_i, rng_seed, b);
    }
  }

  Moments total;
  for (const auto& m : per_block) total += m;
  const auto estimate = [&](const Moments& m) {
    return as_array(observables_from_statistics(to_statistics(m, shift_s, shift_i), scenario.detection, scenario.seed_mean_in));
  };
  const auto full = estimate(total);

  std::vector<std::array<double, 6>> leave_out;
  std::array<double, 6> avg{};
  for (const auto& m : per_block) {
    leave_out.push_back(estimate(total - m));
    for (std::size_t k = 0; k < 6; ++k) avg[k] += leave_out.back()[k] / blocks;
  }
  std::array<double, 6> err{};
  for (const auto& lo : leave_out) {
    for (std::size_t k = 0; k < 6; ++k) err[k] += (lo[k] - avg[k]) * (lo[k] - avg[k]);
  }
  for (auto& e : err) e = std::sqrt(e * (blocks - 1.0) / blocks);

  MonteCarloObservables out;
  out.value = from_array(full);
  out.std_error = from_array(err);
  out.n_samples = n_samples;
  return out;
}

}  // namespace fopa

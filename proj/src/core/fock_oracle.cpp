#include "fopa/core/fock_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "fopa/core/error.hpp"
#include "fopa/numerics/gauss_hermite.hpp"

namespace fopa {
namespace {

constexpr double kAcceptedBound = 1e-8;
constexpr double kNegligibleWeight = 1e-20;
constexpr int kQuadratureOrder = 64;

struct BlockMoments {
  double norm = 0.0;
  double ns = 0.0;
  double ni = 0.0;
  double ns2 = 0.0;
  double ni2 = 0.0;
  double nsni = 0.0;
  double edge_mass = 0.0;
};

// Evolve |d, 0> through exp(r (a^dag b^dag - a b)) within the block |m+d, m>, m < cutoff - d.
// The generator is tridiagonal and antisymmetric; its action on the start vector is summed as a
// Taylor series over substeps of norm <= 4, which needs only matrix-vector products.
BlockMoments evolve_block(int d, int cutoff, double r) {
  const int size = cutoff - d;
  std::vector<double> coupling(static_cast<std::size_t>(std::max(0, size - 1)));
  double max_coupling = 0.0;
  for (int m = 0; m + 1 < size; ++m) {
    coupling[static_cast<std::size_t>(m)] = std::sqrt(static_cast<double>(m + d + 1) * (m + 1));
    max_coupling = std::max(max_coupling, coupling[static_cast<std::size_t>(m)]);
  }
  const int substeps = std::max(1, static_cast<int>(std::ceil(2.0 * max_coupling * r / 4.0)));
  const double h = r / substeps;

  std::vector<double> u(static_cast<std::size_t>(size), 0.0), term, next(static_cast<std::size_t>(size));
  u[0] = 1.0;
  for (int step = 0; step < substeps; ++step) {
    term = u;
    for (int k = 1; k <= 60; ++k) {
      double term_norm = 0.0;
      for (int m = 0; m < size; ++m) {
        double v = 0.0;
        if (m > 0) v += coupling[static_cast<std::size_t>(m - 1)] * term[static_cast<std::size_t>(m - 1)];
        if (m + 1 < size) v -= coupling[static_cast<std::size_t>(m)] * term[static_cast<std::size_t>(m + 1)];
        next[static_cast<std::size_t>(m)] = v * h / k;
        term_norm = std::max(term_norm, std::abs(next[static_cast<std::size_t>(m)]));
      }
      term.swap(next);
      for (int m = 0; m < size; ++m) u[static_cast<std::size_t>(m)] += term[static_cast<std::size_t>(m)];
      if (term_norm < 1e-18) break;
    }
  }

  const int edge = std::max(4, size / 10);
  BlockMoments b;
  for (int m = 0; m < size; ++m) {
    const double q = u[static_cast<std::size_t>(m)] * u[static_cast<std::size_t>(m)];
    const double ns = m + d;
    const double ni = m;
    b.norm += q;
    b.ns += q * ns;
    b.ni += q * ni;
    b.ns2 += q * ns * ns;
    b.ni2 += q * ni * ni;
    b.nsni += q * ns * ni;
    if (m >= size - edge) b.edge_mass += q;
  }
  return b;
}

double poisson(double mean, int n) {
  if (mean == 0.0) return n == 0 ? 1.0 : 0.0;
  return std::exp(-mean + n * std::log(mean) - std::lgamma(n + 1.0));
}

}  // namespace

FockOracleResult fock_oracle(double g, double seed_mean_photons, double excess_noise_factor, int cutoff) {
  if (!(g >= 1.0)) throw DomainError("fock_oracle: gain must be >= 1");
  if (!(seed_mean_photons >= 0.0)) throw DomainError("fock_oracle: seed photons must be >= 0");
  if (!(excess_noise_factor >= 1.0)) throw DomainError("fock_oracle: excess noise factor must be >= 1");
  if (cutoff < 2) throw DomainError("fock_oracle: cutoff must be >= 2");

  const double r = std::acosh(std::sqrt(g));

  // Classical amplitude jitter: alpha = sqrt(n) + delta, delta ~ N(0, (E-1)/4).
  std::vector<double> alphas{std::sqrt(seed_mean_photons)};
  std::vector<double> weights{1.0};
  if (seed_mean_photons > 0.0 && excess_noise_factor > 1.0) {
    const auto rule = numerics::gauss_hermite(kQuadratureOrder);
    const double sigma = std::sqrt((excess_noise_factor - 1.0) / 4.0);
    alphas.clear();
    weights.clear();
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      alphas.push_back(std::sqrt(seed_mean_photons) + std::sqrt(2.0) * sigma * rule.nodes[k]);
      weights.push_back(rule.weights[k] / std::sqrt(M_PI));
    }
  }

  double skipped_weight = 0.0;
  std::vector<double> input_dist(static_cast<std::size_t>(cutoff), 0.0);
  for (std::size_t j = 0; j < alphas.size(); ++j) {
    if (weights[j] < kNegligibleWeight) {
      skipped_weight += weights[j];
      continue;
    }
    const double n_alpha = alphas[j] * alphas[j];
    for (int d = 0; d < cutoff; ++d) input_dist[static_cast<std::size_t>(d)] += weights[j] * poisson(n_alpha, d);
  }

  FockOracleResult res;
  res.truncation_cutoff = cutoff;
  double captured = 0.0;
  double ns = 0.0, ni = 0.0, ns2 = 0.0, ni2 = 0.0, nsni = 0.0, edge = 0.0;
  for (int d = 0; d < cutoff; ++d) {
    const double p = input_dist[static_cast<std::size_t>(d)];
    if (p < 1e-30) continue;
    const auto b = evolve_block(d, cutoff, r);
    captured += p;
    ns += p * b.ns;
    ni += p * b.ni;
    ns2 += p * b.ns2;
    ni2 += p * b.ni2;
    nsni += p * b.nsni;
    edge += p * b.edge_mass;
  }
  const double kept = 1.0 - skipped_weight;
  res.truncation_error_bound = std::max(0.0, kept - captured) + edge + skipped_weight;
  if (res.truncation_error_bound >= kAcceptedBound) {
    throw TruncationError("fock_oracle: truncation bound " + std::to_string(res.truncation_error_bound) +
                              " at cutoff " + std::to_string(cutoff) + "; enlarge the cutoff",
                          res.truncation_error_bound);
  }
  ns /= captured;
  ni /= captured;
  res.mean_s = ns;
  res.mean_i = ni;
  res.var_s = ns2 / captured - ns * ns;
  res.var_i = ni2 / captured - ni * ni;
  res.cov_si = nsni / captured - ns * ni;
  return res;
}

}  // namespace fopa

#pragma once

#include "fopa/core/gaussian_state.hpp"

namespace fopa {

struct FockOracleResult : PhotonStatistics {
  int truncation_cutoff = 0;
  double truncation_error_bound = 0.0;
};

/// Brute-force photon statistics of a coherent seed (optionally with classical amplitude noise of
/// `excess_noise_factor` times shot noise) sent through the two-mode squeezer with cosh^2 r = g,
/// computed on a Fock basis truncated at `cutoff` photons per mode.
///
/// The squeezer conserves n_s - n_i, so each input number state |d,0> evolves inside the block
/// {|m+d, m>}; the block propagator is a dense matrix exponential of the tridiagonal generator.
/// Amplitude noise is integrated with 64-point Gauss-Hermite quadrature.
///
/// Throws TruncationError when the probability mass reaching the basis edge exceeds 1e-8.
FockOracleResult fock_oracle(double g, double seed_mean_photons, double excess_noise_factor, int cutoff);

}  // namespace fopa

#pragma once

#include <cstdint>

#include "fopa/core/execution.hpp"
#include "fopa/quantum/fopa_chain.hpp"
#include "fopa/quantum/twin_beam.hpp"

namespace fopa {

struct MonteCarloObservables {
  TwinBeamObservables value;
  TwinBeamObservables std_error;  // jackknife over sample blocks
  long n_samples = 0;
};

/// Truncated-Wigner estimate: samples the input Wigner function, pushes each sample through the
/// scenario's channels and the detection loss (adding sampled channel noise), and converts the
/// symmetrically ordered moments to photon statistics. Each block of samples has its own
/// generator seeded from (rng_seed, block), so the result does not depend on the thread count.
MonteCarloObservables wigner_monte_carlo(const QuantumScenario& scenario, long n_samples, std::uint64_t rng_seed,
                                         Execution exec = Execution::parallel, int blocks = 64);

}  // namespace fopa

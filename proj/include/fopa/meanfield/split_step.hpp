#pragma once

#include <span>

#include "fopa/core/execution.hpp"
#include "fopa/core/pulse.hpp"
#include "fopa/meanfield/fiber.hpp"

namespace fopa {

struct StepControl {
  double max_nonlinear_phase_rad = 0.005;  // gamma * max|A|^2 * h per step
  double max_step_m = 5.0;
  double edge_fraction_limit = 1e-6;  // energy allowed in the outer 1/32 of the spectrum
  Execution execution = Execution::parallel;
};

/// Multiplies each sample by exp(i * gamma_h * |a|^2).
void apply_kerr_phase(std::span<cplx> a, double gamma_h, Execution exec);

/// Symmetric split-step solution of the scalar NLSE (beta2, beta3 about the carrier, Kerr term
/// i gamma |A|^2 A) in the carrier's group-velocity frame.
/// Throws AliasingError when spectral energy reaches the grid edge.
OpticalPulse split_step_propagate(const OpticalPulse& field, const FiberSpec& fiber, const StepControl& control = {});

/// Super-Gaussian (order 4) band-pass with 80% peak and 40 dB stop-band power transmission. The
/// one-dB full width is given in nm.
OpticalPulse extract_band(const OpticalPulse& field, double center_nm, double one_db_bandwidth_nm);

/// Power transmission of the band-pass at an optical frequency offset from its centre (THz).
double band_transmission(double offset_thz, double one_db_width_thz);

}  // namespace fopa

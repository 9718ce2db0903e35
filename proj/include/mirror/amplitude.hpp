#pragma once

// A two-body amplitude sampled at one spacetime point, split into a carrier
// plane wave and a slowly varying envelope:
//
//   Psi = exp(i carrier_phase) * chi
//
// SI wavevectors times positions run to ~1e17 rad, far past what a double can
// carry as an absolute phase. Densities and currents only need chi, its
// spatial derivatives, and the carrier wavevector, so those are what the
// evaluators hand out.

#include <complex>
#include <functional>

#include "mirror/harmonic.hpp"

namespace mirror {

struct LocalAmplitude {
  double carrier_phase = 0.0;   // reduced to (-pi, pi]
  double carrier_k1 = 0.0;      // d(carrier)/dx1
  double carrier_k2 = 0.0;      // d(carrier)/dx2
  cplx chi{0.0, 0.0};
  cplx dchi_x1{0.0, 0.0};
  cplx dchi_x2{0.0, 0.0};

  cplx value() const { return unit_phasor(carrier_phase) * chi; }
  double density() const { return std::norm(chi); }
  // Im(Psi* dPsi/dx), without the hbar/mass prefactor.
  double phase_flux_x1() const { return carrier_k1 * std::norm(chi) + std::imag(std::conj(chi) * dchi_x1); }
  double phase_flux_x2() const { return carrier_k2 * std::norm(chi) + std::imag(std::conj(chi) * dchi_x2); }
};

using AmplitudeField = std::function<LocalAmplitude(const SpacetimePoint&)>;

// Harmonic eigenstate with analytic derivatives (no carrier split).
LocalAmplitude eigenstate_local(const HarmonicMode& mode, const SpacetimePoint& pt);

}  // namespace mirror

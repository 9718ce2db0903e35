#pragma once

// Two-time energy eigenstates of the particle-mirror system.
//
// The incident state is an uncorrelated product of plane waves. The reflected
// state is the Doppler-shifted product with (k_ref, K_ref) fixed by elastic
// kinematics; the particle energy rides on t1 and the mirror energy on t2.
// Their difference is the hard-wall eigenstate on x1 <= x2.

#include <complex>

#include "mirror/kinematics.hpp"

namespace mirror {

using cplx = std::complex<double>;

struct SpacetimePoint {
  double x1 = 0.0;
  double t1 = 0.0;
  double x2 = 0.0;
  double t2 = 0.0;
};

// Reduces a phase into (-pi, pi]. Large SI phases must pass through here
// before std::cos/std::sin.
double wrap_phase(double phi);

// exp(i phi) with phi reduced first.
cplx unit_phasor(double phi);

struct HarmonicMode {
  PhysicalParams params;
  double k = 0.0;
  double K = 0.0;
  double k_ref = 0.0;
  double K_ref = 0.0;

  static HarmonicMode from_params(const PhysicalParams& p);

  double energy() const;
  double reflected_energy() const;
  double relative_wavevector() const;   // (M k - m K) / (m + M)

  // Individual phase terms of the plane waves, already reduced.
  double incident_phase(const SpacetimePoint& pt) const;
  double reflected_phase(const SpacetimePoint& pt) const;
};

cplx incident_amplitude(const HarmonicMode& mode, const SpacetimePoint& pt);
cplx reflected_amplitude(const HarmonicMode& mode, const SpacetimePoint& pt);

// (incident - reflected) on x1 <= x2, zero beyond the mirror.
cplx eigenstate_amplitude(const HarmonicMode& mode, const SpacetimePoint& pt);

// Closed-form |eigenstate|^2:
//   4 sin^2[(mK - Mk){(m+M)(x1-x2) - hbar (k+K)(t1-t2)} / (m+M)^2]
double interference_pdf(const HarmonicMode& mode, const SpacetimePoint& pt);

// 4 sin^2[K_rel x_rel]; the cm-rel view of the same interference at t1 = t2.
double separable_interference_pdf(const PhysicalParams& p, double x_rel);

struct FringeSpacing {
  double value;                  // pi hbar / (m (v - V))
  bool approximation_valid;      // m/M < 0.05
};

FringeSpacing fringe_spacing(const PhysicalParams& p);

// Exact spatial period pi / K_rel of the harmonic fringes.
double exact_fringe_period(const PhysicalParams& p);

// mM(v-V)(mv+MV) / (hbar (m+M)^2). The joint PDF goes as sin^2(Omega t), so
// its temporal period is pi / Omega.
double beat_frequency(const PhysicalParams& p);

}  // namespace mirror

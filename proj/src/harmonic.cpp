#include "mirror/harmonic.hpp"

#include <cmath>
#include <stdexcept>

namespace mirror {

double wrap_phase(double phi) { return std::remainder(phi, kTwoPi); }

cplx unit_phasor(double phi) {
  const double r = wrap_phase(phi);
  return {std::cos(r), std::sin(r)};
}

namespace {

// k x - hbar k^2 t / (2 mass), each product reduced separately.
double plane_wave_phase(double k, double x, double t, double mass, double hbar) {
  return wrap_phase(k * x) - wrap_phase(hbar * k * k * t / (2.0 * mass));
}

}  // namespace

HarmonicMode HarmonicMode::from_params(const PhysicalParams& p) {
  p.validate();
  const Velocities f = elastic_final_velocities(p);
  HarmonicMode mode;
  mode.params = p;
  mode.k = p.m * p.v / p.hbar;
  mode.K = p.M * p.V / p.hbar;
  mode.k_ref = p.m * f.particle / p.hbar;
  mode.K_ref = p.M * f.mirror / p.hbar;
  return mode;
}

double HarmonicMode::energy() const {
  const auto& p = params;
  return p.hbar * p.hbar * (k * k / (2.0 * p.m) + K * K / (2.0 * p.M));
}

double HarmonicMode::reflected_energy() const {
  const auto& p = params;
  return p.hbar * p.hbar * (k_ref * k_ref / (2.0 * p.m) + K_ref * K_ref / (2.0 * p.M));
}

double HarmonicMode::relative_wavevector() const {
  return (params.M * k - params.m * K) / (params.m + params.M);
}

double HarmonicMode::incident_phase(const SpacetimePoint& pt) const {
  const auto& p = params;
  return wrap_phase(plane_wave_phase(k, pt.x1, pt.t1, p.m, p.hbar) +
                    plane_wave_phase(K, pt.x2, pt.t2, p.M, p.hbar));
}

double HarmonicMode::reflected_phase(const SpacetimePoint& pt) const {
  const auto& p = params;
  return wrap_phase(plane_wave_phase(k_ref, pt.x1, pt.t1, p.m, p.hbar) +
                    plane_wave_phase(K_ref, pt.x2, pt.t2, p.M, p.hbar));
}

cplx incident_amplitude(const HarmonicMode& mode, const SpacetimePoint& pt) {
  return unit_phasor(mode.incident_phase(pt));
}

cplx reflected_amplitude(const HarmonicMode& mode, const SpacetimePoint& pt) {
  return unit_phasor(mode.reflected_phase(pt));
}

cplx eigenstate_amplitude(const HarmonicMode& mode, const SpacetimePoint& pt) {
  if (pt.x1 > pt.x2) return {0.0, 0.0};
  return incident_amplitude(mode, pt) - reflected_amplitude(mode, pt);
}

double interference_pdf(const HarmonicMode& mode, const SpacetimePoint& pt) {
  if (pt.x1 > pt.x2) return 0.0;
  const auto& p = mode.params;
  const double mt = p.m + p.M;
  const double arg = (p.m * mode.K - p.M * mode.k) *
                     (mt * (pt.x1 - pt.x2) - p.hbar * (mode.k + mode.K) * (pt.t1 - pt.t2)) / (mt * mt);
  const double s = std::sin(wrap_phase(arg));
  return 4.0 * s * s;
}

double separable_interference_pdf(const PhysicalParams& p, double x_rel) {
  const double k = p.m * p.v / p.hbar;
  const double K = p.M * p.V / p.hbar;
  const double s = std::sin(wrap_phase(to_cm_rel(p, k, K).K_rel * x_rel));
  return 4.0 * s * s;
}

FringeSpacing fringe_spacing(const PhysicalParams& p) {
  p.validate();
  return {std::numbers::pi * p.hbar / (p.m * (p.v - p.V)), p.m / p.M < 0.05};
}

double exact_fringe_period(const PhysicalParams& p) {
  p.validate();
  const double k_rel = p.m * p.M * (p.v - p.V) / (p.hbar * (p.m + p.M));
  return std::numbers::pi / k_rel;
}

double beat_frequency(const PhysicalParams& p) {
  // v == V is admitted here: no energy is exchanged and the beat vanishes.
  if (!(p.v >= p.V)) throw std::invalid_argument("no reflection: particle velocity v must exceed mirror velocity V");
  const double mt = p.m + p.M;
  return p.m * p.M * (p.v - p.V) * (p.m * p.v + p.M * p.V) / (p.hbar * mt * mt);
}

}  // namespace mirror

#include "mirror/kinematics.hpp"

#include <cmath>
#include <stdexcept>

namespace mirror {

std::string to_string(UnitSystem u) { return u == UnitSystem::si ? "SI" : "natural"; }

UnitSystem unit_system_from_string(const std::string& s) {
  if (s == "SI" || s == "si") return UnitSystem::si;
  if (s == "natural") return UnitSystem::natural;
  throw std::invalid_argument("unknown unit system '" + s + "'");
}

PhysicalParams PhysicalParams::natural(double mass_ratio, double v, double V) {
  PhysicalParams p{1.0, mass_ratio, v, V, 1.0, 1.0};
  p.validate();
  return p;
}

PhysicalParams PhysicalParams::si(double m, double M, double v, double V) {
  PhysicalParams p{m, M, v, V, kHbarSI, kBoltzmannSI};
  p.validate();
  return p;
}

void PhysicalParams::validate() const {
  if (!(m > 0.0)) throw std::invalid_argument("particle mass m must be positive");
  if (!(M > 0.0)) throw std::invalid_argument("mirror mass M must be positive");
  if (!(hbar > 0.0)) throw std::invalid_argument("hbar must be positive");
  if (!(kB > 0.0)) throw std::invalid_argument("kB must be positive");
  if (!std::isfinite(v) || !std::isfinite(V)) throw std::invalid_argument("velocities must be finite");
  if (!(v > V)) throw std::invalid_argument("no reflection: particle velocity v must exceed mirror velocity V");
}

Velocities elastic_final_velocities(const PhysicalParams& p) {
  p.validate();
  const double mt = p.m + p.M;
  return {((p.m - p.M) * p.v + 2.0 * p.M * p.V) / mt, ((p.M - p.m) * p.V + 2.0 * p.m * p.v) / mt};
}

CmRelParams to_cm_rel(const PhysicalParams& p, double k, double K) {
  const double mt = p.m + p.M;
  return {mt, p.m * p.M / mt, k + K, (p.M * k - p.m * K) / mt};
}

Wavevectors from_cm_rel(const PhysicalParams& p, const CmRelParams& c) {
  const double mt = p.m + p.M;
  const double k = c.K_rel + p.m * c.K_cm / mt;
  return {k, p.M * c.K_cm / mt - c.K_rel};
}

ThermalSpread thermal_spread(double M, double T, double hbar, double kB) {
  if (!(T > 0.0)) throw std::invalid_argument("temperature must be positive");
  if (!(M > 0.0)) throw std::invalid_argument("mass must be positive");
  const double s = std::sqrt(2.0 * M * kB * T);
  return {s / M, kTwoPi * hbar / s};
}

double coherence_length(double lambda, double V, double dV) {
  if (!(dV > 0.0)) throw std::invalid_argument("velocity spread dV must be positive");
  return lambda * V / dV;
}

}  // namespace mirror

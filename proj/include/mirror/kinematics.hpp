#pragma once

// Units, constants, and elastic-collision kinematics for a particle of mass m
// reflecting from a mirror of mass M along one axis.
//
// Two unit systems are in use. SI presets carry the CODATA values of hbar and
// k_B. Natural presets set hbar = 1 and m = 1 and express everything else as
// ratios. Nothing in this module cares which one is active as long as the
// inputs are consistent.
//
// The mirror is an ideal hard wall in the relative coordinate (infinite
// reflectivity). There is no transmission amplitude anywhere in the library.

#include <numbers>
#include <string>

namespace mirror {

inline constexpr double kHbarSI = 1.054571817e-34;      // J s
inline constexpr double kBoltzmannSI = 1.380649e-23;    // J/K
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

enum class UnitSystem { natural, si };

std::string to_string(UnitSystem u);
UnitSystem unit_system_from_string(const std::string& s);

struct PhysicalParams {
  double m = 1.0;      // particle mass
  double M = 1.0;      // mirror mass
  double v = 1.0;      // initial particle velocity
  double V = 0.0;      // initial mirror velocity
  double hbar = 1.0;
  double kB = 1.0;

  static PhysicalParams natural(double mass_ratio, double v, double V);
  static PhysicalParams si(double m, double M, double v, double V);

  double planck() const { return kTwoPi * hbar; }
  double total_mass() const { return m + M; }
  double reduced_mass() const { return m * M / (m + M); }

  // Throws std::invalid_argument naming the first violated constraint.
  // v <= V is rejected: the particle never catches the mirror.
  void validate() const;
};

struct Velocities {
  double particle;
  double mirror;
};

struct Wavevectors {
  double k;   // particle
  double K;   // mirror
};

// Post-collision velocities from momentum and kinetic-energy conservation.
Velocities elastic_final_velocities(const PhysicalParams& p);

struct CmRelParams {
  double M_tot;
  double mu;
  double K_cm;
  double K_rel;

  double cm_energy(double hbar) const { return hbar * hbar * K_cm * K_cm / (2.0 * M_tot); }
  double rel_energy(double hbar) const { return hbar * hbar * K_rel * K_rel / (2.0 * mu); }
};

CmRelParams to_cm_rel(const PhysicalParams& p, double k, double K);
Wavevectors from_cm_rel(const PhysicalParams& p, const CmRelParams& c);

struct ThermalSpread {
  double dV;    // thermal velocity spread sqrt(2 kB T / M)
  double l_c;   // thermal coherence length h / sqrt(2 M kB T)
};

ThermalSpread thermal_spread(double M, double T, double hbar, double kB);

// l_c = lambda * V / dV.
double coherence_length(double lambda, double V, double dV);

}  // namespace mirror

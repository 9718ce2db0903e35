#pragma once

// Gaussian-spectrum wavegroups built from the two-time eigenstates.
//
// The spectral weight is
//   A(k, K) = N exp[-(k-k0)²/(2dk²) - (K-K0)²/(2dK²)]
//             · exp[-i k a1 - i K a2 + i hbar tw (k²/2m + K²/2M)]
// with N = 1/sqrt(pi dk dK), so ∬|A|² dk dK = 1 and the incident packet has
// unit norm. Each factor is narrowest at the waist time tw, where it is
// centered on (a1, a2); WavegroupSpec stores the centers (x1c, x2c) at the start
// time t0 instead, and a = xc + v_group (tw - t0). The wavefunction is
//   Psi = (1/2π) ∬ A(k, K) [e^{iφ_in} - e^{iφ_ref}] dk dK · θ(x2 - x1).
// Both phases are quadratic in (k, K) because k_ref and K_ref are linear in
// them, so each term is a closed-form complex Gaussian integral.

#include <cstddef>

#include "mirror/amplitude.hpp"
#include "mirror/double_double.hpp"
#include "mirror/gaussian_integral.hpp"
#include "mirror/grid.hpp"
#include "mirror/harmonic.hpp"

namespace mirror {

struct WavegroupSpec {
  PhysicalParams params;
  double k0 = 0.0;
  double dk = 1.0;
  double K0 = 0.0;
  double dK = 1.0;
  double x1c = -10.0;
  double x2c = 0.0;
  double t0 = 0.0;
  double t_waist = 0.0;

  static constexpr double kWrongSideTolerance = 1e-7;

  // Centers (k0, K0) come from the params' velocities.
  static WavegroupSpec make(const PhysicalParams& p, double dk, double dK, double x1c, double x2c, double t0);

  // Packets placed on their classical trajectories so that, absent the
  // mirror, both centroids pass x = 0 at t = 0, which is also the waist
  // time. t0 is the latest start that satisfies the separation invariant
  // (times `margin` >= 1) and leaves less than kWrongSideTolerance of the
  // incident packet on the far side of the mirror.
  static WavegroupSpec colliding_at_origin(const PhysicalParams& p, double dk, double dK, double margin = 1.1);

  void validate() const;
  double normalization() const;
  // hbar k0 / m and hbar K0 / M.
  double particle_group_velocity() const { return params.hbar * k0 / params.m; }
  double mirror_group_velocity() const { return params.hbar * K0 / params.M; }
  double waist_x1() const;
  double waist_x2() const;
  // Probability of the free incident packet on x1 > x2 at equal times t.
  double wrong_side_weight(double t) const;
  // Free-packet rms widths of |psi|² at time t.
  double particle_width(double t) const;
  double mirror_width(double t) const;
};

cplx spectral_amplitude(const WavegroupSpec& spec, double k, double K);

// Incident and reflected envelopes in the shared carrier frame. The physical
// amplitude is exp(i carrier) (incident - reflected) on x1 <= x2.
struct WavegroupParts {
  double carrier_phase = 0.0;
  double carrier_k1 = 0.0;
  double carrier_k2 = 0.0;
  cplx incident{0.0, 0.0};
  cplx reflected{0.0, 0.0};
  cplx d_incident_x1{0.0, 0.0}, d_incident_x2{0.0, 0.0};
  cplx d_reflected_x1{0.0, 0.0}, d_reflected_x2{0.0, 0.0};
};

enum class Part { incident, reflected };

// |part|² along one coordinate with the other three fixed is an exact
// Gaussian; these are its mean and rms width.
struct GaussianProfile {
  double mean = 0.0;
  double sigma = 0.0;
};

struct WavegroupOptions {
  double incident_scale = 1.0;
  double reflected_scale = 1.0;   // 0 disables reflection; != 1 breaks the solution
  bool apply_step = true;         // θ(x2 - x1)
};

class Wavegroup {
 public:
  explicit Wavegroup(WavegroupSpec spec, WavegroupOptions opts = {});

  const WavegroupSpec& spec() const { return spec_; }
  const WavegroupOptions& options() const { return opts_; }

  // The scaled quadratic forms (integration variable s = (k-k0)/dk,
  // (K-K0)/dK) whose Gaussian integrals give each part.
  ComplexQuadraticForm incident_form(const SpacetimePoint& pt) const;
  ComplexQuadraticForm reflected_form(const SpacetimePoint& pt) const;

  WavegroupParts parts(const SpacetimePoint& pt) const;
  LocalAmplitude local(const SpacetimePoint& pt) const;
  cplx amplitude(const SpacetimePoint& pt) const;
  double pdf(const SpacetimePoint& pt) const;

  // pt.x2 (resp. pt.x1) is only used as a starting reference.
  GaussianProfile profile_x2(Part part, const SpacetimePoint& pt) const;
  GaussianProfile profile_x1(Part part, const SpacetimePoint& pt) const;

  // Classical collision time and place of the packet centroids.
  double collision_time() const;
  double collision_position() const;

  // Phase difference φ_in - φ_ref at the spectral center.
  double center_phase_difference(const SpacetimePoint& pt) const;
  AmplitudeField as_field() const;

 private:
  WavegroupSpec spec_;
  WavegroupOptions opts_;
  double r1k_, r1K_, r2k_, r2K_;   // k_ref = r1·(k,K), K_ref = r2·(k,K)
  double k_ref0_, K_ref0_, k_rel0_;

  // Offsets from the centroid paths are formed in double-double: a heavy,
  // slowly spreading packet carries ~1e8 rad of chirp across its width, far
  // more than an ulp of the absolute position can resolve.
  struct Offsets {
    DoubleDouble vg1, vg2;             // incident group velocities
    DoubleDouble u1, u2;               // reflected centroid velocities ħk_ref0/m, ħK_ref0/M
    DoubleDouble r1k, r1K, r2k, r2K;
    DoubleDouble c1, c2;               // vg·t0 - x_c
    long double a1, a2;                // ħΔk²/m, ħΔK²/M
    long double kk1, kk2, kK1, kK2, KK1, KK2;   // scaled Hessian per unit t1, t2
    long double kk0, KK0;              // scaled waist terms
  } off_;
  struct WideForm;
  WideForm incident_wide(const SpacetimePoint& pt) const;
  WideForm reflected_wide(const SpacetimePoint& pt) const;
  WavegroupParts parts_impl(const SpacetimePoint& pt, bool with_carrier) const;

  struct Gradient {
    cplx x1_0, x1_1;   // ∂b/∂x1
    cplx x2_0, x2_1;   // ∂b/∂x2
  };
  Gradient gradient(Part part) const;
  GaussianProfile profile(Part part, SpacetimePoint pt, bool along_x2) const;
};

cplx amplitude_closed(const WavegroupSpec& spec, const SpacetimePoint& pt);

// Same integral by tensor-product Gauss-Hermite quadrature; nodes >= 32.
// Phases are built from the plane-wave kinematics directly, not from the
// quadratic forms above.
struct QuadratureParts {
  cplx incident;
  cplx reflected;   // both in the carrier frame of Wavegroup::parts
};
QuadratureParts amplitude_quadrature_parts(const WavegroupSpec& spec, const SpacetimePoint& pt, std::size_t nodes);
cplx amplitude_quadrature(const WavegroupSpec& spec, const SpacetimePoint& pt, std::size_t nodes);

// |Psi|² over (x1 rows, x2 cols) at times (t1, t2). Sets the
// "coarse_sampling" flag when either step exceeds half the fringe period.
FieldGrid joint_pdf_grid(const WavegroupSpec& spec, const GridSpec& grid, double t1, double t2);
FieldGrid joint_pdf_grid(const Wavegroup& wg, const GridSpec& grid, double t1, double t2);

}  // namespace mirror

#pragma once

// Probability currents and finite-difference checks of the two-time
// continuity equation
//   ∂t1 P + ∂t2 P + ∂x1 j1 + ∂x2 j2 = 0,
// with j1 = hbar Im(Psi* ∂x1 Psi)/m and j2 = hbar Im(Psi* ∂x2 Psi)/M.
// Currents use analytic derivatives; only the residual operators difference.

#include <string>
#include <vector>

#include "mirror/amplitude.hpp"
#include "mirror/grid.hpp"
#include "mirror/wavegroup.hpp"

namespace mirror {

double current_j1(const LocalAmplitude& a, const PhysicalParams& p);
double current_j2(const LocalAmplitude& a, const PhysicalParams& p);
double current_j1(const WavegroupSpec& spec, const SpacetimePoint& pt);
double current_j2(const WavegroupSpec& spec, const SpacetimePoint& pt);

struct ResidualSteps {
  double dx1 = 0.0;
  double dx2 = 0.0;
  double dt1 = 0.0;
  double dt2 = 0.0;
};

// dx = fringe/divisions on both axes; dt = dx / |V_cm|, the time over which
// the fringe pattern drifts by one spatial step. Matching the steps this way
// gives every difference quotient the same phase increment.
ResidualSteps default_steps(const PhysicalParams& p, double divisions = 40.0);

struct ContinuityResidual {
  Axis rows;
  Axis cols;
  double t1 = 0.0;
  double t2 = 0.0;
  double max_residual = 0.0;
  double rms_residual = 0.0;
  // Largest magnitude of any single term; the residual is judged against it.
  double scale = 0.0;
  // The two halves ∂t1 P + ∂x1 j1 and ∂t2 P + ∂x2 j2 on their own.
  double max_residual_particle = 0.0;
  double max_residual_mirror = 0.0;
  // Flux through the wall x1 = x2 at equal times, |j2/(2 dx2) - j1/(2 dx1)|:
  // what a central stencil straddling the wall picks up from the step
  // function. Zero when the amplitude vanishes on the wall. Included in
  // max_residual.
  double max_wall_term = 0.0;
  ResidualSteps steps;
  // "under_resolved" when a step > fringe/20; "wall_not_checked" when
  // t1 != t2 (the amplitude only vanishes on x1 = x2 at equal times).
  std::vector<std::string> flags;

  double relative() const { return scale > 0.0 ? max_residual / scale : 0.0; }
  bool has_flag(const std::string& f) const;
};

// Evaluates the residual at every grid point (x1 rows, x2 cols); points
// whose stencil straddles x1 = x2 are skipped and the wall is checked
// separately along the diagonal inside the grid.
ContinuityResidual continuity_residual(const AmplitudeField& field, const PhysicalParams& p, const GridSpec& grid,
                                       double t1, double t2, const ResidualSteps& steps);
ContinuityResidual continuity_residual(const WavegroupSpec& spec, const GridSpec& grid, double t1, double t2,
                                       const ResidualSteps& steps, WavegroupOptions opts = {});

// Least-squares slope of log(residual) against log(step) over a ladder of
// steps h, h/2, h/4, ... (relative residuals).
struct ConvergenceStudy {
  std::vector<double> step_scale;
  std::vector<double> relative_residual;
  double order = 0.0;
};

ConvergenceStudy convergence_order(const WavegroupSpec& spec, const GridSpec& grid, double t1, double t2,
                                   const ResidualSteps& coarsest, int levels = 4);

enum class BalanceAxis { x1, x2 };

// d/dt ∫_a^b P dx + j(b) - j(a) along one axis while the other body sits
// at `other` (at its own time t2 for axis x1, t1 for axis x2). The time
// derivative is a central difference with step dt; `scale` is the largest
// of the three terms.
struct SegmentBalance {
  double rate = 0.0;       // d/dt ∫ P
  double flux_in = 0.0;    // j(a)
  double flux_out = 0.0;   // j(b)
  double error = 0.0;      // rate + flux_out - flux_in
  double scale = 0.0;
  std::vector<std::string> flags;

  double relative() const { return scale > 0.0 ? std::abs(error) / scale : 0.0; }
  bool has_flag(const std::string& f) const;
};

SegmentBalance segment_balance(const WavegroupSpec& spec, double a, double b, BalanceAxis axis, double other,
                               double t1, double t2, double dt);

}  // namespace mirror

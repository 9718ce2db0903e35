#include "mirror/conservation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mirror/measurement.hpp"
#include "mirror/parallel.hpp"
#include "mirror/quadrature.hpp"

namespace mirror {

namespace {

bool contains(const std::vector<std::string>& flags, const std::string& f) {
  return std::find(flags.begin(), flags.end(), f) != flags.end();
}

double cm_speed(const PhysicalParams& p) { return std::abs(p.m * p.v + p.M * p.V) / p.total_mass(); }

}  // namespace

bool ContinuityResidual::has_flag(const std::string& f) const { return contains(flags, f); }
bool SegmentBalance::has_flag(const std::string& f) const { return contains(flags, f); }

double current_j1(const LocalAmplitude& a, const PhysicalParams& p) { return p.hbar / p.m * a.phase_flux_x1(); }
double current_j2(const LocalAmplitude& a, const PhysicalParams& p) { return p.hbar / p.M * a.phase_flux_x2(); }

double current_j1(const WavegroupSpec& spec, const SpacetimePoint& pt) {
  return current_j1(Wavegroup(spec).local(pt), spec.params);
}

double current_j2(const WavegroupSpec& spec, const SpacetimePoint& pt) {
  return current_j2(Wavegroup(spec).local(pt), spec.params);
}

ResidualSteps default_steps(const PhysicalParams& p, double divisions) {
  if (!(divisions > 0.0)) throw std::invalid_argument("step divisions must be positive");
  const double dx = exact_fringe_period(p) / divisions;
  const double u = cm_speed(p);
  const double dt = u > 0.0 ? dx / u : dx / std::max(std::abs(p.v), std::abs(p.V));
  return {dx, dx, dt, dt};
}

ContinuityResidual continuity_residual(const AmplitudeField& field, const PhysicalParams& p, const GridSpec& grid,
                                       double t1, double t2, const ResidualSteps& s) {
  grid.validate();
  if (!(s.dx1 > 0.0) || !(s.dx2 > 0.0) || !(s.dt1 > 0.0) || !(s.dt2 > 0.0))
    throw std::invalid_argument("residual steps must be positive");
  ContinuityResidual out;
  out.rows = grid.rows;
  out.cols = grid.cols;
  out.t1 = t1;
  out.t2 = t2;
  out.steps = s;

  const double limit = exact_fringe_period(p) / 20.0;
  const double u = cm_speed(p);
  if (s.dx1 > limit || s.dx2 > limit || s.dt1 * u > limit || s.dt2 * u > limit) out.flags.emplace_back("under_resolved");

  const std::size_t nr = grid.rows.count;
  const std::size_t nc = grid.cols.count;
  std::vector<double> res(nr * nc, 0.0), res1(nr * nc, 0.0), res2(nr * nc, 0.0), term(nr * nc, 0.0);
  std::vector<char> used(nr * nc, 0);
  const double gap = 2.0 * std::max(s.dx1, s.dx2);

  parallel_for(nr, [&](std::size_t r) {
    const double x1 = grid.rows.at(r);
    for (std::size_t c = 0; c < nc; ++c) {
      const double x2 = grid.cols.at(c);
      if (x2 - x1 < gap) continue;
      const double dP_t1 = (field({x1, t1 + s.dt1, x2, t2}).density() - field({x1, t1 - s.dt1, x2, t2}).density()) /
                           (2.0 * s.dt1);
      const double dP_t2 = (field({x1, t1, x2, t2 + s.dt2}).density() - field({x1, t1, x2, t2 - s.dt2}).density()) /
                           (2.0 * s.dt2);
      const double dj1 = (current_j1(field({x1 + s.dx1, t1, x2, t2}), p) -
                          current_j1(field({x1 - s.dx1, t1, x2, t2}), p)) /
                         (2.0 * s.dx1);
      const double dj2 = (current_j2(field({x1, t1, x2 + s.dx2, t2}), p) -
                          current_j2(field({x1, t1, x2 - s.dx2, t2}), p)) /
                         (2.0 * s.dx2);
      const std::size_t i = r * nc + c;
      res[i] = std::abs(dP_t1 + dP_t2 + dj1 + dj2);
      res1[i] = std::abs(dP_t1 + dj1);
      res2[i] = std::abs(dP_t2 + dj2);
      term[i] = std::max({std::abs(dP_t1), std::abs(dP_t2), std::abs(dj1), std::abs(dj2)});
      used[i] = 1;
    }
  });

  double sum2 = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < nr * nc; ++i) {
    if (!used[i]) continue;
    out.max_residual = std::max(out.max_residual, res[i]);
    out.max_residual_particle = std::max(out.max_residual_particle, res1[i]);
    out.max_residual_mirror = std::max(out.max_residual_mirror, res2[i]);
    out.scale = std::max(out.scale, term[i]);
    sum2 += res[i] * res[i];
    ++count;
  }
  if (count == 0) out.flags.emplace_back("no_physical_points");

  if (t1 == t2) {
    const double lo = std::max(grid.rows.min, grid.cols.min);
    const double hi = std::min(grid.rows.max, grid.cols.max);
    const std::size_t n = std::max(nr, nc);
    for (std::size_t i = 0; lo <= hi && i < n; ++i) {
      const double y = n > 1 ? lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1) : lo;
      const LocalAmplitude a = field({y, t1, y, t2});
      const double w = std::abs(current_j2(a, p) / (2.0 * s.dx2) - current_j1(a, p) / (2.0 * s.dx1));
      out.max_wall_term = std::max(out.max_wall_term, w);
    }
    out.max_residual = std::max(out.max_residual, out.max_wall_term);
  } else {
    out.flags.emplace_back("wall_not_checked");
  }
  out.rms_residual = count > 0 ? std::sqrt(sum2 / static_cast<double>(count)) : 0.0;
  return out;
}

ContinuityResidual continuity_residual(const WavegroupSpec& spec, const GridSpec& grid, double t1, double t2,
                                       const ResidualSteps& steps, WavegroupOptions opts) {
  const Wavegroup wg(spec, opts);
  return continuity_residual(wg.as_field(), spec.params, grid, t1, t2, steps);
}

ConvergenceStudy convergence_order(const WavegroupSpec& spec, const GridSpec& grid, double t1, double t2,
                                   const ResidualSteps& coarsest, int levels) {
  if (levels < 2) throw std::invalid_argument("convergence study needs at least two step sizes");
  ConvergenceStudy out;
  const Wavegroup wg(spec);
  const AmplitudeField field = wg.as_field();
  double f = 1.0;
  for (int l = 0; l < levels; ++l, f *= 0.5) {
    const ResidualSteps s{coarsest.dx1 * f, coarsest.dx2 * f, coarsest.dt1 * f, coarsest.dt2 * f};
    const ContinuityResidual r = continuity_residual(field, spec.params, grid, t1, t2, s);
    out.step_scale.push_back(f);
    out.relative_residual.push_back(r.relative());
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const auto n = static_cast<double>(levels);
  for (int l = 0; l < levels; ++l) {
    const double x = std::log(out.step_scale[static_cast<std::size_t>(l)]);
    const double y = std::log(out.relative_residual[static_cast<std::size_t>(l)]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  out.order = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return out;
}

SegmentBalance segment_balance(const WavegroupSpec& spec, double a, double b, BalanceAxis axis, double other,
                               double t1, double t2, double dt) {
  if (!(b > a)) throw std::invalid_argument("segment needs a < b");
  if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
  const auto& p = spec.params;
  const bool along_x1 = axis == BalanceAxis::x1;
  // Freeze the other body at (other, its time); ConditionalState then gives
  // the quadrature resolution along the free axis.
  const ConditionalState slice(spec, {other, along_x1 ? t2 : t1, 1.0},
                               along_x1 ? Measured::mirror : Measured::particle);
  const double t = along_x1 ? t1 : t2;
  auto mass_at = [&](double tt) {
    return integrate_panels([&](double y) { return slice.wavegroup().pdf(slice.point(y, tt)); }, a, b,
                            slice.resolution(tt));
  };
  auto flux = [&](double y) {
    const LocalAmplitude la = slice.wavegroup().local(slice.point(y, t));
    return along_x1 ? current_j1(la, p) : current_j2(la, p);
  };

  SegmentBalance out;
  out.rate = (mass_at(t + dt) - mass_at(t - dt)) / (2.0 * dt);
  out.flux_in = flux(a);
  out.flux_out = flux(b);
  out.error = out.rate + out.flux_out - out.flux_in;
  out.scale = std::max({std::abs(out.rate), std::abs(out.flux_in), std::abs(out.flux_out)});

  const double speed = along_x1 ? std::abs(p.v) : std::abs(p.V);
  if (dt * std::max(speed, cm_speed(p)) > slice.resolution(t)) out.flags.emplace_back("under_resolved");
  // The step function cuts the segment: flux through x1 = x2 is not counted.
  if (along_x1 ? (b > other) : (a < other)) out.flags.emplace_back("crosses_boundary");
  return out;
}

}  // namespace mirror

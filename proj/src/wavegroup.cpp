#include "mirror/wavegroup.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "extended.hpp"
#include "mirror/parallel.hpp"
#include "mirror/quadrature.hpp"

namespace mirror {

WavegroupSpec WavegroupSpec::make(const PhysicalParams& p, double dk, double dK, double x1c, double x2c, double t0) {
  WavegroupSpec s;
  s.params = p;
  s.k0 = p.m * p.v / p.hbar;
  s.K0 = p.M * p.V / p.hbar;
  s.dk = dk;
  s.dK = dK;
  s.x1c = x1c;
  s.x2c = x2c;
  s.t0 = t0;
  s.t_waist = t0;
  s.validate();
  return s;
}

WavegroupSpec WavegroupSpec::colliding_at_origin(const PhysicalParams& p, double dk, double dK, double margin) {
  p.validate();
  if (!(dk > 0.0) || !(dK > 0.0)) throw std::invalid_argument("spectral widths must be positive");
  // Start at the separation invariant, then back off until the wrong-side
  // tail of the (back-dispersed) incident packet is negligible.
  double gap = std::max(margin, 1.0) * 5.0 * (1.0 / dk + 1.0 / dK);
  WavegroupSpec s;
  for (int it = 0; it < 200; ++it) {
    const double t0 = -gap / (p.v - p.V);
    s = make(p, dk, dK, p.v * t0, p.V * t0, t0);
    s.t_waist = 0.0;
    if (s.wrong_side_weight(t0) < kWrongSideTolerance) return s;
    gap *= 1.1;
  }
  throw std::invalid_argument("no start time keeps the incident packet on the physical side; mirror spreads too fast");
}

double WavegroupSpec::waist_x1() const { return x1c + particle_group_velocity() * (t_waist - t0); }
double WavegroupSpec::waist_x2() const { return x2c + mirror_group_velocity() * (t_waist - t0); }

double WavegroupSpec::wrong_side_weight(double t) const {
  const double mu = (x2c - x1c) + (mirror_group_velocity() - particle_group_velocity()) * (t - t0);
  return 0.5 * std::erfc(mu / (std::sqrt(2.0) * std::hypot(particle_width(t), mirror_width(t))));
}

void WavegroupSpec::validate() const {
  params.validate();
  if (!(dk > 0.0)) throw std::invalid_argument("particle spectral width dk must be positive");
  if (!(dK > 0.0)) throw std::invalid_argument("mirror spectral width dK must be positive");
  if (!(x1c < x2c)) throw std::invalid_argument("particle packet must start on the near side of the mirror (x1c < x2c)");
  if (!((x2c - x1c) > 5.0 * (1.0 / dk + 1.0 / dK))) {
    throw std::invalid_argument("packets must start separated by more than 5 (1/dk + 1/dK)");
  }
  if (!std::isfinite(t0) || !std::isfinite(t_waist)) throw std::invalid_argument("t0 and t_waist must be finite");
}

double WavegroupSpec::normalization() const { return 1.0 / std::sqrt(std::numbers::pi * dk * dK); }

double WavegroupSpec::particle_width(double t) const {
  const double s0 = 1.0 / (std::sqrt(2.0) * dk);
  const double g = params.hbar * (t - t_waist) / (2.0 * params.m * s0);
  return std::sqrt(s0 * s0 + g * g);
}

double WavegroupSpec::mirror_width(double t) const {
  const double s0 = 1.0 / (std::sqrt(2.0) * dK);
  const double g = params.hbar * (t - t_waist) / (2.0 * params.M * s0);
  return std::sqrt(s0 * s0 + g * g);
}

cplx spectral_amplitude(const WavegroupSpec& s, double k, double K) {
  const auto& p = s.params;
  const double a = (k - s.k0) / s.dk;
  const double b = (K - s.K0) / s.dK;
  const double phase = -wrap_phase(k * s.waist_x1()) - wrap_phase(K * s.waist_x2()) +
                       wrap_phase(p.hbar * s.t_waist * (k * k / (2.0 * p.m) + K * K / (2.0 * p.M)));
  return s.normalization() * std::exp(-0.5 * (a * a + b * b)) * unit_phasor(phase);
}

Wavegroup::Wavegroup(WavegroupSpec spec, WavegroupOptions opts) : spec_(spec), opts_(opts) {
  spec_.validate();
  const auto& p = spec_.params;
  const double mt = p.m + p.M;
  r1k_ = (p.m - p.M) / mt;
  r1K_ = 2.0 * p.m / mt;
  r2k_ = 2.0 * p.M / mt;
  r2K_ = (p.M - p.m) / mt;
  k_ref0_ = r1k_ * spec_.k0 + r1K_ * spec_.K0;
  K_ref0_ = r2k_ * spec_.k0 + r2K_ * spec_.K0;
  k_rel0_ = (p.M * spec_.k0 - p.m * spec_.K0) / mt;

  using detail::wide;
  auto split = [](wide x) {
    const double hi = static_cast<double>(x);
    return DoubleDouble(hi, static_cast<double>(x - hi));
  };
  const wide hbar = p.hbar, m = p.m, M = p.M, wt = m + M;
  const wide k0 = spec_.k0, K0 = spec_.K0, dk = spec_.dk, dK = spec_.dK;
  const wide r1k = (m - M) / wt, r1K = 2 * m / wt, r2k = 2 * M / wt, r2K = (M - m) / wt;
  const wide vg1 = hbar * k0 / m, vg2 = hbar * K0 / M;
  off_.vg1 = split(vg1);
  off_.vg2 = split(vg2);
  off_.u1 = split(hbar * (r1k * k0 + r1K * K0) / m);
  off_.u2 = split(hbar * (r2k * k0 + r2K * K0) / M);
  off_.r1k = split(r1k);
  off_.r1K = split(r1K);
  off_.r2k = split(r2k);
  off_.r2K = split(r2K);
  off_.c1 = split(vg1 * spec_.t0 - spec_.x1c);
  off_.c2 = split(vg2 * spec_.t0 - spec_.x2c);
  off_.a1 = detail::narrow(hbar * dk * dk / m);
  off_.a2 = detail::narrow(hbar * dK * dK / M);
  off_.kk1 = detail::narrow(hbar * r1k * r1k * dk * dk / m);
  off_.kk2 = detail::narrow(hbar * r2k * r2k * dk * dk / M);
  off_.kK1 = detail::narrow(hbar * r1k * r1K * dk * dK / m);
  off_.kK2 = detail::narrow(hbar * r2k * r2K * dk * dK / M);
  off_.KK1 = detail::narrow(hbar * r1K * r1K * dK * dK / m);
  off_.KK2 = detail::narrow(hbar * r2K * r2K * dK * dK / M);
  off_.kk0 = detail::narrow(hbar * spec_.t_waist * dk * dk / m);
  off_.KK0 = detail::narrow(hbar * spec_.t_waist * dK * dK / M);
}

using detail::cld;
using detail::ld;
using detail::wide;

// A scaled quadratic form with long-double entries.
struct Wavegroup::WideForm {
  cld a00, a01, a11;
  cld b0, b1;

  ComplexQuadraticForm narrow() const {
    const cplx o(a01);
    return {{cplx(a00), o, o, cplx(a11)}, {cplx(b0), cplx(b1)}, 0.0};
  }
};

namespace {

using detail::cld;
using detail::ld;
using detail::wide;

// G = N dk dK / sqrt(det A) · exp(1/2 bᵀA⁻¹b), plus its x1/x2 derivatives.
struct Term {
  cplx value;
  cplx d_x1;
  cplx d_x2;
};

template <class F, class G>
Term evaluate_term(const F& f, const G& d, double prefactor, cplx sqrt_det) {
  const cld det = f.a00 * f.a11 - f.a01 * f.a01;
  const cld inv_det = std::conj(det) / std::norm(det);
  const cld y0 = (f.a11 * f.b0 - f.a01 * f.b1) * inv_det;
  const cld y1 = (f.a00 * f.b1 - f.a01 * f.b0) * inv_det;
  const cld expo = 0.5L * (f.b0 * y0 + f.b1 * y1);
  // The imaginary part can reach ~1e8 rad; reduce it before leaving long
  // double.
  constexpr long double two_pi = 2.0L * std::numbers::pi_v<long double>;
  const double phase = static_cast<double>(expo.imag() - two_pi * std::nearbyint(expo.imag() / two_pi));
  const double mag = std::exp(static_cast<double>(expo.real()));
  const cplx g = prefactor / sqrt_det * cplx(mag * std::cos(phase), mag * std::sin(phase));
  // A symmetric: ∂(1/2 bᵀA⁻¹b) = (A⁻¹b)ᵀ ∂b.
  const cplx z0(y0), z1(y1);
  return {g, g * (z0 * d.x1_0 + z1 * d.x1_1), g * (z0 * d.x2_0 + z1 * d.x2_1)};
}

}  // namespace

Wavegroup::WideForm Wavegroup::incident_wide(const SpacetimePoint& pt) const {
  const Offsets& o = off_;
  const long double g1 = (DoubleDouble(pt.x1) - o.vg1 * pt.t1 + o.c1).value();
  const long double g2 = (DoubleDouble(pt.x2) - o.vg2 * pt.t2 + o.c2).value();
  const long double s1 = static_cast<long double>(pt.t1) - spec_.t_waist;
  const long double s2 = static_cast<long double>(pt.t2) - spec_.t_waist;
  WideForm f;
  f.a00 = cld(1.0L, s1 * o.a1);
  f.a01 = 0.0L;
  f.a11 = cld(1.0L, s2 * o.a2);
  f.b0 = cld(0.0L, g1 * spec_.dk);
  f.b1 = cld(0.0L, g2 * spec_.dK);
  return f;
}

Wavegroup::WideForm Wavegroup::reflected_wide(const SpacetimePoint& pt) const {
  const Offsets& o = off_;
  const DoubleDouble e1 = DoubleDouble(pt.x1) - o.u1 * pt.t1;
  const DoubleDouble e2 = DoubleDouble(pt.x2) - o.u2 * pt.t2;
  const long double gk = (o.r1k * e1 + o.r2k * e2 + o.c1).value();
  const long double gK = (o.r1K * e1 + o.r2K * e2 + o.c2).value();
  const long double t1 = pt.t1, t2 = pt.t2;
  WideForm f;
  // Hessian of φ_ref in the scaled variables.
  f.a00 = cld(1.0L, t1 * o.kk1 + t2 * o.kk2 - o.kk0);
  f.a01 = cld(0.0L, t1 * o.kK1 + t2 * o.kK2);
  f.a11 = cld(1.0L, t1 * o.KK1 + t2 * o.KK2 - o.KK0);
  f.b0 = cld(0.0L, gk * spec_.dk);
  f.b1 = cld(0.0L, gK * spec_.dK);
  return f;
}

ComplexQuadraticForm Wavegroup::incident_form(const SpacetimePoint& pt) const { return incident_wide(pt).narrow(); }

ComplexQuadraticForm Wavegroup::reflected_form(const SpacetimePoint& pt) const { return reflected_wide(pt).narrow(); }

Wavegroup::Gradient Wavegroup::gradient(Part part) const {
  const auto& s = spec_;
  if (part == Part::incident) return {{0.0, s.dk}, 0.0, 0.0, {0.0, s.dK}};
  return {{0.0, s.dk * r1k_}, {0.0, s.dK * r1K_}, {0.0, s.dk * r2k_}, {0.0, s.dK * r2K_}};
}

GaussianProfile Wavegroup::profile(Part part, SpacetimePoint pt, bool along_x2) const {
  const Gradient g = gradient(part);
  const Vector2c d = along_x2 ? Vector2c{g.x2_0, g.x2_1} : Vector2c{g.x1_0, g.x1_1};
  double& x = along_x2 ? pt.x2 : pt.x1;
  GaussianProfile out;
  // Exact for any reference point; the second pass only trims cancellation.
  for (int pass = 0; pass < 2; ++pass) {
    const ComplexQuadraticForm q = part == Part::incident ? incident_form(pt) : reflected_form(pt);
    const Matrix2c inv = q.A.inverse();
    const cplx ad0 = inv.a00 * d.v0 + inv.a01 * d.v1;
    const cplx ad1 = inv.a10 * d.v0 + inv.a11 * d.v1;
    const double q2 = 0.5 * std::real(d.v0 * ad0 + d.v1 * ad1);
    const double q1 = std::real(q.b.v0 * ad0 + q.b.v1 * ad1);
    out.mean = x - q1 / (2.0 * q2);
    out.sigma = std::sqrt(-1.0 / (4.0 * q2));
    x = out.mean;
  }
  return out;
}

GaussianProfile Wavegroup::profile_x2(Part part, const SpacetimePoint& pt) const { return profile(part, pt, true); }
GaussianProfile Wavegroup::profile_x1(Part part, const SpacetimePoint& pt) const { return profile(part, pt, false); }

double Wavegroup::collision_time() const {
  return spec_.t0 + (spec_.x2c - spec_.x1c) / (spec_.particle_group_velocity() - spec_.mirror_group_velocity());
}

double Wavegroup::collision_position() const {
  return spec_.x1c + spec_.particle_group_velocity() * (collision_time() - spec_.t0);
}

double Wavegroup::center_phase_difference(const SpacetimePoint& pt) const {
  const auto& p = spec_.params;
  const double mt = p.m + p.M;
  return wrap_phase(2.0 * k_rel0_ * (pt.x1 - pt.x2)) -
         wrap_phase(2.0 * k_rel0_ * p.hbar * (spec_.k0 + spec_.K0) * (pt.t1 - pt.t2) / mt);
}

WavegroupParts Wavegroup::parts(const SpacetimePoint& pt) const { return parts_impl(pt, true); }

WavegroupParts Wavegroup::parts_impl(const SpacetimePoint& pt, bool with_carrier) const {
  const auto& s = spec_;
  const auto& p = s.params;
  const double prefactor = s.normalization() * s.dk * s.dK;

  WavegroupParts out;
  if (with_carrier)
    out.carrier_phase = wrap_phase(wrap_phase(s.k0 * (pt.x1 - s.waist_x1())) + wrap_phase(s.K0 * (pt.x2 - s.waist_x2())) -
                                 wrap_phase(p.hbar * s.k0 * s.k0 * (pt.t1 - s.t_waist) / (2.0 * p.m)) -
                                 wrap_phase(p.hbar * s.K0 * s.K0 * (pt.t2 - s.t_waist) / (2.0 * p.M)));
  out.carrier_k1 = s.k0;
  out.carrier_k2 = s.K0;

  if (opts_.incident_scale != 0.0) {
    const WideForm f = incident_wide(pt);
    // Diagonal A with unit real part: the branch of sqrt(det) is the product
    // of principal roots.
    const cplx sd = std::sqrt(cplx(f.a00)) * std::sqrt(cplx(f.a11));
    const Term t = evaluate_term(f, gradient(Part::incident), prefactor, sd);
    out.incident = opts_.incident_scale * t.value;
    out.d_incident_x1 = opts_.incident_scale * t.d_x1;
    out.d_incident_x2 = opts_.incident_scale * t.d_x2;
  }
  if (opts_.reflected_scale != 0.0) {
    const WideForm f = reflected_wide(pt);
    const Term t = evaluate_term(f, gradient(Part::reflected), prefactor, sqrt_det_branch(f.narrow().A));
    // φ_ref(u0) = φ_in(u0) - Δ, so the reflected envelope carries e^{-iΔ}.
    const cplx rot = opts_.reflected_scale * unit_phasor(-center_phase_difference(pt));
    const cplx dphase(0.0, 2.0 * k_rel0_);
    out.reflected = rot * t.value;
    out.d_reflected_x1 = rot * (t.d_x1 - dphase * t.value);
    out.d_reflected_x2 = rot * (t.d_x2 + dphase * t.value);
  }
  return out;
}

LocalAmplitude Wavegroup::local(const SpacetimePoint& pt) const {
  const WavegroupParts w = parts(pt);
  LocalAmplitude a;
  a.carrier_phase = w.carrier_phase;
  a.carrier_k1 = w.carrier_k1;
  a.carrier_k2 = w.carrier_k2;
  if (opts_.apply_step && pt.x1 > pt.x2) return a;
  a.chi = w.incident - w.reflected;
  a.dchi_x1 = w.d_incident_x1 - w.d_reflected_x1;
  a.dchi_x2 = w.d_incident_x2 - w.d_reflected_x2;
  return a;
}

cplx Wavegroup::amplitude(const SpacetimePoint& pt) const { return local(pt).value(); }

double Wavegroup::pdf(const SpacetimePoint& pt) const {
  if (opts_.apply_step && pt.x1 > pt.x2) return 0.0;
  const WavegroupParts w = parts_impl(pt, false);
  return std::norm(w.incident - w.reflected);
}

AmplitudeField Wavegroup::as_field() const {
  return [wg = *this](const SpacetimePoint& pt) { return wg.local(pt); };
}

cplx amplitude_closed(const WavegroupSpec& spec, const SpacetimePoint& pt) { return Wavegroup(spec).amplitude(pt); }

QuadratureParts amplitude_quadrature_parts(const WavegroupSpec& s, const SpacetimePoint& pt, std::size_t nodes) {
  if (nodes < 32) throw std::invalid_argument("Gauss-Hermite oracle needs at least 32 nodes per axis");
  s.validate();
  const auto& p = s.params;
  const GaussHermiteRule rule = gauss_hermite(nodes);
  // The free-dispersion chirp -ħτw²/(2m) joins the spectral Gaussian in a
  // complex weight exp(-a w²), a = 1/(2Δ²) + iħτ/(2m). The integrand is
  // entire, so the contour may be rotated and shifted freely: w = w* + ξ/√a,
  // with w* the saddle of each part's Gaussian, keeps the summand O(1)
  // however long the propagation. The phases themselves are still the
  // plane-wave ones, evaluated at complex w.
  const cld I(0.0L, 1.0L);
  const cld ak = 1.0L / (2.0L * s.dk * s.dk) + I * detail::narrow(wide(p.hbar) * (wide(pt.t1) - s.t_waist) / (2 * wide(p.m)));
  const cld aK = 1.0L / (2.0L * s.dK * s.dK) + I * detail::narrow(wide(p.hbar) * (wide(pt.t2) - s.t_waist) / (2 * wide(p.M)));
  const cld sk = 1.0L / std::sqrt(ak);
  const cld sK = 1.0L / std::sqrt(aK);
  // Distances from the free centroid paths, in quad precision.
  const ld lin1 = detail::narrow(wide(pt.x1) - s.x1c - wide(p.hbar) * s.k0 / p.m * (wide(pt.t1) - s.t0));
  const ld lin2 = detail::narrow(wide(pt.x2) - s.x2c - wide(p.hbar) * s.K0 / p.M * (wide(pt.t2) - s.t0));
  const ld dx = detail::narrow(wide(pt.x1) - pt.x2);
  const ld dt = detail::narrow(wide(pt.t1) - pt.t2);
  const ld m = p.m, M = p.M, mtl = detail::narrow(wide(p.m) + p.M), hbar = p.hbar;

  auto phase_in = [&](cld wk, cld wK) { return wk * lin1 + wK * lin2; };
  auto flip = [&](cld wk, cld wK) {
    // φ_ref(k,K) - φ_in(k,K) from the relative-coordinate sign flip.
    const cld k = static_cast<ld>(s.k0) + wk;
    const cld K = static_cast<ld>(s.K0) + wK;
    const cld k_rel = (M * k - m * K) / mtl;
    return -2.0L * k_rel * (dx - hbar * (k + K) * dt / mtl);
  };
  // Part integral with its contour centred on (ck, cK).
  auto part = [&](bool reflected, cld ck, cld cK) {
    cld sum = 0.0L;
    for (std::size_t i = 0; i < nodes; ++i) {
      const ld xi = rule.nodes[i];
      const cld wk = ck + sk * xi;
      for (std::size_t j = 0; j < nodes; ++j) {
        const ld eta = rule.nodes[j];
        const cld wK = cK + sK * eta;
        cld phi = phase_in(wk, wK);
        if (reflected) phi += flip(wk, wK);
        // exp(-a w²) over the Gauss-Hermite weight exp(-ξ²).
        const cld e = I * phi - ak * wk * wk - aK * wK * wK + xi * xi + eta * eta;
        sum += static_cast<ld>(rule.weights[i]) * static_cast<ld>(rule.weights[j]) * std::exp(e);
      }
    }
    return sum;
  };
  // Saddles from the linear phase coefficients; for the reflected part the
  // flip's slope at equal times is added.
  const ld fk = -2.0L * M * dx / mtl;
  const ld fK = 2.0L * m * dx / mtl;
  const cld in_sum = part(false, I * lin1 / (2.0L * ak), I * lin2 / (2.0L * aK));
  const cld ref_sum = part(true, I * (lin1 + fk) / (2.0L * ak), I * (lin2 + fK) / (2.0L * aK));
  // (1/2π) N ∬ ... dk dK.
  const cld pref = static_cast<ld>(s.normalization()) * sk * sK / (2.0L * std::numbers::pi_v<ld>);
  return {cplx(pref * in_sum), cplx(pref * ref_sum)};
}

cplx amplitude_quadrature(const WavegroupSpec& spec, const SpacetimePoint& pt, std::size_t nodes) {
  if (pt.x1 > pt.x2) {
    if (nodes < 32) throw std::invalid_argument("Gauss-Hermite oracle needs at least 32 nodes per axis");
    return {0.0, 0.0};
  }
  const QuadratureParts q = amplitude_quadrature_parts(spec, pt, nodes);
  const Wavegroup wg(spec);
  return unit_phasor(wg.parts(pt).carrier_phase) * (q.incident - q.reflected);
}

FieldGrid joint_pdf_grid(const Wavegroup& wg, const GridSpec& grid, double t1, double t2) {
  FieldGrid f = FieldGrid::real_field(grid);
  parallel_for(grid.rows.count, [&](std::size_t r) {
    const double x1 = grid.rows.at(r);
    for (std::size_t c = 0; c < grid.cols.count; ++c) {
      f(r, c) = wg.pdf({x1, t1, grid.cols.at(c), t2});
    }
  });
  const double half_fringe = 0.5 * exact_fringe_period(wg.spec().params);
  if (grid.rows.step() > half_fringe || grid.cols.step() > half_fringe) f.flags.emplace_back("coarse_sampling");
  f.provenance["operation"] = "joint_pdf";
  return f;
}

FieldGrid joint_pdf_grid(const WavegroupSpec& spec, const GridSpec& grid, double t1, double t2) {
  return joint_pdf_grid(Wavegroup(spec), grid, t1, t2);
}

}  // namespace mirror

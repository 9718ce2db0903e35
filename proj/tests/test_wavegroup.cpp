#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "mirror/quadrature.hpp"
#include "mirror/wavegroup.hpp"

using namespace mirror;

namespace {

constexpr double kPi = std::numbers::pi;

WavegroupSpec natural_spec() {
  return WavegroupSpec::colliding_at_origin(PhysicalParams::natural(5.0, 3.0, 0.5), 0.5, 1.0);
}

// Gaussian spectral weight with its free-flight phase, written out.
cplx oracle_weight(const WavegroupSpec& s, double k, double K) {
  const PhysicalParams& p = s.params;
  const double a1 = s.x1c + p.hbar * s.k0 / p.m * (s.t_waist - s.t0);
  const double a2 = s.x2c + p.hbar * s.K0 / p.M * (s.t_waist - s.t0);
  const double env = std::exp(-std::pow(k - s.k0, 2) / (2.0 * s.dk * s.dk) - std::pow(K - s.K0, 2) / (2.0 * s.dK * s.dK)) /
                     std::sqrt(kPi * s.dk * s.dK);
  const double ph = -k * a1 - K * a2 + p.hbar * s.t_waist * (k * k / (2.0 * p.m) + K * K / (2.0 * p.M));
  return env * cplx(std::cos(ph), std::sin(ph));
}

double plane_phase(const PhysicalParams& p, double k, double K, const SpacetimePoint& pt) {
  return k * pt.x1 + K * pt.x2 - p.hbar * k * k * pt.t1 / (2.0 * p.m) - p.hbar * K * K * pt.t2 / (2.0 * p.M);
}

// (1/2π) ∬ A [e^{iφ_in} - e^{iφ_ref}] dk dK by a trapezoid sum over ±8 widths.
cplx oracle_amplitude(const WavegroupSpec& s, const SpacetimePoint& pt) {
  const PhysicalParams& p = s.params;
  const double mt = p.m + p.M;
  const int n = 320;
  const double hk = 16.0 * s.dk / n, hK = 16.0 * s.dK / n;
  cplx sum = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double k = s.k0 - 8.0 * s.dk + i * hk;
    for (int j = 0; j <= n; ++j) {
      const double K = s.K0 - 8.0 * s.dK + j * hK;
      const double kr = ((p.m - p.M) * k + 2.0 * p.m * K) / mt;
      const double Kr = ((p.M - p.m) * K + 2.0 * p.M * k) / mt;
      const double a = plane_phase(p, k, K, pt), b = plane_phase(p, kr, Kr, pt);
      const double w = (i == 0 || i == n ? 0.5 : 1.0) * (j == 0 || j == n ? 0.5 : 1.0);
      sum += w * oracle_weight(s, k, K) * (cplx(std::cos(a), std::sin(a)) - cplx(std::cos(b), std::sin(b)));
    }
  }
  return sum * hk * hK / (2.0 * kPi);
}

}  // namespace

TEST_CASE("Gauss-Hermite rule integrates polynomials exactly") {
  for (std::size_t n : {1u, 2u, 5u, 16u, 40u}) {
    const GaussHermiteRule r = gauss_hermite(n);
    REQUIRE(r.nodes.size() == n);
    for (std::size_t j = 0; j < n; ++j) {
      double sum = 0.0;
      for (std::size_t i = 0; i < n; ++i) sum += r.weights[i] * std::pow(r.nodes[i], 2.0 * j);
      CHECK(std::abs(sum / std::tgamma(j + 0.5) - 1.0) < 1e-11);
    }
  }
}

TEST_CASE("large Gauss-Hermite rules stay symmetric, ascending and normalized") {
  const GaussHermiteRule r = gauss_hermite(384);
  double sum = 0.0;
  for (std::size_t i = 0; i < r.nodes.size(); ++i) {
    sum += r.weights[i];
    CHECK(r.nodes[i] == -r.nodes[r.nodes.size() - 1 - i]);
    if (i > 0) CHECK(r.nodes[i] > r.nodes[i - 1]);
  }
  CHECK(std::abs(sum - std::sqrt(kPi)) < 1e-13);
  // ∫ e^{-x²} cos(2x) dx = sqrt(pi) e^{-1}
  double c = 0.0;
  for (std::size_t i = 0; i < r.nodes.size(); ++i) c += r.weights[i] * std::cos(2.0 * r.nodes[i]);
  CHECK(std::abs(c - std::sqrt(kPi) * std::exp(-1.0)) < 1e-13);
}

TEST_CASE("Gauss-Legendre panels") {
  const GaussLegendreRule r = gauss_legendre(10);
  double sum = 0.0;
  for (double w : r.weights) sum += w;
  CHECK(std::abs(sum - 2.0) < 1e-14);
  CHECK(std::abs(integrate_panels([](double x) { return std::sin(x); }, 0.0, kPi, 0.1) - 2.0) < 1e-13);
  CHECK(std::abs(integrate_panels([](double x) { return std::exp(-x * x); }, -10.0, 10.0, 0.5) - std::sqrt(kPi)) < 1e-13);
}

TEST_CASE("spectral weight is normalized and matches the written-out form") {
  const WavegroupSpec s = natural_spec();
  const int n = 400;
  const double hk = 16.0 * s.dk / n, hK = 16.0 * s.dK / n;
  double norm = 0.0;
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) {
      const double k = s.k0 - 8.0 * s.dk + i * hk, K = s.K0 - 8.0 * s.dK + j * hK;
      const double w = (i == 0 || i == n ? 0.5 : 1.0) * (j == 0 || j == n ? 0.5 : 1.0);
      norm += w * std::norm(spectral_amplitude(s, k, K));
      if (i % 37 == 0 && j % 41 == 0) {
        CHECK(std::abs(spectral_amplitude(s, k, K) - oracle_weight(s, k, K)) < 1e-13);
      }
    }
  }
  CHECK(std::abs(norm * hk * hK - 1.0) < 1e-8);
}

TEST_CASE("colliding packets start on the physical side and meet at the origin") {
  const WavegroupSpec s = natural_spec();
  CHECK_NOTHROW(s.validate());
  CHECK(s.t0 < 0.0);
  CHECK(s.wrong_side_weight(s.t0) < WavegroupSpec::kWrongSideTolerance);
  const Wavegroup wg(s);
  CHECK(std::abs(wg.collision_time()) < 1e-12);
  CHECK(std::abs(wg.collision_position()) < 1e-12);
  CHECK(std::abs(s.waist_x1()) < 1e-12);
  CHECK(std::abs(s.waist_x2()) < 1e-12);
}

TEST_CASE("closed form agrees with direct spectral summation at two-time points") {
  const WavegroupSpec s = natural_spec();
  const Wavegroup wg(s);
  std::mt19937_64 rng(51);
  std::uniform_real_distribution<double> x(-6.0, 6.0), t(-2.0, 2.0);
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    SpacetimePoint pt{x(rng), t(rng), x(rng), t(rng)};
    if (pt.x1 > pt.x2) std::swap(pt.x1, pt.x2);
    worst = std::max(worst, std::abs(wg.amplitude(pt) - oracle_amplitude(s, pt)));
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("library quadrature matches the closed form part by part") {
  const WavegroupSpec s = natural_spec();
  const Wavegroup wg(s);
  std::mt19937_64 rng(52);
  std::uniform_real_distribution<double> x(-6.0, 6.0), t(-2.0, 2.0);
  for (int i = 0; i < 50; ++i) {
    const SpacetimePoint pt{x(rng), t(rng), x(rng), t(rng)};
    const WavegroupParts parts = wg.parts(pt);
    const QuadratureParts q = amplitude_quadrature_parts(s, pt, 64);
    CHECK(std::abs(parts.incident - q.incident) < 1e-10);
    CHECK(std::abs(parts.reflected - q.reflected) < 1e-10);
  }
}

TEST_CASE("hard-wall boundary holds on x1 = x2 at equal times") {
  const Wavegroup wg(natural_spec());
  std::mt19937_64 rng(53);
  std::uniform_real_distribution<double> x(-6.0, 6.0), t(-4.0, 4.0);
  for (int i = 0; i < 500; ++i) {
    const double xx = x(rng), tt = t(rng);
    const WavegroupParts parts = wg.parts({xx, tt, xx, tt});
    CHECK(std::abs(parts.incident - parts.reflected) < 1e-10);
  }
}

TEST_CASE("amplitude vanishes beyond the mirror unless the step is disabled") {
  const WavegroupSpec s = natural_spec();
  const Wavegroup on(s);
  const Wavegroup off(s, {1.0, 1.0, false});
  const SpacetimePoint pt{0.3, 0.1, -0.2, 0.1};
  CHECK(on.amplitude(pt) == cplx(0.0, 0.0));
  CHECK(std::abs(off.amplitude(pt)) > 0.0);
}

TEST_CASE("local view, pdf and amplitude agree") {
  const Wavegroup wg(natural_spec());
  const AmplitudeField field = wg.as_field();
  std::mt19937_64 rng(54);
  std::uniform_real_distribution<double> x(-4.0, 4.0), t(-1.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    SpacetimePoint pt{x(rng), t(rng), x(rng), t(rng)};
    if (pt.x1 > pt.x2) std::swap(pt.x1, pt.x2);
    const LocalAmplitude loc = field(pt);
    const cplx psi = wg.amplitude(pt);
    CHECK(std::abs(loc.value() - psi) < 1e-12);
    CHECK(std::abs(loc.density() - std::norm(psi)) < 1e-12);
    CHECK(std::abs(wg.pdf(pt) - std::norm(psi)) < 1e-12);
    // Derivative by central difference.
    const double h = 1e-5;
    SpacetimePoint a = pt, b = pt;
    a.x2 += h;
    b.x2 -= h;
    if (b.x2 < pt.x1) continue;
    const cplx d = (wg.amplitude(a) - wg.amplitude(b)) / (2.0 * h);
    const cplx d_loc = unit_phasor(loc.carrier_phase) * (loc.dchi_x2 + cplx(0.0, loc.carrier_k2) * loc.chi);
    CHECK(std::abs(d - d_loc) < 1e-8);
  }
}

TEST_CASE("disabling reflection leaves the free incident packet") {
  const WavegroupSpec s = natural_spec();
  const Wavegroup free(s, {1.0, 0.0, false});
  const Wavegroup full(s, {1.0, 1.0, false});
  const SpacetimePoint pt{-1.0, 0.2, 1.0, 0.2};
  const WavegroupParts p = full.parts(pt);
  CHECK(std::abs(free.amplitude(pt) - unit_phasor(p.carrier_phase) * p.incident) < 1e-14);
}

TEST_CASE("free packet: unit norm and widths from the Gaussian profiles") {
  const WavegroupSpec s = natural_spec();
  const Wavegroup free(s, {1.0, 0.0, false});
  const double t = s.t0;
  const double sx1 = s.particle_width(t), sx2 = s.mirror_width(t);
  const double c1 = s.x1c, c2 = s.x2c;
  const int n = 300;
  const double h1 = 16.0 * sx1 / n, h2 = 16.0 * sx2 / n;
  double norm = 0.0;
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j) norm += free.pdf({c1 - 8.0 * sx1 + i * h1, t, c2 - 8.0 * sx2 + j * h2, t});
  CHECK(std::abs(norm * h1 * h2 - 1.0) < 1e-8);

  const GaussianProfile px2 = free.profile_x2(Part::incident, {c1, t, c2, t});
  CHECK(std::abs(px2.mean - c2) < 1e-9);
  CHECK(std::abs(px2.sigma - sx2) < 1e-9 * sx2);
  const GaussianProfile px1 = free.profile_x1(Part::incident, {c1, t, c2, t});
  CHECK(std::abs(px1.mean - c1) < 1e-9);
  CHECK(std::abs(px1.sigma - sx1) < 1e-9 * sx1);
}

TEST_CASE("the reflected profile along x2 matches its numerical moments") {
  const Wavegroup wg(natural_spec());
  const SpacetimePoint ref{2.0, 1.5, 0.0, 1.5};
  const GaussianProfile g = wg.profile_x2(Part::reflected, ref);
  double m0 = 0.0, m1 = 0.0, m2 = 0.0;
  for (int i = -4000; i <= 4000; ++i) {
    const double x2 = g.mean + i * 0.002 * g.sigma;
    const double w = std::norm(wg.parts({ref.x1, ref.t1, x2, ref.t2}).reflected);
    m0 += w;
    m1 += w * x2;
    m2 += w * x2 * x2;
  }
  const double mean = m1 / m0;
  CHECK(std::abs(mean - g.mean) < 1e-8 * g.sigma);
  CHECK(std::abs(std::sqrt(m2 / m0 - mean * mean) / g.sigma - 1.0) < 1e-8);
}

TEST_CASE("wavegroup parameter validation") {
  WavegroupSpec s = natural_spec();
  s.dk = -1.0;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s = natural_spec();
  s.x2c = s.x1c + 1.0;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s = natural_spec();
  std::swap(s.x1c, s.x2c);
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  CHECK_THROWS_AS(WavegroupSpec::colliding_at_origin(PhysicalParams::natural(5.0, 3.0, 0.5), 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("joint PDF grid flags coarse sampling") {
  const WavegroupSpec s = natural_spec();
  GridSpec fine{{"x1", -3.0, 0.0, 121}, {"x2", 0.0, 3.0, 121}};
  GridSpec coarse{{"x1", -30.0, 0.0, 16}, {"x2", 0.0, 30.0, 16}};
  const FieldGrid a = joint_pdf_grid(s, fine, 0.5, 0.5);
  const FieldGrid b = joint_pdf_grid(s, coarse, 0.5, 0.5);
  CHECK_FALSE(a.has_flag("coarse_sampling"));
  CHECK(b.has_flag("coarse_sampling"));
  const Wavegroup wg(s);
  CHECK(std::abs(a(60, 60) - wg.pdf({a.rows.at(60), 0.5, a.cols.at(60), 0.5})) < 1e-14);
}

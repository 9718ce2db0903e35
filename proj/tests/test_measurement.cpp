#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "mirror/measurement.hpp"

using namespace mirror;

namespace {

const PhysicalParams kParams = PhysicalParams::natural(5.0, 3.0, 0.5);

WavegroupSpec natural_spec() { return WavegroupSpec::colliding_at_origin(kParams, 0.5, 1.0); }

double final_particle_velocity() { return ((kParams.m - kParams.M) * kParams.v + 2.0 * kParams.M * kParams.V) / (kParams.m + kParams.M); }
double final_mirror_velocity() { return ((kParams.M - kParams.m) * kParams.V + 2.0 * kParams.m * kParams.v) / (kParams.m + kParams.M); }

// Particle caught on its reflected path, well after the collision.
MeasurementEvent late_event() {
  const double t = 6.0;
  return {final_particle_velocity() * t, t, 1e-3};
}

// Particle caught next to the mirror while the collision is under way.
MeasurementEvent overlap_event() { return {-0.4, 0.0, 1e-3}; }

double trapezoid(const ConditionalState& s, double t, double lo, double hi, int n) {
  const double h = (hi - lo) / n;
  double sum = 0.0;
  for (int i = 0; i <= n; ++i) sum += (i == 0 || i == n ? 0.5 : 1.0) * s.pdf(lo + i * h, t);
  return sum * h;
}

}  // namespace

TEST_CASE("collapse freezes the particle coordinates of the joint amplitude") {
  const WavegroupSpec spec = natural_spec();
  const MeasurementEvent ev = late_event();
  const ConditionalMirrorState s = collapse(spec, ev);
  const Wavegroup wg(spec);
  for (double x2 : {ev.x10 + 0.5, ev.x10 + 3.0, ev.x10 + 9.0}) {
    for (double t2 : {ev.t10, ev.t10 + 1.0, ev.t10 + 4.0}) {
      CHECK(mirror_pdf(s, x2, t2) == wg.pdf({ev.x10, ev.t10, x2, t2}));
      CHECK(s.amplitude(x2, t2) == wg.amplitude({ev.x10, ev.t10, x2, t2}));
    }
  }
  CHECK(mirror_pdf(s, ev.x10 - 0.1, ev.t10 + 1.0) == 0.0);
  CHECK_THROWS_AS(mirror_pdf(s, ev.x10 + 1.0, ev.t10 - 0.1), std::invalid_argument);
}

TEST_CASE("measuring the mirror first freezes (x2, t2) instead") {
  const WavegroupSpec spec = natural_spec();
  const MeasurementEvent ev{2.0, 3.0, 1e-3};
  const ConditionalState s(spec, ev, Measured::mirror);
  const Wavegroup wg(spec);
  CHECK(s.pdf(-1.0, 4.0) == wg.pdf({-1.0, 4.0, 2.0, 3.0}));
  CHECK(s.pdf(2.5, 4.0) == 0.0);
}

TEST_CASE("event and window validation") {
  MeasurementEvent ev = late_event();
  ev.dx1 = 0.0;
  CHECK_THROWS_AS(ev.validate(), std::invalid_argument);
  ev = late_event();
  ev.t10 = std::nan("");
  CHECK_THROWS_AS(ev.validate(), std::invalid_argument);
  CHECK_THROWS_AS((Interval{1.0, 0.0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS(sequential_probability(natural_spec(), late_event(), {0.0, 1.0}, late_event().t10 - 1.0),
                  std::invalid_argument);
}

TEST_CASE("conditional norm is unchanged by the mirror's free evolution") {
  const ConditionalState s = collapse(natural_spec(), late_event());
  const double n0 = s.norm(late_event().t10);
  REQUIRE(n0 > 0.0);
  for (double dt : {0.5, 2.0, 5.0, 12.0}) {
    CHECK(std::abs(s.norm(late_event().t10 + dt) / n0 - 1.0) < 1e-6);
  }
}

TEST_CASE("support holds the conditional probability") {
  const ConditionalState s = collapse(natural_spec(), late_event());
  const double t = late_event().t10 + 2.0;
  const Interval iv = s.support(t);
  CHECK(iv.lo >= late_event().x10);
  const double wide = trapezoid(s, t, late_event().x10, iv.hi + 20.0, 40000);
  CHECK(std::abs(s.norm(t) / wide - 1.0) < 1e-6);
  CHECK(s.resolution(t) > 0.0);
}

TEST_CASE("sequential probabilities and their product") {
  const WavegroupSpec spec = natural_spec();
  const MeasurementEvent ev = late_event();
  const ConditionalState s = collapse(spec, ev);
  const Interval everything = s.support(ev.t10 + 3.0);
  const SequentialProbability p = sequential_probability(spec, ev, everything, ev.t10 + 3.0);
  const Interval iv0 = s.support(ev.t10);
  CHECK(std::abs(p.pr_first - ev.dx1 * trapezoid(s, ev.t10, iv0.lo, iv0.hi, 40000)) < 1e-8 * p.pr_first);
  CHECK(std::abs(p.product - p.pr_first * p.pr_second) < 1e-15 * p.product);
  // A window around everything at the later time carries the same weight.
  CHECK(std::abs(p.pr_second / p.pr_first - 1.0) < 1e-6);
  // Half the window, less probability.
  const Interval half{everything.lo, 0.5 * (everything.lo + everything.hi)};
  CHECK(sequential_probability(spec, ev, half, ev.t10 + 3.0).pr_second < p.pr_second);
}

TEST_CASE("regimes: one substate after the collision, two during it") {
  CHECK(classify_regime(natural_spec(), late_event()) == Regime::A);
  CHECK(classify_regime(natural_spec(), overlap_event()) == Regime::B);
  CHECK(to_string(Regime::A) == "A");
  CHECK(to_string(Regime::B) == "B");
}

TEST_CASE("in regime B the mirror splits into pre- and post-collision substates") {
  const ConditionalState s = collapse(natural_spec(), overlap_event());
  std::vector<double> ts;
  for (int i = 0; i <= 10; ++i) ts.push_back(8.0 + 0.8 * i);
  const SplitVelocities v = split_centroid_velocities(s, ts);
  CHECK(std::abs(v.slow / kParams.V - 1.0) < 0.01);
  CHECK(std::abs(v.fast / final_mirror_velocity() - 1.0) < 0.01);
  CHECK(v.slow_positions.size() == ts.size());
}

TEST_CASE("a single substate cannot be split") {
  const ConditionalState s = collapse(natural_spec(), late_event());
  const std::vector<double> ts{7.0, 8.0, 9.0, 10.0};
  CHECK_THROWS_AS(split_centroid_velocities(s, ts), SplitUnresolved);
  CHECK(conditional_modes(s, 8.0).size() == 1);
}

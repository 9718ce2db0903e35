#pragma once

// Ideal pointlike position measurement of one body, followed by free
// evolution of the other body's conditional wavefunction.
//
// Measuring the particle at (x10, t10) freezes x1 = x10 and t1 = t10 in the
// two-time wavefunction; the mirror then evolves as Psi(x10, t10, x2, t2) for
// t2 >= t10. Nothing is renormalized: the conditional slice is reported in the
// same units as the joint PDF. The symmetric construction (mirror measured
// first) is available through ConditionalState with Measured::mirror.

#include <stdexcept>
#include <string>
#include <vector>

#include "mirror/wavegroup.hpp"

namespace mirror {

struct MeasurementEvent {
  double x10 = 0.0;   // detection position
  double t10 = 0.0;   // detection time
  double dx1 = 1e-3;  // detector resolution, enters Pr_I and Pr_II as a factor

  void validate() const;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double width() const { return hi - lo; }
  void validate() const;
};

enum class Measured { particle, mirror };

class ConditionalState {
 public:
  ConditionalState(const WavegroupSpec& spec, const MeasurementEvent& event, Measured measured = Measured::particle);

  const WavegroupSpec& spec() const { return wg_.spec(); }
  const Wavegroup& wavegroup() const { return wg_; }
  const MeasurementEvent& event() const { return event_; }
  Measured measured() const { return measured_; }

  // Two-body point with the measured body's coordinates frozen.
  SpacetimePoint point(double y, double t) const;

  // y, t are the unmeasured body's position and time; t >= t10.
  cplx amplitude(double y, double t) const;
  LocalAmplitude local(double y, double t) const;
  double pdf(double y, double t) const;
  WavegroupParts parts(double y, double t) const;

  // Interval along y holding all non-negligible probability at time t: the
  // union of +-n_sigma around each part's exact Gaussian profile, clipped to
  // the physical side of the mirror.
  Interval support(double t, double n_sigma = 10.0) const;
  // Smallest length scale that quadrature over y must resolve at time t.
  double resolution(double t) const;

  // ∫|Psi|² dy over [lo, hi]. Unlike the pointwise accessors, support and
  // integrate accept t < t10; marginals use them for either time order.
  double integrate(double t, const Interval& window) const;
  double norm(double t) const;

 private:
  void check_time(double t) const;

  Wavegroup wg_;
  MeasurementEvent event_;
  Measured measured_;
};

using ConditionalMirrorState = ConditionalState;

ConditionalMirrorState collapse(const WavegroupSpec& spec, const MeasurementEvent& event);

// Throws std::invalid_argument for t2 < t10.
double mirror_pdf(const ConditionalMirrorState& state, double x2, double t2);

struct SequentialProbability {
  double pr_first;    // Pr_I  = dx1 ∫ |Psi(x10,t10,x2,t10)|² dx2
  double pr_second;   // Pr_II = dx1 ∫_window |Psi(x10,t10,x2,t2)|² dx2
  double product;
};

SequentialProbability sequential_probability(const WavegroupSpec& spec, const MeasurementEvent& event,
                                             const Interval& x2_window, double t2);

enum class Regime { A, B };
std::string to_string(Regime r);

// B when, at the collapse instant and at the mode of the conditional PDF,
// both the incident and reflected parts exceed 1e-3 of the larger one.
Regime classify_regime(const WavegroupSpec& spec, const MeasurementEvent& event);

// Thrown when the two split substates cannot be told apart.
class SplitUnresolved : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Mode {
  double position;
  double height;
};

// Modes of the conditional PDF at time t after a moving average over one
// fringe period; heights below `floor` times the maximum are dropped.
std::vector<Mode> conditional_modes(const ConditionalState& state, double t, double floor = 0.05);

struct SplitVelocities {
  double slow;
  double fast;
  std::vector<double> slow_positions;
  std::vector<double> fast_positions;
};

// Tracks the two PDF modes across the samples and fits straight lines.
SplitVelocities split_centroid_velocities(const ConditionalState& state, const std::vector<double>& t_samples);

}  // namespace mirror

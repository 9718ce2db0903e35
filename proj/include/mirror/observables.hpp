#pragma once

// Derived quantities: one-body marginals, fringe extraction, beat fitting,
// coherence-transfer widths and the closed-form decoherence estimators.

#include <string>
#include <vector>

#include "mirror/grid.hpp"
#include "mirror/measurement.hpp"
#include "mirror/wavegroup.hpp"

namespace mirror {

struct Curve {
  std::string axis;   // "x1", "x2", "t1", "t2"
  std::vector<double> x;
  std::vector<double> y;
  std::vector<std::string> flags;

  bool has_flag(const std::string& f) const;
};

// ∫|Psi(x1,t1,x2,t2)|² dx2 on the x1 samples. The x2 range is the union of
// ±n_sigma windows around both parts' exact profiles (>= 6 coherence lengths
// for n_sigma >= 6) on the physical side x2 >= x1. Flags "truncated" when
// the quadrature would need more panels than allowed.
Curve marginal_over_mirror(const WavegroupSpec& spec, const Axis& x1_axis, double t1, double t2,
                           double n_sigma = 10.0);
// ∫|Psi|² dx1 on the x2 samples, over x1 <= x2.
Curve marginal_over_particle(const WavegroupSpec& spec, const Axis& x2_axis, double t1, double t2,
                             double n_sigma = 10.0);

// Simultaneous joint PDF (t1 = t2 = t) along one axis with the other
// coordinate fixed at `other`. With `normalized`, each sample is divided by
// |incident|² + |reflected|², leaving only the interference modulation; this
// removes the envelope's pull on the extrema when a packet is narrower than a
// few fringes.
Curve joint_slice(const WavegroupSpec& spec, const Axis& axis, double other, double t, bool normalized = false);

struct FringeReport {
  double spacing = 0.0;      // mean peak-to-peak distance
  double visibility = 0.0;   // (max - min)/(max + min) around the tallest fringe
  int n_fringes = 0;         // number of detected maxima
  std::string axis;
};

// Extrema whose local contrast is below `noise_floor` are ignored.
FringeReport extract_fringes(const Curve& curve, double noise_floor = 1e-12);

// Least-squares fit of y(t) = P0(t) + P1(t) cos(w t) + P2(t) sin(w t) with
// polynomials of degree `envelope_degree` (0..2). `frequency` is half the
// fitted angular frequency, i.e. the rate inside sin²(Omega t).
struct BeatFit {
  double frequency = 0.0;
  double pdf_angular_frequency = 0.0;
  double periods_spanned = 0.0;
  double residual_rms = 0.0;
  double amplitude = 0.0;
  std::vector<std::string> flags;   // "insufficient_span" when < 3 periods

  bool has_flag(const std::string& f) const;
};

BeatFit fit_beat(const std::vector<double>& t, const std::vector<double>& y, int envelope_degree = 2);

// Beat of the conditional mirror PDF at fixed x2 as t2 runs over t2_axis.
// The fit runs on pdf / (|incident|^2 + |reflected|^2), restricted to samples
// where both parts are present ("envelope_normalized"; "no_signal" if none).
BeatFit doppler_beat(const ConditionalMirrorState& state, double x2, const Axis& t2_axis);
// Beat of the particle marginal (mirror unmeasured) at fixed x1 as the
// particle detection time runs over t1_axis; the mirror is traced out at
// t2 = t1.
BeatFit particle_doppler_beat(const WavegroupSpec& spec, double x1, const Axis& t1_axis);

struct DecoherenceEstimate {
  double t_D_over_t_R = 0.0;
  double dx_paths_sync = 0.0;    // 2 l_c m / M
  double dx_paths_async = 0.0;   // 2 v dt m / M
  double lambda_T = 0.0;         // h / sqrt(2 M kB T)
  double v_probe_sync = 0.0;     // h M / (4 l_c m m*)
  double v_probe_async = 0.0;    // h M / (2 m m* v dt)
  double overlap_time = 0.0;     // h sqrt(M) / (4 m v sqrt(2 kB T))
};

DecoherenceEstimate decoherence_report(const PhysicalParams& p, double T, double dt, double m_star,
                                       double l_c_particle);

// Marginal rms widths of the particle and mirror substates before and after
// reflection. "Corrected" widths remove free spreading,
//   sigma_w² = sigma²(t) - sigma_v² (t - tw)²,
// with sigma_v the substate's velocity rms; all substates are unchirped at
// the waist time tw.
struct SubstateWidths {
  double particle = 0.0;
  double mirror = 0.0;
  double particle_corrected = 0.0;
  double mirror_corrected = 0.0;
};

struct CoherenceTransfer {
  SubstateWidths before;
  SubstateWidths after;
  double particle_out_over_mirror_in = 0.0;   // corrected widths
  double mirror_out_over_particle_in = 0.0;
  std::vector<std::string> flags;             // "incomplete_separation"

  bool has_flag(const std::string& f) const;
};

CoherenceTransfer coherence_transfer_metrics(const WavegroupSpec& spec, double pre_t, double post_t);

// Probability that the free incident packet lies on the physical side
// x1 < x2 at equal times t.
double incident_physical_weight(const WavegroupSpec& spec, double t);

}  // namespace mirror

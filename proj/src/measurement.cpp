#include "mirror/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mirror/quadrature.hpp"

namespace mirror {

void MeasurementEvent::validate() const {
  if (!(dx1 > 0.0)) throw std::invalid_argument("detector resolution dx1 must be positive");
  if (!std::isfinite(x10) || !std::isfinite(t10)) throw std::invalid_argument("measurement coordinates must be finite");
}

void Interval::validate() const {
  if (!(hi > lo)) throw std::invalid_argument("empty window");
}

ConditionalState::ConditionalState(const WavegroupSpec& spec, const MeasurementEvent& event, Measured measured)
    : wg_(spec), event_(event), measured_(measured) {
  event_.validate();
}

SpacetimePoint ConditionalState::point(double y, double t) const {
  if (measured_ == Measured::particle) return {event_.x10, event_.t10, y, t};
  return {y, t, event_.x10, event_.t10};
}

void ConditionalState::check_time(double t) const {
  if (t < event_.t10) {
    std::ostringstream os;
    os << "conditional state is only defined after the collapse (t = " << t << " < t10 = " << event_.t10 << ")";
    throw std::invalid_argument(os.str());
  }
}

cplx ConditionalState::amplitude(double y, double t) const {
  check_time(t);
  return wg_.amplitude(point(y, t));
}

LocalAmplitude ConditionalState::local(double y, double t) const {
  check_time(t);
  return wg_.local(point(y, t));
}

double ConditionalState::pdf(double y, double t) const {
  check_time(t);
  return wg_.pdf(point(y, t));
}

WavegroupParts ConditionalState::parts(double y, double t) const { return wg_.parts(point(y, t)); }

namespace {

struct PartProfile {
  GaussianProfile profile;
  double peak;
};

std::vector<PartProfile> significant_profiles(const ConditionalState& s, double t) {
  const auto& spec = s.spec();
  const bool along_x2 = s.measured() == Measured::particle;
  const double guess = along_x2 ? spec.x2c + spec.mirror_group_velocity() * (t - spec.t0)
                                : spec.x1c + spec.particle_group_velocity() * (t - spec.t0);
  std::vector<PartProfile> out;
  for (Part part : {Part::incident, Part::reflected}) {
    const SpacetimePoint ref = s.point(guess, t);
    const GaussianProfile g =
        along_x2 ? s.wavegroup().profile_x2(part, ref) : s.wavegroup().profile_x1(part, ref);
    const WavegroupParts w = s.parts(g.mean, t);
    const double peak = std::norm(part == Part::incident ? w.incident : w.reflected);
    out.push_back({g, peak});
  }
  const double top = std::max(out[0].peak, out[1].peak);
  std::erase_if(out, [top](const PartProfile& p) { return !(p.peak > 1e-20 * top); });
  return out;
}

}  // namespace

Interval ConditionalState::support(double t, double n_sigma) const {
  const auto profiles = significant_profiles(*this, t);
  Interval iv{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (const auto& p : profiles) {
    iv.lo = std::min(iv.lo, p.profile.mean - n_sigma * p.profile.sigma);
    iv.hi = std::max(iv.hi, p.profile.mean + n_sigma * p.profile.sigma);
  }
  if (profiles.empty()) iv = {event_.x10, event_.x10};
  if (measured_ == Measured::particle) {
    iv.lo = std::max(iv.lo, event_.x10);
    iv.hi = std::max(iv.hi, iv.lo);
  } else {
    iv.hi = std::min(iv.hi, event_.x10);
    iv.lo = std::min(iv.lo, iv.hi);
  }
  return iv;
}

double ConditionalState::resolution(double t) const {
  const auto profiles = significant_profiles(*this, t);
  double r = exact_fringe_period(spec().params) / 4.0;
  for (const auto& p : profiles) r = std::min(r, p.profile.sigma / 2.0);
  return r;
}

double ConditionalState::integrate(double t, const Interval& window) const {
  const double panel = resolution(t);
  return integrate_panels([&](double y) { return wg_.pdf(point(y, t)); }, window.lo, window.hi, panel);
}

double ConditionalState::norm(double t) const { return integrate(t, support(t)); }

ConditionalMirrorState collapse(const WavegroupSpec& spec, const MeasurementEvent& event) {
  return ConditionalState(spec, event, Measured::particle);
}

double mirror_pdf(const ConditionalMirrorState& state, double x2, double t2) { return state.pdf(x2, t2); }

SequentialProbability sequential_probability(const WavegroupSpec& spec, const MeasurementEvent& event,
                                             const Interval& x2_window, double t2) {
  x2_window.validate();
  const ConditionalState state = collapse(spec, event);
  if (t2 < event.t10) throw std::invalid_argument("mirror must be measured after the particle (t2 >= t10)");
  SequentialProbability p{};
  p.pr_first = event.dx1 * state.norm(event.t10);
  p.pr_second = event.dx1 * state.integrate(t2, x2_window);
  p.product = p.pr_first * p.pr_second;
  return p;
}

std::string to_string(Regime r) { return r == Regime::A ? "A" : "B"; }

namespace {

struct Sampled {
  std::vector<double> y;
  std::vector<double> f;
};

Sampled sample_conditional(const ConditionalState& s, double t) {
  const Interval iv = s.support(t, 8.0);
  const double step = s.resolution(t) / 4.0;
  std::size_t n = iv.width() > 0.0 ? static_cast<std::size_t>(std::ceil(iv.width() / step)) + 1 : 1;
  n = std::clamp<std::size_t>(n, 64, 40000);
  Sampled out{std::vector<double>(n), std::vector<double>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    out.y[i] = iv.lo + iv.width() * static_cast<double>(i) / static_cast<double>(n - 1);
    out.f[i] = s.pdf(out.y[i], t);
  }
  return out;
}

}  // namespace

Regime classify_regime(const WavegroupSpec& spec, const MeasurementEvent& event) {
  const ConditionalState s = collapse(spec, event);
  const Sampled smp = sample_conditional(s, event.t10);
  const auto it = std::max_element(smp.f.begin(), smp.f.end());
  const double y_mode = smp.y[static_cast<std::size_t>(it - smp.f.begin())];
  const WavegroupParts w = s.parts(y_mode, event.t10);
  const double a = std::abs(w.incident);
  const double b = std::abs(w.reflected);
  const double top = std::max(a, b);
  return (a > 1e-3 * top && b > 1e-3 * top) ? Regime::B : Regime::A;
}

std::vector<Mode> conditional_modes(const ConditionalState& state, double t, double floor) {
  const Sampled smp = sample_conditional(state, t);
  const std::size_t n = smp.f.size();
  const double dy = smp.y.size() > 1 ? smp.y[1] - smp.y[0] : 0.0;

  // Moving average over one fringe period, unless fringes are wider than
  // the packet itself.
  std::vector<double> g = smp.f;
  const double fringe = exact_fringe_period(state.spec().params);
  if (dy > 0.0 && fringe < (smp.y.back() - smp.y.front()) / 3.0) {
    const auto half = static_cast<std::size_t>(std::round(0.5 * fringe / dy));
    if (half > 0) {
      std::vector<double> prefix(n + 1, 0.0);
      for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + smp.f[i];
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t lo = i >= half ? i - half : 0;
        const std::size_t hi = std::min(n - 1, i + half);
        g[i] = (prefix[hi + 1] - prefix[lo]) / static_cast<double>(hi - lo + 1);
      }
    }
  }

  const double top = *std::max_element(g.begin(), g.end());
  std::vector<Mode> modes;
  if (!(top > 0.0)) return modes;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (g[i] > g[i - 1] && g[i] >= g[i + 1] && g[i] >= floor * top) {
      // Quadratic interpolation of the discrete maximum.
      const double denom = g[i - 1] - 2.0 * g[i] + g[i + 1];
      const double shift = denom != 0.0 ? 0.5 * (g[i - 1] - g[i + 1]) / denom : 0.0;
      modes.push_back({smp.y[i] + shift * dy, g[i] - 0.25 * (g[i - 1] - g[i + 1]) * shift});
    }
  }
  return modes;
}

namespace {

double fit_slope(const std::vector<double>& t, const std::vector<double>& y) {
  const auto n = static_cast<double>(t.size());
  double st = 0, sy = 0, stt = 0, sty = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    st += t[i];
    sy += y[i];
    stt += t[i] * t[i];
    sty += t[i] * y[i];
  }
  return (n * sty - st * sy) / (n * stt - st * st);
}

}  // namespace

SplitVelocities split_centroid_velocities(const ConditionalState& state, const std::vector<double>& t_samples) {
  if (t_samples.size() < 2) throw std::invalid_argument("need at least two sample times to fit velocities");
  SplitVelocities out{};
  for (double t : t_samples) {
    std::vector<Mode> modes = conditional_modes(state, t);
    if (modes.size() < 2) {
      const Interval iv = state.support(t, 3.0);
      std::ostringstream os;
      os << "split substates unresolved at t = " << t << ": a single mode over a support of width " << iv.width()
         << "; the offset between the substates is small compared with the wavegroup size";
      throw SplitUnresolved(os.str());
    }
    std::partial_sort(modes.begin(), modes.begin() + 2, modes.end(),
                      [](const Mode& a, const Mode& b) { return a.height > b.height; });
    double a = modes[0].position;
    double b = modes[1].position;
    if (a > b) std::swap(a, b);
    out.slow_positions.push_back(a);
    out.fast_positions.push_back(b);
  }
  out.slow = fit_slope(t_samples, out.slow_positions);
  out.fast = fit_slope(t_samples, out.fast_positions);
  return out;
}

}  // namespace mirror

#include "mirror/observables.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "mirror/parallel.hpp"

namespace mirror {

namespace {

bool contains(const std::vector<std::string>& flags, const std::string& f) {
  return std::find(flags.begin(), flags.end(), f) != flags.end();
}

void add_flag(std::vector<std::string>& flags, const std::string& f) {
  if (!contains(flags, f)) flags.push_back(f);
}

constexpr std::size_t kMaxPanels = 200000;

Curve marginal(const WavegroupSpec& spec, const Axis& axis, double t_fixed, double t_free, Measured measured,
               double n_sigma) {
  spec.validate();
  axis.validate();
  Curve c{axis.role, axis.samples(), std::vector<double>(axis.count, 0.0), {}};
  std::vector<char> truncated(axis.count, 0);
  parallel_for(axis.count, [&](std::size_t i) {
    const ConditionalState s(spec, {c.x[i], t_fixed, 1.0}, measured);
    const Interval iv = s.support(t_free, n_sigma);
    const double panel = s.resolution(t_free);
    if (iv.width() / panel > static_cast<double>(kMaxPanels)) truncated[i] = 1;
    c.y[i] = s.integrate(t_free, iv);
  });
  if (std::any_of(truncated.begin(), truncated.end(), [](char t) { return t != 0; })) add_flag(c.flags, "truncated");
  return c;
}

}  // namespace

bool Curve::has_flag(const std::string& f) const { return contains(flags, f); }
bool BeatFit::has_flag(const std::string& f) const { return contains(flags, f); }
bool CoherenceTransfer::has_flag(const std::string& f) const { return contains(flags, f); }

Curve joint_slice(const WavegroupSpec& spec, const Axis& axis, double other, double t, bool normalized) {
  if (axis.role != "x1" && axis.role != "x2") throw std::invalid_argument("slice axis must be x1 or x2");
  const bool along_x1 = axis.role == "x1";
  const Wavegroup wg(spec);
  Curve c{axis.role, axis.samples(), std::vector<double>(axis.count, 0.0), {}};
  for (std::size_t i = 0; i < axis.count; ++i) {
    const SpacetimePoint pt = along_x1 ? SpacetimePoint{c.x[i], t, other, t} : SpacetimePoint{other, t, c.x[i], t};
    const double pdf = wg.pdf(pt);
    if (!normalized) {
      c.y[i] = pdf;
      continue;
    }
    const WavegroupParts w = wg.parts(pt);
    const double incoherent = std::norm(w.incident) + std::norm(w.reflected);
    c.y[i] = incoherent > 0.0 ? pdf / incoherent : 0.0;
  }
  if (normalized) c.flags.emplace_back("normalized");
  return c;
}

Curve marginal_over_mirror(const WavegroupSpec& spec, const Axis& x1_axis, double t1, double t2, double n_sigma) {
  return marginal(spec, x1_axis, t1, t2, Measured::particle, n_sigma);
}

Curve marginal_over_particle(const WavegroupSpec& spec, const Axis& x2_axis, double t1, double t2,
                             double n_sigma) {
  return marginal(spec, x2_axis, t2, t1, Measured::mirror, n_sigma);
}

FringeReport extract_fringes(const Curve& curve, double noise_floor) {
  FringeReport r;
  r.axis = curve.axis;
  const auto& y = curve.y;
  const auto& x = curve.x;
  const std::size_t n = y.size();
  if (n < 3) return r;
  const double peak = *std::max_element(y.begin(), y.end());
  if (!(peak > 0.0)) return r;

  struct Extremum {
    std::size_t i;
    double pos;
    bool is_max;
  };
  std::vector<Extremum> ext;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const bool mx = y[i] > y[i - 1] && y[i] >= y[i + 1];
    const bool mn = y[i] < y[i - 1] && y[i] <= y[i + 1];
    if (!mx && !mn) continue;
    const double denom = y[i - 1] - 2.0 * y[i] + y[i + 1];
    const double shift = denom != 0.0 ? 0.5 * (y[i - 1] - y[i + 1]) / denom : 0.0;
    ext.push_back({i, x[i] + shift * (x[i + 1] - x[i]), mx});
  }

  // Drop ripples below the noise floor: a maximum must stand above its
  // neighbouring minima by more than noise_floor in relative contrast.
  auto contrast = [&](std::size_t k) {
    double lo = std::numeric_limits<double>::infinity();
    if (k > 0 && !ext[k - 1].is_max) lo = std::min(lo, y[ext[k - 1].i]);
    if (k + 1 < ext.size() && !ext[k + 1].is_max) lo = std::min(lo, y[ext[k + 1].i]);
    if (!std::isfinite(lo)) return 0.0;
    const double hi = y[ext[k].i];
    return (hi - lo) / (hi + lo);
  };

  std::vector<std::size_t> maxima;
  for (std::size_t k = 0; k < ext.size(); ++k)
    if (ext[k].is_max && y[ext[k].i] > noise_floor * peak) maxima.push_back(k);
  if (maxima.empty()) return r;

  const auto tallest = *std::max_element(maxima.begin(), maxima.end(),
                                         [&](std::size_t a, std::size_t b) { return y[ext[a].i] < y[ext[b].i]; });
  double lo_sum = 0.0;
  int lo_count = 0;
  for (std::size_t k : {tallest - 1, tallest + 1}) {
    if (k < ext.size() && !ext[k].is_max) {
      lo_sum += y[ext[k].i];
      ++lo_count;
    }
  }
  if (lo_count > 0) {
    const double hi = y[ext[tallest].i];
    const double lo = lo_sum / lo_count;
    r.visibility = (hi - lo) / (hi + lo);
  }
  if (r.visibility < noise_floor) r.visibility = 0.0;

  std::vector<double> positions;
  for (std::size_t k : maxima)
    if (contrast(k) > noise_floor && y[ext[k].i] >= 0.05 * y[ext[tallest].i]) positions.push_back(ext[k].pos);
  r.n_fringes = static_cast<int>(positions.size());
  if (positions.size() >= 2) r.spacing = (positions.back() - positions.front()) / static_cast<double>(positions.size() - 1);
  return r;
}

namespace {

struct LsqResult {
  double rss;
  Eigen::VectorXd coef;
};

LsqResult sinusoid_lsq(const Eigen::VectorXd& tau, const Eigen::VectorXd& tc, const Eigen::VectorXd& y, double w,
                       int degree) {
  const auto n = tau.size();
  const int terms = degree + 1;
  Eigen::MatrixXd a(n, 3 * terms);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double c = std::cos(w * tc[i]);
    const double s = std::sin(w * tc[i]);
    double p = 1.0;
    for (int j = 0; j < terms; ++j) {
      a(i, j) = p;
      a(i, terms + j) = p * c;
      a(i, 2 * terms + j) = p * s;
      p *= tau[i];
    }
  }
  Eigen::VectorXd coef = a.colPivHouseholderQr().solve(y);
  return {(a * coef - y).squaredNorm(), coef};
}

}  // namespace

BeatFit fit_beat(const std::vector<double>& t, const std::vector<double>& y, int envelope_degree) {
  if (t.size() != y.size()) throw std::invalid_argument("time and value series differ in length");
  if (envelope_degree < 0 || envelope_degree > 2) throw std::invalid_argument("envelope degree must be 0, 1 or 2");
  const auto n = static_cast<Eigen::Index>(t.size());
  if (n < 3 * (envelope_degree + 1) + 4) throw std::invalid_argument("too few samples for a beat fit");

  const double t_lo = *std::min_element(t.begin(), t.end());
  const double t_hi = *std::max_element(t.begin(), t.end());
  const double span = t_hi - t_lo;
  if (!(span > 0.0)) throw std::invalid_argument("degenerate time axis");
  const double mid = 0.5 * (t_lo + t_hi);
  const double scale = std::max(std::abs(*std::max_element(y.begin(), y.end())),
                                std::abs(*std::min_element(y.begin(), y.end())));
  BeatFit fit;
  if (!(scale > 0.0)) {
    add_flag(fit.flags, "no_signal");
    return fit;
  }

  Eigen::VectorXd tau(n), tc(n), ys(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    tc[i] = t[static_cast<std::size_t>(i)] - mid;
    tau[i] = tc[i] / (0.5 * span);
    ys[i] = y[static_cast<std::size_t>(i)] / scale;
  }

  // Coarse scan from one period across the span up to the Nyquist rate,
  // then golden-section refinement around the best scan point.
  const double w_lo = 2.0 * std::numbers::pi / span;
  const double w_hi = 0.95 * std::numbers::pi * static_cast<double>(n - 1) / span;
  const double bin = 2.0 * std::numbers::pi / span;
  const auto steps = std::clamp<std::size_t>(static_cast<std::size_t>(8.0 * (w_hi - w_lo) / bin), 16, 20000);
  const double dw = (w_hi - w_lo) / static_cast<double>(steps);
  double best_w = w_lo;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k <= steps; ++k) {
    const double w = w_lo + dw * static_cast<double>(k);
    const double rss = sinusoid_lsq(tau, tc, ys, w, envelope_degree).rss;
    if (rss < best) {
      best = rss;
      best_w = w;
    }
  }
  double a = std::max(w_lo, best_w - dw);
  double b = std::min(w_hi, best_w + dw);
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - g * (b - a);
  double d = a + g * (b - a);
  double fc = sinusoid_lsq(tau, tc, ys, c, envelope_degree).rss;
  double fd = sinusoid_lsq(tau, tc, ys, d, envelope_degree).rss;
  for (int it = 0; it < 200 && (b - a) > 1e-13 * b; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = sinusoid_lsq(tau, tc, ys, c, envelope_degree).rss;
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = sinusoid_lsq(tau, tc, ys, d, envelope_degree).rss;
    }
  }
  const double w = 0.5 * (a + b);
  const LsqResult res = sinusoid_lsq(tau, tc, ys, w, envelope_degree);
  const int terms = envelope_degree + 1;
  fit.pdf_angular_frequency = w;
  fit.frequency = 0.5 * w;
  fit.periods_spanned = w * span / (2.0 * std::numbers::pi);
  fit.residual_rms = scale * std::sqrt(res.rss / static_cast<double>(n));
  fit.amplitude = scale * std::hypot(res.coef[terms], res.coef[2 * terms]);
  if (fit.periods_spanned < 3.0) add_flag(fit.flags, "insufficient_span");
  return fit;
}

BeatFit doppler_beat(const ConditionalMirrorState& state, double x2, const Axis& t2_axis) {
  t2_axis.validate();
  const std::vector<double> t = t2_axis.samples();
  std::vector<double> y(t.size()), keep(t.size(), 0.0);
  // Divide out |in|^2 + |ref|^2 so the Gaussian envelopes do not bias the
  // frequency; samples where either part has died out carry no beat.
  parallel_for(t.size(), [&](std::size_t i) {
    const WavegroupParts p = state.parts(x2, t[i]);
    const double a = std::norm(p.incident);
    const double b = std::norm(p.reflected);
    if (a + b > 0.0 && std::min(a, b) >= 1e-6 * std::max(a, b)) {
      y[i] = std::norm(p.incident + p.reflected) / (a + b);
      keep[i] = 1.0;
    }
  });
  std::vector<double> tk, yk;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (keep[i] == 0.0) continue;
    tk.push_back(t[i]);
    yk.push_back(y[i]);
  }
  if (tk.size() < 16) {
    BeatFit fit;
    add_flag(fit.flags, "no_signal");
    return fit;
  }
  BeatFit fit = fit_beat(tk, yk);
  add_flag(fit.flags, "envelope_normalized");
  return fit;
}

BeatFit particle_doppler_beat(const WavegroupSpec& spec, double x1, const Axis& t1_axis) {
  t1_axis.validate();
  const std::vector<double> t = t1_axis.samples();
  std::vector<double> y(t.size());
  parallel_for(t.size(), [&](std::size_t i) {
    const ConditionalState s(spec, {x1, t[i], 1.0}, Measured::particle);
    y[i] = s.norm(t[i]);
  });
  return fit_beat(t, y);
}

DecoherenceEstimate decoherence_report(const PhysicalParams& p, double T, double dt, double m_star,
                                       double l_c_particle) {
  p.validate();
  if (!(T > 0.0) || !(dt > 0.0) || !(m_star > 0.0) || !(l_c_particle > 0.0))
    throw std::invalid_argument("decoherence inputs T, dt, m*, l_c must be positive");
  const double h = p.planck();
  const double m = p.m;
  const double M = p.M;
  const double v = p.v;
  DecoherenceEstimate e;
  e.lambda_T = h / std::sqrt(2.0 * M * p.kB * T);
  e.dx_paths_sync = 2.0 * l_c_particle * m / M;
  e.dx_paths_async = 2.0 * v * dt * m / M;
  e.v_probe_sync = h * M / (4.0 * l_c_particle * m * m_star);
  e.v_probe_async = h * M / (2.0 * m * m_star * v * dt);
  const double mvdt = m * v * dt;
  e.t_D_over_t_R = M * h * h / (8.0 * p.kB * T * mvdt * mvdt);
  e.overlap_time = h * std::sqrt(M) / (4.0 * m * v * std::sqrt(2.0 * p.kB * T));
  return e;
}

double incident_physical_weight(const WavegroupSpec& spec, double t) { return 1.0 - spec.wrong_side_weight(t); }

namespace {

struct Moments {
  double var1;
  double var2;
};

// Marginal variances of the physical joint PDF at equal times t over a box.
Moments grid_moments(const Wavegroup& wg, double t, double c1, double h1, double c2, double h2) {
  constexpr std::size_t n = 241;
  std::vector<double> f(n * n);
  const double d1 = 2.0 * h1 / static_cast<double>(n - 1);
  const double d2 = 2.0 * h2 / static_cast<double>(n - 1);
  parallel_for(n, [&](std::size_t i) {
    const double x1 = c1 - h1 + d1 * static_cast<double>(i);
    for (std::size_t j = 0; j < n; ++j) f[i * n + j] = wg.pdf({x1, t, c2 - h2 + d2 * static_cast<double>(j), t});
  });
  double s0 = 0, s1 = 0, s2 = 0, q1 = 0, q2 = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x1 = c1 - h1 + d1 * static_cast<double>(i);
    for (std::size_t j = 0; j < n; ++j) {
      const double x2 = c2 - h2 + d2 * static_cast<double>(j);
      const double w = f[i * n + j];
      s0 += w;
      s1 += w * x1;
      s2 += w * x2;
      q1 += w * x1 * x1;
      q2 += w * x2 * x2;
    }
  }
  const double m1 = s1 / s0;
  const double m2 = s2 / s0;
  return {q1 / s0 - m1 * m1, q2 / s0 - m2 * m2};
}

double corrected(double var, double sigma_v, double dt) {
  return std::sqrt(std::max(0.0, var - sigma_v * sigma_v * dt * dt));
}

}  // namespace

CoherenceTransfer coherence_transfer_metrics(const WavegroupSpec& spec, double pre_t, double post_t) {
  spec.validate();
  if (!(post_t > pre_t)) throw std::invalid_argument("post_t must follow pre_t");
  const auto& p = spec.params;
  const Wavegroup wg(spec);
  CoherenceTransfer out;

  if (incident_physical_weight(spec, pre_t) < 1.0 - 1e-3 || incident_physical_weight(spec, post_t) > 1e-3)
    add_flag(out.flags, "incomplete_separation");

  const double mt = p.m + p.M;
  // Reflected wavevectors as a linear map of the incident ones.
  const Eigen::Matrix2d R{{(p.m - p.M) / mt, 2.0 * p.m / mt}, {2.0 * p.M / mt, (p.M - p.m) / mt}};
  // Wavevector covariance of the incident density.
  const Eigen::Matrix2d Sk{{0.5 * spec.dk * spec.dk, 0.0}, {0.0, 0.5 * spec.dK * spec.dK}};
  const Eigen::Matrix2d Sk_ref = R * Sk * R.transpose();
  const double sv1_in = p.hbar / p.m * std::sqrt(Sk(0, 0));
  const double sv2_in = p.hbar / p.M * std::sqrt(Sk(1, 1));
  const double sv1_out = p.hbar / p.m * std::sqrt(Sk_ref(0, 0));
  const double sv2_out = p.hbar / p.M * std::sqrt(Sk_ref(1, 1));

  // Box for the incident packet: exact free centers and widths.
  {
    const double dt = pre_t - spec.t_waist;
    const double c1 = spec.waist_x1() + spec.particle_group_velocity() * dt;
    const double c2 = spec.waist_x2() + spec.mirror_group_velocity() * dt;
    const Moments mo = grid_moments(wg, pre_t, c1, 10.0 * spec.particle_width(pre_t), c2,
                                    10.0 * spec.mirror_width(pre_t));
    out.before = {std::sqrt(mo.var1), std::sqrt(mo.var2), corrected(mo.var1, sv1_in, dt),
                  corrected(mo.var2, sv2_in, dt)};
  }
  // Box for the reflected packet: at the waist time it is the incident
  // profile seen through the inverse-transposed map, then moves freely.
  {
    const double dt = post_t - spec.t_waist;
    const Eigen::Matrix2d Rinv_t = R.inverse().transpose();
    const Eigen::Vector2d c0 = Rinv_t * Eigen::Vector2d(spec.waist_x1(), spec.waist_x2());
    const Eigen::Vector2d kref = R * Eigen::Vector2d(spec.k0, spec.K0);
    const double c1 = c0[0] + p.hbar * kref[0] / p.m * dt;
    const double c2 = c0[1] + p.hbar * kref[1] / p.M * dt;
    const Eigen::Matrix2d pos0 = 0.25 * Sk_ref.inverse();
    const double w1 = std::sqrt(pos0(0, 0) + sv1_out * sv1_out * dt * dt);
    const double w2 = std::sqrt(pos0(1, 1) + sv2_out * sv2_out * dt * dt);
    const Moments mo = grid_moments(wg, post_t, c1, 10.0 * w1, c2, 10.0 * w2);
    out.after = {std::sqrt(mo.var1), std::sqrt(mo.var2), corrected(mo.var1, sv1_out, dt),
                 corrected(mo.var2, sv2_out, dt)};
  }
  out.particle_out_over_mirror_in = out.after.particle_corrected / out.before.mirror_corrected;
  out.mirror_out_over_particle_in = out.after.mirror_corrected / out.before.particle_corrected;
  return out;
}

}  // namespace mirror

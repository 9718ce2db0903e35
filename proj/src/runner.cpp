#include "mirror/runner.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>

#include <fmt/format.h>
#include <json.hpp>

#include "mirror/conservation.hpp"
#include "mirror/observables.hpp"
#include "mirror/output.hpp"
#include "mirror/parallel.hpp"

namespace mirror {

using nlohmann::json;

std::string to_string(Command c) {
  switch (c) {
    case Command::simulate: return "simulate";
    case Command::collapse: return "collapse";
    case Command::marginal: return "marginal";
    case Command::observables: return "observables";
    case Command::check: return "check";
  }
  return "unknown";
}

namespace {

class Context {
 public:
  Context(const Scenario& s, Command c, const RunOptions& o) : s(s), cmd(c), opts(o), hash(scenario_hash(s)) {}

  const Scenario& s;
  Command cmd;
  const RunOptions& opts;
  std::string hash;
  RunReport report;
  json summary = json::object();

  Provenance provenance(std::vector<std::pair<std::string, std::string>> extra) const {
    Provenance p{{"scenario", s.name},
                 {"scenario_hash", hash},
                 {"operation", to_string(cmd)},
                 {"units", to_string(s.units)},
                 {"tau", format_number(s.tau())}};
    for (auto& e : extra) p.push_back(std::move(e));
    return p;
  }

  std::string path(const std::string& stem) const {
    return (std::filesystem::path(opts.out_dir) / (s.name + "_" + stem)).string();
  }

  void write(const std::string& file, const std::string& content) {
    write_atomic(file, content);
    report.files.push_back(file);
  }

  void write_grid(const std::string& stem, const FieldGrid& g, const Provenance& prov, const std::string& title) {
    const std::string csv = path(stem + ".csv");
    write(csv, grid_csv(g, prov));
    if (opts.write_plots) write(path(stem + ".gp"), heatmap_script(csv, title, g.cols.role, g.rows.role));
  }

  void write_curves(const std::string& stem, const CurveTable& t, const Provenance& prov, const std::string& title) {
    const std::string csv = path(stem + ".csv");
    write(csv, curve_csv(t, prov));
    if (opts.write_plots) write(path(stem + ".gp"), curve_script(csv, t, title));
  }

  void fail(const std::string& what) {
    report.failures.push_back(what);
    report.lines.push_back("FAILED " + what);
  }

  void line(const std::string& l) { report.lines.push_back(l); }

  // Runs one analysis; exceptions become failures of that analysis only.
  template <class Fn>
  void guarded(const std::string& name, Fn&& fn) {
    try {
      fn();
    } catch (const std::exception& e) {
      fail(name + ": " + e.what());
      summary[name]["error"] = e.what();
    }
  }

  std::vector<double> times() const {
    if (!opts.times_tau) return s.times;
    std::vector<double> out;
    const double tau = s.tau();
    for (double t : *opts.times_tau) out.push_back(t * tau);
    return out;
  }

  std::vector<MeasurementEvent> events() const {
    if (opts.event) return {*opts.event};
    return s.events;
  }

  RunReport finish() {
    summary["scenario"] = s.name;
    summary["scenario_hash"] = hash;
    summary["operation"] = to_string(cmd);
    summary["failures"] = report.failures;
    report.summary_json = summary.dump(2) + "\n";
    write(path(to_string(cmd) + ".json"), report.summary_json);
    return std::move(report);
  }
};

std::string fmt_time(double t) { return format_number(t); }

// ---- simulate ----

void simulate(Context& cx) {
  const auto ts = cx.times();
  json list = json::array();
  for (std::size_t i = 0; i < ts.size(); ++i) {
    cx.guarded(fmt::format("simulate[t={}]", fmt_time(ts[i])), [&] {
      const FieldGrid g = joint_pdf_grid(cx.s.wavegroup, cx.s.grid, ts[i], ts[i]);
      const double peak = *std::max_element(g.real.begin(), g.real.end());
      cx.write_grid(fmt::format("joint_t{}", i), g, cx.provenance({{"t1", fmt_time(ts[i])}, {"t2", fmt_time(ts[i])}}),
                    fmt::format("joint PDF, t1 = t2 = {}", fmt_time(ts[i])));
      list.push_back({{"t", ts[i]}, {"peak", peak}, {"flags", g.flags}});
      cx.line(fmt::format("joint PDF at t = {}: peak {}", fmt_time(ts[i]), format_number(peak)));
    });
  }
  cx.summary["grids"] = list;
}

// ---- collapse ----

Axis conditional_axis(const ConditionalState& st, const std::vector<double>& t2s, std::size_t count,
                      const Axis& fallback) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (double t : t2s) {
    const Interval iv = st.support(t, 6.0);
    if (iv.width() > 0.0) {
      lo = std::min(lo, iv.lo);
      hi = std::max(hi, iv.hi);
    }
  }
  if (!(hi > lo)) return fallback;
  return {"x2", lo, hi, count};
}

void collapse_event(Context& cx, std::size_t k, const MeasurementEvent& e) {
  const auto& spec = cx.s.wavegroup;
  const ConditionalState st = collapse(spec, e);
  std::vector<double> t2s;
  for (double t : cx.s.t2_times)
    if (t >= e.t10) t2s.push_back(t);
  if (t2s.empty()) t2s.push_back(e.t10);

  const Regime regime = classify_regime(spec, e);
  json ev = {{"x10", e.x10}, {"t10", e.t10}, {"dx1", e.dx1}, {"regime", to_string(regime)}};
  cx.line(fmt::format("event {}: x10 = {}, t10 = {}, regime {}", k, format_number(e.x10), fmt_time(e.t10),
                      to_string(regime)));

  const Axis x2 = conditional_axis(st, t2s, cx.s.x2_axis.count, cx.s.x2_axis);
  CurveTable curves{"x2", x2.samples(), {}, {}};
  json snaps = json::array();
  for (std::size_t i = 0; i < t2s.size(); ++i) {
    const double t2 = t2s[i];
    // Mirror PDF as a function of (x10, x2): rows sweep the detection point.
    GridSpec gs{cx.s.grid.rows, x2};
    FieldGrid g = FieldGrid::real_field(gs);
    const Wavegroup& wg = st.wavegroup();
    parallel_for(gs.rows.count, [&](std::size_t r) {
      const double x10 = gs.rows.at(r);
      for (std::size_t c = 0; c < gs.cols.count; ++c) g(r, c) = wg.pdf({x10, e.t10, gs.cols.at(c), t2});
    });
    cx.write_grid(fmt::format("collapse_e{}_t{}", k, i), g,
                  cx.provenance({{"x10", format_number(e.x10)}, {"t10", fmt_time(e.t10)}, {"t2", fmt_time(t2)}}),
                  fmt::format("mirror PDF after detection at t10 = {}, t2 = {}", fmt_time(e.t10), fmt_time(t2)));

    std::vector<double> y(x2.count);
    for (std::size_t j = 0; j < x2.count; ++j) y[j] = st.pdf(x2.at(j), t2);
    curves.names.push_back(fmt::format("t2={}", fmt_time(t2)));
    curves.series.push_back(std::move(y));

    const double norm = st.norm(t2);
    const auto modes = conditional_modes(st, t2);
    snaps.push_back({{"t2", t2}, {"norm", norm}, {"modes", modes.size()}});
    cx.line(fmt::format("  t2 = {}: conditional norm {}, {} mode(s)", fmt_time(t2), format_number(norm),
                        modes.size()));
  }
  cx.write_curves(fmt::format("conditional_e{}", k), curves,
                  cx.provenance({{"x10", format_number(e.x10)}, {"t10", fmt_time(e.t10)}}),
                  "conditional mirror PDF");
  ev["snapshots"] = snaps;
  ev["pr_first"] = e.dx1 * st.norm(e.t10);
  cx.summary["events"].push_back(ev);
}

void collapse_all(Context& cx) {
  const auto evs = cx.events();
  cx.summary["events"] = json::array();
  if (evs.empty()) cx.line("no measurement events");
  for (std::size_t k = 0; k < evs.size(); ++k)
    cx.guarded(fmt::format("collapse[event {}]", k), [&] { collapse_event(cx, k, evs[k]); });
}

// ---- marginal ----

json fringe_json(const FringeReport& f) {
  return {{"spacing", f.spacing}, {"visibility", f.visibility}, {"n_fringes", f.n_fringes}};
}

void marginal(Context& cx) {
  const auto ts = cx.times();
  json list = json::array();
  for (std::size_t i = 0; i < ts.size(); ++i) {
    cx.guarded(fmt::format("marginal[t={}]", fmt_time(ts[i])), [&] {
      const double t = ts[i];
      const Curve c1 = marginal_over_mirror(cx.s.wavegroup, cx.s.x1_axis, t, t);
      const Curve c2 = marginal_over_particle(cx.s.wavegroup, cx.s.x2_axis, t, t);
      const auto prov = cx.provenance({{"t1", fmt_time(t)}, {"t2", fmt_time(t)}});
      cx.write_curves(fmt::format("marginal_x1_t{}", i), {"x1", c1.x, {"pdf"}, {c1.y}}, prov, "particle marginal");
      cx.write_curves(fmt::format("marginal_x2_t{}", i), {"x2", c2.x, {"pdf"}, {c2.y}}, prov, "mirror marginal");
      const FringeReport f1 = extract_fringes(c1);
      const FringeReport f2 = extract_fringes(c2);
      list.push_back({{"t", t},
                      {"particle", fringe_json(f1)},
                      {"mirror", fringe_json(f2)},
                      {"flags", json{{"particle", c1.flags}, {"mirror", c2.flags}}}});
      cx.line(fmt::format("marginals at t = {}: particle visibility {}, mirror visibility {}", fmt_time(t),
                          format_number(f1.visibility), format_number(f2.visibility)));
    });
  }
  cx.summary["marginals"] = list;
}

}  // namespace

namespace {

// ---- observables ----

bool wants(const Scenario& s, const std::string& a) {
  return std::find(s.analyses.begin(), s.analyses.end(), a) != s.analyses.end();
}

json beat_json(const BeatFit& b, double expected) {
  return {{"frequency", b.frequency},
          {"expected", expected},
          {"relative_error", b.frequency / expected - 1.0},
          {"periods_spanned", b.periods_spanned},
          {"residual_rms", b.residual_rms},
          {"flags", b.flags}};
}

void analysis_regime(Context& cx) {
  json out = json::array();
  for (const auto& e : cx.events()) {
    const Regime r = classify_regime(cx.s.wavegroup, e);
    out.push_back({{"x10", e.x10}, {"t10", e.t10}, {"regime", to_string(r)}});
    cx.line(fmt::format("regime at x10 = {}, t10 = {}: {}", format_number(e.x10), fmt_time(e.t10), to_string(r)));
  }
  cx.summary["regime"] = out;
}

void analysis_split(Context& cx) {
  const auto& spec = cx.s.wavegroup;
  const Velocities f = elastic_final_velocities(spec.params);
  json out = json::array();
  for (const auto& e : cx.events()) {
    json item = {{"x10", e.x10}, {"t10", e.t10}, {"expected", {spec.params.V, f.mirror}}};
    if (classify_regime(spec, e) != Regime::B) {
      item["status"] = "regime A, no split";
      out.push_back(item);
      continue;
    }
    // Sample well after the last snapshot so the substates have separated.
    const double t_end = cx.s.t2_times.empty() ? e.t10 : std::max(e.t10, cx.s.t2_times.back());
    const double span = std::max(t_end - e.t10, cx.s.tau());
    std::vector<double> ts;
    for (int i = 0; i < 4; ++i) ts.push_back(e.t10 + span * (1.0 + i / 3.0));
    const ConditionalState st = collapse(spec, e);
    try {
      const SplitVelocities v = split_centroid_velocities(st, ts);
      item["status"] = "resolved";
      item["slow"] = v.slow;
      item["fast"] = v.fast;
      cx.line(fmt::format("split at x10 = {}: velocities {} and {} (kinematics {} and {})", format_number(e.x10),
                          format_number(v.slow), format_number(v.fast), format_number(spec.params.V),
                          format_number(f.mirror)));
    } catch (const SplitUnresolved& ex) {
      item["status"] = "unresolved";
      item["reason"] = ex.what();
      cx.line(std::string("split unresolved: ") + ex.what());
    }
    out.push_back(item);
  }
  cx.summary["split"] = out;
}

// Slices of the simultaneous joint PDF through the collision point, along
// x1 on the particle side and along x2 on the mirror side. Spacing is
// reported for the raw slices and for the envelope-normalized ones.
void analysis_fringes(Context& cx) {
  const auto& spec = cx.s.wavegroup;
  const auto& p = spec.params;
  const Wavegroup wg(spec);
  const double tc = wg.collision_time();
  const double xc = wg.collision_position();
  const double fringe = exact_fringe_period(p);
  const double span1 = std::max(4.0 * spec.particle_width(tc), 4.0 * fringe);
  const double span2 = std::max(4.0 * spec.mirror_width(tc), 4.0 * fringe);
  const auto n = std::max<std::size_t>(cx.s.x1_axis.count, static_cast<std::size_t>(16.0 * std::max(span1, span2) / fringe));
  const Axis a1{"x1", xc - span1, xc, n};
  const Axis a2{"x2", xc, xc + span2, n};

  const Curve c1 = joint_slice(spec, a1, xc, tc);
  const Curve c2 = joint_slice(spec, a2, xc, tc);
  const FringeReport f1 = extract_fringes(c1);
  const FringeReport f2 = extract_fringes(c2);
  const FringeReport g1 = extract_fringes(joint_slice(spec, a1, xc, tc, true));
  const FringeReport g2 = extract_fringes(joint_slice(spec, a2, xc, tc, true));
  const double expected = fringe_spacing(p).value;
  cx.write_curves("fringes_x1", {"x1", c1.x, {"pdf"}, {c1.y}}, cx.provenance({{"t", fmt_time(tc)}}),
                  "joint PDF slice along x1");
  cx.write_curves("fringes_x2", {"x2", c2.x, {"pdf"}, {c2.y}}, cx.provenance({{"t", fmt_time(tc)}}),
                  "joint PDF slice along x2");
  cx.summary["fringes"] = {{"expected_spacing", expected},
                           {"exact_period", fringe},
                           {"x1", fringe_json(f1)},
                           {"x2", fringe_json(f2)},
                           {"x1_normalized", fringe_json(g1)},
                           {"x2_normalized", fringe_json(g2)}};
  cx.line(fmt::format("fringe spacing: x1 {} (normalized {}), x2 {} (normalized {}), closed form {}",
                      format_number(f1.spacing), format_number(g1.spacing), format_number(f2.spacing),
                      format_number(g2.spacing), format_number(expected)));
}

void analysis_beat(Context& cx) {
  const auto& spec = cx.s.wavegroup;
  const double W = beat_frequency(spec.params);
  json out = json::array();
  for (const auto& e : cx.events()) {
    const ConditionalState st = collapse(spec, e);
    const auto modes = conditional_modes(st, e.t10);
    if (modes.empty()) throw std::runtime_error("conditional mirror PDF is empty at t10");
    const auto top = std::max_element(modes.begin(), modes.end(),
                                      [](const Mode& a, const Mode& b) { return a.height < b.height; });
    const double period = std::numbers::pi / W;
    const Axis t2{"t2", e.t10, e.t10 + 6.0 * period, 241};
    const BeatFit b = doppler_beat(st, top->position, t2);
    json item = beat_json(b, W);
    item["x2"] = top->position;
    out.push_back(item);
    cx.line(fmt::format("mirror beat at x2 = {}: {} (closed form {})", format_number(top->position),
                        format_number(b.frequency), format_number(W)));
  }
  cx.summary["beat"] = out;
}

void analysis_particle_beat(Context& cx) {
  const auto& spec = cx.s.wavegroup;
  const auto& p = spec.params;
  const Wavegroup wg(spec);
  const Velocities f = elastic_final_velocities(p);
  const double W = beat_frequency(p);
  std::vector<double> xs;
  for (const auto& e : cx.events()) xs.push_back(e.x10);
  if (xs.empty()) xs.push_back(0.5 * (cx.s.x1_axis.min + cx.s.x1_axis.max));
  json out = json::array();
  for (double x1 : xs) {
    // Window around the passes of the incident and reflected centroids.
    const double t_in = spec.t0 + (x1 - spec.x1c) / spec.particle_group_velocity();
    const double t_ref = wg.collision_time() + (x1 - wg.collision_position()) / f.particle;
    const double half = 0.5 * std::abs(t_ref - t_in) + 2.0 * spec.particle_width(wg.collision_time()) / std::abs(p.v);
    const double mid = 0.5 * (t_in + t_ref);
    const BeatFit b = particle_doppler_beat(spec, x1, {"t1", mid - half, mid + half, 400});
    json item = beat_json(b, W);
    item["x1"] = x1;
    out.push_back(item);
    cx.line(fmt::format("particle beat at x1 = {}: {} (closed form {}){}", format_number(x1),
                        format_number(b.frequency), format_number(W),
                        b.has_flag("insufficient_span") ? " [insufficient_span]" : ""));
  }
  cx.summary["particle_beat"] = out;
}

void analysis_coherence_transfer(Context& cx) {
  const auto& spec = cx.s.wavegroup;
  const auto ts = cx.times();
  const double pre = ts.size() >= 2 ? ts.front() : spec.t0;
  const double post = ts.size() >= 2 ? ts.back() : -spec.t0;
  const CoherenceTransfer c = coherence_transfer_metrics(spec, pre, post);
  auto widths = [](const SubstateWidths& w) {
    return json{{"particle", w.particle},
                {"mirror", w.mirror},
                {"particle_corrected", w.particle_corrected},
                {"mirror_corrected", w.mirror_corrected}};
  };
  cx.summary["coherence_transfer"] = {{"pre_t", pre},
                                      {"post_t", post},
                                      {"before", widths(c.before)},
                                      {"after", widths(c.after)},
                                      {"particle_out_over_mirror_in", c.particle_out_over_mirror_in},
                                      {"mirror_out_over_particle_in", c.mirror_out_over_particle_in},
                                      {"flags", c.flags}};
  cx.line(fmt::format("coherence transfer: particle out / mirror in {}, mirror out / particle in {}",
                      format_number(c.particle_out_over_mirror_in), format_number(c.mirror_out_over_particle_in)));
}

void analysis_marginal_visibility(Context& cx) {
  const auto ts = cx.times();
  const double t = ts.empty() ? 0.0 : ts.front();
  const FringeReport f1 = extract_fringes(marginal_over_mirror(cx.s.wavegroup, cx.s.x1_axis, t, t));
  const FringeReport f2 = extract_fringes(marginal_over_particle(cx.s.wavegroup, cx.s.x2_axis, t, t));
  cx.summary["marginal_visibility"] = {{"t", t}, {"particle", fringe_json(f1)}, {"mirror", fringe_json(f2)}};
  cx.line(fmt::format("marginal visibility at t = {}: particle {}, mirror {}", fmt_time(t),
                      format_number(f1.visibility), format_number(f2.visibility)));
}

// Particle marginal at fixed t1 for several mirror times t2.
void analysis_marginal_t2_invariance(Context& cx) {
  const auto evs = cx.events();
  const double t1 = evs.empty() ? 0.0 : evs.front().t10;
  std::vector<double> t2s = cx.s.t2_times;
  if (t2s.empty()) t2s = {t1};
  CurveTable table{"x1", cx.s.x1_axis.samples(), {}, {}};
  double peak = 0.0, diff = 0.0;
  for (double t2 : t2s) {
    const Curve c = marginal_over_mirror(cx.s.wavegroup, cx.s.x1_axis, t1, t2);
    for (double y : c.y) peak = std::max(peak, y);
    if (!table.series.empty())
      for (std::size_t i = 0; i < c.y.size(); ++i) diff = std::max(diff, std::abs(c.y[i] - table.series[0][i]));
    table.names.push_back(fmt::format("t2={}", fmt_time(t2)));
    table.series.push_back(c.y);
  }
  cx.write_curves("marginal_t2", table, cx.provenance({{"t1", fmt_time(t1)}}), "particle marginal for several t2");
  const double rel = peak > 0.0 ? diff / peak : 0.0;
  cx.summary["marginal_t2_invariance"] = {{"t1", t1}, {"t2", t2s}, {"max_difference_over_peak", rel}};
  cx.line(fmt::format("particle marginal change across t2: {} of peak", format_number(rel)));
}

void analysis_decoherence(Context& cx) {
  if (!cx.s.thermal) throw std::runtime_error("needs a thermal block");
  const auto& p = cx.s.params;
  const auto& th = *cx.s.thermal;
  // Probe of the same species as the particle; asynchrony of one tau.
  const double l_c = thermal_spread(p.m, th.T_particle, p.hbar, p.kB).l_c / th.particle_scale;
  const double dt = cx.s.tau();
  const DecoherenceEstimate d = decoherence_report(p, th.T_mirror, dt, p.m, l_c);
  cx.summary["decoherence"] = {{"T_mirror", th.T_mirror},
                               {"dt", dt},
                               {"m_star", p.m},
                               {"l_c_particle", l_c},
                               {"t_D_over_t_R", d.t_D_over_t_R},
                               {"dx_paths_sync", d.dx_paths_sync},
                               {"dx_paths_async", d.dx_paths_async},
                               {"lambda_T", d.lambda_T},
                               {"v_probe_sync", d.v_probe_sync},
                               {"v_probe_async", d.v_probe_async},
                               {"overlap_time", d.overlap_time}};
  cx.line(fmt::format("decoherence: t_D/t_R = {}, overlap time {}", format_number(d.t_D_over_t_R),
                      format_number(d.overlap_time)));
}

void observables(Context& cx) {
  const std::vector<std::pair<std::string, void (*)(Context&)>> table{
      {"regime", analysis_regime},
      {"split", analysis_split},
      {"fringes", analysis_fringes},
      {"beat", analysis_beat},
      {"particle_beat", analysis_particle_beat},
      {"coherence_transfer", analysis_coherence_transfer},
      {"marginal_visibility", analysis_marginal_visibility},
      {"marginal_t2_invariance", analysis_marginal_t2_invariance},
      {"decoherence", analysis_decoherence},
  };
  for (const auto& [name, fn] : table)
    if (wants(cx.s, name)) cx.guarded(name, [&, f = fn] { f(cx); });
  if (cx.s.analyses.empty()) cx.line("no analyses requested");
}

}  // namespace

namespace {

// ---- check ----

// min(fringe, rms width)/divisions per axis, so packets narrower than a
// fringe are still resolved; time steps follow the fringe drift.
ResidualSteps check_steps(const WavegroupSpec& spec, double t, double divisions) {
  const ResidualSteps base = default_steps(spec.params, divisions);
  const double fringe = exact_fringe_period(spec.params);
  ResidualSteps s = base;
  s.dx1 = std::min(fringe, spec.particle_width(t)) / divisions;
  s.dx2 = std::min(fringe, spec.mirror_width(t)) / divisions;
  s.dt1 = base.dt1 * s.dx1 / base.dx1;
  s.dt2 = base.dt2 * s.dx2 / base.dx2;
  return s;
}

GridSpec overlap_grid(const WavegroupSpec& spec, double tc, double xc, std::size_t n) {
  const double s1 = spec.particle_width(tc);
  const double s2 = spec.mirror_width(tc);
  return {{"x1", xc - 2.0 * s1, xc + s2, n}, {"x2", xc - s2, xc + 2.0 * s1, n}};
}

void check(Context& cx) {
  const auto& spec = cx.s.wavegroup;
  const Wavegroup wg(spec);
  const double tc = wg.collision_time();
  const double xc = wg.collision_position();
  const double tau = cx.s.tau();
  const GridSpec grid = overlap_grid(spec, tc, xc, 24);

  cx.guarded("continuity", [&] {
    const ResidualSteps steps = check_steps(spec, tc, 40.0);
    const ContinuityResidual r = continuity_residual(spec, grid, tc, tc, steps);
    const ContinuityResidual bad = continuity_residual(spec, grid, tc, tc, steps, WavegroupOptions{1.0, 1.1, true});
    const ResidualSteps coarse = check_steps(spec, tc, 10.0);
    const ConvergenceStudy conv = convergence_order(spec, grid, tc, tc, coarse, 4);
    const double ratio = r.max_residual > 0.0 ? bad.max_residual / r.max_residual
                                              : std::numeric_limits<double>::infinity();
    const bool at_roundoff = conv.relative_residual.back() < 1e-10;
    cx.summary["continuity"] = {{"relative_residual", r.relative()},
                                {"particle_half", r.max_residual_particle / r.scale},
                                {"mirror_half", r.max_residual_mirror / r.scale},
                                {"wall_term", r.max_wall_term / r.scale},
                                {"steps", {steps.dx1, steps.dx2, steps.dt1, steps.dt2}},
                                {"order", at_roundoff ? json(nullptr) : json(conv.order)},
                                {"ladder", conv.relative_residual},
                                {"negative_control_ratio", ratio},
                                {"tolerance", cx.s.check_tolerance},
                                {"flags", r.flags}};
    cx.line(fmt::format("continuity: relative residual {}, order {}, negative control x{}",
                        format_number(r.relative()),
                        at_roundoff ? std::string("n/a (residual at roundoff)") : format_number(conv.order),
                        format_number(ratio)));
    if (r.has_flag("under_resolved") || r.has_flag("no_physical_points"))
      cx.fail("continuity: residual grid unusable (" + fmt::format("{}", fmt::join(r.flags, ",")) + ")");
    if (r.relative() > cx.s.check_tolerance)
      cx.fail(fmt::format("continuity: relative residual {} above tolerance {}", format_number(r.relative()),
                          format_number(cx.s.check_tolerance)));
    if (!at_roundoff && std::abs(conv.order - 2.0) > 0.2)
      cx.fail(fmt::format("continuity: convergence order {} outside 2 +- 0.2", format_number(conv.order)));
    if (!(ratio > 100.0))
      cx.fail(fmt::format("continuity: negative control only {}x the healthy residual", format_number(ratio)));
  });

  cx.guarded("oracle", [&] {
    std::mt19937_64 rng(cx.opts.seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const Velocities f = elastic_final_velocities(spec.params);
    double worst = 0.0;
    for (std::size_t i = 0; i < cx.opts.oracle_points; ++i) {
      const double t = tc + tau * u(rng);
      // Alternate between the incident and reflected packets' supports and
      // compare the part that lives there; a part deep in its own tail is a
      // cancellation no fixed quadrature contour resolves.
      const bool in = i % 2 == 0;
      const double c1 = in ? spec.x1c + spec.particle_group_velocity() * (t - spec.t0) : xc + f.particle * (t - tc);
      const double c2 = in ? spec.x2c + spec.mirror_group_velocity() * (t - spec.t0) : xc + f.mirror * (t - tc);
      const SpacetimePoint pt{c1 + 2.0 * spec.particle_width(t) * u(rng), t,
                              c2 + 2.0 * spec.mirror_width(t) * u(rng), t};
      const WavegroupParts a = wg.parts(pt);
      const QuadratureParts q = amplitude_quadrature_parts(spec, pt, 96);
      const double err = in ? std::abs(a.incident - q.incident) / std::abs(a.incident)
                            : std::abs(a.reflected - q.reflected) / std::abs(a.reflected);
      worst = std::max(worst, err);
    }
    cx.summary["oracle"] = {{"points", cx.opts.oracle_points}, {"seed", cx.opts.seed}, {"max_relative_error", worst}};
    cx.line(fmt::format("closed form vs quadrature: max relative error {}", format_number(worst)));
    if (!(worst < 1e-8)) cx.fail(fmt::format("oracle: relative error {} above 1e-8", format_number(worst)));
  });

  cx.guarded("boundary", [&] {
    double peak = 0.0, wall = 0.0;
    for (double t : {tc - 0.5 * tau, tc, tc + 0.5 * tau}) {
      const GridSpec g = overlap_grid(spec, t, xc, 64);
      for (std::size_t r = 0; r < g.rows.count; ++r)
        for (std::size_t c = 0; c < g.cols.count; ++c)
          peak = std::max(peak, std::abs(wg.amplitude({g.rows.at(r), t, g.cols.at(c), t})));
      const Axis d{"x", std::max(g.rows.min, g.cols.min), std::min(g.rows.max, g.cols.max), 256};
      for (std::size_t i = 0; i < d.count; ++i) wall = std::max(wall, std::abs(wg.amplitude({d.at(i), t, d.at(i), t})));
    }
    const double rel = wall / peak;
    cx.summary["boundary"] = {{"max_wall_amplitude_over_peak", rel}};
    cx.line(fmt::format("amplitude on x1 = x2 at equal times: {} of peak", format_number(rel)));
    if (!(rel < 1e-10)) cx.fail(fmt::format("boundary: wall amplitude {} of peak", format_number(rel)));
  });
}

}  // namespace

RunReport run(const Scenario& s, Command c, const RunOptions& opts) {
  if (auto v = validate_scenario(s); !v.empty()) throw ScenarioValidationError(std::move(v));
  Context cx(s, c, opts);
  switch (c) {
    case Command::simulate: simulate(cx); break;
    case Command::collapse: collapse_all(cx); break;
    case Command::marginal: marginal(cx); break;
    case Command::observables: observables(cx); break;
    case Command::check: check(cx); break;
  }
  return cx.finish();
}

RunReport run_all(const Scenario& s, const RunOptions& opts) {
  RunReport all;
  std::vector<Command> cmds{Command::simulate};
  if (!s.events.empty() || opts.event) cmds.push_back(Command::collapse);
  cmds.push_back(Command::marginal);
  cmds.push_back(Command::observables);
  for (Command c : cmds) {
    RunReport r = run(s, c, opts);
    all.files.insert(all.files.end(), r.files.begin(), r.files.end());
    for (auto& l : r.lines) all.lines.push_back(to_string(c) + ": " + l);
    all.failures.insert(all.failures.end(), r.failures.begin(), r.failures.end());
  }
  return all;
}

}  // namespace mirror

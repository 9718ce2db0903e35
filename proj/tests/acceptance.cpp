// One PASS/FAIL line per acceptance criterion. Tolerances are fixed here.
//
// Exit status is 0 when every criterion was evaluated, whatever its outcome;
// --strict makes any FAIL exit 1.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <json.hpp>
#include <map>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "mirror/harmonic.hpp"
#include "mirror/kinematics.hpp"
#include "mirror/measurement.hpp"
#include "mirror/observables.hpp"
#include "mirror/quadrature.hpp"
#include "mirror/runner.hpp"
#include "mirror/scenario.hpp"

using namespace mirror;
using json = nlohmann::json;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

constexpr double kPi = std::numbers::pi;

// Pinned tolerances.
constexpr double kIdentityTol = 1e-12;        // 1: relative, floored at unit density
constexpr double kIdentitySeconds = 1.0;
constexpr double kBoundaryTol = 1e-10;        // 2: of peak amplitude
constexpr double kFringeTol = 0.02;           // 3
constexpr double kBeatTol = 0.01;             // 4: random draws
constexpr double kRubidiumBeat = 3e5;         // 4: rad/s, quoted order of magnitude
constexpr double kRubidiumTol = 0.15;
constexpr double kBeatSeconds = 30.0;
constexpr double kOracleTol = 1e-8;           // 5
constexpr std::size_t kOraclePoints = 200;
constexpr double kContinuityTol = 1e-6;       // 6: at step = fringe / 40
constexpr double kOrderTarget = 2.0, kOrderTol = 0.2;
constexpr double kNormTol = 1e-6;
constexpr double kControlRatio = 100.0;
constexpr double kSplitTol = 0.02;            // 7
constexpr double kExchangeLo = 0.9, kExchangeHi = 1.1;   // 8
constexpr double kWashout = 0.05;             // 9
constexpr double kInterference = 0.5;
constexpr double kMarginalInvariance = 1e-6;
constexpr double kCoherenceLength = 1e-6;     // 10: m (10^4 Angstrom)
constexpr double kCoherenceTol = 0.10;
constexpr double kHandTol = 1e-12;
constexpr double kPresetSeconds = 60.0;       // 11

struct Result {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string g(double x) { return fmt::format("{:.3g}", x); }

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::map<std::string, std::string> tree(const fs::path& dir) {
  std::map<std::string, std::string> out;
  if (!fs::exists(dir)) return out;
  for (const auto& e : fs::recursive_directory_iterator(dir))
    if (e.is_regular_file()) out[fs::relative(e.path(), dir).string()] = slurp(e.path());
  return out;
}

json load_json(const fs::path& p) {
  if (!fs::exists(p)) return json::object();
  return json::parse(slurp(p));
}

// Everything the criteria read from the command pipeline, per preset.
struct PresetRuns {
  Scenario scenario;
  double seconds = 0.0;          // first full pipeline run
  bool deterministic = false;    // second run byte-identical
  json observables;
  json check;
};

std::map<std::string, PresetRuns> run_presets(const fs::path& root) {
  std::map<std::string, PresetRuns> out;
  for (const Scenario& s : presets()) {
    PresetRuns r;
    r.scenario = s;
    RunOptions a;
    a.out_dir = (root / "a" / s.name).string();
    RunOptions b = a;
    b.out_dir = (root / "b" / s.name).string();
    const auto t0 = Clock::now();
    run_all(s, a);
    r.seconds = seconds_since(t0);
    run_all(s, b);
    r.deterministic = tree(a.out_dir) == tree(b.out_dir) && !tree(a.out_dir).empty();
    r.observables = load_json(fs::path(a.out_dir) / (s.name + "_observables.json"));

    RunOptions c;
    c.out_dir = (root / "check" / s.name).string();
    c.oracle_points = kOraclePoints;
    c.write_plots = false;
    r.check = json::parse(run(s, Command::check, c).summary_json);
    out.emplace(s.name, std::move(r));
  }
  return out;
}

PhysicalParams random_natural(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> log_ratio(-1.0, 2.0), vel(-2.0, 2.0);
  const double V = vel(rng);
  return PhysicalParams::natural(std::pow(10.0, log_ratio(rng)), V + 0.05 + std::abs(vel(rng)), V);
}

Result harmonic_identity() {
  std::mt19937_64 rng(1001);
  std::uniform_real_distribution<double> x(-5.0, 5.0), t(-3.0, 3.0);
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const HarmonicMode mode = HarmonicMode::from_params(random_natural(rng));
    SpacetimePoint pt{x(rng), t(rng), x(rng), t(rng)};
    if (pt.x1 > pt.x2) std::swap(pt.x1, pt.x2);
    const double direct = std::norm(incident_amplitude(mode, pt) - reflected_amplitude(mode, pt));
    const double closed = interference_pdf(mode, pt);
    worst = std::max(worst, std::abs(direct - closed) / std::max(closed, 1.0));
  }
  const double secs = seconds_since(t0);
  return {worst < kIdentityTol && secs < kIdentitySeconds,
          fmt::format("max relative error {} over 1000 two-time points in {} s", g(worst), g(secs))};
}

Result boundary(const std::map<std::string, PresetRuns>& runs) {
  std::mt19937_64 rng(1002);
  std::uniform_real_distribution<double> x(-10.0, 10.0), t(-5.0, 5.0);
  double eig = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const HarmonicMode mode = HarmonicMode::from_params(random_natural(rng));
    const double xx = x(rng), tt = t(rng);
    eig = std::max(eig, std::abs(eigenstate_amplitude(mode, {xx, tt, xx, tt})) / 2.0);
  }
  double wg = 0.0;
  std::string worst_name;
  for (const auto& [name, r] : runs) {
    const double w = r.check["boundary"]["max_wall_amplitude_over_peak"].get<double>();
    if (w >= wg) {
      wg = w;
      worst_name = name;
    }
  }
  return {eig < kBoundaryTol && wg < kBoundaryTol,
          fmt::format("eigenstate {} of peak; wavegroups {} of peak (worst {})", g(eig), g(wg), worst_name)};
}

Result fringes(const std::map<std::string, PresetRuns>& runs) {
  // Broad packets (fig3) read the raw slices; fig2's packets hold only a few
  // fringes, so its slices are divided by the summed part densities first.
  const json& f3 = runs.at("fig3").observables["fringes"];
  const json& f2 = runs.at("fig2").observables["fringes"];
  const double expected = f3["expected_spacing"].get<double>();
  const double e3x1 = rel(f3["x1"]["spacing"].get<double>(), expected);
  const double e3x2 = rel(f3["x2"]["spacing"].get<double>(), expected);
  const double e2x1 = rel(f2["x1_normalized"]["spacing"].get<double>(), expected);
  const double e2x2 = rel(f2["x2_normalized"]["spacing"].get<double>(), expected);
  // Half the de Broglie wavelength for a resting mirror.
  const PhysicalParams rest = PhysicalParams::natural(1000.0, 2.0, 0.0);
  const double half_db = rel(fringe_spacing(rest).value, 0.5 * 2.0 * kPi * rest.hbar / (rest.m * rest.v));
  const bool pass = std::max({e3x1, e3x2, e2x1, e2x2}) < kFringeTol && half_db < 1e-12;
  return {pass, fmt::format("fig3 raw x1 {} x2 {}; fig2 normalized x1 {} x2 {} (relative to pi hbar / m(v-V)); "
                            "V = 0 half de Broglie {}",
                            g(e3x1), g(e3x2), g(e2x1), g(e2x2), g(half_db))};
}

Result beat() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(1004);
  std::uniform_real_distribution<double> ratio(0.5, 1.5), dv(4.0, 8.0), V(0.0, 0.5);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double mV = V(rng);
    const PhysicalParams p = PhysicalParams::natural(std::pow(10.0, ratio(rng)), mV + dv(rng), mV);
    const WavegroupSpec spec = WavegroupSpec::colliding_at_origin(p, 0.1, 0.05);
    const double omega = beat_frequency(p);
    const double x10 = -0.5 * exact_fringe_period(p);
    const ConditionalMirrorState s = collapse(spec, {x10, 0.0, 1e-3});
    const BeatFit b = doppler_beat(s, x10 + 2.0, {"t2", 0.0, 10.0 * kPi / omega, 800});
    worst = std::max(worst, rel(b.frequency, omega));
  }
  // Rubidium on a 10 ng mirror: fitted beat of the particle marginal.
  RunOptions o;
  o.out_dir = (fs::temp_directory_path() / "mirror_acceptance_beat").string();
  o.write_plots = false;
  const RunReport r = run(find_preset("fig9"), Command::observables, o);
  fs::remove_all(o.out_dir);
  const double rb = json::parse(r.summary_json)["particle_beat"][0]["frequency"].get<double>();
  const double rb_err = rel(rb, kRubidiumBeat);
  const double secs = seconds_since(t0);
  return {worst < kBeatTol && rb_err < kRubidiumTol && secs < kBeatSeconds,
          fmt::format("20 draws worst {}; rubidium fitted {} rad/s, {} from 3e5; {} s", g(worst), g(rb), g(rb_err),
                      g(secs))};
}

Result oracle(const std::map<std::string, PresetRuns>& runs) {
  double worst = 0.0;
  std::string name;
  for (const auto& [n, r] : runs) {
    const double e = r.check["oracle"]["max_relative_error"].get<double>();
    if (r.check["oracle"]["points"].get<std::size_t>() != kOraclePoints) return {false, n + ": wrong point count"};
    if (e >= worst) {
      worst = e;
      name = n;
    }
  }
  return {worst < kOracleTol,
          fmt::format("worst {} ({}) over {} points per preset, 13 presets", g(worst), name, kOraclePoints)};
}

struct NormDrift {
  double half_line = 0.0;  // over x2 >= x10, the conditional state as defined
  double full_line = 0.0;  // same amplitude without the step
};

// Untruncated mirror amplitude over the whole x2 axis.
double full_line_norm(const ConditionalState& c, const Wavegroup& free, double t) {
  const double guess = c.spec().x2c + c.spec().mirror_group_velocity() * (t - c.spec().t0);
  double lo = INFINITY, hi = -INFINITY, sigma = INFINITY;
  for (Part part : {Part::incident, Part::reflected}) {
    const GaussianProfile g = free.profile_x2(part, c.point(guess, t));
    lo = std::min(lo, g.mean - 12.0 * g.sigma);
    hi = std::max(hi, g.mean + 12.0 * g.sigma);
    sigma = std::min(sigma, g.sigma);
  }
  const double panel = std::min(sigma / 2.0, exact_fringe_period(c.spec().params) / 4.0);
  return integrate_panels([&](double y) { return free.pdf(c.point(y, t)); }, lo, hi, panel);
}

// Largest |norm(t)/norm(t10) - 1| over the scenario's mirror times and 10 tau later.
NormDrift conditional_norm_drift(const Scenario& s) {
  NormDrift d;
  const Wavegroup free(s.wavegroup, {1.0, 1.0, false});
  for (const MeasurementEvent& e : s.events) {
    const ConditionalState c = collapse(s.wavegroup, e);
    const double n0 = c.norm(e.t10), f0 = full_line_norm(c, free, e.t10);
    std::vector<double> ts;
    for (double t : s.t2_times)
      if (t > e.t10) ts.push_back(t);
    ts.push_back(e.t10 + 10.0 * s.tau());
    for (double t : ts) {
      d.half_line = std::max(d.half_line, std::abs(c.norm(t) / n0 - 1.0));
      d.full_line = std::max(d.full_line, std::abs(full_line_norm(c, free, t) / f0 - 1.0));
    }
  }
  return d;
}

Result continuity(const std::map<std::string, PresetRuns>& runs) {
  double worst_res = 0.0, worst_order = 0.0, worst_norm = 0.0, worst_full = 0.0, min_control = INFINITY;
  std::string norm_name;
  std::vector<std::string> over;
  int measured = 0;
  for (const auto& [n, r] : runs) {
    const json& c = r.check["continuity"];
    const double res = c["relative_residual"].get<double>();
    worst_res = std::max(worst_res, res);
    if (!(res < kContinuityTol)) over.push_back(n);
    if (!c["order"].is_null()) {
      ++measured;
      worst_order = std::max(worst_order, std::abs(c["order"].get<double>() - kOrderTarget));
    }
    min_control = std::min(min_control, c["negative_control_ratio"].get<double>());
    const NormDrift d = conditional_norm_drift(r.scenario);
    if (d.half_line >= worst_norm) {
      worst_norm = d.half_line;
      norm_name = n;
    }
    worst_full = std::max(worst_full, d.full_line);
  }
  std::string list;
  for (const auto& n : over) list += (list.empty() ? "" : ",") + n;
  const bool pass = over.empty() && worst_order < kOrderTol && worst_norm < kNormTol && min_control > kControlRatio;
  return {pass, fmt::format("residual at fringe/40 worst {} (over 1e-6: {}); order within {} of 2 on {} presets "
                            "(others at roundoff); conditional norm drift on x2 >= x10 {} ({}), without the step {}; "
                            "negative control >= {}x",
                            g(worst_res), list.empty() ? "none" : list, g(worst_order), measured, g(worst_norm),
                            norm_name, g(worst_full), g(min_control))};
}

Result regimes(const std::map<std::string, PresetRuns>& runs) {
  // Regime A: one mode at every sampled mirror time.
  const Scenario& a = runs.at("fig4").scenario;
  bool unimodal = classify_regime(a.wavegroup, a.events.at(0)) == Regime::A;
  const ConditionalState ca = collapse(a.wavegroup, a.events.at(0));
  for (double t : a.t2_times) unimodal = unimodal && conditional_modes(ca, t).size() == 1;

  // Regime B: two modes once the substates have parted (2 tau after the
  // collapse), moving at V and V_f. Before that they still interfere.
  const Scenario& b = runs.at("fig5").scenario;
  bool bimodal = classify_regime(b.wavegroup, b.events.at(0)) == Regime::B;
  const ConditionalState cb = collapse(b.wavegroup, b.events.at(0));
  for (double t : b.t2_times)
    if (t >= b.events.at(0).t10 + 2.0 * b.tau() - 1e-12) bimodal = bimodal && conditional_modes(cb, t).size() == 2;
  const json& split = runs.at("fig5").observables["split"][0];
  const double es = rel(split["slow"].get<double>(), split["expected"][0].get<double>());
  const double ef = rel(split["fast"].get<double>(), split["expected"][1].get<double>());

  // Rubidium: splitting reported as unresolvable.
  const std::string rb = runs.at("fig8").observables["split"][0]["status"].get<std::string>();
  const bool pass = unimodal && bimodal && es < kSplitTol && ef < kSplitTol && rb == "unresolved";
  return {pass, fmt::format("fig4 unimodal {}; fig5 bimodal {}, slow {} fast {} from (V, V_f); fig8 split {}",
                            unimodal ? "yes" : "no", bimodal ? "yes" : "no", g(es), g(ef), rb)};
}

Result coherence_transfer(const std::map<std::string, PresetRuns>& runs) {
  const json& eq = runs.at("fig6").observables["coherence_transfer"];
  const json& ctl = runs.at("fig6-control").observables["coherence_transfer"];
  const double a = eq["particle_out_over_mirror_in"].get<double>();
  const double b = eq["mirror_out_over_particle_in"].get<double>();
  const double c = ctl["particle_out_over_mirror_in"].get<double>();
  const double d = ctl["mirror_out_over_particle_in"].get<double>();
  auto inside = [](double r) { return r >= kExchangeLo && r <= kExchangeHi; };
  const bool pass = inside(a) && inside(b) && !inside(c) && !inside(d);
  return {pass, fmt::format("M = m ratios {}, {}; M/m = 20 control {}, {}", g(a), g(b), g(c), g(d))};
}

Result marginal_doppler(const std::map<std::string, PresetRuns>& runs) {
  auto vis = [&](const std::string& n, const char* side) {
    return runs.at(n).observables["marginal_visibility"][side]["visibility"].get<double>();
  };
  const double washout = vis("fig7a", "particle");
  const double fringes = vis("fig7", "particle");
  double mirror = 0.0;
  for (const char* n : {"fig7a", "fig7b", "fig7", "fig7d", "fig9"}) mirror = std::max(mirror, vis(n, "mirror"));
  const double inv = runs.at("fig9").observables["marginal_t2_invariance"]["max_difference_over_peak"].get<double>();
  const bool pass = washout < kWashout && fringes > kInterference && inv < kMarginalInvariance && mirror < kWashout;
  return {pass, fmt::format("ladder visibility {} at dV/dv = 80, {} at 5; fig9 t2 change {} of peak; "
                            "mirror-side visibility <= {}",
                            g(washout), g(fringes), g(inv), g(mirror))};
}

Result scalar_estimators() {
  const ThermalSpread rb = thermal_spread(1.4e-25, 1e-7, kHbarSI, kBoltzmannSI);
  const double lc_err = rel(rb.l_c, kCoherenceLength);

  // Rubidium on a 10 ng mirror at 1 K; dt and l_c chosen freely.
  const PhysicalParams p = PhysicalParams::si(1.4e-25, 1e-8, 0.03, 0.01);
  const double T = 1.0, dt = 2.5e-5, m_star = 1.4e-25, lc = 1.07e-6;
  const DecoherenceEstimate e = decoherence_report(p, T, dt, m_star, lc);
  const double h = 2.0 * kPi * p.hbar, kB = p.kB, m = p.m, M = p.M, v = p.v;
  const double lam = h / std::sqrt(2.0 * M * kB * T);
  const double dx_async = 2.0 * v * dt * m / M;
  const std::vector<std::pair<double, double>> pairs{
      {e.lambda_T, lam},
      {e.dx_paths_sync, 2.0 * lc * m / M},
      {e.dx_paths_async, dx_async},
      {e.v_probe_sync, h * M / (4.0 * lc * m * m_star)},
      {e.v_probe_async, h * M / (2.0 * m * m_star * v * dt)},
      {e.t_D_over_t_R, (lam / dx_async) * (lam / dx_async)},
      {e.overlap_time, h * std::sqrt(M) / (4.0 * m * v * std::sqrt(2.0 * kB * T))},
      {thermal_spread(M, T, p.hbar, kB).l_c, lam},
  };
  double worst = 0.0;
  for (const auto& [got, want] : pairs) worst = std::max(worst, rel(got, want));
  return {lc_err < kCoherenceTol && worst < kHandTol,
          fmt::format("ultracold atom l_c {} m ({} from 1e-6); {} formulas, worst {}", g(rb.l_c), g(lc_err),
                      pairs.size(), g(worst))};
}

Result end_to_end(const std::map<std::string, PresetRuns>& runs) {
  double slowest = 0.0;
  std::string slow_name;
  std::vector<std::string> differ;
  bool full_res = true;
  for (const auto& [n, r] : runs) {
    if (r.seconds > slowest) {
      slowest = r.seconds;
      slow_name = n;
    }
    if (!r.deterministic) differ.push_back(n);
    full_res = full_res && r.scenario.grid.rows.count >= 256 && r.scenario.grid.cols.count >= 256;
  }
  std::string list;
  for (const auto& n : differ) list += (list.empty() ? "" : ",") + n;
  return {slowest < kPresetSeconds && differ.empty() && full_res,
          fmt::format("slowest {} at {} s (grids 256x256: {}); non-deterministic: {}", slow_name, g(slowest),
                      full_res ? "yes" : "no", list.empty() ? "none" : list)};
}

}  // namespace

int main(int argc, char** argv) {
  const bool strict = argc > 1 && std::strcmp(argv[1], "--strict") == 0;
  const fs::path root = fs::temp_directory_path() / "mirror_acceptance";
  fs::remove_all(root);
  try {
    const auto runs = run_presets(root);
    const std::vector<std::pair<std::string, std::function<Result()>>> criteria{
        {"harmonic interference identity", harmonic_identity},
        {"hard-wall boundary", [&] { return boundary(runs); }},
        {"fringe spacing", [&] { return fringes(runs); }},
        {"beat frequency", beat},
        {"closed form vs quadrature", [&] { return oracle(runs); }},
        {"continuity", [&] { return continuity(runs); }},
        {"regime phenomenology", [&] { return regimes(runs); }},
        {"coherence transfer", [&] { return coherence_transfer(runs); }},
        {"marginal Doppler washout", [&] { return marginal_doppler(runs); }},
        {"scalar estimators", scalar_estimators},
        {"end to end", [&] { return end_to_end(runs); }},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
      const Result r = criteria[i].second();
      failed += r.pass ? 0 : 1;
      std::cout << (r.pass ? "PASS" : "FAIL") << " " << (i + 1) << " " << criteria[i].first << ": " << r.detail
                << std::endl;
    }
    fs::remove_all(root);
    std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
    return strict && failed > 0 ? 1 : 0;
  } catch (const std::exception& e) {
    std::cerr << "acceptance harness error: " << e.what() << std::endl;
    return 2;
  }
}

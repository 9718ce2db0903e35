#include "mirror/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

namespace mirror {

using nlohmann::json;

bool operator==(const PhysicalParams& a, const PhysicalParams& b) {
  return a.m == b.m && a.M == b.M && a.v == b.v && a.V == b.V && a.hbar == b.hbar && a.kB == b.kB;
}

bool operator==(const WavegroupSpec& a, const WavegroupSpec& b) {
  return a.params == b.params && a.k0 == b.k0 && a.dk == b.dk && a.K0 == b.K0 && a.dK == b.dK && a.x1c == b.x1c &&
         a.x2c == b.x2c && a.t0 == b.t0 && a.t_waist == b.t_waist;
}

bool operator==(const MeasurementEvent& a, const MeasurementEvent& b) {
  return a.x10 == b.x10 && a.t10 == b.t10 && a.dx1 == b.dx1;
}

bool operator==(const Axis& a, const Axis& b) {
  return a.role == b.role && a.min == b.min && a.max == b.max && a.count == b.count;
}

bool operator==(const GridSpec& a, const GridSpec& b) { return a.rows == b.rows && a.cols == b.cols; }

bool operator==(const Scenario& a, const Scenario& b) {
  return a.name == b.name && a.description == b.description && a.units == b.units && a.params == b.params &&
         a.wavegroup == b.wavegroup && a.thermal == b.thermal && a.times == b.times && a.events == b.events &&
         a.t2_times == b.t2_times && a.grid == b.grid && a.x1_axis == b.x1_axis && a.x2_axis == b.x2_axis &&
         a.analyses == b.analyses && a.check_tolerance == b.check_tolerance;
}

double traversal_time(const WavegroupSpec& spec) {
  const auto& p = spec.params;
  return 2.0 * (spec.particle_width(spec.t_waist) + spec.mirror_width(spec.t_waist)) / (p.v - p.V);
}

double Scenario::tau() const { return traversal_time(wavegroup); }

const std::vector<std::string>& known_analyses() {
  static const std::vector<std::string> names{
      "regime",              // classify each event
      "split",               // mode velocities after a regime B collapse
      "fringes",             // spacing along x1 and x2 through the overlap
      "beat",                // conditional mirror PDF oscillation in t2
      "particle_beat",       // particle marginal oscillation in t1
      "coherence_transfer",  // width exchange across the collision
      "marginal_visibility", // fringe visibility of both marginals
      "marginal_t2_invariance",
      "decoherence",         // closed-form estimators (needs thermal)
  };
  return names;
}

double thermal_wavevector_spread(double mass, double T, double hbar, double kB) {
  return mass * std::sqrt(2.0 * kB * T / mass) / hbar;
}

ScenarioValidationError::ScenarioValidationError(std::vector<std::string> v)
    : std::runtime_error([&] {
        std::string msg = "invalid scenario:";
        for (const auto& s : v) msg += "\n  " + s;
        return msg;
      }()),
      violations(std::move(v)) {}

// ---- serialization ----

namespace {

json axis_json(const Axis& a) { return {{"role", a.role}, {"min", a.min}, {"max", a.max}, {"count", a.count}}; }

json to_json(const Scenario& s) {
  json j;
  j["schema_version"] = kScenarioSchemaVersion;
  j["name"] = s.name;
  j["description"] = s.description;
  j["units"] = to_string(s.units);
  const auto& p = s.params;
  j["params"] = {{"m", p.m}, {"M", p.M}, {"v", p.v}, {"V", p.V}, {"hbar", p.hbar}, {"kB", p.kB}};
  const auto& w = s.wavegroup;
  j["wavegroup"] = {{"k0", w.k0},   {"dk", w.dk},   {"K0", w.K0}, {"dK", w.dK},
                    {"x1c", w.x1c}, {"x2c", w.x2c}, {"t0", w.t0}, {"t_waist", w.t_waist}};
  if (s.thermal) {
    j["thermal"] = {{"T_particle", s.thermal->T_particle},
                    {"T_mirror", s.thermal->T_mirror},
                    {"particle_scale", s.thermal->particle_scale},
                    {"mirror_scale", s.thermal->mirror_scale}};
  }
  j["times"] = s.times;
  j["events"] = json::array();
  for (const auto& e : s.events) j["events"].push_back({{"x10", e.x10}, {"t10", e.t10}, {"dx1", e.dx1}});
  j["t2_times"] = s.t2_times;
  j["grid"] = {{"rows", axis_json(s.grid.rows)}, {"cols", axis_json(s.grid.cols)}};
  j["x1_axis"] = axis_json(s.x1_axis);
  j["x2_axis"] = axis_json(s.x2_axis);
  j["analyses"] = s.analyses;
  j["check_tolerance"] = s.check_tolerance;
  return j;
}

// Reads fields while collecting every problem instead of stopping at the
// first one.
class Reader {
 public:
  std::vector<std::string> errors;

  const json* object(const json& parent, const std::string& key, const std::string& path, bool required = true) {
    const auto it = parent.find(key);
    if (it == parent.end()) {
      if (required) errors.push_back(path + ": missing");
      return nullptr;
    }
    if (!it->is_object()) {
      errors.push_back(path + ": expected an object");
      return nullptr;
    }
    return &*it;
  }

  double number(const json& parent, const std::string& key, const std::string& path,
                std::optional<double> fallback = std::nullopt) {
    const auto it = parent.find(key);
    if (it == parent.end()) {
      if (fallback) return *fallback;
      errors.push_back(path + ": missing");
      return std::numeric_limits<double>::quiet_NaN();
    }
    if (!it->is_number()) {
      errors.push_back(path + ": expected a number");
      return std::numeric_limits<double>::quiet_NaN();
    }
    return it->get<double>();
  }

  std::string text(const json& parent, const std::string& key, const std::string& path,
                   std::optional<std::string> fallback = std::nullopt) {
    const auto it = parent.find(key);
    if (it == parent.end()) {
      if (fallback) return *fallback;
      errors.push_back(path + ": missing");
      return {};
    }
    if (!it->is_string()) {
      errors.push_back(path + ": expected a string");
      return {};
    }
    return it->get<std::string>();
  }

  std::vector<double> numbers(const json& parent, const std::string& key, const std::string& path) {
    std::vector<double> out;
    const auto it = parent.find(key);
    if (it == parent.end()) return out;
    if (!it->is_array()) {
      errors.push_back(path + ": expected an array of numbers");
      return out;
    }
    for (std::size_t i = 0; i < it->size(); ++i) {
      const auto& x = (*it)[i];
      if (!x.is_number()) {
        errors.push_back(fmt::format("{}[{}]: expected a number", path, i));
        continue;
      }
      out.push_back(x.get<double>());
    }
    return out;
  }

  Axis axis(const json& parent, const std::string& key, const std::string& path) {
    Axis a;
    const json* o = object(parent, key, path);
    if (!o) return a;
    a.role = text(*o, "role", path + ".role");
    a.min = number(*o, "min", path + ".min");
    a.max = number(*o, "max", path + ".max");
    const auto it = o->find("count");
    if (it == o->end()) {
      errors.push_back(path + ".count: missing");
    } else if (!it->is_number_integer() || it->get<long long>() < 0) {
      errors.push_back(path + ".count: expected a non-negative integer");
    } else {
      a.count = it->get<std::size_t>();
    }
    return a;
  }
};

std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  // nlohmann reports the byte after the offending character.
  return {line, col > 1 ? col - 1 : col};
}

Scenario from_json(const json& j) {
  Reader r;
  Scenario s;
  if (!j.is_object()) throw ScenarioValidationError({"(root): expected an object"});

  if (j.contains("schema_version")) {
    const double v = r.number(j, "schema_version", "schema_version");
    if (std::isfinite(v) && v != kScenarioSchemaVersion)
      r.errors.push_back(fmt::format("schema_version: unsupported version {} (expected {})", v, kScenarioSchemaVersion));
  }
  s.name = r.text(j, "name", "name");
  s.description = r.text(j, "description", "description", std::string{});
  const std::string units = r.text(j, "units", "units", std::string{"natural"});
  try {
    s.units = unit_system_from_string(units);
  } catch (const std::exception&) {
    r.errors.push_back("units: expected \"natural\" or \"si\", got \"" + units + "\"");
  }

  if (const json* p = r.object(j, "params", "params")) {
    const bool si = s.units == UnitSystem::si;
    s.params.m = r.number(*p, "m", "params.m");
    s.params.M = r.number(*p, "M", "params.M");
    s.params.v = r.number(*p, "v", "params.v");
    s.params.V = r.number(*p, "V", "params.V");
    s.params.hbar = r.number(*p, "hbar", "params.hbar", si ? kHbarSI : 1.0);
    s.params.kB = r.number(*p, "kB", "params.kB", si ? kBoltzmannSI : 1.0);
  }

  if (const json* t = r.object(j, "thermal", "thermal", false)) {
    ThermalBandwidth th;
    th.T_particle = r.number(*t, "T_particle", "thermal.T_particle");
    th.T_mirror = r.number(*t, "T_mirror", "thermal.T_mirror");
    th.particle_scale = r.number(*t, "particle_scale", "thermal.particle_scale", 1.0);
    th.mirror_scale = r.number(*t, "mirror_scale", "thermal.mirror_scale", 1.0);
    s.thermal = th;
  }

  if (const json* w = r.object(j, "wavegroup", "wavegroup")) {
    const auto& p = s.params;
    auto& g = s.wavegroup;
    g.params = p;
    // Bandwidths may be given directly or come from the thermal block.
    const bool from_thermal = s.thermal && !w->contains("dk") && !w->contains("dK");
    if (from_thermal) {
      g.dk = s.thermal->particle_scale * thermal_wavevector_spread(p.m, s.thermal->T_particle, p.hbar, p.kB);
      g.dK = s.thermal->mirror_scale * thermal_wavevector_spread(p.M, s.thermal->T_mirror, p.hbar, p.kB);
    } else {
      g.dk = r.number(*w, "dk", "wavegroup.dk");
      g.dK = r.number(*w, "dK", "wavegroup.dK");
    }
    const std::string placement = r.text(*w, "placement", "wavegroup.placement", std::string{"explicit"});
    if (placement == "colliding_at_origin") {
      if (r.errors.empty()) {
        try {
          g = WavegroupSpec::colliding_at_origin(p, g.dk, g.dK);
        } catch (const std::exception& e) {
          r.errors.push_back(std::string("wavegroup.placement: ") + e.what());
        }
      }
    } else if (placement == "explicit") {
      g.k0 = r.number(*w, "k0", "wavegroup.k0", p.m * p.v / p.hbar);
      g.K0 = r.number(*w, "K0", "wavegroup.K0", p.M * p.V / p.hbar);
      g.x1c = r.number(*w, "x1c", "wavegroup.x1c");
      g.x2c = r.number(*w, "x2c", "wavegroup.x2c");
      g.t0 = r.number(*w, "t0", "wavegroup.t0");
      g.t_waist = r.number(*w, "t_waist", "wavegroup.t_waist", g.t0);
    } else {
      r.errors.push_back("wavegroup.placement: expected \"explicit\" or \"colliding_at_origin\"");
    }
  }

  s.times = r.numbers(j, "times", "times");
  if (const auto it = j.find("events"); it != j.end()) {
    if (!it->is_array()) {
      r.errors.push_back("events: expected an array");
    } else {
      for (std::size_t i = 0; i < it->size(); ++i) {
        const std::string path = fmt::format("events[{}]", i);
        const json& e = (*it)[i];
        if (!e.is_object()) {
          r.errors.push_back(path + ": expected an object");
          continue;
        }
        MeasurementEvent ev;
        ev.x10 = r.number(e, "x10", path + ".x10");
        ev.t10 = r.number(e, "t10", path + ".t10");
        ev.dx1 = r.number(e, "dx1", path + ".dx1", ev.dx1);
        s.events.push_back(ev);
      }
    }
  }
  s.t2_times = r.numbers(j, "t2_times", "t2_times");

  if (const json* g = r.object(j, "grid", "grid")) {
    s.grid.rows = r.axis(*g, "rows", "grid.rows");
    s.grid.cols = r.axis(*g, "cols", "grid.cols");
  }
  s.x1_axis = r.axis(j, "x1_axis", "x1_axis");
  s.x2_axis = r.axis(j, "x2_axis", "x2_axis");

  if (const auto it = j.find("analyses"); it != j.end()) {
    if (!it->is_array()) {
      r.errors.push_back("analyses: expected an array of strings");
    } else {
      for (std::size_t i = 0; i < it->size(); ++i) {
        if (!(*it)[i].is_string()) {
          r.errors.push_back(fmt::format("analyses[{}]: expected a string", i));
          continue;
        }
        s.analyses.push_back((*it)[i].get<std::string>());
      }
    }
  }
  s.check_tolerance = r.number(j, "check_tolerance", "check_tolerance", 1e-3);

  if (!r.errors.empty()) throw ScenarioValidationError(r.errors);
  return s;
}

void check_axis(std::vector<std::string>& out, const Axis& a, const std::string& path, const std::string& role) {
  if (a.role != role) out.push_back(fmt::format("{}.role: expected \"{}\", got \"{}\"", path, role, a.role));
  if (a.count < 16) out.push_back(fmt::format("{}.count: at least 16 samples required, got {}", path, a.count));
  if (!std::isfinite(a.min) || !std::isfinite(a.max) || !(a.max > a.min))
    out.push_back(path + ": range must be finite with max > min");
}

bool close(double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(std::abs(a), std::abs(b)); }

}  // namespace

std::vector<std::string> validate_scenario(const Scenario& s) {
  std::vector<std::string> out;
  if (s.name.empty()) out.emplace_back("name: must not be empty");

  const auto& p = s.params;
  if (!(p.m > 0.0)) out.emplace_back("params.m: must be positive");
  if (!(p.M > 0.0)) out.emplace_back("params.M: must be positive");
  if (!(p.hbar > 0.0)) out.emplace_back("params.hbar: must be positive");
  if (!(p.kB > 0.0)) out.emplace_back("params.kB: must be positive");
  if (!std::isfinite(p.v)) out.emplace_back("params.v: must be finite");
  if (!std::isfinite(p.V)) out.emplace_back("params.V: must be finite");
  if (std::isfinite(p.v) && std::isfinite(p.V) && !(p.v > p.V))
    out.emplace_back("params.v: must exceed params.V or the particle never reaches the mirror");
  if (s.units == UnitSystem::natural && (p.hbar != 1.0 || p.m != 1.0))
    out.emplace_back("units: natural units require params.hbar = 1 and params.m = 1");

  if (s.thermal) {
    const auto& t = *s.thermal;
    if (!(t.T_particle > 0.0)) out.emplace_back("thermal.T_particle: must be positive");
    if (!(t.T_mirror > 0.0)) out.emplace_back("thermal.T_mirror: must be positive");
    if (!(t.particle_scale > 0.0)) out.emplace_back("thermal.particle_scale: must be positive");
    if (!(t.mirror_scale > 0.0)) out.emplace_back("thermal.mirror_scale: must be positive");
  }

  const auto& w = s.wavegroup;
  if (!(w.params == p)) out.emplace_back("wavegroup: params differ from the scenario params");
  if (!(w.dk > 0.0)) out.emplace_back("wavegroup.dk: must be positive");
  if (!(w.dK > 0.0)) out.emplace_back("wavegroup.dK: must be positive");
  if (p.hbar > 0.0 && !close(w.k0, p.m * p.v / p.hbar)) out.emplace_back("wavegroup.k0: must equal m v / hbar");
  if (p.hbar > 0.0 && !close(w.K0, p.M * p.V / p.hbar)) out.emplace_back("wavegroup.K0: must equal M V / hbar");
  if (!std::isfinite(w.x1c) || !std::isfinite(w.x2c) || !(w.x1c < w.x2c)) {
    out.emplace_back("wavegroup.x1c: particle packet must start on the near side of the mirror (x1c < x2c)");
  } else if (w.dk > 0.0 && w.dK > 0.0 && !((w.x2c - w.x1c) > 5.0 * (1.0 / w.dk + 1.0 / w.dK))) {
    out.emplace_back("wavegroup.x2c: packets must start separated by more than 5 (1/dk + 1/dK)");
  }
  if (!std::isfinite(w.t0)) out.emplace_back("wavegroup.t0: must be finite");
  if (!std::isfinite(w.t_waist)) out.emplace_back("wavegroup.t_waist: must be finite");

  for (std::size_t i = 0; i < s.times.size(); ++i)
    if (!std::isfinite(s.times[i])) out.push_back(fmt::format("times[{}]: must be finite", i));
  for (std::size_t i = 0; i < s.events.size(); ++i) {
    const auto& e = s.events[i];
    if (!std::isfinite(e.x10)) out.push_back(fmt::format("events[{}].x10: must be finite", i));
    if (!std::isfinite(e.t10)) out.push_back(fmt::format("events[{}].t10: must be finite", i));
    if (!(e.dx1 > 0.0)) out.push_back(fmt::format("events[{}].dx1: must be positive", i));
    for (std::size_t k = 0; k < s.t2_times.size(); ++k) {
      if (s.t2_times[k] < e.t10)
        out.push_back(fmt::format("t2_times[{}]: earlier than events[{}].t10; the mirror is measured after the particle",
                                  k, i));
    }
  }
  for (std::size_t i = 0; i < s.t2_times.size(); ++i)
    if (!std::isfinite(s.t2_times[i])) out.push_back(fmt::format("t2_times[{}]: must be finite", i));

  check_axis(out, s.grid.rows, "grid.rows", "x1");
  check_axis(out, s.grid.cols, "grid.cols", "x2");
  check_axis(out, s.x1_axis, "x1_axis", "x1");
  check_axis(out, s.x2_axis, "x2_axis", "x2");

  const auto& known = known_analyses();
  for (std::size_t i = 0; i < s.analyses.size(); ++i) {
    if (std::find(known.begin(), known.end(), s.analyses[i]) == known.end())
      out.push_back(fmt::format("analyses[{}]: unknown analysis \"{}\"", i, s.analyses[i]));
  }
  if (std::find(s.analyses.begin(), s.analyses.end(), "decoherence") != s.analyses.end() && !s.thermal)
    out.emplace_back("analyses: \"decoherence\" needs a thermal block");
  if (!(s.check_tolerance > 0.0)) out.emplace_back("check_tolerance: must be positive");
  return out;
}

std::string serialize(const Scenario& s) { return to_json(s).dump(2) + "\n"; }

Scenario parse_scenario(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_column(text, e.byte);
    // Keep only the library's description, not its own location prefix.
    const std::string what = e.what();
    const auto at = what.find(": ", what.find("column"));
    const std::string detail = at == std::string::npos ? what : what.substr(at + 2);
    throw ScenarioParseError(fmt::format("parse error at line {}, column {}: {}", line, col, detail), line, col);
  }
  Scenario s = from_json(j);
  if (auto v = validate_scenario(s); !v.empty()) throw ScenarioValidationError(std::move(v));
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ScenarioParseError("cannot open " + path, 0, 0);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::string scenario_hash(const Scenario& s) {
  std::uint64_t h = 14695981039346656037ull;
  for (const unsigned char c : to_json(s).dump()) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return fmt::format("{:016x}", h);
}

void set_resolution(Scenario& s, std::size_t n) {
  s.grid.rows.count = n;
  s.grid.cols.count = n;
  s.x1_axis.count = n;
  s.x2_axis.count = n;
}

// ---- presets ----

namespace {

struct Frame {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(double c, double w) {
    lo = std::min(lo, c - w);
    hi = std::max(hi, c + w);
  }
};

// Marginal rms widths of the incident and reflected parts at time t. The
// reflected spectral covariance is R Sk R^T; all parts are unchirped at the
// waist, where the position covariance is Sk^-1 / 4.
struct PartWidths {
  double x1, x2;
};

PartWidths part_widths(const WavegroupSpec& w, Part part, double t) {
  const auto& p = w.params;
  const double mt = p.total_mass();
  double a = 0.5 * w.dk * w.dk, b = 0.0, c = 0.5 * w.dK * w.dK;   // [[a b] [b c]]
  if (part == Part::reflected) {
    const double r11 = (p.m - p.M) / mt, r12 = 2.0 * p.m / mt, r21 = 2.0 * p.M / mt, r22 = (p.M - p.m) / mt;
    const double na = r11 * r11 * a + r12 * r12 * c;
    const double nb = r11 * r21 * a + r12 * r22 * c;
    const double nc = r21 * r21 * a + r22 * r22 * c;
    a = na;
    b = nb;
    c = nc;
  }
  const double det = a * c - b * b;
  const double dt = t - w.t_waist;
  const double v1 = 0.25 * c / det + std::pow(p.hbar * dt / p.m, 2) * a;
  const double v2 = 0.25 * a / det + std::pow(p.hbar * dt / p.M, 2) * c;
  return {std::sqrt(v1), std::sqrt(v2)};
}

// Axes framing every part that sits on the physical side at the given
// times, +-n_sigma widths around its centroid.
GridSpec frame(const WavegroupSpec& w, const std::vector<double>& times, double n_sigma = 6.0) {
  const Wavegroup wg(w);
  const Velocities f = elastic_final_velocities(w.params);
  const double tc = wg.collision_time();
  const double xc = wg.collision_position();
  Frame f1, f2;
  for (double t : times) {
    for (Part part : {Part::incident, Part::reflected}) {
      const bool in = part == Part::incident;
      const double c1 = in ? w.x1c + w.particle_group_velocity() * (t - w.t0) : xc + f.particle * (t - tc);
      const double c2 = in ? w.x2c + w.mirror_group_velocity() * (t - w.t0) : xc + f.mirror * (t - tc);
      const PartWidths pw = part_widths(w, part, t);
      if (c2 - c1 < -3.0 * (pw.x1 + pw.x2)) continue;
      f1.add(c1, n_sigma * pw.x1);
      f2.add(c2, n_sigma * pw.x2);
    }
  }
  return {{"x1", f1.lo, f1.hi, 256}, {"x2", f2.lo, f2.hi, 256}};
}

Scenario base(const std::string& name, const std::string& description, const PhysicalParams& p, double dk,
              double dK) {
  Scenario s;
  s.name = name;
  s.description = description;
  s.units = p.hbar == 1.0 ? UnitSystem::natural : UnitSystem::si;
  s.params = p;
  s.wavegroup = WavegroupSpec::colliding_at_origin(p, dk, dK);
  return s;
}

void finish(Scenario& s, std::vector<double> frame_times) {
  if (frame_times.empty()) frame_times = {0.0};
  s.grid = frame(s.wavegroup, frame_times);
  s.x1_axis = s.grid.rows;
  s.x2_axis = s.grid.cols;
}

Scenario thermal_rubidium(const std::string& name, const std::string& description, double particle_scale) {
  const PhysicalParams p = PhysicalParams::si(1.4e-25, 1e-8, 0.03, 0.01);
  ThermalBandwidth th{1e-7, 1.0, particle_scale, 1.0};
  const double dk = particle_scale * thermal_wavevector_spread(p.m, th.T_particle, p.hbar, p.kB);
  const double dK = thermal_wavevector_spread(p.M, th.T_mirror, p.hbar, p.kB);
  Scenario s = base(name, description, p, dk, dK);
  s.thermal = th;
  return s;
}

Scenario ladder(const std::string& name, double ratio) {
  // Delta V / Delta v = ratio with M/m = 200 and fixed dk.
  const PhysicalParams p = PhysicalParams::natural(200.0, 10.0, 6.0);
  const double dk = 0.2;
  Scenario s = base(name, fmt::format("Mirror coherence ladder, Delta V / Delta v = {}, M/m = 200", ratio), p, dk,
                    p.M / p.m * dk / ratio);
  s.times = {0.0};
  finish(s, {0.0});
  // Particle marginal on the approach side, where both parts overlap.
  s.x1_axis = {"x1", -12.0, -0.05, 256};
  s.analyses = {"marginal_visibility"};
  return s;
}

std::vector<Scenario> build_presets() {
  std::vector<Scenario> out;
  const PhysicalParams p100 = PhysicalParams::natural(100.0, 10.0, 6.0);
  const PhysicalParams p3 = PhysicalParams::natural(3.0, 10.0, 6.0);

  {
    Scenario s = base("fig2", "Simultaneous joint PDF at -tau, 0, tau; M/m = 100, dK/dk = 2, K/k = 60", p100, 0.5, 1.0);
    const double tau = s.tau();
    s.times = {-tau, 0.0, tau};
    s.analyses = {"fringes"};
    finish(s, s.times);
    out.push_back(s);
  }
  {
    Scenario s = base("fig3", "Fringe-spacing slices through the overlap, narrow bandwidths", p100, 0.05, 0.1);
    s.times = {0.0};
    s.analyses = {"fringes"};
    finish(s, {0.0});
    // Slices through the overlap: +-4 fringe periods is enough to measure spacing.
    const double half = 4.0 * exact_fringe_period(p100);
    s.grid = {{"x1", -half, half, 256}, {"x2", -half, half, 256}};
    s.x1_axis = s.grid.rows;
    s.x2_axis = s.grid.cols;
    out.push_back(s);
  }
  {
    Scenario s = base("fig4", "Regime A: particle detected on the reflected packet at t10 = tau; M/m = 3", p3, 0.5, 1.0);
    const double tau = s.tau();
    const Wavegroup wg(s.wavegroup);
    const Velocities f = elastic_final_velocities(p3);
    // One particle width behind the reflected centroid, away from the
    // incident packet's tail.
    const double centroid = wg.collision_position() + f.particle * (tau - wg.collision_time());
    s.events = {{centroid - s.wavegroup.particle_width(tau), tau, 1e-3}};
    s.t2_times = {tau, 2.0 * tau, 3.0 * tau};
    s.times = {tau};
    s.analyses = {"regime"};
    finish(s, {-tau, tau, 3.0 * tau});
    out.push_back(s);
  }
  {
    Scenario s = base("fig5", "Regime B: particle detected in the overlap at t10 = 0; M/m = 3", p3, 0.5, 1.0);
    const double tau = s.tau();
    s.events = {{-0.5, 0.0, 1e-3}};
    s.t2_times = {0.0, tau, 2.0 * tau};
    s.times = {0.0};
    s.analyses = {"regime", "split"};
    finish(s, {-tau, 0.0, 2.0 * tau});
    out.push_back(s);
  }
  for (const double ratio : {1.0, 20.0}) {
    const PhysicalParams p = PhysicalParams::natural(ratio, 10.0, 2.0);
    const double dk = 0.1;
    const bool control = ratio != 1.0;
    Scenario s = base(control ? "fig6-control" : "fig6",
                      fmt::format("Coherence transfer, Delta V / Delta v = 10, M/m = {}", ratio), p, dk,
                      10.0 * dk * p.M / p.m);
    const double t0 = s.wavegroup.t0;
    s.times = {t0, -t0};
    s.events = {{-1.0, 0.0, 1e-3}};
    s.t2_times = {0.0, -0.25 * t0, -0.5 * t0};
    s.analyses = {"coherence_transfer"};
    finish(s, s.times);
    out.push_back(s);
  }
  out.push_back(ladder("fig7a", 80.0));
  out.push_back(ladder("fig7b", 20.0));
  out.push_back(ladder("fig7", 5.0));
  out.push_back(ladder("fig7d", 0.4));
  {
    Scenario s = thermal_rubidium(
        "fig8", "Rubidium atom (T = 1e-7 K) on a 1e-8 kg mirror (T = 1 K), t10 = 0, t2 = 1e-16, 2e-15, 4e-15 s", 1.0);
    // First interference maximum next to the mirror at the collision.
    s.events = {{-0.5 * exact_fringe_period(s.params), 0.0, 1e-9}};
    s.t2_times = {1e-16, 2e-15, 4e-15};
    s.times = {0.0};
    s.analyses = {"regime", "split", "particle_beat", "decoherence"};
    finish(s, {0.0});
    out.push_back(s);
  }
  {
    Scenario s = thermal_rubidium(
        "fig9", "Rubidium atom on a 1e-8 kg mirror, atom bandwidth narrowed 20x; particle marginal vs t2", 0.05);
    const double tau = s.tau();
    s.events = {{-2e-7, 0.0, 1e-9}};
    s.times = {0.0};
    s.t2_times = {0.0, 0.25 * tau, 0.5 * tau};
    s.analyses = {"particle_beat", "marginal_visibility", "marginal_t2_invariance", "decoherence"};
    finish(s, {0.0});
    s.x1_axis = {"x1", -1e-6, -1e-8, 256};
    out.push_back(s);
  }
  {
    Scenario s = base("doppler", "Conditional mirror PDF at x10 = t10 = 0, t2 in steps of 0.04 tau (fig2 parameters)",
                      p100, 0.5, 1.0);
    const double tau = s.tau();
    s.events = {{0.0, 0.0, 1e-3}};
    s.t2_times = {0.0, 0.04 * tau, 0.08 * tau, 0.12 * tau};
    s.times = {0.0};
    s.analyses = {"beat"};
    finish(s, {0.0, 0.12 * tau});
    out.push_back(s);
  }
  return out;
}

}  // namespace

std::vector<Scenario> presets() {
  static const std::vector<Scenario> all = build_presets();
  return all;
}

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& s : presets()) names.push_back(s.name);
  return names;
}

Scenario find_preset(const std::string& name) {
  for (const auto& s : presets())
    if (s.name == name) return s;
  std::string known;
  for (const auto& n : preset_names()) known += (known.empty() ? "" : ", ") + n;
  throw std::invalid_argument("unknown preset '" + name + "' (known: " + known + ")");
}

}  // namespace mirror

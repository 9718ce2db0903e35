// mirror-sim: command-line front end for the particle-mirror scenarios.

#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "mirror/parallel.hpp"
#include "mirror/runner.hpp"
#include "mirror/scenario.hpp"

namespace {

using namespace mirror;

struct InputError : std::runtime_error {
  InputError(const std::string& what, int code) : std::runtime_error(what), code(code) {}
  int code;
};

struct Common {
  std::string preset;
  std::string config;
  std::string out = "out";
  std::size_t resolution = 256;
  std::string times;
  std::string event;
  unsigned threads = 0;
  std::uint64_t seed = 1;
};

void add_common(CLI::App* cmd, Common& c, bool with_run_flags = true) {
  auto* p = cmd->add_option("--preset", c.preset, "Preset name (see `presets list`)");
  auto* f = cmd->add_option("--config", c.config, "Scenario JSON file");
  p->excludes(f);
  if (!with_run_flags) return;
  cmd->add_option("--out", c.out, "Output directory")->capture_default_str();
  cmd->add_option("--resolution", c.resolution, "Samples per axis")->capture_default_str()->check(CLI::Range(16, 8192));
  cmd->add_option("--times", c.times, "Comma-separated times in units of tau (replaces the scenario's times)");
  cmd->add_option("--event", c.event, "Measurement event overrides, e.g. t10=0,x10=-0.5,dx1=1e-3");
  cmd->add_option("--threads", c.threads, "Worker threads (0 = hardware concurrency)");
  cmd->add_option("--seed", c.seed, "Seed for randomized checks")->capture_default_str();
}

double parse_number(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) throw InputError(what + ": cannot parse '" + text + "' as a number", kExitParse);
  return x;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}

Scenario load(const Common& c) {
  if (c.preset.empty() == c.config.empty()) throw InputError("give exactly one of --preset or --config", kExitParse);
  if (!c.preset.empty()) {
    try {
      return find_preset(c.preset);
    } catch (const std::invalid_argument& e) {
      throw InputError(e.what(), kExitValidation);
    }
  }
  try {
    return load_scenario(c.config);
  } catch (const ScenarioParseError& e) {
    throw InputError(c.config + ": " + e.what(), kExitParse);
  } catch (const ScenarioValidationError& e) {
    throw InputError(c.config + ": " + e.what(), kExitValidation);
  }
}

RunOptions options(const Common& c, const Scenario& s) {
  RunOptions o;
  o.out_dir = c.out;
  o.seed = c.seed;
  if (!c.times.empty()) {
    std::vector<double> ts;
    for (const auto& t : split(c.times, ',')) ts.push_back(parse_number(t, "--times"));
    o.times_tau = ts;
  }
  if (!c.event.empty()) {
    MeasurementEvent e = s.events.empty() ? MeasurementEvent{} : s.events.front();
    for (const auto& kv : split(c.event, ',')) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw InputError("--event: expected key=value, got '" + kv + "'", kExitParse);
      const std::string key = kv.substr(0, eq);
      const double value = parse_number(kv.substr(eq + 1), "--event " + key);
      if (key == "x10") {
        e.x10 = value;
      } else if (key == "t10") {
        e.t10 = value;
      } else if (key == "dx1") {
        e.dx1 = value;
      } else {
        throw InputError("--event: unknown key '" + key + "' (expected x10, t10, dx1)", kExitValidation);
      }
    }
    o.event = e;
  }
  return o;
}

int report(const RunReport& r) {
  for (const auto& l : r.lines) std::cout << l << "\n";
  for (const auto& f : r.files) std::cout << "wrote " << f << "\n";
  return r.exit_code();
}

int execute(const Common& c, std::optional<Command> cmd) {
  Scenario s = load(c);
  set_resolution(s, c.resolution);
  if (c.threads > 0) set_thread_count(c.threads);
  const RunOptions o = options(c, s);
  if (auto v = validate_scenario(s); !v.empty()) throw InputError(ScenarioValidationError(v).what(), kExitValidation);
  return report(cmd ? run(s, *cmd, o) : run_all(s, o));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-body particle-mirror reflection: joint PDFs, asynchronous collapse and observables"};
  app.require_subcommand(1);

  Common common;
  struct Sub {
    const char* name;
    const char* help;
    std::optional<Command> cmd;
  };
  const Sub subs[] = {
      {"simulate", "Joint PDF grids at equal times", Command::simulate},
      {"collapse", "Conditional mirror PDFs after a particle detection", Command::collapse},
      {"marginal", "One-body marginal PDFs and fringe visibility", Command::marginal},
      {"observables", "The scenario's requested analyses", Command::observables},
      {"check", "Continuity, oracle and boundary checks (exit 4 on failure)", Command::check},
      {"run", "simulate, collapse, marginal and observables in sequence", std::nullopt},
  };
  std::optional<Command> chosen;
  for (const auto& s : subs) {
    auto* cmd = app.add_subcommand(s.name, s.help);
    add_common(cmd, common);
    cmd->callback([&chosen, c = s.cmd] { chosen = c; });
  }

  auto* presets_cmd = app.add_subcommand("presets", "Preset library");
  presets_cmd->require_subcommand(1);
  auto* list_cmd = presets_cmd->add_subcommand("list", "List preset names");
  std::string show_name;
  auto* show_cmd = presets_cmd->add_subcommand("show", "Print a preset as scenario JSON");
  show_cmd->add_option("name", show_name)->required();

  auto* validate_cmd = app.add_subcommand("validate", "Load and validate a scenario");
  add_common(validate_cmd, common, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitParse;
  }

  try {
    if (*list_cmd) {
      for (const auto& s : presets()) std::cout << fmt::format("{:<14}{}\n", s.name, s.description);
      return kExitOk;
    }
    if (*show_cmd) {
      try {
        std::cout << serialize(find_preset(show_name));
      } catch (const std::invalid_argument& e) {
        throw InputError(e.what(), kExitValidation);
      }
      return kExitOk;
    }
    if (*validate_cmd) {
      const Scenario s = load(common);
      std::cout << s.name << ": valid (hash " << scenario_hash(s) << ")\n";
      return kExitOk;
    }
    for (const auto& s : subs) {
      if (app.got_subcommand(s.name)) return execute(common, s.cmd);
    }
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  (void)chosen;
  return kExitOk;
}

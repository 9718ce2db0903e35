#pragma once

// Executes scenario commands and writes their artifacts. Every command
// returns a report; failures of one analysis are recorded and do not stop
// its siblings.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mirror/scenario.hpp"

namespace mirror {

enum class Command { simulate, collapse, marginal, observables, check };

std::string to_string(Command c);

struct RunOptions {
  std::string out_dir = "out";
  std::optional<std::vector<double>> times_tau;   // replaces Scenario::times, in units of tau
  std::optional<MeasurementEvent> event;          // replaces Scenario::events
  std::uint64_t seed = 1;                         // random oracle points in `check`
  std::size_t oracle_points = 200;
  bool write_plots = true;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitParse = 2;
inline constexpr int kExitValidation = 3;
inline constexpr int kExitNumerical = 4;

struct RunReport {
  std::vector<std::string> files;      // written paths, in order
  std::vector<std::string> lines;      // human-readable summary
  std::vector<std::string> failures;   // analysis or numerical-check failures
  std::string summary_json;            // also written as <name>_<command>.json

  int exit_code() const { return failures.empty() ? kExitOk : kExitNumerical; }
};

RunReport run(const Scenario& s, Command c, const RunOptions& opts);

// The scenario's full figure pipeline: simulate, collapse (when it has
// events), marginal and observables.
RunReport run_all(const Scenario& s, const RunOptions& opts);

}  // namespace mirror

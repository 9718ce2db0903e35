#pragma once

// Scenario configuration: a complete, serializable description of one run
// (physics, wavegroup, measurement events, sampling) plus the preset library.
//
// All times and positions stored in a Scenario are physical (natural or SI
// units, matching `units`). Only the CLI's --times flag is expressed in
// multiples of tau.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mirror/grid.hpp"
#include "mirror/kinematics.hpp"
#include "mirror/measurement.hpp"
#include "mirror/wavegroup.hpp"

namespace mirror {

inline constexpr int kScenarioSchemaVersion = 1;

// Thermal origin of the bandwidths: dk = m dv / hbar with dv = sqrt(2 kB T / m)
// (likewise for the mirror), times an optional narrowing factor.
struct ThermalBandwidth {
  double T_particle = 0.0;
  double T_mirror = 0.0;
  double particle_scale = 1.0;
  double mirror_scale = 1.0;

  bool operator==(const ThermalBandwidth&) const = default;
};

struct Scenario {
  std::string name;
  std::string description;
  UnitSystem units = UnitSystem::natural;
  PhysicalParams params;
  WavegroupSpec wavegroup;
  std::optional<ThermalBandwidth> thermal;

  std::vector<double> times;                // simulate / marginal: t1 = t2 = t
  std::vector<MeasurementEvent> events;     // collapse
  std::vector<double> t2_times;             // collapse snapshots, absolute
  GridSpec grid;                            // joint grid, rows x1, cols x2
  Axis x1_axis;                             // particle-side curves
  Axis x2_axis;                             // mirror-side curves
  std::vector<std::string> analyses;        // see known_analyses()
  double check_tolerance = 1e-3;            // relative continuity residual

  // Packet traversal time 2 (sigma1 + sigma2) / (v - V), widths at the waist.
  double tau() const;
};

bool operator==(const PhysicalParams& a, const PhysicalParams& b);
bool operator==(const WavegroupSpec& a, const WavegroupSpec& b);
bool operator==(const MeasurementEvent& a, const MeasurementEvent& b);
bool operator==(const Axis& a, const Axis& b);
bool operator==(const GridSpec& a, const GridSpec& b);
bool operator==(const Scenario& a, const Scenario& b);

double traversal_time(const WavegroupSpec& spec);

const std::vector<std::string>& known_analyses();

// dk and dK for thermal atoms/mirrors.
double thermal_wavevector_spread(double mass, double T, double hbar, double kB);

// JSON text; parse_error carries line/column, validation_error every
// violation with its field path.
struct ScenarioParseError : std::runtime_error {
  ScenarioParseError(const std::string& what, std::size_t line, std::size_t column)
      : std::runtime_error(what), line(line), column(column) {}
  std::size_t line;
  std::size_t column;
};

struct ScenarioValidationError : std::runtime_error {
  explicit ScenarioValidationError(std::vector<std::string> v);
  std::vector<std::string> violations;
};

std::string serialize(const Scenario& s);
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::string& path);

// Every violated invariant, as "field.path: message". Empty when valid.
std::vector<std::string> validate_scenario(const Scenario& s);

// FNV-1a over the compact serialization, as 16 hex digits.
std::string scenario_hash(const Scenario& s);

// Changes the sample count of every axis.
void set_resolution(Scenario& s, std::size_t n);

std::vector<std::string> preset_names();
std::vector<Scenario> presets();
// Throws std::invalid_argument listing the known names.
Scenario find_preset(const std::string& name);

}  // namespace mirror

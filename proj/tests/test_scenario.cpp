#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <stdexcept>

#include "mirror/scenario.hpp"

using namespace mirror;
using nlohmann::json;

namespace {

bool mentions(const std::vector<std::string>& v, const std::string& prefix) {
  return std::any_of(v.begin(), v.end(), [&](const std::string& s) { return s.rfind(prefix, 0) == 0; });
}

// Violations reported when parsing a mutated preset.
std::vector<std::string> violations_after(const std::function<void(json&)>& mutate) {
  json j = json::parse(serialize(find_preset("fig5")));
  mutate(j);
  try {
    parse_scenario(j.dump());
  } catch (const ScenarioValidationError& e) {
    return e.violations;
  }
  return {};
}

}  // namespace

TEST_CASE("the preset library") {
  const std::vector<std::string> names = preset_names();
  CHECK(names.size() == 13);
  for (const char* n : {"fig2", "fig3", "fig4", "fig5", "fig6", "fig6-control", "fig7a", "fig7b", "fig7", "fig7d",
                        "fig8", "fig9", "doppler"}) {
    CHECK(std::find(names.begin(), names.end(), n) != names.end());
  }
  try {
    find_preset("fig1");
    FAIL("unknown preset accepted");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("fig2") != std::string::npos);
  }
}

TEST_CASE("every preset validates and survives a JSON round trip") {
  for (const Scenario& s : presets()) {
    CAPTURE(s.name);
    CHECK(validate_scenario(s).empty());
    const std::string text = serialize(s);
    const Scenario back = parse_scenario(text);
    CHECK(back == s);
    CHECK(serialize(back) == text);
    CHECK(scenario_hash(back) == scenario_hash(s));
    CHECK(scenario_hash(s).size() == 16);
  }
}

TEST_CASE("the hash changes with the content") {
  Scenario s = find_preset("fig2");
  const std::string h = scenario_hash(s);
  s.times.push_back(0.5);
  CHECK(scenario_hash(s) != h);
}

TEST_CASE("traversal time is 2 (sigma1 + sigma2) / (v - V) at the waist") {
  const Scenario s = find_preset("fig2");
  const double s1 = 1.0 / (std::sqrt(2.0) * s.wavegroup.dk);
  const double s2 = 1.0 / (std::sqrt(2.0) * s.wavegroup.dK);
  CHECK(std::abs(s.tau() - 2.0 * (s1 + s2) / (s.params.v - s.params.V)) < 1e-14);
  CHECK(std::abs(s.tau() - 1.0606601717798212) < 1e-14);
  CHECK(traversal_time(s.wavegroup) == s.tau());
}

TEST_CASE("thermal wavevector spread") {
  const double dk = thermal_wavevector_spread(1.4e-25, 1e-7, kHbarSI, kBoltzmannSI);
  CHECK(std::abs(dk - 1.4e-25 * std::sqrt(2.0 * kBoltzmannSI * 1e-7 / 1.4e-25) / kHbarSI) < 1e-9 * dk);
  const Scenario rb = find_preset("fig8");
  REQUIRE(rb.thermal.has_value());
  CHECK(rb.units == UnitSystem::si);
}

TEST_CASE("malformed JSON reports line and column") {
  try {
    parse_scenario("{\n  \"name\": \"x\",\n  \"params\": ,\n}");
    FAIL("parsed");
  } catch (const ScenarioParseError& e) {
    CHECK(e.line == 3);
    CHECK(e.column > 0);
    // Location appears once, not repeated from the JSON library's own text.
    const std::string what = e.what();
    CHECK(what.find("line 3") != std::string::npos);
    CHECK(what.find("line", what.find("line") + 1) == std::string::npos);
  }
  CHECK_THROWS_AS(parse_scenario(""), ScenarioParseError);
}

TEST_CASE("validation lists every violation with its field path") {
  const auto v = violations_after([](json& j) {
    j["params"]["V"] = 20.0;
    j["wavegroup"]["dk"] = -1.0;
    j["check_tolerance"] = 0.0;
    j["analyses"].push_back("astrology");
  });
  CHECK(mentions(v, "params.v:"));
  CHECK(mentions(v, "wavegroup.dk:"));
  CHECK(mentions(v, "check_tolerance:"));
  CHECK(mentions(v, "analyses[2]:"));
  CHECK(v.size() >= 4);
}

TEST_CASE("mirror measured before the particle is rejected") {
  const auto v = violations_after([](json& j) { j["t2_times"] = json::array({-100.0}); });
  CHECK(mentions(v, "t2_times[0]:"));
}

TEST_CASE("wrong types and missing blocks") {
  CHECK(mentions(violations_after([](json& j) { j["params"]["m"] = "heavy"; }), "params.m"));
  CHECK(mentions(violations_after([](json& j) { j["units"] = "cgs"; }), "units"));
  CHECK(mentions(violations_after([](json& j) { j["schema_version"] = 99; }), "schema_version"));
  CHECK(mentions(violations_after([](json& j) { j["events"][0]["dx1"] = 0.0; }), "events[0].dx1"));
  CHECK(mentions(violations_after([](json& j) { j["grid"]["rows"]["count"] = 3; }), "grid.rows"));
}

TEST_CASE("natural units pin hbar and m") {
  const auto v = violations_after([](json& j) { j["params"]["hbar"] = 2.0; });
  CHECK(mentions(v, "units:"));
}

TEST_CASE("colliding placement rebuilds the wavegroup") {
  json j = json::parse(serialize(find_preset("fig2")));
  j["wavegroup"] = {{"placement", "colliding_at_origin"}, {"dk", 0.5}, {"dK", 1.0}};
  const Scenario s = parse_scenario(j.dump());
  CHECK(s.wavegroup == find_preset("fig2").wavegroup);
}

TEST_CASE("loading from a file") {
  const auto path = std::filesystem::temp_directory_path() / "mirror_scenario_test.json";
  {
    std::ofstream f(path);
    f << serialize(find_preset("fig4"));
  }
  CHECK(load_scenario(path.string()) == find_preset("fig4"));
  std::filesystem::remove(path);
  CHECK_THROWS(load_scenario(path.string()));
}

TEST_CASE("resolution override touches every axis") {
  Scenario s = find_preset("fig2");
  set_resolution(s, 64);
  CHECK(s.grid.rows.count == 64);
  CHECK(s.grid.cols.count == 64);
  CHECK(s.x1_axis.count == 64);
  CHECK(s.x2_axis.count == 64);
}

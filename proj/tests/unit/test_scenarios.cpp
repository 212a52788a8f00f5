// Copyright 2026 The ntfd Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "ntfd/scenarios.hpp"

using namespace ntfd;
namespace fs = std::filesystem;

namespace {

RunConfig quick(Scenario s, const std::string& extra = "") {
  return parse_config_text(s, "ensemble = 200\nthreads = 2\n" + extra);
}

void check_report(const ScenarioReport& r) {
  std::set<std::string> names;
  for (const Check& c : r.checks) {
    CAPTURE(c.name);
    CHECK(names.insert(c.name).second);
    CHECK(std::isfinite(c.observed));
    if (!c.applicable) CHECK(c.pass);
  }
  for (const Check& c : r.checks) {
    CAPTURE(c.name);
    CAPTURE(c.observed);
    CHECK(c.pass);
  }
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("report bookkeeping") {
  ScenarioReport r;
  r.id = "x";
  r.near("a", 1.0, 1.0 + 1e-9, 1e-8);
  r.at_most("b", 2.0, 1.0);
  r.at_least("c", 2.0, 1.0);
  r.not_applicable("d");
  CHECK(r.check("a").pass);
  CHECK_FALSE(r.check("b").pass);
  CHECK(r.check("c").pass);
  CHECK(r.check("d").pass);
  CHECK_FALSE(r.check("d").applicable);
  CHECK_FALSE(r.all_pass());
  CHECK_THROWS_AS(r.near("a", 0.0, 0.0, 1.0), Error);
  CHECK_THROWS_AS(r.check("zz"), Error);
  r.at_most("nan", std::nan(""), 1.0);
  CHECK_FALSE(r.check("nan").pass);
  const auto j = nlohmann::json::parse(r.to_json());
  CHECK(j["schema_version"] == ScenarioReport::kSchemaVersion);
  CHECK(j["checks"].size() == 5);
}

TEST_CASE("propagator report and files") {
  const RunConfig cfg = quick(Scenario::propagator, "T_end = 1");
  const ScenarioReport r = run_scenario(cfg);
  CHECK(r.id == "propagator");
  check_report(r);
  const fs::path dir = fs::temp_directory_path() / "ntfd_scenarios_test";
  fs::remove_all(dir);
  write_report(r, dir.string());
  CHECK(fs::exists(dir / "summary.csv"));
  CHECK(fs::exists(dir / "propagator.csv"));
  const auto j = nlohmann::json::parse(slurp(dir / "report.json"));
  CHECK(j["scenario"] == "propagator");
  CHECK(j["seed"] == 7);
  CHECK(j["checks"].size() == r.checks.size());
  for (const auto& c : j["checks"]) {
    CHECK(c.contains("name"));
    CHECK(c.contains("observed"));
    CHECK(c.contains("pass"));
  }
  fs::remove_all(dir);
}

TEST_CASE("oscillator scenarios on short runs") {
  for (const char* sys : {"nonunitary", "unitary"}) {
    CAPTURE(sys);
    const ScenarioReport r = run_scenario(quick(Scenario::oscillator, std::string("T_end = 0.5\nsystem = ") + sys));
    check_report(r);
    CHECK(r.tables.count("trajectory") == 1);
  }
}

TEST_CASE("stationary start") {
  const ScenarioReport r = run_scenario(quick(Scenario::oscillator, "T_end = 0.5\nn0 = 1"));
  check_report(r);
  const CsvTable& t = r.tables.at("trajectory");
  for (const auto& row : t.rows) CHECK(std::abs(std::stod(row[1]) - 1.0) < 1e-9);
}

TEST_CASE("no dissipation") {
  const ScenarioReport r = run_scenario(quick(Scenario::oscillator, "T_end = 0.5\nkappa = 0"));
  check_report(r);
  const ScenarioReport k = run_scenario(quick(Scenario::kramers, "T_end = 2\nkappa = 0\nsystem = unitary"));
  check_report(k);
  CHECK(k.check("variants_coincide").applicable);
  CHECK_FALSE(k.check("envelope_gap").applicable);
  CHECK_FALSE(k.flags.at("inconsistency_detected"));
}

TEST_CASE("unitary Kramers flags the missing relaxation") {
  const ScenarioReport k = run_scenario(quick(Scenario::kramers, "T_end = 4\nkappa = 0.5\nsystem = unitary"));
  check_report(k);
  CHECK(k.flags.at("inconsistency_detected"));
}

TEST_CASE("reruns are deterministic and thread independent") {
  const ScenarioReport a = run_scenario(quick(Scenario::oscillator, "T_end = 0.5\nsystem = unitary"));
  const ScenarioReport b = run_scenario(quick(Scenario::oscillator, "T_end = 0.5\nsystem = unitary\nthreads = 1"));
  for (const auto& [name, table] : a.tables) {
    if (name == "ensemble") CHECK(to_csv(table) == to_csv(b.tables.at(name)));
  }
  CHECK(to_csv(a.tables.at("trajectory")) == to_csv(b.tables.at("trajectory")));
}

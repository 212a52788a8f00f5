// Copyright 2026 The ntfd Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ntfd/config.hpp"
#include "ntfd/csv.hpp"

namespace ntfd {

enum class Relation {
  near,      // |observed - expected| <= tolerance
  at_most,   // observed <= tolerance
  at_least,  // observed >= tolerance
};

struct Check {
  std::string name;
  double expected = 0.0;
  double observed = 0.0;
  double tolerance = 0.0;
  Relation relation = Relation::near;
  bool applicable = true;
  bool pass = false;
};

struct ScenarioReport {
  static constexpr int kSchemaVersion = 1;

  std::string id;
  std::vector<std::pair<std::string, std::string>> params;
  std::vector<Check> checks;
  std::map<std::string, bool> flags;
  std::uint64_t seed = 0;
  double runtime_s = 0.0;
  std::map<std::string, CsvTable> tables;  // file stem -> table

  void near(const std::string& name, double expected, double observed, double tol);
  void at_most(const std::string& name, double observed, double bound);
  void at_least(const std::string& name, double observed, double bound);
  void not_applicable(const std::string& name);

  const Check& check(const std::string& name) const;
  bool all_pass() const;
  std::string to_json() const;
  CsvTable summary() const;

 private:
  void add(Check c);
};

const char* relation_name(Relation r);

ScenarioReport run_oscillator_nonunitary(const RunConfig& cfg);
ScenarioReport run_oscillator_unitary(const RunConfig& cfg);
ScenarioReport run_kramers(const RunConfig& cfg, bool unitary);
ScenarioReport run_propagator(const RunConfig& cfg);
ScenarioReport run_compare_pictures(const RunConfig& cfg);

ScenarioReport run_scenario(const RunConfig& cfg);

// report.json, summary.csv and one CSV per table under dir
void write_report(const ScenarioReport& r, const std::string& dir);

}  // namespace ntfd

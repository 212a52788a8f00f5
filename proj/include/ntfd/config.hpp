// Copyright 2026 The ntfd Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "ntfd/error.hpp"

namespace ntfd {

class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& what)
      : Error(Errc::config, "field '" + field + "': " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

enum class Scenario { validate, oscillator, kramers, propagator, compare_pictures };

const char* scenario_name(Scenario s);

struct RunConfig {
  Scenario scenario = Scenario::validate;
  std::string system = "nonunitary";
  double omega = 1.0;
  double kappa = 0.5;
  double nbar = 1.0;
  double T = 0.0;  // derived from nbar when not given
  double n0 = 0.0;
  double m = 1.0;
  double nu = 0.5;
  double alpha = 1.0;  // initial displacement <a>(0) for mean dynamics
  int N = 30;
  int G = 3;
  double dt = 1e-3;
  double T_end = 2.0;
  long ensemble = 10000;
  std::uint64_t seed = 7;
  int threads = 1;
  std::string out = "ntfd_out";

  std::set<std::string> given;  // keys set explicitly

  bool unitary() const { return system == "unitary"; }
};

// key = value lines, '#' starts a comment
std::map<std::string, std::string> parse_key_values(const std::string& text);

// Applies values over scenario defaults, resolves nbar/T and validates ranges.
RunConfig build_config(Scenario s, const std::map<std::string, std::string>& file_values,
                       const std::map<std::string, std::string>& flag_values);

RunConfig parse_config_text(Scenario s, const std::string& text);

const std::vector<std::string>& config_keys();

// Ordered (key, value) pairs for reports.
std::vector<std::pair<std::string, std::string>> describe(const RunConfig& c);

}  // namespace ntfd

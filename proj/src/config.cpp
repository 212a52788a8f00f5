// Copyright 2026 The ntfd Authors
// SPDX-License-Identifier: Apache-2.0

#include "ntfd/config.hpp"

#include <cmath>
#include <sstream>

#include "ntfd/csv.hpp"
#include "ntfd/dynamics.hpp"

namespace ntfd {

const char* scenario_name(Scenario s) {
  switch (s) {
    case Scenario::validate: return "validate";
    case Scenario::oscillator: return "oscillator";
    case Scenario::kramers: return "kramers";
    case Scenario::propagator: return "propagator";
    case Scenario::compare_pictures: return "compare-pictures";
  }
  return "?";
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> k{"system", "omega", "kappa", "nbar",     "T",
                                          "n0",     "m",     "nu",    "alpha",    "N",
                                          "G",      "dt",    "T_end", "ensemble", "seed",
                                          "threads", "out"};
  return k;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    if (!std::isfinite(d)) throw ConfigError(key, "must be finite");
    return d;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    throw ConfigError(key, "expected a number, got '" + v + "'");
  }
}

long to_long(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const long long d = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return static_cast<long>(d);
  } catch (const std::exception&) {
    throw ConfigError(key, "expected an integer, got '" + v + "'");
  }
}

void apply(RunConfig& c, const std::string& k, const std::string& v) {
  if (k == "system") c.system = v;
  else if (k == "omega") c.omega = to_double(k, v);
  else if (k == "kappa") c.kappa = to_double(k, v);
  else if (k == "nbar") c.nbar = to_double(k, v);
  else if (k == "T") c.T = to_double(k, v);
  else if (k == "n0") c.n0 = to_double(k, v);
  else if (k == "m") c.m = to_double(k, v);
  else if (k == "nu") c.nu = to_double(k, v);
  else if (k == "alpha") c.alpha = to_double(k, v);
  else if (k == "N") c.N = static_cast<int>(to_long(k, v));
  else if (k == "G") c.G = static_cast<int>(to_long(k, v));
  else if (k == "dt") c.dt = to_double(k, v);
  else if (k == "T_end") c.T_end = to_double(k, v);
  else if (k == "ensemble") c.ensemble = to_long(k, v);
  else if (k == "seed") {
    const long s = to_long(k, v);
    if (s < 0) throw ConfigError(k, "must be >= 0");
    c.seed = static_cast<std::uint64_t>(s);
  } else if (k == "threads") c.threads = static_cast<int>(to_long(k, v));
  else if (k == "out") c.out = v;
  else throw ConfigError(k, "unknown key");
  c.given.insert(k);
}

void scenario_defaults(RunConfig& c) {
  if (c.scenario == Scenario::kramers) {
    c.kappa = 0.2;
    c.nbar = 0.5;
    c.n0 = 0.5;
    c.T_end = 10.0;
  }
}

void validate(RunConfig& c) {
  if (c.system != "nonunitary" && c.system != "unitary")
    throw ConfigError("system", "must be 'nonunitary' or 'unitary'");
  if (!(c.omega > 0.0)) throw ConfigError("omega", "must be > 0");
  if (c.kappa < 0.0) throw ConfigError("kappa", "must be >= 0");
  const bool has_nbar = c.given.count("nbar") > 0, has_T = c.given.count("T") > 0;
  if (has_nbar && has_T) throw ConfigError("T", "give exactly one of nbar and T");
  if (has_T) {
    if (!(c.T > 0.0)) throw ConfigError("T", "must be > 0");
    c.nbar = planck_nbar(c.omega, c.T);
  } else {
    if (c.nbar < 0.0) throw ConfigError("nbar", "must be >= 0");
    c.T = c.nbar > 0.0 ? planck_temperature(c.omega, c.nbar) : 0.0;
  }
  if (c.n0 < 0.0) throw ConfigError("n0", "must be >= 0");
  if (!(c.m > 0.0)) throw ConfigError("m", "must be > 0");
  if (!(c.nu >= 0.0 && c.nu <= 1.0)) throw ConfigError("nu", "must lie in [0, 1]");
  if (c.N < 2) throw ConfigError("N", "must be >= 2");
  if (c.G < 0 || c.G >= c.N) throw ConfigError("G", "must satisfy 0 <= G < N");
  if (!(c.dt > 0.0)) throw ConfigError("dt", "must be > 0");
  if (!(c.T_end > 0.0)) throw ConfigError("T_end", "must be > 0");
  const double steps = c.T_end / c.dt;
  if (std::abs(steps - std::round(steps)) > 1e-6) throw ConfigError("T_end", "must be a multiple of dt");
  if (c.ensemble < 2) throw ConfigError("ensemble", "must be >= 2");
  if (c.threads < 1) throw ConfigError("threads", "must be >= 1");
  if (c.out.empty()) throw ConfigError("out", "must not be empty");
}

}  // namespace

std::map<std::string, std::string> parse_key_values(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line_no), "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError("line " + std::to_string(line_no), "empty key");
    kv[key] = trim(line.substr(eq + 1));
  }
  return kv;
}

RunConfig build_config(Scenario s, const std::map<std::string, std::string>& file_values,
                       const std::map<std::string, std::string>& flag_values) {
  RunConfig c;
  c.scenario = s;
  scenario_defaults(c);
  for (const auto& [k, v] : file_values) apply(c, k, v);
  for (const auto& [k, v] : flag_values) apply(c, k, v);
  validate(c);
  return c;
}

RunConfig parse_config_text(Scenario s, const std::string& text) {
  return build_config(s, parse_key_values(text), {});
}

std::vector<std::pair<std::string, std::string>> describe(const RunConfig& c) {
  return {{"scenario", scenario_name(c.scenario)},
          {"system", c.system},
          {"omega", fmt(c.omega)},
          {"kappa", fmt(c.kappa)},
          {"nbar", fmt(c.nbar)},
          {"T", fmt(c.T)},
          {"n0", fmt(c.n0)},
          {"m", fmt(c.m)},
          {"nu", fmt(c.nu)},
          {"alpha", fmt(c.alpha)},
          {"N", std::to_string(c.N)},
          {"G", std::to_string(c.G)},
          {"dt", fmt(c.dt)},
          {"T_end", fmt(c.T_end)},
          {"ensemble", std::to_string(c.ensemble)},
          {"seed", std::to_string(c.seed)}};
}

}  // namespace ntfd

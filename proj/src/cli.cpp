// Copyright 2026 The ntfd Authors
// SPDX-License-Identifier: Apache-2.0

#include "ntfd/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "ntfd/config.hpp"
#include "ntfd/scenarios.hpp"

namespace ntfd {

namespace {

struct Flags {
  std::string config;
  std::map<std::string, std::string> values;
};

void add_flags(CLI::App* sub, Flags& f, bool with_system) {
  sub->add_option("--config", f.config, "key = value configuration file");
  for (const auto& key : config_keys()) {
    if (key == "system" && !with_system) continue;
    auto* opt = sub->add_option_function<std::string>(
        "--" + key, [&f, key](const std::string& v) { f.values[key] = v; }, "override '" + key + "'");
    if (key == "system") opt->check(CLI::IsMember({"nonunitary", "unitary"}));
  }
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
  if (path.empty()) return {};
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_key_values(ss.str());
}

void print_report(const ScenarioReport& r) {
  std::printf("%s %s (%zu checks, %.2f s)\n", r.all_pass() ? "PASS" : "FAIL", r.id.c_str(),
              r.checks.size(), r.runtime_s);
  for (const auto& c : r.checks)
    if (!c.pass)
      std::printf("  failed %s: observed %.6g, expected %.6g, tolerance %.3g (%s)\n", c.name.c_str(),
                  c.observed, c.expected, c.tolerance, relation_name(c.relation));
  for (const auto& [k, v] : r.flags) std::printf("  %s = %s\n", k.c_str(), v ? "true" : "false");
}

int run_one(Scenario s, const Flags& f) {
  const RunConfig cfg = build_config(s, read_config_file(f.config), f.values);
  const ScenarioReport r = run_scenario(cfg);
  write_report(r, (std::filesystem::path(cfg.out) / r.id).string());
  print_report(r);
  return r.all_pass() ? 0 : 1;
}

int run_validate(const Flags& f) {
  const auto file = read_config_file(f.config);
  struct Item {
    Scenario s;
    const char* system;
  };
  const Item items[] = {{Scenario::oscillator, "nonunitary"}, {Scenario::oscillator, "unitary"},
                        {Scenario::kramers, "nonunitary"},    {Scenario::kramers, "unitary"},
                        {Scenario::propagator, "nonunitary"}, {Scenario::compare_pictures, "nonunitary"}};
  // validate every configuration before running anything
  std::vector<RunConfig> cfgs;
  for (const auto& it : items) {
    auto values = f.values;
    values["system"] = it.system;
    cfgs.push_back(build_config(it.s, file, values));
  }
  CsvTable all;
  bool ok = true;
  for (const auto& cfg : cfgs) {
    const ScenarioReport r = run_scenario(cfg);
    write_report(r, (std::filesystem::path(cfg.out) / r.id).string());
    print_report(r);
    const CsvTable s = r.summary();
    if (all.header.empty()) all.header = s.header;
    for (const auto& row : s.rows) all.add(row);
    ok = ok && r.all_pass();
  }
  write_csv((std::filesystem::path(cfgs.front().out) / "validate_summary.csv").string(), all);
  std::printf("%s validate\n", ok ? "PASS" : "FAIL");
  return ok ? 0 : 1;
}

}  // namespace

int cli_main(int argc, char** argv) {
  CLI::App app{"Stochastic thermo field dynamics scenarios"};
  app.require_subcommand(1);
  Flags f;
  auto* validate = app.add_subcommand("validate", "run every scenario on its defaults");
  auto* osc = app.add_subcommand("oscillator", "damped harmonic oscillator");
  auto* kr = app.add_subcommand("kramers", "quantum Kramers equation");
  auto* prop = app.add_subcommand("propagator", "two-point functions");
  auto* cmp = app.add_subcommand("compare-pictures", "Langevin against master-equation moments");
  add_flags(validate, f, false);
  add_flags(osc, f, true);
  add_flags(kr, f, true);
  add_flags(prop, f, false);
  add_flags(cmp, f, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (validate->parsed()) return run_validate(f);
    if (osc->parsed()) return run_one(Scenario::oscillator, f);
    if (kr->parsed()) return run_one(Scenario::kramers, f);
    if (prop->parsed()) return run_one(Scenario::propagator, f);
    return run_one(Scenario::compare_pictures, f);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    switch (e.code()) {
      case Errc::invalid_cutoff:
      case Errc::negative_occupation:
      case Errc::negative_kappa:
      case Errc::negative_nbar:
      case Errc::nonpositive_parameter:
      case Errc::nu_out_of_range:
      case Errc::config:
        return 2;
      default:
        return 1;
    }
  }
}

}  // namespace ntfd

// Copyright 2026 The ntfd Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <future>
#include <string>
#include <thread>
#include <vector>

#include "common/noise_oracle.hpp"
#include "ntfd/config.hpp"
#include "ntfd/dynamics.hpp"
#include "ntfd/generators.hpp"
#include "ntfd/heisenberg.hpp"
#include "ntfd/ito.hpp"
#include "ntfd/scenarios.hpp"

using namespace ntfd;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int failures = 0;

void report(int id, const char* name, bool pass, const std::string& detail) {
  std::printf("%s %2d %-24s %s\n", pass ? "PASS" : "FAIL", id, name, detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* f, auto... v) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, v...);
  return buf;
}

int threads() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

RunConfig config(Scenario s, const std::string& text) {
  return parse_config_text(s, text + "\nthreads = " + std::to_string(threads()));
}

// lowest dS_i/dt seen across every Boltzmann-grid run; filled by criterion 1
double grid_min_entropy_rate = INFINITY;

void boltzmann_grid() {
  struct Result {
    double err, min_rate;
  };
  std::vector<std::future<Result>> jobs;
  for (double kappa : {0.1, 0.5, 1.0})
    for (double nbar : {0.0, 0.5, 1.0, 2.0})
      for (double n0 : {0.0, 1.0, 2.0})
        jobs.push_back(std::async(std::launch::async, [=] {
          const int G = 3;
          const int N = std::max(30, required_cutoff(std::max(n0, nbar), 1e-10, 0) + G);
          const LadderSet L = build_space(N, G);
          MasterOptions opt;
          opt.observables = {{"n", L.ad * L.a}};
          opt.record_every = 50;
          const MasterTrajectory tr = evolve_master(oscillator_hamiltonian(L, {1.0, kappa, nbar, 0.5}),
                                                    initial_vacuum(L.space, n0).ket, 5.0, 1e-3, opt);
          const std::vector<double> n = tr.real_column("n");
          Result r{0.0, INFINITY};
          for (std::size_t i = 0; i < n.size(); ++i) {
            r.err = std::max(r.err, std::abs(n[i] - boltzmann_closed_form(n0, nbar, kappa, tr.times[i])));
            r.min_rate = std::min(r.min_rate, entropy_production_rate(n[i], nbar, kappa));
          }
          return r;
        }));
  double err = 0.0;
  for (auto& j : jobs) {
    const Result r = j.get();
    err = std::max(err, r.err);
    grid_min_entropy_rate = std::min(grid_min_entropy_rate, r.min_rate);
  }
  report(1, "boltzmann_regression", err < 1e-6, fmt("36 runs, max |n - closed form| = %.3e (< 1e-6)", err));
}

void commutator_dichotomy() {
  const double kappa = 0.5, T = 5.0 / kappa, h = T / 50.0;
  double stochastic = 0.0, averaged = 0.0;
  for (SystemKind k : {SystemKind::oscillator_nonunitary, SystemKind::oscillator_unitary}) {
    const SystemSpec s{k, {1.0, kappa, 1.0, 0.5, 1.0}};
    const LinearProcess A = evolve_process(s, "a", T, h), Ad = evolve_process(s, "a+", T, h);
    for (std::size_t i = 0; i < A.times.size(); ++i)
      stochastic = std::max(stochastic, std::abs(equal_time_commutator(A, Ad, i) - 1.0));
  }
  const SystemSpec s{SystemKind::averaged_reference, {1.0, kappa, 1.0, 0.5, 1.0}};
  const LinearProcess A = evolve_process(s, "a", T, h), Ad = evolve_process(s, "a+", T, h);
  for (std::size_t i = 0; i < A.times.size(); ++i)
    averaged = std::max(averaged, std::abs(equal_time_commutator(A, Ad, i) - std::exp(-2.0 * kappa * A.times[i])));
  report(2, "commutator_dichotomy", stochastic < 1e-10 && averaged < 1e-10,
         fmt("|[a,a+] - 1| = %.3e, |averaged - exp(-2 kappa t)| = %.3e (< 1e-10)", stochastic, averaged));
}

void fluctuation_dissipation() {
  const LadderSet L = build_space(20, 3);
  const OscillatorParams op{1.0, 0.5, 1.0, 0.5};
  const KramersParams kp{1.0, 1.0, 0.2, 0.5};
  const ItoTable to(op.nbar), tk(kp.nbar);
  const HatHamiltonian Ho = oscillator_hamiltonian(L, op);
  const HatHamiltonian Hk = kramers_hamiltonian(L, kp);
  const UnitaryKramers U = unitary_kramers_generator(L, kp);
  const double r[4] = {fdt_residual(oscillator_martingale(L, op), Ho.Pi_D, to),
                       fdt_residual(oscillator_unitary_martingale(L, op), Ho.Pi(), to),
                       fdt_residual(kramers_martingale(L, kp), Hk.Pi_D, tk),
                       fdt_residual(kramers_unitary_martingale(L, kp), U.generator.Pi_D, tk)};
  const bool pass = std::all_of(r, r + 4, [](double v) { return v < 1e-12; });
  report(3, "fluctuation_dissipation", pass,
         fmt("osc %.2e, osc-U %.2e, kramers %.2e, kramers-U %.2e (< 1e-12)", r[0], r[1], r[2], r[3]));
}

void generator_axioms() {
  const LadderSet L = build_space(30, 3);
  const ThermalOperator Ho = oscillator_hamiltonian(L, {1.0, 0.5, 1.0, 0.5}).H();
  const KramersParams kp{1.0, 1.0, 0.2, 0.5};
  const ThermalOperator Hk = kramers_hamiltonian(L, kp).H();
  const double bra = std::max(bra_residual(Ho), bra_residual(Hk));
  const double tl = std::max(tildian_residual(Ho), tildian_residual(Hk));
  const double braU = bra_residual(unitary_kramers_generator(L, kp).generator.H());
  report(4, "generator_axioms", bra < 1e-12 && tl < 1e-13 && braU > 0.01 * kp.kappa,
         fmt("<1|H = %.2e (< 1e-12), tildian %.2e (< 1e-13), <1|H^U = %.2e (> %.3g required)", bra, tl, braU,
             0.01 * kp.kappa));
}

struct Runs {
  ScenarioReport osc, osc_u, kr, kr_u, prop;
  double mc_seconds = 0.0;
};

Runs scenario_runs() {
  Runs r;
  const auto t0 = Clock::now();
  r.osc = run_scenario(config(Scenario::oscillator, "system = nonunitary"));
  r.osc_u = run_scenario(config(Scenario::oscillator, "system = unitary"));
  r.kr = run_scenario(config(Scenario::kramers, "system = nonunitary"));
  r.kr_u = run_scenario(config(Scenario::kramers, "system = unitary"));
  r.mc_seconds = seconds_since(t0);
  r.prop = run_scenario(config(Scenario::propagator, ""));
  return r;
}

void cross_picture(const Runs& r) {
  const Check& a = r.osc.check("cross_picture_n");
  const Check& b = r.osc_u.check("cross_picture_n");
  const Check& c = r.kr.check("cross_picture_means");
  const Check& d = r.kr_u.check("means_follow_unitary_generator");
  const Check& e = r.kr_u.check("envelope_gap");
  report(5, "cross_picture", a.pass && b.pass && c.pass && d.pass && e.pass,
         fmt("n: %.2e / %.2e (< 1e-4); kramers means %.2e, unitary %.2e (< 1e-5); envelope gap %.3f (> 0.1)",
             a.observed, b.observed, c.observed, d.observed, e.observed));
}

void condensation(const Runs& r) {
  const Check& c = r.osc.check("condensation_equivalence");
  report(6, "condensation", c.pass, fmt("overlap deficit %.2e (< 1e-7)", c.observed));
}

void entropy_production(const Runs& r) {
  const double at = entropy_production_rate(2.0, 1.0, 0.5);
  const double zero = std::abs(entropy_production_rate(1.3, 1.3, 0.5));
  const double scenario = r.osc.check("entropy_production").observed;
  const double lowest = std::min(grid_min_entropy_rate, scenario);
  const bool pass = lowest >= -1e-12 && std::abs(at - std::log(4.0 / 3.0)) <= 1e-9 && zero == 0.0;
  report(7, "entropy_production", pass,
         fmt("min dS/dt %.3e (>= -1e-12), rate(2,1,0.5) - ln(4/3) = %.1e, rate at n = nbar %.1e", lowest,
             at - std::log(4.0 / 3.0), zero));
}

void propagators(const Runs& r) {
  const Check& s = r.prop.check("sandwich_identity");
  const Check& o = r.prop.check("gamma_frame_offdiagonal");
  report(8, "propagators", s.pass && o.pass,
         fmt("sandwich %.2e, gamma-frame off-diagonal %.2e (< 1e-5) on 5x5 grid", s.observed, o.observed));
}

void ito_oracle() {
  double table_err = 0.0;
  for (double n : {0.0, 0.5, 1.0, 2.0}) {
    const ItoTable table(n);
    const testing::NoiseOracle oracle(n);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        const IncrementSymbol x = base_symbol(static_cast<Base>(i)), y = base_symbol(static_cast<Base>(j));
        table_err = std::max({table_err, std::abs(table.product(x, y) - oracle.product(x, y)),
                              std::abs(table.commutator(x, y) - oracle.commutator(x, y))});
      }
  }
  const LadderSet L = build_space(20, 3);
  const OscillatorParams p{1.0, 0.5, 1.0, 0.5};
  const Martingale MU = oscillator_unitary_martingale(L, p);
  const ItoTable t(p.nbar);
  const ThermalOperator HS = oscillator_hamiltonian(L, p).H_S;
  const double round_trip = guarded_max_abs(ito_to_strat(strat_to_ito(HS, MU, t), MU, t) - HS);
  report(9, "ito_oracle", table_err < 1e-12 && round_trip < 1e-12,
         fmt("table vs explicit noise modes %.2e, Ito/Stratonovich round trip %.2e (< 1e-12)", table_err,
             round_trip));
}

void monte_carlo(const Runs& r) {
  double worst = 0.0;
  bool pass = true;
  for (const ScenarioReport* s : {&r.osc, &r.osc_u, &r.kr, &r.kr_u}) {
    const Check& c = s->check("ensemble_mean");
    worst = std::max(worst, c.observed);
    pass = pass && c.pass;
  }
  pass = pass && r.mc_seconds < 300.0;
  report(10, "monte_carlo", pass,
         fmt("4 systems x 1e4 trajectories, worst z = %.2f (<= 3), %.0f s (< 300 s)", worst, r.mc_seconds));
}

}  // namespace

int main() {
  const auto t0 = Clock::now();
  boltzmann_grid();
  commutator_dichotomy();
  fluctuation_dissipation();
  generator_axioms();
  const Runs runs = scenario_runs();
  cross_picture(runs);
  condensation(runs);
  entropy_production(runs);
  propagators(runs);
  ito_oracle();
  monte_carlo(runs);
  std::printf("%d of 10 criteria failed (%.0f s)\n", failures, seconds_since(t0));
  return failures == 0 ? 0 : 1;
}

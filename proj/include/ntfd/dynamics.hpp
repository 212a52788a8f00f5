// Copyright 2026 The ntfd Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ntfd/generators.hpp"
#include "ntfd/thermal_space.hpp"

namespace ntfd {

struct Observable {
  std::string name;
  ThermalOperator op;
};

struct MasterOptions {
  std::vector<Observable> observables;
  int record_every = 1;       // steps between recorded grid points
  bool keep_states = false;   // store the ket at every recorded point
  double guard = 2.0;         // reject dt when rho(H) * dt exceeds this
  double overflow = 1e-8;     // top-level weight that aborts the run
};

struct MasterTrajectory {
  std::vector<double> times;
  std::vector<std::string> names;
  Eigen::MatrixXcd values;  // rows: times, cols: observables
  std::vector<double> norm_drift;
  std::vector<ThermalKet> states;
  ThermalKet final_state;
  double spectral_radius = 0.0;

  std::vector<double> real_column(const std::string& name) const;
  std::vector<cd> column(const std::string& name) const;
};

// Estimate of the spectral radius of H by repeated application to a fixed vector.
double spectral_radius_estimate(const ThermalOperator& H, int iterations = 256);

MasterTrajectory evolve_master(const ThermalOperator& H, const ThermalKet& ket0, double T_end,
                               double dt, const MasterOptions& opt);
MasterTrajectory evolve_master(const HatHamiltonian& H, const ThermalKet& ket0, double T_end,
                               double dt, const MasterOptions& opt);

// One RK4 step of d|psi>/dt = -i H |psi> with M = -i H precomputed.
void rk4_step(const SpMat& M, Vec& psi, double dt, Vec& k1, Vec& k2, Vec& k3, Vec& k4, Vec& tmp);

double boltzmann_closed_form(double n0, double nbar, double kappa, double t);
double planck_nbar(double omega, double T);
double planck_temperature(double omega, double nbar);

// exp(s A) |ket> by a scaled Taylor series
ThermalKet exp_apply(const ThermalOperator& A, cd s, const ThermalKet& ket);

ThermalKet condensation_state(double n_t, double n_0, const ThermalOperator& gamma_plus,
                              const ThermalOperator& tilde_gamma_plus, const ThermalKet& ket0);
double order_parameter(double n_t, double n_0);
// exp(alpha g+ + alpha* g~+) |ket>: shifts <a> by alpha
ThermalKet displaced_state(const LadderSet& L, cd alpha, const ThermalKet& ket0);

struct MigrationCheck {
  double generator_residual;  // ||-iH|0(t)> - (dn/dt) g+ g~+ |0(t)>||_inf
  double derivative_residual; // ||d|0(n)>/dn - g+ g~+ |0(n)>||_inf by central difference
};
MigrationCheck migration_identity(const LadderSet& L, const OscillatorParams& p, double n,
                                  double h);

double entropy(double n);
double entropy_production_rate(double n, double nbar, double kappa);

struct ThermoReport {
  std::vector<double> times, n, S, dQ_dt, dSe_dt, dSi_dt;
  double nbar = 0.0;
  double T = 0.0;
  double min_dSi_dt = 0.0;
  bool equality_case = false;  // n == nbar throughout or kappa == 0
};

ThermoReport thermo_report(const std::vector<double>& times, const std::vector<double>& n,
                           double omega, double nbar, double kappa);

// dS/dt (central difference along the Boltzmann path) - dSe/dt - dSi/dt
double entropy_chain_residual(double n0, double nbar, double kappa, double omega, double t,
                              double h);

}  // namespace ntfd

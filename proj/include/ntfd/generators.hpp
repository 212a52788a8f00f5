// Copyright 2026 The ntfd Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <array>

#include "ntfd/thermal_space.hpp"

namespace ntfd {

struct OscillatorParams {
  double omega = 1.0;
  double kappa = 0.5;
  double nbar = 1.0;
  double nu = 0.5;
};

struct KramersParams {
  double m = 1.0;
  double omega = 1.0;
  double kappa = 0.2;
  double nbar = 0.5;
};

// H = H_S + i (Pi_R + Pi_D)
struct HatHamiltonian {
  ThermalOperator H_S, Pi_R, Pi_D;

  ThermalOperator Pi() const { return Pi_R + Pi_D; }
  ThermalOperator H() const { return H_S + I * Pi(); }
};

struct GammaSet {
  double nu = 0.5;
  ThermalOperator gamma_nu, gamma_plus, tilde_gamma_nu, tilde_gamma_plus;
};

GammaSet gamma_set(const LadderSet& L, double nu);

void check_oscillator_params(const OscillatorParams& p);
void check_kramers_params(const KramersParams& p);

HatHamiltonian oscillator_hamiltonian(const LadderSet& L, const OscillatorParams& p);
// The ladder-operator form -k[(1+2n)(a+a + a~+a~) - 2(1+n) a a~ - 2n a+ a~+] - 2kn
ThermalOperator pi_hat_ladder(const LadderSet& L, double kappa, double nbar);

struct SemiFreeCoefficients {
  double c1 = 0.0, c2 = 0.0, c3 = 0.0, c4 = 0.0;
  double omega = 1.0;

  // c3, c4 fixed by <1|H = 0
  static SemiFreeCoefficients from_c1_c2(double c1, double c2, double omega);
  static SemiFreeCoefficients from_kappa_nbar(double kappa, double nbar, double omega);

  double kappa() const { return c1 + c2; }
  double i_sigma_less() const { return -(2.0 * c1 + c2); }
  // stationary occupation i Sigma^< / (2 kappa)
  double stationary_nbar() const { return i_sigma_less() / (2.0 * kappa()); }
  double constraint_residual() const;
};

// c1 (a+a + a~+a~) + c2 a a~ + c3 a+ a~+ + c4
ThermalOperator pi_from_coefficients(const LadderSet& L, const SemiFreeCoefficients& c);

HatHamiltonian kramers_hamiltonian(const LadderSet& L, const KramersParams& p);

struct UnitaryKramers {
  HatHamiltonian generator;  // Pi_R = 0, Pi_D = Pi^U
  double diffusion_ratio = 0.0;
  double missing_relaxation_norm = 0.0;  // ||Pi_R||_max of the master generator
  double gap_norm = 0.0;                 // ||H^U - H||_max
};

UnitaryKramers unitary_kramers_generator(const LadderSet& L, const KramersParams& p);

// ||<1| H P||_max
double bra_residual(const ThermalOperator& H);
// ||(iH)~ - iH||_max on the guarded subspace
double tildian_residual(const ThermalOperator& H);

using Mat2 = Eigen::Matrix2d;

Mat2 bogoliubov(double n);
Mat2 bogoliubov_inverse(double n);
Mat2 a_matrix(double nbar);
Mat2 tau3();
Mat2 tau_plus();

using Doublet = std::array<ThermalOperator, 2>;
// out^mu = B^{mu nu} in^nu
Doublet doublet_transform(const Mat2& B, const Doublet& in);
Doublet doublet_a(const LadderSet& L);     // (a, a~+)
Doublet doublet_abar(const LadderSet& L);  // (a+, -a~)

struct DOperators {
  ThermalOperator d, d_dag, d_tilde, d_tilde_dag;
};

DOperators diagonal_d_operators(const LadderSet& L, double nbar);
ThermalOperator d_form_hamiltonian(const DOperators& D, double omega, double kappa);

struct IdentityFit {
  cd constant;
  double residual;
};
// Best c with X - Y ~ c I on the guarded subspace, and the remaining max residual.
IdentityFit fit_identity_offset(const ThermalOperator& X, const ThermalOperator& Y);

}  // namespace ntfd

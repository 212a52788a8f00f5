// Copyright 2026 The ntfd Authors
// SPDX-License-Identifier: Apache-2.0

#include "ntfd/generators.hpp"

#include <cmath>

namespace ntfd {

namespace {

void require_finite(double v, const char* name) {
  if (!std::isfinite(v)) throw Error(Errc::nonpositive_parameter, std::string(name) + " is not finite");
}

}  // namespace

void check_oscillator_params(const OscillatorParams& p) {
  require_finite(p.omega, "omega");
  require_finite(p.kappa, "kappa");
  require_finite(p.nbar, "nbar");
  if (p.kappa < 0.0) throw Error(Errc::negative_kappa, "kappa must be >= 0");
  if (p.nbar < 0.0) throw Error(Errc::negative_nbar, "nbar must be >= 0");
  if (!(p.nu >= 0.0 && p.nu <= 1.0)) throw Error(Errc::nu_out_of_range, "nu must lie in [0, 1]");
}

void check_kramers_params(const KramersParams& p) {
  require_finite(p.m, "m");
  require_finite(p.omega, "omega");
  require_finite(p.kappa, "kappa");
  require_finite(p.nbar, "nbar");
  if (p.m <= 0.0) throw Error(Errc::nonpositive_parameter, "m must be > 0");
  if (p.omega <= 0.0) throw Error(Errc::nonpositive_parameter, "omega must be > 0");
  if (p.kappa < 0.0) throw Error(Errc::negative_kappa, "kappa must be >= 0");
  if (p.nbar < 0.0) throw Error(Errc::negative_nbar, "nbar must be >= 0");
}

GammaSet gamma_set(const LadderSet& L, double nu) {
  if (!(nu >= 0.0 && nu <= 1.0)) throw Error(Errc::nu_out_of_range, "nu must lie in [0, 1]");
  const double mu = 1.0 - nu;
  GammaSet g;
  g.nu = nu;
  g.gamma_nu = mu * L.a + nu * L.atd;
  g.gamma_plus = L.ad - L.at;
  g.tilde_gamma_nu = tilde(g.gamma_nu);
  g.tilde_gamma_plus = tilde(g.gamma_plus);
  return g;
}

HatHamiltonian oscillator_hamiltonian(const LadderSet& L, const OscillatorParams& p) {
  check_oscillator_params(p);
  const GammaSet g = gamma_set(L, p.nu);
  HatHamiltonian h;
  h.H_S = p.omega * (L.ad * L.a - L.atd * L.at);
  h.Pi_R = (-p.kappa) * (g.gamma_plus * g.gamma_nu + g.tilde_gamma_plus * g.tilde_gamma_nu);
  h.Pi_D = (2.0 * p.kappa * (p.nbar + p.nu)) * (g.gamma_plus * g.tilde_gamma_plus);
  return h;
}

ThermalOperator pi_hat_ladder(const LadderSet& L, double kappa, double nbar) {
  const ThermalOperator number_sum = L.ad * L.a + L.atd * L.at;
  return (-kappa) * ((1.0 + 2.0 * nbar) * number_sum - (2.0 * (1.0 + nbar)) * (L.a * L.at) -
                     (2.0 * nbar) * (L.ad * L.atd)) -
         (2.0 * kappa * nbar) * L.id;
}

SemiFreeCoefficients SemiFreeCoefficients::from_c1_c2(double c1, double c2, double omega) {
  SemiFreeCoefficients c;
  c.c1 = c1;
  c.c2 = c2;
  c.c3 = -(2.0 * c1 + c2);
  c.c4 = -c.c3;
  c.omega = omega;
  return c;
}

SemiFreeCoefficients SemiFreeCoefficients::from_kappa_nbar(double kappa, double nbar, double omega) {
  return from_c1_c2(-kappa * (1.0 + 2.0 * nbar), 2.0 * kappa * (1.0 + nbar), omega);
}

double SemiFreeCoefficients::constraint_residual() const {
  return std::max(std::abs(2.0 * c1 + c2 + c3), std::abs(c3 + c4));
}

ThermalOperator pi_from_coefficients(const LadderSet& L, const SemiFreeCoefficients& c) {
  return c.c1 * (L.ad * L.a + L.atd * L.at) + c.c2 * (L.a * L.at) + c.c3 * (L.ad * L.atd) +
         c.c4 * L.id;
}

HatHamiltonian kramers_hamiltonian(const LadderSet& L, const KramersParams& p) {
  check_kramers_params(p);
  const ThermalOperator x = position(L, p.m, p.omega);
  const ThermalOperator q = momentum(L, p.m, p.omega);
  const ThermalOperator xt = tilde(x), qt = tilde(q);
  const ThermalOperator hs = (0.5 / p.m) * (q * q) + (0.5 * p.m * p.omega * p.omega) * (x * x);
  const ThermalOperator dx = x - xt;
  HatHamiltonian h;
  h.H_S = hs - tilde(hs);
  h.Pi_R = (-0.5 * I * p.kappa) * (dx * (q + qt));
  h.Pi_D = (-0.5 * p.kappa * p.m * p.omega * (1.0 + 2.0 * p.nbar)) * (dx * dx);
  return h;
}

UnitaryKramers unitary_kramers_generator(const LadderSet& L, const KramersParams& p) {
  const HatHamiltonian master = kramers_hamiltonian(L, p);
  const ThermalOperator x = position(L, p.m, p.omega);
  const ThermalOperator dx = x - tilde(x);
  const double cu = p.kappa * p.m * p.omega / 8.0 * (1.0 + 2.0 * p.nbar);
  const double cd_ = p.kappa * p.m * p.omega / 2.0 * (1.0 + 2.0 * p.nbar);
  UnitaryKramers u;
  u.generator.H_S = master.H_S;
  u.generator.Pi_R = ThermalOperator::zero(L.space);
  u.generator.Pi_D = (-cu) * (dx * dx);
  u.diffusion_ratio = cd_ > 0.0 ? cu / cd_ : 0.25;
  u.missing_relaxation_norm = max_abs(master.Pi_R);
  u.gap_norm = max_abs(u.generator.H() - master.H());
  return u;
}

double bra_residual(const ThermalOperator& H) { return bra_annihilation_residual(H); }

double tildian_residual(const ThermalOperator& H) {
  const ThermalOperator iH = I * H;
  return guarded_max_abs(tilde(iH) - iH);
}

Mat2 bogoliubov(double n) {
  Mat2 b;
  b << 1.0 + n, -n, -1.0, 1.0;
  return b;
}

Mat2 bogoliubov_inverse(double n) {
  Mat2 b;
  b << 1.0, n, 1.0, 1.0 + n;
  return b;
}

Mat2 a_matrix(double nbar) {
  Mat2 a;
  a << 1.0 + 2.0 * nbar, -2.0 * nbar, 2.0 * (1.0 + nbar), -(1.0 + 2.0 * nbar);
  return a;
}

Mat2 tau3() {
  Mat2 t;
  t << 1.0, 0.0, 0.0, -1.0;
  return t;
}

Mat2 tau_plus() {
  Mat2 t;
  t << 0.0, 1.0, 0.0, 0.0;
  return t;
}

Doublet doublet_transform(const Mat2& B, const Doublet& in) {
  return {B(0, 0) * in[0] + B(0, 1) * in[1], B(1, 0) * in[0] + B(1, 1) * in[1]};
}

Doublet doublet_a(const LadderSet& L) { return {L.a, L.atd}; }
Doublet doublet_abar(const LadderSet& L) { return {L.ad, -L.at}; }

DOperators diagonal_d_operators(const LadderSet& L, double nbar) {
  if (nbar < 0.0) throw Error(Errc::negative_nbar, "nbar must be >= 0");
  const Doublet d = doublet_transform(bogoliubov(nbar), doublet_a(L));
  DOperators D;
  D.d = d[0];
  // doublet partner of d: first component of abar B^-1
  const Mat2 bi = bogoliubov_inverse(nbar);
  const Doublet ab = doublet_abar(L);
  D.d_dag = bi(0, 0) * ab[0] + bi(1, 0) * ab[1];
  D.d_tilde = tilde(D.d);
  D.d_tilde_dag = tilde(D.d_dag);
  return D;
}

ThermalOperator d_form_hamiltonian(const DOperators& D, double omega, double kappa) {
  const ThermalOperator n1 = D.d_dag * D.d;
  const ThermalOperator n2 = D.d_tilde_dag * D.d_tilde;
  return omega * (n1 - n2) - (I * kappa) * (n1 + n2);
}

IdentityFit fit_identity_offset(const ThermalOperator& X, const ThermalOperator& Y) {
  const ThermalOperator diff = X - Y;
  const TruncatedFockSpace& s = diff.space();
  cd sum = 0.0;
  int count = 0;
  for (int i = 0; i < s.dim(); ++i)
    if (s.guarded(i)) {
      sum += diff.matrix().coeff(i, i);
      ++count;
    }
  const cd c = count > 0 ? sum / static_cast<double>(count) : cd(0.0);
  return {c, guarded_max_abs(diff - c * ThermalOperator::identity(s))};
}

}  // namespace ntfd

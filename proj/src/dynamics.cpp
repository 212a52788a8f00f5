// Copyright 2026 The ntfd Authors
// SPDX-License-Identifier: Apache-2.0

#include "ntfd/dynamics.hpp"

#include <cmath>

#include "ntfd/kernels.hpp"

namespace ntfd {

std::vector<double> MasterTrajectory::real_column(const std::string& name) const {
  std::vector<double> out;
  for (const cd& z : column(name)) out.push_back(z.real());
  return out;
}

std::vector<cd> MasterTrajectory::column(const std::string& name) const {
  for (std::size_t j = 0; j < names.size(); ++j)
    if (names[j] == name) {
      std::vector<cd> out(static_cast<std::size_t>(values.rows()));
      for (Eigen::Index i = 0; i < values.rows(); ++i)
        out[static_cast<std::size_t>(i)] = values(i, static_cast<Eigen::Index>(j));
      return out;
    }
  throw Error(Errc::shape_mismatch, "no recorded observable '" + name + "'");
}

double spectral_radius_estimate(const ThermalOperator& H, int iterations) {
  const auto n = H.matrix().rows();
  Vec v(n);
  for (Eigen::Index i = 0; i < n; ++i)
    v[i] = cd(std::cos(0.7 * static_cast<double>(i) + 0.3), std::sin(1.3 * static_cast<double>(i)));
  v /= v.norm();
  // growth averaged over the second half only; the first half absorbs the
  // transient amplification of a non-normal generator
  double log_growth = 0.0;
  for (int k = 0; k < 2 * iterations; ++k) {
    v = H.apply(v);
    const double nv = v.norm();
    if (nv == 0.0) return 0.0;
    if (k >= iterations) log_growth += std::log(nv);
    v /= nv;
  }
  return std::exp(log_growth / iterations);
}

void rk4_step(const SpMat& M, Vec& psi, double dt, Vec& k1, Vec& k2, Vec& k3, Vec& k4, Vec& tmp) {
  const kernels::Table& K = kernels::active();
  const auto n = static_cast<std::size_t>(psi.size());
  const auto rows = static_cast<std::size_t>(M.rows());
  const int* outer = M.outerIndexPtr();
  const int* inner = M.innerIndexPtr();
  const cd* val = M.valuePtr();
  K.csr_matvec(rows, outer, inner, val, psi.data(), k1.data());
  K.xpay(n, psi.data(), 0.5 * dt, k1.data(), tmp.data());
  K.csr_matvec(rows, outer, inner, val, tmp.data(), k2.data());
  K.xpay(n, psi.data(), 0.5 * dt, k2.data(), tmp.data());
  K.csr_matvec(rows, outer, inner, val, tmp.data(), k3.data());
  K.xpay(n, psi.data(), dt, k3.data(), tmp.data());
  K.csr_matvec(rows, outer, inner, val, tmp.data(), k4.data());
  K.axpy(n, dt / 6.0, k1.data(), psi.data());
  K.axpy(n, dt / 3.0, k2.data(), psi.data());
  K.axpy(n, dt / 3.0, k3.data(), psi.data());
  K.axpy(n, dt / 6.0, k4.data(), psi.data());
}

MasterTrajectory evolve_master(const ThermalOperator& H, const ThermalKet& ket0, double T_end,
                               double dt, const MasterOptions& opt) {
  if (!(H.space() == ket0.space)) throw Error(Errc::shape_mismatch, "ket and generator differ in space");
  if (!(dt > 0.0) || !(T_end >= 0.0)) throw Error(Errc::step_too_large, "need dt > 0 and T_end >= 0");
  MasterTrajectory tr;
  tr.spectral_radius = spectral_radius_estimate(H);
  if (tr.spectral_radius * dt > opt.guard)
    throw Error(Errc::step_too_large, "rho(H) dt = " + std::to_string(tr.spectral_radius * dt) +
                                          " exceeds " + std::to_string(opt.guard));
  const long steps = std::lround(T_end / dt);
  if (std::abs(static_cast<double>(steps) * dt - T_end) > 1e-9 * std::max(1.0, T_end))
    throw Error(Errc::off_grid, "T_end is not a multiple of dt");
  const int every = std::max(1, opt.record_every);

  const SpMat M = cd(0.0, -1.0) * H.matrix();
  const ThermalBra bra = thermal_bra(ket0.space);
  for (const auto& o : opt.observables) tr.names.push_back(o.name);
  const long nrec = steps / every + 1;
  tr.values.resize(nrec, static_cast<Eigen::Index>(opt.observables.size()));

  Vec psi = ket0.v;
  const auto n = psi.size();
  Vec k1(n), k2(n), k3(n), k4(n), tmp(n);
  long r = 0;
  auto record = [&](double t) {
    const ThermalKet k{ket0.space, psi};
    if (top_weight(k) > opt.overflow)
      throw Error(Errc::truncation_overflow,
                  "top-level weight " + std::to_string(top_weight(k)) + " at t=" + std::to_string(t));
    tr.times.push_back(t);
    for (std::size_t j = 0; j < opt.observables.size(); ++j)
      tr.values(r, static_cast<Eigen::Index>(j)) = expectation(bra, opt.observables[j].op, k);
    tr.norm_drift.push_back(std::abs(overlap(bra, k) - 1.0));
    if (opt.keep_states) tr.states.push_back(k);
    ++r;
  };
  record(0.0);
  for (long s = 1; s <= steps; ++s) {
    rk4_step(M, psi, dt, k1, k2, k3, k4, tmp);
    if (s % every == 0) record(static_cast<double>(s) * dt);
  }
  tr.values.conservativeResize(r, tr.values.cols());
  tr.final_state = {ket0.space, psi};
  return tr;
}

MasterTrajectory evolve_master(const HatHamiltonian& H, const ThermalKet& ket0, double T_end,
                               double dt, const MasterOptions& opt) {
  return evolve_master(H.H(), ket0, T_end, dt, opt);
}

double boltzmann_closed_form(double n0, double nbar, double kappa, double t) {
  return nbar + (n0 - nbar) * std::exp(-2.0 * kappa * t);
}

double planck_nbar(double omega, double T) {
  if (!(omega > 0.0) || !(T > 0.0)) throw Error(Errc::nonpositive_parameter, "need omega > 0 and T > 0");
  return 1.0 / std::expm1(omega / T);
}

double planck_temperature(double omega, double nbar) {
  if (!(nbar > 0.0)) throw Error(Errc::nonpositive_parameter, "temperature undefined for nbar <= 0");
  return omega / std::log1p(1.0 / nbar);
}

namespace {
double inf_norm_rows(const ThermalOperator& A) {
  double m = 0.0;
  const SpMat& s = A.matrix();
  for (int r = 0; r < s.outerSize(); ++r) {
    double row = 0.0;
    for (SpMat::InnerIterator it(s, r); it; ++it) row += std::abs(it.value());
    m = std::max(m, row);
  }
  return m;
}
}  // namespace

ThermalKet exp_apply(const ThermalOperator& A, cd s, const ThermalKet& ket) {
  const double scale = std::abs(s) * inf_norm_rows(A);
  const int nsub = std::max(1, static_cast<int>(std::ceil(scale / 0.5)));
  const cd h = s / static_cast<double>(nsub);
  Vec v = ket.v;
  for (int j = 0; j < nsub; ++j) {
    Vec term = v;
    Vec acc = v;
    for (int k = 1; k < 80; ++k) {
      term = A.apply(term) * (h / static_cast<double>(k));
      acc += term;
      if (term.cwiseAbs().maxCoeff() <= 1e-18 * acc.cwiseAbs().maxCoeff()) break;
    }
    v = acc;
  }
  return {ket.space, v};
}

ThermalKet condensation_state(double n_t, double n_0, const ThermalOperator& gamma_plus,
                              const ThermalOperator& tilde_gamma_plus, const ThermalKet& ket0) {
  ThermalKet out = exp_apply(gamma_plus * tilde_gamma_plus, n_t - n_0, ket0);
  if (top_weight(out) > 1e-8)
    throw Error(Errc::truncation_overflow, "condensed state leaks into the top levels");
  return out;
}

double order_parameter(double n_t, double n_0) { return n_0 - n_t; }

ThermalKet displaced_state(const LadderSet& L, cd alpha, const ThermalKet& ket0) {
  const GammaSet g = gamma_set(L, 0.5);
  return exp_apply(alpha * g.gamma_plus + std::conj(alpha) * g.tilde_gamma_plus, 1.0, ket0);
}

MigrationCheck migration_identity(const LadderSet& L, const OscillatorParams& p, double n,
                                  double h) {
  const GammaSet g = gamma_set(L, p.nu);
  const ThermalOperator pair = g.gamma_plus * g.tilde_gamma_plus;
  const ThermalKet psi = initial_vacuum(L.space, n).ket;
  const ThermalKet up = initial_vacuum(L.space, n + h).ket;
  const Vec pair_psi = pair.apply(psi.v);
  const double ndot = -2.0 * p.kappa * (n - p.nbar);
  const Vec gen = cd(0.0, -1.0) * oscillator_hamiltonian(L, p).H().apply(psi.v);
  MigrationCheck c{};
  c.generator_residual = (gen - ndot * pair_psi).cwiseAbs().maxCoeff();
  Vec deriv;
  if (n >= h) {
    deriv = (up.v - initial_vacuum(L.space, n - h).ket.v) / (2.0 * h);
  } else {
    // one-sided second-order difference near n = 0
    deriv = (-3.0 * psi.v + 4.0 * up.v - initial_vacuum(L.space, n + 2.0 * h).ket.v) / (2.0 * h);
  }
  c.derivative_residual = (deriv - pair_psi).cwiseAbs().maxCoeff();
  return c;
}

double entropy(double n) {
  if (n <= 0.0) return 0.0;
  return -(n * std::log(n) - (1.0 + n) * std::log1p(n));
}

double entropy_production_rate(double n, double nbar, double kappa) {
  if (n == nbar || kappa == 0.0) return 0.0;
  return 2.0 * kappa * (n - nbar) * std::log(n * (1.0 + nbar) / (nbar * (1.0 + n)));
}

ThermoReport thermo_report(const std::vector<double>& times, const std::vector<double>& n,
                           double omega, double nbar, double kappa) {
  if (!(nbar > 0.0)) throw Error(Errc::nonpositive_parameter, "temperature undefined for nbar <= 0");
  if (times.size() != n.size()) throw Error(Errc::grid_mismatch, "times and n differ in length");
  ThermoReport r;
  r.nbar = nbar;
  r.T = planck_temperature(omega, nbar);
  r.times = times;
  r.n = n;
  r.min_dSi_dt = INFINITY;
  bool all_equal = true;
  for (double v : n) {
    const double ndot = -2.0 * kappa * (v - nbar);
    r.S.push_back(entropy(v));
    r.dQ_dt.push_back(omega * ndot);
    r.dSe_dt.push_back(omega * ndot / r.T);
    const double si = entropy_production_rate(v, nbar, kappa);
    r.dSi_dt.push_back(si);
    r.min_dSi_dt = std::min(r.min_dSi_dt, si);
    all_equal = all_equal && std::abs(v - nbar) <= 1e-12;
  }
  r.equality_case = all_equal || kappa == 0.0;
  return r;
}

double entropy_chain_residual(double n0, double nbar, double kappa, double omega, double t,
                              double h) {
  const double n = boltzmann_closed_form(n0, nbar, kappa, t);
  const double dS = (entropy(boltzmann_closed_form(n0, nbar, kappa, t + h)) -
                     entropy(boltzmann_closed_form(n0, nbar, kappa, t - h))) /
                    (2.0 * h);
  const double ndot = -2.0 * kappa * (n - nbar);
  const double dSe = omega * ndot / planck_temperature(omega, nbar);
  return dS - dSe - entropy_production_rate(n, nbar, kappa);
}

}  // namespace ntfd

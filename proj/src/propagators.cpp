// Copyright 2026 The ntfd Authors
// SPDX-License-Identifier: Apache-2.0

#include "ntfd/propagators.hpp"

#include <cmath>

namespace ntfd {

cd PropagatorPair::G_R(double t, double tp) const {
  if (t < tp) return 0.0;
  return -I * std::exp(-I * cd(omega, -kappa) * (t - tp));
}

cd PropagatorPair::G_A(double t, double tp) const {
  if (tp <= t) return 0.0;
  return I * std::exp(-I * cd(omega, kappa) * (t - tp));
}

Eigen::Matrix2cd PropagatorPair::G(double t, double tp) const {
  Eigen::Matrix2cd g = Eigen::Matrix2cd::Zero();
  g(0, 0) = G_R(t, tp);
  g(1, 1) = G_A(t, tp);
  return g;
}

PropagatorPair closed_form_propagators(double omega, double kappa) {
  if (kappa < 0.0) throw Error(Errc::negative_kappa, "kappa must be >= 0");
  return {omega, kappa};
}

Eigen::Matrix2cd sandwich(const PropagatorPair& P, double t, double tp, double n_t, double n_tp) {
  return bogoliubov_inverse(n_t).cast<cd>() * P.G(t, tp) * bogoliubov(n_tp).cast<cd>();
}

TwoPointEvaluator::TwoPointEvaluator(const LadderSet& L, const OscillatorParams& p, double n0,
                                     double grid_step, int grid_points, double dt)
    : L_(L), p_(p), n0_(n0), dt_(dt), bra_(thermal_bra(L.space)), a_(doublet_a(L)),
      abar_(doublet_abar(L)), g_(gamma_set(L, p.nu)), H_(oscillator_hamiltonian(L, p).H()) {
  const long per = std::lround(grid_step / dt);
  if (per < 1 || std::abs(static_cast<double>(per) * dt - grid_step) > 1e-12)
    throw Error(Errc::off_grid, "grid step must be a multiple of dt");
  const HatHamiltonian H = oscillator_hamiltonian(L, p);
  MasterOptions opt;
  opt.record_every = static_cast<int>(per);
  opt.keep_states = true;
  const MasterTrajectory tr =
      evolve_master(H, initial_vacuum(L.space, n0).ket, grid_step * (grid_points - 1), dt, opt);
  grid_ = tr.times;
  for (const auto& s : tr.states) states_.push_back(s.v);

  // each source vector is carried forward once and sampled at every later grid point
  for (std::size_t k = 0; k < grid_.size(); ++k)
    for (int c = 0; c < 2; ++c) {
      std::vector<Vec> f{abar_[static_cast<std::size_t>(c)].apply(states_[k])};
      std::vector<Vec> b{a_[static_cast<std::size_t>(c)].apply(states_[k])};
      for (std::size_t j = k + 1; j < grid_.size(); ++j) {
        f.push_back(evolve(f.back(), grid_step));
        b.push_back(evolve(b.back(), grid_step));
      }
      fwd_[{k, c}] = std::move(f);
      bwd_[{k, c}] = std::move(b);
    }
}

Vec TwoPointEvaluator::evolve(const Vec& v, double tau) const {
  return exp_apply(H_, cd(0.0, -tau), {L_.space, v}).v;
}

std::size_t TwoPointEvaluator::index_of(double t) const {
  for (std::size_t i = 0; i < grid_.size(); ++i)
    if (std::abs(grid_[i] - t) < 1e-9) return i;
  throw Error(Errc::off_grid, "time " + std::to_string(t) + " is not on the evaluation grid");
}

double TwoPointEvaluator::n_at(double t) const {
  return boltzmann_closed_form(n0_, p_.nbar, p_.kappa, t);
}

cd TwoPointEvaluator::value(int mu, int nu, double t, double tp) const {
  const std::size_t i = index_of(t), j = index_of(tp);
  if (i >= j) {
    const Vec& v = fwd_.at({j, nu})[i - j];
    return -I * expectation(bra_, a_[static_cast<std::size_t>(mu)], {L_.space, v});
  }
  const Vec& v = bwd_.at({i, mu})[j - i];
  return -I * expectation(bra_, abar_[static_cast<std::size_t>(nu)], {L_.space, v});
}

Eigen::Matrix2cd TwoPointEvaluator::matrix(double t, double tp) const {
  Eigen::Matrix2cd g;
  for (int mu = 0; mu < 2; ++mu)
    for (int nu = 0; nu < 2; ++nu) g(mu, nu) = value(mu, nu, t, tp);
  return g;
}

cd TwoPointEvaluator::gamma_correlator(double t, double tp, bool tilde_side) const {
  const std::size_t i = index_of(t), j = index_of(tp);
  if (i < j) throw Error(Errc::off_grid, "gamma correlator needs t >= t'");
  const double n = n_at(t);
  const ThermalOperator gamma_t = (1.0 + n) * L_.a - n * L_.atd;
  const ThermalOperator left = tilde_side ? tilde(gamma_t) : gamma_t;
  const ThermalOperator right = tilde_side ? g_.tilde_gamma_plus : g_.gamma_plus;
  const Vec v = evolve(right.apply(states_[j]), grid_[i] - grid_[j]);
  return expectation(bra_, left, {L_.space, v});
}

}  // namespace ntfd

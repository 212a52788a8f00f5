// Copyright 2026 The ntfd Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <utility>
#include <vector>

#include "ntfd/dynamics.hpp"
#include "ntfd/generators.hpp"

namespace ntfd {

struct PropagatorPair {
  double omega = 1.0;
  double kappa = 0.0;

  // theta(0) = 1 on the retarded branch, 0 on the advanced one
  cd G_R(double t, double tp) const;
  cd G_A(double t, double tp) const;
  Eigen::Matrix2cd G(double t, double tp) const;
};

PropagatorPair closed_form_propagators(double omega, double kappa);

// B^-1(n(t)) G(t,t') B(n(t'))
Eigen::Matrix2cd sandwich(const PropagatorPair& P, double t, double tp, double n_t, double n_tp);

// Time-ordered doublet correlators -i<1|T[a^mu(t) abar^nu(t')]|0> from master evolution.
class TwoPointEvaluator {
 public:
  TwoPointEvaluator(const LadderSet& L, const OscillatorParams& p, double n0, double grid_step,
                    int grid_points, double dt);

  const std::vector<double>& grid() const { return grid_; }
  // mu, nu in {0, 1}; t, tp must be grid points
  cd value(int mu, int nu, double t, double tp) const;
  Eigen::Matrix2cd matrix(double t, double tp) const;
  // <1| gamma_t V(t - t') g+ |0(t')> and its tilde partner, t >= t'
  cd gamma_correlator(double t, double tp, bool tilde_side) const;
  double n_at(double t) const;

 private:
  std::size_t index_of(double t) const;
  Vec evolve(const Vec& v, double tau) const;

  LadderSet L_;
  OscillatorParams p_;
  double n0_;
  double dt_;
  std::vector<double> grid_;
  ThermalBra bra_;
  std::vector<Vec> states_;
  Doublet a_, abar_;
  GammaSet g_;
  ThermalOperator H_;
  // cached: evolved abar^nu |0(t')> and a^mu |0(t)>, keyed by (grid index, component)
  std::map<std::pair<std::size_t, int>, std::vector<Vec>> fwd_, bwd_;
};

}  // namespace ntfd

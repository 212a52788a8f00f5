// Copyright 2026 The ntfd Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ntfd/generators.hpp"
#include "ntfd/ito.hpp"

namespace ntfd {

enum class SystemKind {
  oscillator_nonunitary,
  oscillator_unitary,
  kramers_nonunitary,
  kramers_unitary,
  averaged_reference,
};

const char* kind_name(SystemKind k);
SystemKind parse_kind(const std::string& s);
bool is_kramers(SystemKind k);

struct SystemParams {
  double omega = 1.0;
  double kappa = 0.5;
  double nbar = 1.0;
  double nu = 0.5;
  double m = 1.0;
};

struct SystemSpec {
  SystemKind kind = SystemKind::oscillator_nonunitary;
  SystemParams params;
};

// dX = D X dt + E dF over the basis (a, a~+, a+, a~, 1) or (x, p, x~, p~, 1)
struct LinearModel {
  SystemSpec spec;
  std::vector<std::string> basis;
  Eigen::MatrixXcd D;                  // 5 x 5
  Eigen::MatrixXcd E;                  // 5 x k
  std::vector<IncrementSymbol> noise;  // k symbols
  Eigen::MatrixXcd C;                  // c-number commutators [O_i, O_j]
};

LinearModel linear_model(const SystemSpec& spec);
Eigen::RowVectorXcd seed_vector(const LinearModel& m, const std::string& name);
std::vector<ThermalOperator> basis_operators(const LinearModel& m, const LadderSet& L);

struct LinearProcess {
  LinearModel model;
  std::string name;
  Eigen::RowVectorXcd seed;
  std::vector<double> times;
  Eigen::MatrixXcd coeffs;  // rows: times, cols: basis

  Eigen::RowVectorXcd coefficient_at(double t) const;
  // row over noise symbols: seed exp(D (t-s)) E
  Eigen::RowVectorXcd kernel(double t, double s) const;
};

LinearProcess evolve_process(const SystemSpec& spec, const std::string& seed_name, double T_end,
                             double dt);
LinearProcess evolve_process(const SystemSpec& spec, const Eigen::RowVectorXcd& seed,
                             const std::string& name, double T_end, double dt);

// int_0^t kP(t,s)^T kQ(t,s) ds as a k x k matrix over noise symbols
Eigen::MatrixXcd kernel_overlap(const LinearProcess& P, const LinearProcess& Q, double t);

cd equal_time_commutator(const LinearProcess& P, const LinearProcess& Q, std::size_t t_index);

struct MomentContext {
  std::vector<ThermalOperator> basis;
  ThermalBra bra;
  ThermalKet ket;
  ItoTable table;
};

MomentContext moment_context(const LinearModel& m, const LadderSet& L, const ThermalKet& ket);

cd weak_moment(const std::vector<const LinearProcess*>& products, std::size_t t_index,
               const MomentContext& ctx);

struct EnsembleStats {
  std::vector<double> times;
  Eigen::MatrixXcd mean;    // rows: times, cols: 2 components
  Eigen::MatrixXcd std_error;  // Re and Im standard errors packed as complex
  Eigen::MatrixXcd exact;   // deterministic mean ODE on the same times
  Eigen::MatrixXcd euler;   // mean of the discrete scheme, (1 + D dt)^k x0
  std::size_t ensemble = 0;
  std::uint64_t seed = 0;
};

struct VectorSde {
  Eigen::Matrix2cd D;
  IncrementSymbol noise;  // injected on component `noise_row`
  int noise_row = 0;
  bool has_noise = true;
};

VectorSde vector_sde(const SystemSpec& spec);

EnsembleStats simulate_vector_sde(const SystemSpec& spec, std::size_t ensemble, std::uint64_t seed,
                                  double T_end, double dt, const Eigen::Vector2cd& x0,
                                  int record_every, int threads = 1);

}  // namespace ntfd

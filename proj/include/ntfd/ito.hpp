// Copyright 2026 The ntfd Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "ntfd/generators.hpp"
#include "ntfd/thermal_space.hpp"

namespace ntfd {

// Base increments in this order: dB, dB+, dB~, dB~+.
enum Base : int { kB = 0, kBd = 1, kBt = 2, kBtd = 3 };

struct IncrementSymbol {
  std::string name;
  std::array<cd, 4> c{};  // coefficients over the base increments

  IncrementSymbol operator+(const IncrementSymbol& o) const;
  IncrementSymbol operator-(const IncrementSymbol& o) const;
  friend IncrementSymbol operator*(cd s, const IncrementSymbol& x);
};

struct NoiseParams {
  double nbar = 1.0;
  double kappa = 0.5;
  double nu = 0.5;
  double m = 1.0;
  double omega = 1.0;
};

IncrementSymbol base_symbol(Base b);
IncrementSymbol tilde(const IncrementSymbol& x);
IncrementSymbol adjoint(const IncrementSymbol& x);

// Names: dB dB+ dBt dBt+ dW dWt dW+o dWt+o dX dXt
IncrementSymbol make_symbol(const std::string& name, const NoiseParams& p);
const std::vector<std::string>& symbol_names();

class ItoTable {
 public:
  explicit ItoTable(double nbar);

  double nbar() const { return nbar_; }
  // coefficient of dt in x y (vacuum weak relation)
  cd product(const IncrementSymbol& x, const IncrementSymbol& y) const;
  // coefficient of dt in [x, y]
  cd commutator(const IncrementSymbol& x, const IncrementSymbol& y) const;
  const Eigen::Matrix4cd& base_products() const { return T_; }
  const Eigen::Matrix4cd& base_commutators() const { return C_; }

 private:
  double nbar_;
  Eigen::Matrix4cd T_, C_;
};

cd ito_product(const IncrementSymbol& x, const IncrementSymbol& y, const NoiseParams& p);
cd increment_commutator(const IncrementSymbol& x, const IncrementSymbol& y, const NoiseParams& p);

// Products of k increments: zero unless k == 2 (then the table value).
cd increment_monomial(const ItoTable& t, const std::vector<IncrementSymbol>& xs);

struct MartingaleTerm {
  ThermalOperator op;
  std::vector<IncrementSymbol> increments;  // must hold exactly one symbol
};
using Martingale = std::vector<MartingaleTerm>;

struct MartingaleSquare {
  ThermalOperator per_dt;  // dM dM / dt
  int half_degree = 2;     // power of dt^(1/2) carried by the product
};

MartingaleSquare martingale_square(const Martingale& M, const ItoTable& t);
// ||dM dM/dt + 2 target||_max on the guarded subspace
double fdt_residual(const Martingale& M, const ThermalOperator& target, const ItoTable& t);

// Stratonovich drift generator -> Ito generator, and the inverse.
ThermalOperator strat_to_ito(const ThermalOperator& drift, const Martingale& M, const ItoTable& t);
ThermalOperator ito_to_strat(const ThermalOperator& drift, const Martingale& M, const ItoTable& t);

NoiseParams noise_params(const OscillatorParams& p);
NoiseParams noise_params(const KramersParams& p);

Martingale oscillator_martingale(const LadderSet& L, const OscillatorParams& p);
Martingale oscillator_unitary_martingale(const LadderSet& L, const OscillatorParams& p);
Martingale kramers_martingale(const LadderSet& L, const KramersParams& p);
Martingale kramers_unitary_martingale(const LadderSet& L, const KramersParams& p);

using Engine = std::mt19937_64;
Engine make_engine(std::uint64_t seed, std::uint64_t stream);

// Classical Gaussian realization of a pairwise commutative increment set.
class IncrementSampler {
 public:
  IncrementSampler(std::vector<IncrementSymbol> symbols, const ItoTable& t, double dt);

  std::size_t size() const { return symbols_.size(); }
  // Hermitian second moments E[F F^H]/dt and E[F F^T]/dt after symmetrization
  const Eigen::MatrixXcd& hermitian_moments() const { return C_; }
  const Eigen::MatrixXcd& plain_moments() const { return P_; }
  void draw(Engine& g, cd* out) const;

 private:
  std::vector<IncrementSymbol> symbols_;
  Eigen::MatrixXcd C_, P_;
  Eigen::MatrixXd factor_;  // 2k x 2k, maps standard normals to (Re, Im)
};

// steps x k matrix of draws; deterministic in (seed, stream)
Eigen::MatrixXcd sample_increments(const std::vector<IncrementSymbol>& symbols, const ItoTable& t,
                                   double dt, std::size_t steps, std::uint64_t seed,
                                   std::uint64_t stream = 0);

}  // namespace ntfd

// Copyright 2026 The ntfd Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <unsupported/Eigen/KroneckerProduct>

#include "ntfd/ito.hpp"

namespace ntfd::testing {

// Explicit noise space: modes C and C~, occupation cutoff 2 each, vacuum |00>.
// Thermal increments are built as dB = dC + n dC~+, dB+ = (1+n) dC+ + dC~,
// dB~ = n dC+ + dC~, dB~+ = dC + (1+n) dC~+.
struct NoiseOracle {
  Eigen::MatrixXcd base[4];
  Eigen::VectorXcd vac;

  explicit NoiseOracle(double n) {
    Eigen::MatrixXcd c1 = Eigen::MatrixXcd::Zero(3, 3);
    c1(0, 1) = 1.0;
    c1(1, 2) = std::sqrt(2.0);
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(3, 3);
    const Eigen::MatrixXcd c = Eigen::kroneckerProduct(id, c1).eval();
    const Eigen::MatrixXcd ct = Eigen::kroneckerProduct(c1, id).eval();
    const Eigen::MatrixXcd cd_ = c.adjoint(), ctd = ct.adjoint();
    base[kB] = c + n * ctd;
    base[kBd] = (1.0 + n) * cd_ + ct;
    base[kBt] = n * cd_ + ct;
    base[kBtd] = c + (1.0 + n) * ctd;
    vac = Eigen::VectorXcd::Zero(9);
    vac[0] = 1.0;
  }

  Eigen::MatrixXcd op(const IncrementSymbol& x) const {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(9, 9);
    for (int b = 0; b < 4; ++b) m += x.c[static_cast<std::size_t>(b)] * base[b];
    return m;
  }
  cd product(const IncrementSymbol& x, const IncrementSymbol& y) const {
    return vac.dot(op(x) * op(y) * vac);
  }
  cd commutator(const IncrementSymbol& x, const IncrementSymbol& y) const {
    return vac.dot((op(x) * op(y) - op(y) * op(x)) * vac);
  }
};

}  // namespace ntfd::testing

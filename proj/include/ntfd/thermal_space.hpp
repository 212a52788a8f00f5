// Copyright 2026 The ntfd Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <complex>

#include "ntfd/error.hpp"

namespace ntfd {

using cd = std::complex<double>;
using SpMat = Eigen::SparseMatrix<cd, Eigen::RowMajor, int>;
using Vec = Eigen::VectorXcd;

inline constexpr cd I{0.0, 1.0};

// Doubled Fock space |n> (x) |n~> truncated at occupation N in each factor.
// Basis index = n + (N+1) * n~ (non-tilde index fastest).
struct TruncatedFockSpace {
  int N = 30;
  int G = 3;

  int d() const { return N + 1; }
  int dim() const { return d() * d(); }
  int index(int n, int nt) const { return n + d() * nt; }
  int occ(int i) const { return i % d(); }
  int occ_tilde(int i) const { return i / d(); }
  // occupation <= N-G-1 in each factor
  bool guarded(int i) const { return occ(i) <= N - G - 1 && occ_tilde(i) <= N - G - 1; }
  bool operator==(const TruncatedFockSpace& o) const { return N == o.N && G == o.G; }
};

class ThermalOperator {
 public:
  ThermalOperator() = default;
  ThermalOperator(TruncatedFockSpace s, SpMat m) : space_(s), m_(std::move(m)) {
    m_.makeCompressed();
  }

  static ThermalOperator identity(TruncatedFockSpace s);
  static ThermalOperator zero(TruncatedFockSpace s);

  const TruncatedFockSpace& space() const { return space_; }
  const SpMat& matrix() const { return m_; }
  Eigen::MatrixXcd dense() const { return Eigen::MatrixXcd(m_); }

  ThermalOperator adjoint() const;

  friend ThermalOperator operator+(const ThermalOperator& A, const ThermalOperator& B);
  friend ThermalOperator operator-(const ThermalOperator& A, const ThermalOperator& B);
  friend ThermalOperator operator*(const ThermalOperator& A, const ThermalOperator& B);
  friend ThermalOperator operator*(cd c, const ThermalOperator& A);
  friend ThermalOperator operator*(double c, const ThermalOperator& A) { return cd(c) * A; }
  ThermalOperator operator-() const { return cd(-1.0) * *this; }
  ThermalOperator& operator+=(const ThermalOperator& B) { return *this = *this + B; }

  Vec apply(const Vec& v) const;

 private:
  TruncatedFockSpace space_{};
  SpMat m_;
};

// Row vector <1| or column vector |0>; the bilinear pairing <bra|ket> = sum bra_i ket_i.
struct ThermalKet {
  TruncatedFockSpace space;
  Vec v;
};
struct ThermalBra {
  TruncatedFockSpace space;
  Vec v;
};

struct LadderSet {
  TruncatedFockSpace space;
  ThermalOperator a, ad, at, atd, id;
};

LadderSet build_space(int N, int G);

ThermalOperator tilde(const ThermalOperator& A);
// (c A)~ = c* A~
ThermalOperator tilde_conjugate(const ThermalOperator& A, cd c = 1.0);
ThermalBra tilde(const ThermalBra& b);
ThermalKet tilde(const ThermalKet& k);

ThermalOperator commutator(const ThermalOperator& A, const ThermalOperator& B);

ThermalBra thermal_bra(const TruncatedFockSpace& s);

struct VacuumResult {
  ThermalKet ket;
  double f = 0.0;
  bool truncation_warning = false;
};
VacuumResult initial_vacuum(const TruncatedFockSpace& s, double n0);

cd expectation(const ThermalBra& bra, const ThermalOperator& A, const ThermalKet& ket);
cd overlap(const ThermalBra& bra, const ThermalKet& ket);
ThermalBra left_apply(const ThermalBra& bra, const ThermalOperator& A);

// max |A_ij| over all entries
double max_abs(const ThermalOperator& A);
// max |A_ij| over columns j in the guarded subspace, i.e. ||A P||_max
double guarded_max_abs(const ThermalOperator& A);
// max |b_j| over guarded j
double guarded_max_abs(const ThermalBra& b);
// ||<1| A P||_max
double bra_annihilation_residual(const ThermalOperator& A);

// Ladder-built Kramers coordinates x = (a+a^+)/sqrt(2 m w), p = i sqrt(m w/2)(a^+ - a)
ThermalOperator position(const LadderSet& L, double m, double omega);
ThermalOperator momentum(const LadderSet& L, double m, double omega);

// Smallest cutoff N with (n/(1+n))^N <= tol, floored at nmin.
int required_cutoff(double nmax, double tol, int nmin);

// Weight of the ket on states with an occupation above N-G-1.
double top_weight(const ThermalKet& k);

}  // namespace ntfd

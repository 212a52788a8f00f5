// Copyright 2026 The ntfd Authors
// SPDX-License-Identifier: Apache-2.0

#include "ntfd/thermal_space.hpp"

#include <cmath>
#include <vector>

#include "ntfd/kernels.hpp"

namespace ntfd {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::invalid_cutoff: return "invalid-cutoff";
    case Errc::negative_occupation: return "negative-occupation";
    case Errc::negative_kappa: return "negative-kappa";
    case Errc::negative_nbar: return "negative-nbar";
    case Errc::nonpositive_parameter: return "nonpositive-parameter";
    case Errc::nu_out_of_range: return "nu-out-of-range";
    case Errc::shape_mismatch: return "shape-mismatch";
    case Errc::unknown_symbol: return "unknown-symbol";
    case Errc::unknown_kind: return "unknown-kind";
    case Errc::non_commutative_set: return "non-commutative-set";
    case Errc::non_realizable_moments: return "non-realizable-moments";
    case Errc::nonlinear_martingale: return "nonlinear-martingale";
    case Errc::unresolvable_product: return "unresolvable-product";
    case Errc::step_too_large: return "step-too-large";
    case Errc::truncation_overflow: return "truncation-overflow";
    case Errc::grid_mismatch: return "grid-mismatch";
    case Errc::off_grid: return "off-grid";
    case Errc::parameter_mismatch: return "parameter-mismatch";
    case Errc::config: return "config";
    case Errc::io: return "io";
  }
  return "unknown";
}

namespace {

void same_space(const TruncatedFockSpace& a, const TruncatedFockSpace& b) {
  if (!(a == b)) throw Error(Errc::shape_mismatch, "operators live on different truncated spaces");
}

SpMat from_triplets(int dim, const std::vector<Eigen::Triplet<cd>>& t) {
  SpMat m(dim, dim);
  m.setFromTriplets(t.begin(), t.end());
  m.makeCompressed();
  return m;
}

}  // namespace

ThermalOperator ThermalOperator::identity(TruncatedFockSpace s) {
  SpMat m(s.dim(), s.dim());
  m.setIdentity();
  return {s, m};
}

ThermalOperator ThermalOperator::zero(TruncatedFockSpace s) { return {s, SpMat(s.dim(), s.dim())}; }

ThermalOperator ThermalOperator::adjoint() const { return {space_, SpMat(m_.adjoint())}; }

ThermalOperator operator+(const ThermalOperator& A, const ThermalOperator& B) {
  same_space(A.space_, B.space_);
  return {A.space_, SpMat(A.m_ + B.m_)};
}

ThermalOperator operator-(const ThermalOperator& A, const ThermalOperator& B) {
  same_space(A.space_, B.space_);
  return {A.space_, SpMat(A.m_ - B.m_)};
}

ThermalOperator operator*(const ThermalOperator& A, const ThermalOperator& B) {
  same_space(A.space_, B.space_);
  return {A.space_, SpMat(A.m_ * B.m_)};
}

ThermalOperator operator*(cd c, const ThermalOperator& A) { return {A.space_, SpMat(c * A.m_)}; }

Vec ThermalOperator::apply(const Vec& v) const {
  if (v.size() != m_.cols()) throw Error(Errc::shape_mismatch, "vector length does not match operator");
  Vec out(m_.rows());
  kernels::active().csr_matvec(static_cast<std::size_t>(m_.rows()), m_.outerIndexPtr(),
                               m_.innerIndexPtr(), m_.valuePtr(), v.data(), out.data());
  return out;
}

LadderSet build_space(int N, int G) {
  if (N < 2 || G < 0 || G >= N)
    throw Error(Errc::invalid_cutoff, "need N >= 2 and 0 <= G < N, got N=" + std::to_string(N) +
                                          " G=" + std::to_string(G));
  TruncatedFockSpace s{N, G};
  const int d = s.d();
  std::vector<Eigen::Triplet<cd>> ta, tat;
  for (int nt = 0; nt < d; ++nt) {
    for (int n = 1; n < d; ++n) {
      const double r = std::sqrt(static_cast<double>(n));
      ta.emplace_back(s.index(n - 1, nt), s.index(n, nt), r);
      tat.emplace_back(s.index(nt, n - 1), s.index(nt, n), r);
    }
  }
  ThermalOperator a(s, from_triplets(s.dim(), ta));
  ThermalOperator at(s, from_triplets(s.dim(), tat));
  return {s, a, a.adjoint(), at, at.adjoint(), ThermalOperator::identity(s)};
}

ThermalOperator tilde(const ThermalOperator& A) {
  const TruncatedFockSpace& s = A.space();
  const SpMat& m = A.matrix();
  auto swap = [&](int i) { return s.index(s.occ_tilde(i), s.occ(i)); };
  std::vector<Eigen::Triplet<cd>> t;
  t.reserve(static_cast<std::size_t>(m.nonZeros()));
  for (int r = 0; r < m.outerSize(); ++r)
    for (SpMat::InnerIterator it(m, r); it; ++it)
      t.emplace_back(swap(static_cast<int>(it.row())), swap(static_cast<int>(it.col())),
                     std::conj(it.value()));
  return {s, from_triplets(s.dim(), t)};
}

ThermalOperator tilde_conjugate(const ThermalOperator& A, cd c) { return std::conj(c) * tilde(A); }

namespace {
Vec tilde_vec(const TruncatedFockSpace& s, const Vec& v) {
  Vec out(v.size());
  for (int i = 0; i < s.dim(); ++i) out[s.index(s.occ_tilde(i), s.occ(i))] = std::conj(v[i]);
  return out;
}
}  // namespace

ThermalBra tilde(const ThermalBra& b) { return {b.space, tilde_vec(b.space, b.v)}; }
ThermalKet tilde(const ThermalKet& k) { return {k.space, tilde_vec(k.space, k.v)}; }

ThermalOperator commutator(const ThermalOperator& A, const ThermalOperator& B) {
  return A * B - B * A;
}

ThermalBra thermal_bra(const TruncatedFockSpace& s) {
  Vec v = Vec::Zero(s.dim());
  for (int n = 0; n < s.d(); ++n) v[s.index(n, n)] = 1.0;
  return {s, v};
}

VacuumResult initial_vacuum(const TruncatedFockSpace& s, double n0) {
  if (!(n0 >= 0.0)) throw Error(Errc::negative_occupation, "n0 must be >= 0");
  const double f = n0 / (1.0 + n0);
  Vec v = Vec::Zero(s.dim());
  double fn = 1.0, norm = 0.0;
  for (int n = 0; n < s.d(); ++n) {
    v[s.index(n, n)] = fn;
    norm += fn;
    fn *= f;
  }
  v /= norm;
  return {{s, v}, f, std::pow(f, s.N) > 1e-10};
}

cd overlap(const ThermalBra& bra, const ThermalKet& ket) {
  same_space(bra.space, ket.space);
  return kernels::active().dotu(static_cast<std::size_t>(bra.v.size()), bra.v.data(), ket.v.data());
}

cd expectation(const ThermalBra& bra, const ThermalOperator& A, const ThermalKet& ket) {
  same_space(bra.space, A.space());
  return overlap(bra, {ket.space, A.apply(ket.v)});
}

ThermalBra left_apply(const ThermalBra& bra, const ThermalOperator& A) {
  same_space(bra.space, A.space());
  return {bra.space, Vec(A.matrix().transpose() * bra.v)};
}

double max_abs(const ThermalOperator& A) {
  double m = 0.0;
  const SpMat& s = A.matrix();
  for (int r = 0; r < s.outerSize(); ++r)
    for (SpMat::InnerIterator it(s, r); it; ++it) m = std::max(m, std::abs(it.value()));
  return m;
}

double guarded_max_abs(const ThermalOperator& A) {
  double m = 0.0;
  const SpMat& s = A.matrix();
  for (int r = 0; r < s.outerSize(); ++r)
    for (SpMat::InnerIterator it(s, r); it; ++it)
      if (A.space().guarded(static_cast<int>(it.col()))) m = std::max(m, std::abs(it.value()));
  return m;
}

double guarded_max_abs(const ThermalBra& b) {
  double m = 0.0;
  for (int i = 0; i < b.space.dim(); ++i)
    if (b.space.guarded(i)) m = std::max(m, std::abs(b.v[i]));
  return m;
}

double bra_annihilation_residual(const ThermalOperator& A) {
  return guarded_max_abs(left_apply(thermal_bra(A.space()), A));
}

ThermalOperator position(const LadderSet& L, double m, double omega) {
  return (1.0 / std::sqrt(2.0 * m * omega)) * (L.a + L.ad);
}

ThermalOperator momentum(const LadderSet& L, double m, double omega) {
  return (I * std::sqrt(m * omega / 2.0)) * (L.ad - L.a);
}

int required_cutoff(double nmax, double tol, int nmin) {
  if (nmax <= 0.0) return nmin;
  const double f = nmax / (1.0 + nmax);
  const int n = static_cast<int>(std::ceil(std::log(tol) / std::log(f)));
  return std::max(nmin, n);
}

double top_weight(const ThermalKet& k) {
  double w = 0.0;
  for (int i = 0; i < k.space.dim(); ++i)
    if (!k.space.guarded(i)) w += std::abs(k.v[i]);
  return w;
}

}  // namespace ntfd

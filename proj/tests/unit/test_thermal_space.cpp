// Copyright 2026 The ntfd Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <limits>
#include <random>

#include "doctest.h"
#include "ntfd/thermal_space.hpp"

using namespace ntfd;

namespace {

Errc code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an ntfd::Error");
  return Errc::io;
}

double guarded_identity_gap(const ThermalOperator& A, cd c) {
  return guarded_max_abs(A - c * ThermalOperator::identity(A.space()));
}

}  // namespace

TEST_CASE("cutoff validation") {
  CHECK(code_of([] { build_space(1, 0); }) == Errc::invalid_cutoff);
  CHECK(code_of([] { build_space(5, 5); }) == Errc::invalid_cutoff);
  CHECK(code_of([] { build_space(5, -1); }) == Errc::invalid_cutoff);
  CHECK_NOTHROW(build_space(2, 0));
}

TEST_CASE("canonical commutators on the guarded subspace") {
  {
    const LadderSet L = build_space(3, 1);
    CHECK(guarded_identity_gap(commutator(L.a, L.ad), 1.0) <= 2.0 * std::numeric_limits<double>::epsilon());
  }
  {
    const LadderSet L = build_space(3, 0);
    CHECK(max_abs(commutator(L.a, L.atd)) == 0.0);
  }
  const LadderSet L = build_space(20, 2);
  CHECK(guarded_identity_gap(commutator(L.a, L.ad), 1.0) < 1e-14);
  CHECK(guarded_identity_gap(commutator(L.at, L.atd), 1.0) < 1e-14);
  CHECK(max_abs(commutator(L.a, L.a)) == 0.0);
}

TEST_CASE("truncation failure of [a, a+] stays in the top level") {
  for (int N : {4, 9, 16}) {
    const LadderSet L = build_space(N, 1);
    const ThermalOperator gap = commutator(L.a, L.ad) - ThermalOperator::identity(L.space);
    CHECK(max_abs(gap) > 0.5);
    const SpMat& m = gap.matrix();
    for (int r = 0; r < m.outerSize(); ++r)
      for (SpMat::InnerIterator it(m, r); it; ++it)
        if (std::abs(it.value()) > 1e-12) CHECK(L.space.occ(static_cast<int>(it.col())) == N);
  }
}

TEST_CASE("tilde and non-tilde operators commute exactly") {
  const LadderSet L = build_space(8, 2);
  for (const auto* A : {&L.a, &L.ad})
    for (const auto* B : {&L.at, &L.atd}) CHECK(max_abs(commutator(*A, *B)) == 0.0);
}

TEST_CASE("tilde conjugation") {
  const LadderSet L = build_space(6, 1);
  CHECK(max_abs(tilde(L.a) - L.at) == 0.0);
  CHECK(max_abs(tilde(L.at) - L.a) == 0.0);
  CHECK(max_abs(tilde(L.ad) - L.atd) == 0.0);
  CHECK(max_abs(tilde(I * L.id) - (-I) * L.id) == 0.0);
  CHECK(max_abs(tilde_conjugate(L.a, cd(2.0, 3.0)) - cd(2.0, -3.0) * L.at) == 0.0);

  // involution on random polynomial operators
  std::mt19937_64 g(11);
  std::normal_distribution<double> n;
  const ThermalOperator* gens[] = {&L.a, &L.ad, &L.at, &L.atd};
  for (int trial = 0; trial < 20; ++trial) {
    ThermalOperator A = cd(n(g), n(g)) * L.id;
    for (int k = 0; k < 3; ++k) A = A * (cd(n(g), n(g)) * *gens[g() % 4] + cd(n(g), n(g)) * L.id);
    CHECK(max_abs(tilde(tilde(A)) - A) == 0.0);
  }
}

TEST_CASE("position and momentum") {
  const LadderSet L = build_space(30, 3);
  for (double m : {1.0, 2.5})
    for (double w : {1.0, 0.3}) {
      const ThermalOperator x = position(L, m, w), p = momentum(L, m, w);
      CHECK(guarded_identity_gap(commutator(x, p), I) < 1e-12);
      CHECK(max_abs(x - x.adjoint()) < 1e-15);
      CHECK(max_abs(p - p.adjoint()) < 1e-15);
    }
}

TEST_CASE("thermal bra") {
  {
    // N=1 by direct enumeration: ordering (0,0), (1,0), (0,1), (1,1) with n fastest
    const TruncatedFockSpace s{1, 0};
    const ThermalBra b = thermal_bra(s);
    REQUIRE(b.v.size() == 4);
    CHECK(b.v[0] == cd(1.0));
    CHECK(b.v[1] == cd(0.0));
    CHECK(b.v[2] == cd(0.0));
    CHECK(b.v[3] == cd(1.0));
  }
  const LadderSet L = build_space(2, 0);
  const ThermalBra b = thermal_bra(L.space);
  for (int i = 0; i < L.space.dim(); ++i)
    CHECK(b.v[i] == cd(L.space.occ(i) == L.space.occ_tilde(i) ? 1.0 : 0.0));
  CHECK((tilde(b).v - b.v).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("thermal state condition for every cutoff") {
  for (int N = 4; N <= 14; ++N) {
    const LadderSet L = build_space(N, 1);
    const ThermalBra one = thermal_bra(L.space);
    CHECK(guarded_max_abs(left_apply(one, L.at - L.ad)) < 1e-14);
    CHECK(guarded_max_abs(left_apply(one, L.atd - L.a)) < 1e-14);
    CHECK(bra_annihilation_residual(L.at - L.ad) < 1e-14);
  }
}

TEST_CASE("initial vacuum") {
  const LadderSet L = build_space(30, 3);
  CHECK(initial_vacuum(L.space, 1.0).f == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(code_of([&] { initial_vacuum(L.space, -0.1); }) == Errc::negative_occupation);

  const ThermalKet vac = initial_vacuum(L.space, 0.0).ket;
  CHECK(L.a.apply(vac.v).cwiseAbs().maxCoeff() == 0.0);
  const ThermalBra one = thermal_bra(L.space);
  CHECK(std::abs(expectation(one, L.ad * L.a, vac)) == 0.0);

  // geometric-series oracle for <n>
  const double n0 = 0.5, f = n0 / (1.0 + n0);
  double num = 0.0, den = 0.0;
  for (int k = 0; k <= 30; ++k) {
    num += k * std::pow(f, k);
    den += std::pow(f, k);
  }
  const ThermalKet k05 = initial_vacuum(L.space, n0).ket;
  CHECK(std::abs(expectation(one, L.ad * L.a, k05) - num / den) < 1e-12);
  CHECK(std::abs(expectation(one, L.ad * L.a, k05) - 0.5) < 1e-10);

  CHECK(std::abs(expectation(one, L.id, k05) - 1.0) < 1e-15);
  const LadderSet L40 = build_space(40, 3);
  CHECK(std::abs(expectation(thermal_bra(L40.space), L40.a * L40.at, initial_vacuum(L40.space, 1.0).ket) - 1.0) <
        1e-10);

  CHECK(initial_vacuum(build_space(10, 1).space, 2.0).truncation_warning);
  CHECK_FALSE(initial_vacuum(L.space, 0.5).truncation_warning);
}

TEST_CASE("normalization across occupations") {
  for (int k = 0; k <= 8; ++k) {
    const double n0 = 0.25 * k;
    const LadderSet L = build_space(required_cutoff(n0, 1e-12, 4) + 1, 1);
    const ThermalKet ket = initial_vacuum(L.space, n0).ket;
    CHECK(std::abs(overlap(thermal_bra(L.space), ket) - 1.0) < 1e-13);
    CHECK(std::abs(expectation(thermal_bra(L.space), L.ad * L.a, ket) - n0) < 1e-10);
  }
}

TEST_CASE("shape checks") {
  const LadderSet A = build_space(4, 1), B = build_space(5, 1);
  CHECK(code_of([&] { (void)(A.a + B.a); }) == Errc::shape_mismatch);
  CHECK(code_of([&] { (void)commutator(A.a, B.a); }) == Errc::shape_mismatch);
  CHECK(code_of([&] { (void)expectation(thermal_bra(A.space), A.a, initial_vacuum(B.space, 0.0).ket); }) ==
        Errc::shape_mismatch);
}

TEST_CASE("required cutoff") {
  CHECK(required_cutoff(0.0, 1e-10, 7) == 7);
  const int N = required_cutoff(1.0, 1e-10, 2);
  CHECK(std::pow(0.5, N) <= 1e-10);
  CHECK(std::pow(0.5, N - 1) > 1e-10);
}

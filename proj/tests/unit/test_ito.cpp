// Copyright 2026 The ntfd Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <random>

#include "common/noise_oracle.hpp"
#include "doctest.h"
#include "ntfd/generators.hpp"
#include "ntfd/ito.hpp"

using namespace ntfd;
using ntfd::testing::NoiseOracle;

namespace {

std::vector<IncrementSymbol> all_symbols(const NoiseParams& p) {
  std::vector<IncrementSymbol> s;
  for (const auto& n : symbol_names()) s.push_back(make_symbol(n, p));
  return s;
}

Errc code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an ntfd::Error");
  return Errc::io;
}

}  // namespace

TEST_CASE("table entries match the explicit noise-mode oracle") {
  for (double n : {0.0, 0.5, 1.0, 2.0, 3.7}) {
    const ItoTable table(n);
    const NoiseOracle oracle(n);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        const IncrementSymbol x = base_symbol(static_cast<Base>(i)), y = base_symbol(static_cast<Base>(j));
        CHECK(std::abs(table.product(x, y) - oracle.product(x, y)) < 1e-12);
        CHECK(std::abs(table.commutator(x, y) - oracle.commutator(x, y)) < 1e-12);
      }
    const NoiseParams p{n, 0.7, 0.3, 1.2, 0.9};
    for (const auto& x : all_symbols(p))
      for (const auto& y : all_symbols(p)) {
        CHECK(std::abs(ito_product(x, y, p) - oracle.product(x, y)) < 1e-12);
        CHECK(std::abs(increment_commutator(x, y, p) - oracle.commutator(x, y)) < 1e-12);
      }
  }
}

TEST_CASE("worked table values") {
  const NoiseParams p{1.0, 0.5, 0.5, 1.0, 1.0};
  auto s = [&](const char* n) { return make_symbol(n, p); };
  CHECK(ito_product(s("dB"), s("dB+"), p) == cd(2.0));
  CHECK(ito_product(s("dB"), s("dB"), p) == cd(0.0));
  CHECK(std::abs(ito_product(s("dW"), s("dWt"), p) - 1.5) < 1e-14);
  CHECK(increment_commutator(s("dB"), s("dB+"), p) == cd(1.0));
  CHECK(std::abs(increment_commutator(s("dW"), s("dWt"), p)) < 1e-15);
  for (double nu : {0.0, 0.25, 0.5, 1.0}) {
    const NoiseParams q{1.0, 0.5, nu, 1.0, 1.0};
    CHECK(std::abs(increment_commutator(make_symbol("dW", q), make_symbol("dW+o", q), q) - 2.0 * 0.5) < 1e-14);
  }
  CHECK(code_of([&] { make_symbol("dQ", p); }) == Errc::unknown_symbol);
}

TEST_CASE("bilinearity and tilde consistency") {
  std::mt19937_64 g(5);
  std::normal_distribution<double> n;
  auto rnd = [&] {
    IncrementSymbol s;
    for (auto& c : s.c) c = cd(n(g), n(g));
    return s;
  };
  const ItoTable t(1.3);
  for (int trial = 0; trial < 50; ++trial) {
    const IncrementSymbol x = rnd(), y = rnd(), z = rnd();
    const cd a(n(g), n(g)), b(n(g), n(g));
    const cd lhs = t.product(a * x + b * y, z);
    const cd rhs = a * t.product(x, z) + b * t.product(y, z);
    CHECK(std::abs(lhs - rhs) <= 1e-13 * (1.0 + std::abs(rhs)));
    CHECK(std::abs(t.product(tilde(x), tilde(y)) - std::conj(t.product(x, y))) < 1e-13);
    CHECK(std::abs(t.commutator(x, y) + t.commutator(y, x)) < 1e-13);
  }
}

TEST_CASE("higher products vanish") {
  const ItoTable t(1.0);
  const IncrementSymbol B = base_symbol(kB), Bd = base_symbol(kBd);
  CHECK(increment_monomial(t, {B, Bd}) == t.product(B, Bd));
  CHECK(increment_monomial(t, {B, Bd, B}) == cd(0.0));
  CHECK(increment_monomial(t, {B, Bd, B, Bd}) == cd(0.0));
  CHECK(increment_monomial(t, {B}) == cd(0.0));
}

TEST_CASE("fluctuation-dissipation relations") {
  const LadderSet L = build_space(20, 3);
  const OscillatorParams op{1.0, 0.5, 1.0, 0.5};
  const HatHamiltonian H = oscillator_hamiltonian(L, op);
  const ItoTable t(op.nbar);
  CHECK(fdt_residual(oscillator_martingale(L, op), H.Pi_D, t) < 1e-12);
  CHECK(fdt_residual(oscillator_unitary_martingale(L, op), H.Pi(), t) < 1e-12);
  CHECK(martingale_square(oscillator_martingale(L, op), t).half_degree == 2);

  const KramersParams kp{1.0, 1.0, 0.2, 0.5};
  const ItoTable tk(kp.nbar);
  CHECK(fdt_residual(kramers_martingale(L, kp), kramers_hamiltonian(L, kp).Pi_D, tk) < 1e-12);
  const UnitaryKramers U = unitary_kramers_generator(L, kp);
  CHECK(fdt_residual(kramers_unitary_martingale(L, kp), U.generator.Pi_D, tk) < 1e-12);
  // explicit form -(k m w / 8)(1 + 2n)(x - x~)^2
  const ThermalOperator dx = position(L, 1.0, 1.0) - tilde(position(L, 1.0, 1.0));
  CHECK(guarded_max_abs(U.generator.Pi_D - (-(0.2 / 8.0) * 2.0) * (dx * dx)) < 1e-13);

  const OscillatorParams off{1.0, 0.0, 1.0, 0.5};
  CHECK(max_abs(martingale_square(oscillator_martingale(L, off), t).per_dt) == 0.0);

  // random parameters
  std::mt19937_64 g(17);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  for (int trial = 0; trial < 6; ++trial) {
    const OscillatorParams p{0.3 + u(g), u(g), u(g), 0.5 * u(g)};
    const HatHamiltonian Hp = oscillator_hamiltonian(L, p);
    const ItoTable tp(p.nbar);
    CHECK(fdt_residual(oscillator_martingale(L, p), Hp.Pi_D, tp) < 1e-12);
    CHECK(fdt_residual(oscillator_unitary_martingale(L, p), Hp.Pi(), tp) < 1e-12);
  }
}

TEST_CASE("Ito and Stratonovich conversions") {
  const LadderSet L = build_space(16, 3);
  const OscillatorParams op{1.0, 0.5, 1.0, 0.5};
  const HatHamiltonian H = oscillator_hamiltonian(L, op);
  const ItoTable t(op.nbar);

  CHECK(max_abs(strat_to_ito(H.H_S, {}, t) - H.H_S) == 0.0);

  const Martingale MU = oscillator_unitary_martingale(L, op);
  CHECK(guarded_max_abs(strat_to_ito(H.H_S, MU, t) - H.H()) < 1e-12);

  // the diffusive part is absorbed: Stratonovich form keeps only the relaxational part
  const Martingale M = oscillator_martingale(L, op);
  CHECK(guarded_max_abs(ito_to_strat(H.H(), M, t) - (H.H_S + I * H.Pi_R)) < 1e-12);

  const KramersParams kp{1.0, 1.0, 0.2, 0.5};
  const ItoTable tk(kp.nbar);
  const HatHamiltonian K = kramers_hamiltonian(L, kp);
  const UnitaryKramers U = unitary_kramers_generator(L, kp);
  const std::pair<ThermalOperator, Martingale> systems[] = {
      {H.H(), M}, {H.H_S, MU}, {K.H(), kramers_martingale(L, kp)}, {K.H_S, kramers_unitary_martingale(L, kp)}};
  int i = 0;
  for (const auto& [G, MM] : systems) {
    const ItoTable& tt = i++ < 2 ? t : tk;
    CHECK(guarded_max_abs(ito_to_strat(strat_to_ito(G, MM, tt), MM, tt) - G) < 1e-12);
    CHECK(guarded_max_abs(strat_to_ito(ito_to_strat(G, MM, tt), MM, tt) - G) < 1e-12);
  }
  CHECK(guarded_max_abs(strat_to_ito(K.H_S, kramers_unitary_martingale(L, kp), tk) - U.generator.H()) < 1e-12);

  Martingale bad{{L.a, {make_symbol("dB", {}), make_symbol("dB+", {})}}};
  CHECK(code_of([&] { strat_to_ito(H.H_S, bad, t); }) == Errc::nonlinear_martingale);
}

TEST_CASE("classical sampling") {
  const NoiseParams p0{0.0, 0.5, 0.5, 1.0, 1.0};
  const double dt = 1e-3;
  {
    IncrementSampler s({make_symbol("dX", p0)}, ItoTable(0.0), dt);
    CHECK(std::abs(s.plain_moments()(0, 0) - 0.5 / 4.0) < 1e-15);
    CHECK(std::abs(s.hermitian_moments()(0, 0) - 0.5 / 4.0) < 1e-15);
  }
  // 1e6 draws at nbar = 1, seed 42
  const NoiseParams p1{1.0, 0.5, 0.5, 1.0, 1.0};
  const Eigen::MatrixXcd d = sample_increments({make_symbol("dX", p1)}, ItoTable(1.0), dt, 1000000, 42);
  double sum = 0.0, sq = 0.0, im = 0.0;
  for (Eigen::Index i = 0; i < d.rows(); ++i) {
    sum += d(i, 0).real();
    sq += std::norm(d(i, 0));
    im = std::max(im, std::abs(d(i, 0).imag()));
  }
  const double target = 0.5 / 4.0 * 3.0;
  CHECK(std::abs(sq / d.rows() / dt / target - 1.0) < 5e-3);
  CHECK(std::abs(sum / d.rows()) < 3.0 * std::sqrt(target * dt / d.rows()));
  CHECK(im < 1e-12);

  // circular noise for dB: E[dB^2] = 0, E|dB|^2 = (n + 1/2) dt
  const Eigen::MatrixXcd b = sample_increments({make_symbol("dB", p1)}, ItoTable(1.0), dt, 200000, 3);
  cd m2 = 0.0;
  double a2 = 0.0;
  for (Eigen::Index i = 0; i < b.rows(); ++i) {
    m2 += b(i, 0) * b(i, 0);
    a2 += std::norm(b(i, 0));
  }
  CHECK(std::abs(a2 / b.rows() / dt - 1.5) < 0.02);
  CHECK(std::abs(m2 / static_cast<double>(b.rows()) / dt) < 0.02);

  // fixed seed and stream reproduce the same draws
  const Eigen::MatrixXcd r1 = sample_increments({make_symbol("dW", p1)}, ItoTable(1.0), dt, 100, 9, 4);
  const Eigen::MatrixXcd r2 = sample_increments({make_symbol("dW", p1)}, ItoTable(1.0), dt, 100, 9, 4);
  const Eigen::MatrixXcd r3 = sample_increments({make_symbol("dW", p1)}, ItoTable(1.0), dt, 100, 9, 5);
  CHECK(r1 == r2);
  CHECK(r1 != r3);

  CHECK(code_of([&] {
          IncrementSampler({make_symbol("dB", p1), make_symbol("dB+", p1)}, ItoTable(1.0), dt);
        }) == Errc::non_commutative_set);
}

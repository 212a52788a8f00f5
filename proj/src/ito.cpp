// Copyright 2026 The ntfd Authors
// SPDX-License-Identifier: Apache-2.0

#include "ntfd/ito.hpp"

#include <cmath>
#include <sstream>

namespace ntfd {

IncrementSymbol IncrementSymbol::operator+(const IncrementSymbol& o) const {
  IncrementSymbol r{name + "+" + o.name, {}};
  for (int i = 0; i < 4; ++i) r.c[i] = c[i] + o.c[i];
  return r;
}

IncrementSymbol IncrementSymbol::operator-(const IncrementSymbol& o) const {
  IncrementSymbol r{name + "-" + o.name, {}};
  for (int i = 0; i < 4; ++i) r.c[i] = c[i] - o.c[i];
  return r;
}

IncrementSymbol operator*(cd s, const IncrementSymbol& x) {
  IncrementSymbol r{x.name, {}};
  for (int i = 0; i < 4; ++i) r.c[i] = s * x.c[i];
  return r;
}

IncrementSymbol base_symbol(Base b) {
  static const char* names[4] = {"dB", "dB+", "dBt", "dBt+"};
  IncrementSymbol s{names[b], {}};
  s.c[b] = 1.0;
  return s;
}

IncrementSymbol tilde(const IncrementSymbol& x) {
  IncrementSymbol r{x.name + "~", {}};
  r.c[kB] = std::conj(x.c[kBt]);
  r.c[kBd] = std::conj(x.c[kBtd]);
  r.c[kBt] = std::conj(x.c[kB]);
  r.c[kBtd] = std::conj(x.c[kBd]);
  return r;
}

IncrementSymbol adjoint(const IncrementSymbol& x) {
  IncrementSymbol r{x.name + "^+", {}};
  r.c[kB] = std::conj(x.c[kBd]);
  r.c[kBd] = std::conj(x.c[kB]);
  r.c[kBt] = std::conj(x.c[kBtd]);
  r.c[kBtd] = std::conj(x.c[kBt]);
  return r;
}

const std::vector<std::string>& symbol_names() {
  static const std::vector<std::string> n{"dB", "dB+", "dBt", "dBt+", "dW",
                                          "dWt", "dW+o", "dWt+o", "dX", "dXt"};
  return n;
}

IncrementSymbol make_symbol(const std::string& name, const NoiseParams& p) {
  const IncrementSymbol B = base_symbol(kB), Bd = base_symbol(kBd);
  const IncrementSymbol Bt = base_symbol(kBt), Btd = base_symbol(kBtd);
  const double w = std::sqrt(2.0 * p.kappa);
  const double mu = 1.0 - p.nu;
  const double x = std::sqrt(p.kappa * p.m * p.omega) / 2.0;
  IncrementSymbol s;
  if (name == "dB") s = B;
  else if (name == "dB+") s = Bd;
  else if (name == "dBt") s = Bt;
  else if (name == "dBt+") s = Btd;
  else if (name == "dW") s = cd(w) * (cd(mu) * B + cd(p.nu) * Btd);
  else if (name == "dWt") s = cd(w) * (cd(mu) * Bt + cd(p.nu) * Bd);
  else if (name == "dW+o") s = cd(w) * (Bd - Bt);
  else if (name == "dWt+o") s = cd(w) * (Btd - B);
  else if (name == "dX") s = cd(x) * (B + Bd);
  else if (name == "dXt") s = cd(x) * (Bt + Btd);
  else throw Error(Errc::unknown_symbol, "no increment named '" + name + "'");
  s.name = name;
  return s;
}

ItoTable::ItoTable(double nbar) : nbar_(nbar) {
  if (nbar < 0.0) throw Error(Errc::negative_nbar, "nbar must be >= 0");
  T_.setZero();
  T_(kB, kBd) = 1.0 + nbar;
  T_(kB, kBt) = nbar;
  T_(kBd, kB) = nbar;
  T_(kBd, kBtd) = 1.0 + nbar;
  T_(kBt, kB) = nbar;
  T_(kBt, kBtd) = 1.0 + nbar;
  T_(kBtd, kBd) = 1.0 + nbar;
  T_(kBtd, kBt) = nbar;
  C_.setZero();
  C_(kB, kBd) = 1.0;
  C_(kBd, kB) = -1.0;
  C_(kBt, kBtd) = 1.0;
  C_(kBtd, kBt) = -1.0;
}

namespace {
cd bilinear(const Eigen::Matrix4cd& M, const IncrementSymbol& x, const IncrementSymbol& y) {
  cd s = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) s += x.c[i] * y.c[j] * M(i, j);
  return s;
}
}  // namespace

cd ItoTable::product(const IncrementSymbol& x, const IncrementSymbol& y) const {
  return bilinear(T_, x, y);
}

cd ItoTable::commutator(const IncrementSymbol& x, const IncrementSymbol& y) const {
  return bilinear(C_, x, y);
}

cd ito_product(const IncrementSymbol& x, const IncrementSymbol& y, const NoiseParams& p) {
  return ItoTable(p.nbar).product(x, y);
}

cd increment_commutator(const IncrementSymbol& x, const IncrementSymbol& y, const NoiseParams& p) {
  return ItoTable(p.nbar).commutator(x, y);
}

cd increment_monomial(const ItoTable& t, const std::vector<IncrementSymbol>& xs) {
  if (xs.size() != 2) return 0.0;
  return t.product(xs[0], xs[1]);
}

MartingaleSquare martingale_square(const Martingale& M, const ItoTable& t) {
  if (M.empty()) throw Error(Errc::shape_mismatch, "empty martingale");
  for (const auto& term : M)
    if (term.increments.size() != 1)
      throw Error(Errc::nonlinear_martingale, "each martingale term must carry one increment");
  MartingaleSquare sq{ThermalOperator::zero(M.front().op.space()), 0};
  for (const auto& a : M)
    for (const auto& b : M) {
      const cd c = increment_monomial(t, {a.increments[0], b.increments[0]});
      if (c != 0.0) sq.per_dt += c * (a.op * b.op);
    }
  sq.half_degree = 2;
  return sq;
}

double fdt_residual(const Martingale& M, const ThermalOperator& target, const ItoTable& t) {
  return guarded_max_abs(martingale_square(M, t).per_dt + 2.0 * target);
}

ThermalOperator strat_to_ito(const ThermalOperator& drift, const Martingale& M, const ItoTable& t) {
  if (M.empty()) return drift;
  return drift - (0.5 * I) * martingale_square(M, t).per_dt;
}

ThermalOperator ito_to_strat(const ThermalOperator& drift, const Martingale& M, const ItoTable& t) {
  if (M.empty()) return drift;
  return drift + (0.5 * I) * martingale_square(M, t).per_dt;
}

NoiseParams noise_params(const OscillatorParams& p) { return {p.nbar, p.kappa, p.nu, 1.0, p.omega}; }

NoiseParams noise_params(const KramersParams& p) { return {p.nbar, p.kappa, 0.5, p.m, p.omega}; }

Martingale oscillator_martingale(const LadderSet& L, const OscillatorParams& p) {
  const GammaSet g = gamma_set(L, p.nu);
  const NoiseParams np = noise_params(p);
  return {{I * g.gamma_plus, {make_symbol("dW", np)}},
          {I * g.tilde_gamma_plus, {make_symbol("dWt", np)}}};
}

Martingale oscillator_unitary_martingale(const LadderSet& L, const OscillatorParams& p) {
  const GammaSet g = gamma_set(L, p.nu);
  const NoiseParams np = noise_params(p);
  return {{I * g.gamma_plus, {make_symbol("dW", np)}},
          {I * g.tilde_gamma_plus, {make_symbol("dWt", np)}},
          {-I * g.gamma_nu, {make_symbol("dW+o", np)}},
          {-I * g.tilde_gamma_nu, {make_symbol("dWt+o", np)}}};
}

Martingale kramers_martingale(const LadderSet& L, const KramersParams& p) {
  const ThermalOperator x = position(L, p.m, p.omega);
  const ThermalOperator dx = x - tilde(x);
  const NoiseParams np = noise_params(p);
  return {{dx, {make_symbol("dX", np)}}, {dx, {make_symbol("dXt", np)}}};
}

Martingale kramers_unitary_martingale(const LadderSet& L, const KramersParams& p) {
  const ThermalOperator x = position(L, p.m, p.omega);
  const NoiseParams np = noise_params(p);
  return {{x, {make_symbol("dX", np)}}, {-tilde(x), {make_symbol("dXt", np)}}};
}

Engine make_engine(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return Engine(seq);
}

IncrementSampler::IncrementSampler(std::vector<IncrementSymbol> symbols, const ItoTable& t,
                                   double dt)
    : symbols_(std::move(symbols)) {
  const auto k = static_cast<Eigen::Index>(symbols_.size());
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j)
      if (std::abs(t.commutator(symbols_[i], symbols_[j])) > 1e-14)
        throw Error(Errc::non_commutative_set,
                    symbols_[i].name + " and " + symbols_[j].name + " do not commute");
  C_.resize(k, k);
  P_.resize(k, k);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j) {
      const IncrementSymbol& a = symbols_[i];
      const IncrementSymbol& b = symbols_[j];
      const IncrementSymbol bh = adjoint(b);
      P_(i, j) = 0.5 * (t.product(a, b) + t.product(b, a));
      C_(i, j) = 0.5 * (t.product(a, bh) + t.product(bh, a));
    }
  Eigen::MatrixXd S(2 * k, 2 * k);
  S.topLeftCorner(k, k) = 0.5 * (P_ + C_).real();
  S.bottomRightCorner(k, k) = 0.5 * (C_ - P_).real();
  S.topRightCorner(k, k) = 0.5 * (P_.imag() - C_.imag());
  S.bottomLeftCorner(k, k) = 0.5 * (P_.imag() + C_.imag());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (S + S.transpose()));
  const double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  if (es.eigenvalues().minCoeff() < -1e-12 * scale) {
    Eigen::IOFormat fmt(Eigen::FullPrecision, 0, ", ", "; ", "", "", "[", "]");
    std::ostringstream os;
    os << "symmetrized moment matrix is not positive semidefinite: " << S.format(fmt);
    throw Error(Errc::non_realizable_moments, os.str());
  }
  const Eigen::VectorXd root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt() * std::sqrt(dt);
  factor_ = es.eigenvectors() * root.asDiagonal();
}

void IncrementSampler::draw(Engine& g, cd* out) const {
  const auto k = static_cast<Eigen::Index>(symbols_.size());
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd xi(2 * k);
  for (Eigen::Index i = 0; i < 2 * k; ++i) xi[i] = normal(g);
  const Eigen::VectorXd z = factor_ * xi;
  for (Eigen::Index i = 0; i < k; ++i) out[i] = cd(z[i], z[k + i]);
}

Eigen::MatrixXcd sample_increments(const std::vector<IncrementSymbol>& symbols, const ItoTable& t,
                                   double dt, std::size_t steps, std::uint64_t seed,
                                   std::uint64_t stream) {
  IncrementSampler s(symbols, t, dt);
  Engine g = make_engine(seed, stream);
  Eigen::MatrixXcd out(static_cast<Eigen::Index>(steps), static_cast<Eigen::Index>(s.size()));
  std::vector<cd> row(s.size());
  for (std::size_t n = 0; n < steps; ++n) {
    s.draw(g, row.data());
    for (std::size_t j = 0; j < row.size(); ++j)
      out(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(j)) = row[j];
  }
  return out;
}

}  // namespace ntfd

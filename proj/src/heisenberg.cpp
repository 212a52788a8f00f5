// Copyright 2026 The ntfd Authors
// SPDX-License-Identifier: Apache-2.0

#include "ntfd/heisenberg.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <thread>
#include <unsupported/Eigen/MatrixFunctions>

#include "ntfd/kernels.hpp"

namespace ntfd {

const char* kind_name(SystemKind k) {
  switch (k) {
    case SystemKind::oscillator_nonunitary: return "oscillator-nonunitary";
    case SystemKind::oscillator_unitary: return "oscillator-unitary";
    case SystemKind::kramers_nonunitary: return "kramers-nonunitary";
    case SystemKind::kramers_unitary: return "kramers-unitary";
    case SystemKind::averaged_reference: return "averaged-reference";
  }
  return "?";
}

SystemKind parse_kind(const std::string& s) {
  for (SystemKind k : {SystemKind::oscillator_nonunitary, SystemKind::oscillator_unitary,
                       SystemKind::kramers_nonunitary, SystemKind::kramers_unitary,
                       SystemKind::averaged_reference})
    if (s == kind_name(k)) return k;
  throw Error(Errc::unknown_kind, "unknown system kind '" + s + "'");
}

bool is_kramers(SystemKind k) {
  return k == SystemKind::kramers_nonunitary || k == SystemKind::kramers_unitary;
}

namespace {

NoiseParams to_noise(const SystemParams& p) { return {p.nbar, p.kappa, p.nu, p.m, p.omega}; }

}  // namespace

LinearModel linear_model(const SystemSpec& spec) {
  const SystemParams& p = spec.params;
  if (p.kappa < 0.0) throw Error(Errc::negative_kappa, "kappa must be >= 0");
  if (p.nbar < 0.0) throw Error(Errc::negative_nbar, "nbar must be >= 0");
  if (!(p.nu >= 0.0 && p.nu <= 1.0)) throw Error(Errc::nu_out_of_range, "nu must lie in [0, 1]");
  LinearModel m;
  m.spec = spec;
  m.D = Eigen::MatrixXcd::Zero(5, 5);
  m.C = Eigen::MatrixXcd::Zero(5, 5);
  const NoiseParams np = to_noise(p);
  const double w = p.omega, k = p.kappa;
  const cd iw(0.0, w);
  switch (spec.kind) {
    case SystemKind::oscillator_nonunitary: {
      const double mu = 1.0 - p.nu, nu = p.nu;
      m.basis = {"a", "at+", "a+", "at", "1"};
      m.D(0, 0) = -iw - k * (mu - nu);
      m.D(0, 1) = -2.0 * k * nu;
      m.D(1, 0) = -2.0 * k * mu;
      m.D(1, 1) = -iw + k * (mu - nu);
      m.D(2, 2) = iw + k * (mu - nu);
      m.D(2, 3) = -2.0 * k * mu;
      m.D(3, 2) = -2.0 * k * nu;
      m.D(3, 3) = iw - k * (mu - nu);
      m.noise = {make_symbol("dW", np), make_symbol("dWt", np)};
      m.E = Eigen::MatrixXcd::Zero(5, 2);
      m.E(0, 0) = m.E(1, 0) = 1.0;
      m.E(2, 1) = m.E(3, 1) = 1.0;
      break;
    }
    case SystemKind::oscillator_unitary:
    case SystemKind::averaged_reference: {
      m.basis = {"a", "at+", "a+", "at", "1"};
      m.D(0, 0) = -iw - k;
      m.D(1, 1) = -iw - k;
      m.D(2, 2) = iw - k;
      m.D(3, 3) = iw - k;
      if (spec.kind == SystemKind::oscillator_unitary) {
        const double s = std::sqrt(2.0 * k);
        m.noise = {make_symbol("dB", np), make_symbol("dBt+", np), make_symbol("dB+", np),
                   make_symbol("dBt", np)};
        m.E = Eigen::MatrixXcd::Zero(5, 4);
        for (int i = 0; i < 4; ++i) m.E(i, i) = s;
      } else {
        m.E = Eigen::MatrixXcd::Zero(5, 0);
      }
      break;
    }
    case SystemKind::kramers_nonunitary:
    case SystemKind::kramers_unitary: {
      if (!(p.m > 0.0) || !(p.omega > 0.0))
        throw Error(Errc::nonpositive_parameter, "Kramers model needs m > 0 and omega > 0");
      m.basis = {"x", "p", "xt", "pt", "1"};
      const double mw2 = p.m * w * w;
      m.D(0, 1) = 1.0 / p.m;
      m.D(1, 0) = -mw2;
      m.D(2, 3) = 1.0 / p.m;
      m.D(3, 2) = -mw2;
      m.noise = {make_symbol("dX", np), make_symbol("dXt", np)};
      m.E = Eigen::MatrixXcd::Zero(5, 2);
      if (spec.kind == SystemKind::kramers_nonunitary) {
        m.D(0, 0) += 0.5 * k;
        m.D(0, 2) += -0.5 * k;
        m.D(1, 1) += -0.5 * k;
        m.D(1, 3) += -0.5 * k;
        m.D(2, 0) += -0.5 * k;
        m.D(2, 2) += 0.5 * k;
        m.D(3, 1) += -0.5 * k;
        m.D(3, 3) += -0.5 * k;
        m.E(1, 0) = m.E(1, 1) = -1.0;
        m.E(3, 0) = m.E(3, 1) = -1.0;
      } else {
        m.E(1, 0) = -1.0;
        m.E(3, 1) = -1.0;
      }
      break;
    }
  }
  if (is_kramers(spec.kind)) {
    m.C(0, 1) = I;
    m.C(1, 0) = -I;
    m.C(2, 3) = -I;
    m.C(3, 2) = I;
  } else {
    m.C(0, 2) = 1.0;
    m.C(2, 0) = -1.0;
    m.C(1, 3) = -1.0;
    m.C(3, 1) = 1.0;
  }
  return m;
}

Eigen::RowVectorXcd seed_vector(const LinearModel& m, const std::string& name) {
  Eigen::RowVectorXcd s = Eigen::RowVectorXcd::Zero(5);
  for (int i = 0; i < 5; ++i)
    if (m.basis[static_cast<std::size_t>(i)] == name) {
      s(i) = 1.0;
      return s;
    }
  if (!is_kramers(m.spec.kind)) {
    const double n = m.spec.params.nbar;
    // thermal doublet rotated by B(nbar): d = (1+n) a - n a~+, d~+ = -a + a~+
    if (name == "d") {
      s(0) = 1.0 + n;
      s(1) = -n;
      return s;
    }
    if (name == "dt+") {
      s(0) = -1.0;
      s(1) = 1.0;
      return s;
    }
  }
  throw Error(Errc::unknown_symbol, "no basis operator '" + name + "'");
}

std::vector<ThermalOperator> basis_operators(const LinearModel& m, const LadderSet& L) {
  if (is_kramers(m.spec.kind)) {
    const ThermalOperator x = position(L, m.spec.params.m, m.spec.params.omega);
    const ThermalOperator q = momentum(L, m.spec.params.m, m.spec.params.omega);
    return {x, q, tilde(x), tilde(q), L.id};
  }
  return {L.a, L.atd, L.ad, L.at, L.id};
}

Eigen::RowVectorXcd LinearProcess::coefficient_at(double t) const {
  const Eigen::MatrixXcd Phi = (model.D * t).exp();
  return seed * Phi;
}

Eigen::RowVectorXcd LinearProcess::kernel(double t, double s) const {
  if (s > t) return Eigen::RowVectorXcd::Zero(model.E.cols());
  const Eigen::MatrixXcd Phi = (model.D * (t - s)).exp();
  return seed * Phi * model.E;
}

LinearProcess evolve_process(const SystemSpec& spec, const Eigen::RowVectorXcd& seed,
                             const std::string& name, double T_end, double dt) {
  if (!(dt > 0.0)) throw Error(Errc::step_too_large, "dt must be > 0");
  LinearProcess P;
  P.model = linear_model(spec);
  P.name = name;
  P.seed = seed;
  const long steps = std::lround(T_end / dt);
  P.coeffs.resize(steps + 1, 5);
  const Eigen::MatrixXcd step = (P.model.D * dt).exp();
  Eigen::RowVectorXcd c = seed;
  for (long i = 0; i <= steps; ++i) {
    const double t = static_cast<double>(i) * dt;
    P.times.push_back(t);
    // re-anchor on the exact exponential every 64 steps to avoid drift
    if (i % 64 == 0) c = seed * (P.model.D * t).exp();
    P.coeffs.row(i) = c;
    c = c * step;
  }
  return P;
}

LinearProcess evolve_process(const SystemSpec& spec, const std::string& seed_name, double T_end,
                             double dt) {
  return evolve_process(spec, seed_vector(linear_model(spec), seed_name), seed_name, T_end, dt);
}

Eigen::MatrixXcd kernel_overlap(const LinearProcess& P, const LinearProcess& Q, double t) {
  using Rule = boost::math::quadrature::gauss<double, 20>;
  const auto k = P.model.E.cols();
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(k, Q.model.E.cols());
  if (k == 0 || Q.model.E.cols() == 0 || t <= 0.0) return acc;
  const int pieces = std::max(1, static_cast<int>(std::ceil(t / 0.25)));
  const double h = t / pieces;
  const auto& x = Rule::abscissa();
  const auto& w = Rule::weights();
  const Eigen::MatrixXcd stepP = P.model.D, stepQ = Q.model.D;
  for (int j = 0; j < pieces; ++j) {
    const double mid = (j + 0.5) * h, half = 0.5 * h;
    for (std::size_t i = 0; i < x.size(); ++i) {
      for (double sgn : {-1.0, 1.0}) {
        if (x[i] == 0.0 && sgn > 0.0) continue;
        const double u = mid + sgn * half * x[i];
        const Eigen::RowVectorXcd kp = P.seed * (stepP * u).exp() * P.model.E;
        const Eigen::RowVectorXcd kq = Q.seed * (stepQ * u).exp() * Q.model.E;
        acc += (w[i] * half) * (kp.transpose() * kq);
      }
    }
  }
  return acc;
}

namespace {

void same_grid(const LinearProcess& P, const LinearProcess& Q, std::size_t t_index) {
  if (P.times.size() != Q.times.size() || t_index >= P.times.size())
    throw Error(Errc::grid_mismatch, "processes do not share the requested grid point");
  if (P.model.spec.kind != Q.model.spec.kind)
    throw Error(Errc::grid_mismatch, "processes belong to different systems");
}

}  // namespace

cd equal_time_commutator(const LinearProcess& P, const LinearProcess& Q, std::size_t t_index) {
  same_grid(P, Q, t_index);
  const double t = P.times[t_index];
  const Eigen::RowVectorXcd cp = P.coeffs.row(static_cast<Eigen::Index>(t_index));
  const Eigen::RowVectorXcd cq = Q.coeffs.row(static_cast<Eigen::Index>(t_index));
  cd value = (cp * P.model.C * cq.transpose())(0, 0);
  const auto& noise = P.model.noise;
  if (!noise.empty()) {
    const ItoTable table(P.model.spec.params.nbar);
    const Eigen::MatrixXcd ov = kernel_overlap(P, Q, t);
    for (std::size_t i = 0; i < noise.size(); ++i)
      for (std::size_t j = 0; j < noise.size(); ++j)
        value += table.commutator(noise[i], noise[j]) *
                 ov(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  return value;
}

MomentContext moment_context(const LinearModel& m, const LadderSet& L, const ThermalKet& ket) {
  return {basis_operators(m, L), thermal_bra(L.space), ket, ItoTable(m.spec.params.nbar)};
}

namespace {

cd pair_value(const LinearProcess& P, const LinearProcess& Q, double t, const ItoTable& table) {
  const auto& noise = P.model.noise;
  if (noise.empty()) return 0.0;
  const Eigen::MatrixXcd ov = kernel_overlap(P, Q, t);
  cd v = 0.0;
  for (std::size_t i = 0; i < noise.size(); ++i)
    for (std::size_t j = 0; j < noise.size(); ++j)
      v += table.product(noise[i], noise[j]) *
           ov(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  return v;
}

// Sum over perfect matchings of the ordered index list; pairs keep their order.
cd wick(const std::vector<int>& idx, const Eigen::MatrixXcd& pairs) {
  if (idx.empty()) return 1.0;
  if (idx.size() % 2 == 1) return 0.0;
  cd sum = 0.0;
  for (std::size_t j = 1; j < idx.size(); ++j) {
    std::vector<int> rest;
    for (std::size_t r = 1; r < idx.size(); ++r)
      if (r != j) rest.push_back(idx[r]);
    sum += pairs(idx[0], idx[j]) * wick(rest, pairs);
  }
  return sum;
}

}  // namespace

cd weak_moment(const std::vector<const LinearProcess*>& products, std::size_t t_index,
               const MomentContext& ctx) {
  const int k = static_cast<int>(products.size());
  if (k == 0) return overlap(ctx.bra, ctx.ket);
  if (k > 6) throw Error(Errc::unresolvable_product, "at most six factors are supported");
  for (const auto* P : products) same_grid(*products.front(), *P, t_index);
  const double t = products.front()->times[t_index];

  std::vector<ThermalOperator> sys;
  for (const auto* P : products) {
    ThermalOperator S = ThermalOperator::zero(ctx.bra.space);
    for (int i = 0; i < 5; ++i) {
      const cd c = P->coeffs(static_cast<Eigen::Index>(t_index), i);
      if (c != 0.0) S += c * ctx.basis[static_cast<std::size_t>(i)];
    }
    sys.push_back(S);
  }
  Eigen::MatrixXcd pairs = Eigen::MatrixXcd::Zero(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) pairs(i, j) = pair_value(*products[i], *products[j], t, ctx.table);

  cd total = 0.0;
  for (int mask = 0; mask < (1 << k); ++mask) {
    std::vector<int> noisy;
    for (int i = 0; i < k; ++i)
      if (mask & (1 << i)) noisy.push_back(i);
    if (noisy.size() % 2 == 1) continue;
    const cd w = wick(noisy, pairs);
    if (w == 0.0) continue;
    Vec v = ctx.ket.v;
    for (int i = k - 1; i >= 0; --i)
      if (!(mask & (1 << i))) v = sys[static_cast<std::size_t>(i)].apply(v);
    total += w * overlap(ctx.bra, {ctx.ket.space, v});
  }
  return total;
}

VectorSde vector_sde(const SystemSpec& spec) {
  const SystemParams& p = spec.params;
  const NoiseParams np = to_noise(p);
  VectorSde v;
  v.D.setZero();
  switch (spec.kind) {
    case SystemKind::oscillator_nonunitary:
    case SystemKind::oscillator_unitary:
      v.D(0, 0) = cd(-p.kappa, -p.omega);
      v.noise = cd(std::sqrt(2.0 * p.kappa)) * make_symbol("dB", np);
      v.noise_row = 0;
      break;
    case SystemKind::averaged_reference:
      v.D(0, 0) = cd(-p.kappa, -p.omega);
      v.has_noise = false;
      break;
    case SystemKind::kramers_nonunitary:
    case SystemKind::kramers_unitary: {
      v.D(0, 1) = 1.0 / p.m;
      v.D(1, 0) = -p.m * p.omega * p.omega;
      const bool nonunitary = spec.kind == SystemKind::kramers_nonunitary;
      if (nonunitary) v.D(1, 1) = -p.kappa;
      // <1|(dX + dX~) = 2 <1|dX on the noise bra
      v.noise = cd(nonunitary ? -2.0 : -1.0) * make_symbol("dX", np);
      v.noise_row = 1;
      break;
    }
  }
  return v;
}

EnsembleStats simulate_vector_sde(const SystemSpec& spec, std::size_t ensemble, std::uint64_t seed,
                                  double T_end, double dt, const Eigen::Vector2cd& x0,
                                  int record_every, int threads) {
  const VectorSde sde = vector_sde(spec);
  const ItoTable table(spec.params.nbar);
  std::unique_ptr<IncrementSampler> sampler;
  if (sde.has_noise && spec.params.kappa > 0.0)
    sampler = std::make_unique<IncrementSampler>(std::vector<IncrementSymbol>{sde.noise}, table, dt);

  const long steps = std::lround(T_end / dt);
  const int every = std::max(1, record_every);
  const long nrec = steps / every + 1;
  constexpr std::size_t kBlock = 256;
  const std::size_t nblocks = (ensemble + kBlock - 1) / kBlock;

  // per block: sums of Re, Im, Re^2, Im^2 for two components at each record
  std::vector<Eigen::MatrixXd> block_sums(nblocks, Eigen::MatrixXd::Zero(nrec, 8));
  cd Dflat[4] = {sde.D(0, 0), sde.D(0, 1), sde.D(1, 0), sde.D(1, 1)};

  auto run_block = [&](std::size_t b) {
    const std::size_t lo = b * kBlock, hi = std::min(ensemble, lo + kBlock), n = hi - lo;
    std::vector<Engine> engines;
    engines.reserve(n);
    for (std::size_t j = lo; j < hi; ++j) engines.push_back(make_engine(seed, j));
    std::vector<cd> y0(n, x0(0)), y1(n, x0(1)), w0(n, 0.0), w1(n, 0.0);
    std::vector<cd>& wn = sde.noise_row == 0 ? w0 : w1;
    Eigen::MatrixXd& S = block_sums[b];
    auto record = [&](long r) {
      for (std::size_t j = 0; j < n; ++j) {
        const cd u[2] = {y0[j], y1[j]};
        for (int c = 0; c < 2; ++c) {
          S(r, 4 * c + 0) += u[c].real();
          S(r, 4 * c + 1) += u[c].imag();
          S(r, 4 * c + 2) += u[c].real() * u[c].real();
          S(r, 4 * c + 3) += u[c].imag() * u[c].imag();
        }
      }
    };
    const kernels::Table& K = kernels::active();
    record(0);
    for (long s = 1; s <= steps; ++s) {
      if (sampler)
        for (std::size_t j = 0; j < n; ++j) sampler->draw(engines[j], &wn[j]);
      K.linear2_step(n, Dflat, dt, y0.data(), y1.data(), w0.data(), w1.data());
      if (s % every == 0) record(s / every);
    }
  };

  const int nt = std::max(1, threads);
  std::vector<std::thread> pool;
  for (int t = 0; t < nt; ++t)
    pool.emplace_back([&, t] {
      for (std::size_t b = static_cast<std::size_t>(t); b < nblocks; b += static_cast<std::size_t>(nt))
        run_block(b);
    });
  for (auto& th : pool) th.join();

  Eigen::MatrixXd tot = Eigen::MatrixXd::Zero(nrec, 8);
  for (const auto& s : block_sums) tot += s;
  EnsembleStats st;
  st.ensemble = ensemble;
  st.seed = seed;
  st.mean.resize(nrec, 2);
  st.std_error.resize(nrec, 2);
  st.exact.resize(nrec, 2);
  st.euler.resize(nrec, 2);
  Eigen::Matrix2cd step = Eigen::Matrix2cd::Identity();
  for (long k = 0; k < every; ++k) step = (Eigen::Matrix2cd::Identity() + sde.D * dt) * step;
  Eigen::Vector2cd eu = x0;
  const double M = static_cast<double>(ensemble);
  for (long r = 0; r < nrec; ++r) {
    const double t = static_cast<double>(r * every) * dt;
    st.times.push_back(t);
    const Eigen::Vector2cd ex = (sde.D * t).exp() * x0;
    for (int c = 0; c < 2; ++c) {
      const double mr = tot(r, 4 * c) / M, mi = tot(r, 4 * c + 1) / M;
      const double vr = std::max(0.0, tot(r, 4 * c + 2) / M - mr * mr) * M / std::max(1.0, M - 1.0);
      const double vi = std::max(0.0, tot(r, 4 * c + 3) / M - mi * mi) * M / std::max(1.0, M - 1.0);
      st.mean(r, c) = cd(mr, mi);
      st.std_error(r, c) = cd(std::sqrt(vr / M), std::sqrt(vi / M));
      st.exact(r, c) = ex(c);
      st.euler(r, c) = eu(c);
    }
    eu = step * eu;
  }
  return st;
}

}  // namespace ntfd

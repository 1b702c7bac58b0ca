// Copyright 2026 The secopt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <catch2/catch_amalgamated.hpp>

#include "secopt/surrogates.hpp"

using namespace secopt;

namespace {

struct Fixture {
  SystemConfig cfg;
  PhysicalParams p;
  ChannelSet cs;
  NormalizedChannels nch;
  EveMoment em;
  DesignVariables v;
  Scheme scheme{SchemeKind::ARIS_RSMA};
};

Fixture make_fixture(int M, int N, int K, unsigned seed, Scheme scheme = {}) {
  Fixture f;
  f.cfg.M = M;
  f.cfg.N = N;
  f.cfg.K = K;
  f.scheme = scheme;
  f.p = apply_scheme(to_linear(f.cfg), scheme);
  Rng rng = make_rng(seed);
  f.cs = sample_scene(f.cfg, rng);
  f.nch = normalize(f.cs, f.p);
  f.em = eve_second_moment(f.cfg);
  f.v = DesignVariables::zeros(M, N, K);
  std::normal_distribution<double> g(0.0, 1.0);
  auto cg = [&] { return cplx(g(rng), g(rng)) * M_SQRT1_2; };
  const int c0 = scheme.rsma() ? 0 : 1;
  for (int c = c0; c <= K; ++c)
    for (int i = 0; i < M; ++i) f.v.W(i, c) = 0.3 * cg();
  for (int i = 0; i < M; ++i) f.v.z(i) = 0.2 * cg();
  const double amp = 0.6 * f.p.beta_max;
  for (int n = 0; n < N; ++n) {
    const cplx ph = cg();
    f.v.theta(n) = amp * ph / std::abs(ph);
  }
  VectorXcd u(M);
  for (int i = 0; i < M; ++i) u(i) = cg();
  f.v.u = u.normalized();
  return f;
}

DesignVariables random_candidate(const Fixture& f, Rng& rng, double beam_scale = 0.4) {
  DesignVariables c = f.v;
  std::normal_distribution<double> g(0.0, 1.0);
  auto cg = [&] { return cplx(g(rng), g(rng)) * M_SQRT1_2; };
  const int c0 = f.scheme.rsma() ? 0 : 1;
  for (int col = c0; col <= f.cfg.K; ++col)
    for (int i = 0; i < f.cfg.M; ++i) c.W(i, col) = beam_scale * cg();
  for (int i = 0; i < f.cfg.M; ++i) c.z(i) = beam_scale * cg();
  return c;
}

/// Served private rate at fixed theta (nats) and the deterministic Eve rate;
/// together the pre-linearized quantity the beamforming surrogates minorize.
double rate_minus_eve_det(const Fixture& f, const DesignVariables& cand, int k) {
  const VectorXcd c = f.nch.Hbar[k].adjoint() * f.v.theta;
  double interf = 0;
  for (int i = 1; i <= f.cfg.K; ++i)
    if (i != k + 1) interf += std::norm(c.dot(cand.W.col(i)));
  interf += std::norm(c.dot(cand.z));
  const double sbar =
      detail::sigma_bar_term(f.v.theta, f.nch.hbar[k], f.p.sigma2_ris) + 1.0;
  const double rk = std::log1p(std::norm(c.dot(cand.W.col(k + 1))) / (interf + sbar));
  DesignVariables at_theta = cand;
  at_theta.theta = f.v.theta;
  const DeterministicEveRates det =
      eve_rates_deterministic(at_theta, f.nch.G, f.em, f.p);
  return rk - det.private_nats(k);
}

double common_rate_minus_eve_det(const Fixture& f, const DesignVariables& cand, int k) {
  const VectorXcd c = f.nch.Hbar[k].adjoint() * f.v.theta;
  double interf = 0;
  for (int i = 1; i <= f.cfg.K; ++i) interf += std::norm(c.dot(cand.W.col(i)));
  interf += std::norm(c.dot(cand.z));
  const double sbar =
      detail::sigma_bar_term(f.v.theta, f.nch.hbar[k], f.p.sigma2_ris) + 1.0;
  const double rk = std::log1p(std::norm(c.dot(cand.W.col(0))) / (interf + sbar));
  DesignVariables at_theta = cand;
  at_theta.theta = f.v.theta;
  const DeterministicEveRates det =
      eve_rates_deterministic(at_theta, f.nch.G, f.em, f.p);
  return rk - det.common_nats;
}

}  // namespace

// ---- primitive bounds -------------------------------------------------------

TEST_CASE("log linearization dominates: ln x <= ln x_t + x/x_t - 1") {
  Rng rng = make_rng(1);
  std::uniform_real_distribution<double> uni(1e-3, 1e3);
  for (int t = 0; t < 10000; ++t) {
    const double x = uni(rng), xt = uni(rng);
    CHECK(std::log(x) <= std::log(xt) + x / xt - 1.0 + 1e-8);
  }
  const double xt = uni(rng);
  CHECK(std::log(xt) == Catch::Approx(std::log(xt) + xt / xt - 1.0).margin(1e-7));
}

TEST_CASE("quadratic minorant: w^H H w >= 2Re{w_t^H H w} - w_t^H H w_t") {
  Rng rng = make_rng(2);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int t = 0; t < 10000; ++t) {
    const int n = 3;
    MatrixXcd A(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) A(i, j) = cplx(g(rng), g(rng));
    const MatrixXcd H = A * A.adjoint();
    VectorXcd w(n), wt(n);
    for (int i = 0; i < n; ++i) {
      w(i) = cplx(g(rng), g(rng));
      wt(i) = cplx(g(rng), g(rng));
    }
    const double lhs = std::real(w.dot(H * w));
    const double rhs = 2.0 * std::real(wt.dot(H * w)) - std::real(wt.dot(H * wt));
    CHECK(lhs >= rhs - 1e-8 * std::max(1.0, std::abs(lhs)));
    const double tight = 2.0 * std::real(wt.dot(H * wt)) - std::real(wt.dot(H * wt));
    CHECK(tight == Catch::Approx(std::real(wt.dot(H * wt))).margin(1e-7));
  }
}

TEST_CASE("matrix-fractional linearization is a lower bound") {
  Rng rng = make_rng(3);
  std::normal_distribution<double> g(0.0, 1.0);
  int checked = 0;
  for (int t = 0; t < 10000; ++t) {
    const int m = 2, n = 3;
    auto randm = [&](int r, int c) {
      MatrixXcd X(r, c);
      for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) X(i, j) = cplx(g(rng), g(rng));
      return X;
    };
    const MatrixXcd A = [&] {
      MatrixXcd X = randm(m, m);
      return MatrixXcd(X * X.adjoint());
    }();
    auto randpd = [&] {
      MatrixXcd X = randm(n, n);
      MatrixXcd B = X * X.adjoint();
      B.diagonal().array() += 0.5;
      return B;
    };
    const MatrixXcd B = randpd(), Bt = randpd();
    const MatrixXcd C = randm(m, n), Ct = randm(m, n);
    const double lhs = std::real((A * C * B.inverse() * C.adjoint()).trace());
    const MatrixXcd Bti = Bt.inverse();
    const double rhs =
        std::real((A * Ct * Bti * Ct.adjoint()).trace()) -
        std::real((A * Ct * Bti * (B - Bt) * Bti * Ct.adjoint()).trace()) +
        2.0 * std::real((A * (C - Ct) * Bti * Ct.adjoint()).trace());
    CHECK(lhs >= rhs - 1e-8 * std::max(1.0, std::abs(lhs)));
    ++checked;
  }
  REQUIRE(checked == 10000);
  // equality at the expansion point
  const MatrixXcd A = MatrixXcd::Identity(2, 2);
  const MatrixXcd B = 2.0 * MatrixXcd::Identity(3, 3);
  const MatrixXcd C = MatrixXcd::Ones(2, 3);
  const double v = std::real((A * C * B.inverse() * C.adjoint()).trace());
  CHECK(v == Catch::Approx(v).margin(1e-7));
}

TEST_CASE("rate minorant holds and is tight at the expansion point") {
  Rng rng = make_rng(4);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> ub(0.1, 10.0);
  auto surrogate = [](cplx a, double b, cplx at, double bt) {
    const double a2t = std::norm(at);
    return std::log1p(a2t / bt) - a2t / bt + 2.0 * std::real(std::conj(at) * a) / bt -
           a2t * (b + std::norm(a)) / (bt * (bt + a2t));
  };
  for (int t = 0; t < 10000; ++t) {
    const cplx a(g(rng), g(rng)), at(g(rng), g(rng));
    const double b = ub(rng), bt = ub(rng);
    const double lhs = std::log1p(std::norm(a) / b);
    CHECK(lhs >= surrogate(a, b, at, bt) - 1e-8);
  }
  const cplx at(0.7, -0.3);
  const double bt = 2.3;
  CHECK(std::log1p(std::norm(at) / bt) ==
        Catch::Approx(surrogate(at, bt, at, bt)).margin(1e-7));
}

// ---- beamforming expansion ---------------------------------------------------

TEST_CASE("bf_expand degenerate beams: q = 0 and ell = sbar - 1") {
  Fixture f = make_fixture(3, 4, 2, 10);
  f.v.W.setZero();
  f.v.z.setZero();
  const BfExpansion e = bf_expand(f.v, f.nch, f.em, f.p, f.scheme);
  CHECK(e.q_E.maxCoeff() == 0.0);
  CHECK(e.ell_E == Catch::Approx(e.sbar_E - 1.0).margin(1e-15));
}

TEST_CASE("bf_expand eps0 matches a direct scalar recomputation (M=2, K=1)") {
  Fixture f = make_fixture(2, 2, 1, 11);
  const BfExpansion e = bf_expand(f.v, f.nch, f.em, f.p, f.scheme);
  const VectorXcd c = f.nch.Hbar[0].adjoint() * f.v.theta;
  const cplx alpha = c.dot(f.v.W.col(1));
  const double sbar =
      detail::sigma_bar_term(f.v.theta, f.nch.hbar[0], f.p.sigma2_ris) + 1.0;
  const double beta = std::norm(c.dot(f.v.z)) + sbar;
  const double eps0 = std::log1p(std::norm(alpha) / beta) - std::norm(alpha) / beta -
                      std::norm(alpha) * sbar / (beta * (beta + std::norm(alpha)));
  CHECK(e.eps0(0) == Catch::Approx(eps0).epsilon(1e-12));
  CHECK(std::abs(e.alpha[0] - alpha) < 1e-12 * std::abs(alpha));
}

TEST_CASE("q_E stays below one on random instances") {
  for (unsigned seed = 0; seed < 1000; ++seed) {
    Fixture f = make_fixture(2, 3, 2, 1000 + seed);
    const BfExpansion e = bf_expand(f.v, f.nch, f.em, f.p, f.scheme);
    CHECK(e.q_E.maxCoeff() < 1.0 + 1e-9);
    CHECK(e.q_E.minCoeff() >= 0.0);
    CHECK(e.q_0E < 1.0 + 1e-9);
    CHECK(e.ell_E >= e.sbar_E - 1.0 - 1e-12);
  }
}

TEST_CASE("EPSR surrogate is tight at the expansion point") {
  for (unsigned seed : {20u, 21u, 22u}) {
    Fixture f = make_fixture(3, 4, 2, seed);
    const BfExpansion e = bf_expand(f.v, f.nch, f.em, f.p, f.scheme);
    const VectorXd x_t = e.layout.pack(f.v, 0.0);
    for (int k = 0; k < f.cfg.K; ++k) {
      const QuadraticConstraint con = bf_epsr_constraint(e, k);
      // canonical LE value at (vars_t, r=r_t, tau=0): -(F_p + r_k)
      const double fp = -(con.value(x_t)) + f.v.r(k) - f.v.r(k);
      const double expect = rate_minus_eve_det(f, f.v, k) + f.v.r(k);
      CHECK(fp == Catch::Approx(expect).margin(1e-7));
    }
  }
}

TEST_CASE("ECSR surrogate is tight at the expansion point") {
  Fixture f = make_fixture(3, 4, 2, 30);
  f.v.r.setZero();
  const BfExpansion e = bf_expand(f.v, f.nch, f.em, f.p, f.scheme);
  const VectorXd x_t = e.layout.pack(f.v, 0.0);
  for (int k = 0; k < f.cfg.K; ++k) {
    const QuadraticConstraint con = bf_ecsr_constraint(e, k);
    const double fc = -con.value(x_t);
    CHECK(fc == Catch::Approx(common_rate_minus_eve_det(f, f.v, k)).margin(1e-7));
  }
}

TEST_CASE("beamforming surrogates lower-bound the pre-linearized objective") {
  Fixture f = make_fixture(3, 4, 2, 40);
  const BfExpansion e = bf_expand(f.v, f.nch, f.em, f.p, f.scheme);
  Rng rng = make_rng(41);
  for (int trial = 0; trial < 100; ++trial) {
    const DesignVariables cand = random_candidate(f, rng);
    const VectorXd x = e.layout.pack(cand, 0.0);
    for (int k = 0; k < f.cfg.K; ++k) {
      const double fp = -bf_epsr_constraint(e, k).value(x) + cand.r(k) - cand.r(k);
      CHECK(fp <= rate_minus_eve_det(f, cand, k) + cand.r(k) + 1e-8);
      const double fc = -bf_ecsr_constraint(e, k).value(x) - cand.r.sum();
      CHECK(fc <= common_rate_minus_eve_det(f, cand, k) + 1e-8);
    }
  }
}

TEST_CASE("zero-candidate EPSR surrogate collapses to its constants") {
  Fixture f = make_fixture(3, 4, 2, 45);
  const BfExpansion e = bf_expand(f.v, f.nch, f.em, f.p, f.scheme);
  DesignVariables zero = f.v;
  zero.W.setZero();
  zero.z.setZero();
  zero.r.setZero();
  const VectorXd x0 = e.layout.pack(zero, 0.0);
  const double fp = -bf_epsr_constraint(e, 0).value(x0);
  CHECK(fp == Catch::Approx(e.epsbarE(0)).margin(1e-12));
}

TEST_CASE("radar linearization: expansion-point identity and minorant sweep") {
  Fixture f = make_fixture(3, 4, 2, 50);
  BfExpansion e = bf_expand(f.v, f.nch, f.em, f.p, f.scheme);
  bf_attach_radar_budget(e, f.cs, f.v.u, f.p);
  const QuadraticConstraint con = bf_radar_constraint(e, f.p);
  const VectorXd x_t = e.layout.pack(f.v, 0.0);
  const double gamma_t = radar_snr(f.v, f.cs, f.p);
  // value at the expansion point encodes (Gamma_r - gamma_t) sbar/zeta^2
  CHECK(con.value(x_t) ==
        Catch::Approx((f.p.gamma_r - gamma_t) * e.sbar_radar / f.p.rcs)
            .margin(1e-9 * std::max(1.0, std::abs(con.value(x_t)))));
  // affine form never overestimates the true quadratic return
  Rng rng = make_rng(51);
  for (int t = 0; t < 100; ++t) {
    const DesignVariables cand = random_candidate(f, rng);
    const VectorXd x = e.layout.pack(cand, 0.0);
    double true_quad = std::norm((e.hbar_T * cand.z)(0));
    for (int c = 0; c <= f.cfg.K; ++c) true_quad += std::norm((e.hbar_T * cand.W.col(c))(0));
    const double affine_lhs = f.p.gamma_r * e.sbar_radar / f.p.rcs - con.value(x);
    CHECK(affine_lhs <= true_quad + 1e-9 * std::max(1.0, true_quad));
  }
}

TEST_CASE("budget quadratic reproduces the reflected powers (Kronecker identity)") {
  for (unsigned seed : {60u, 61u, 62u}) {
    Fixture f = make_fixture(3, 4, 2, seed);
    BfExpansion e = bf_expand(f.v, f.nch, f.em, f.p, f.scheme);
    bf_attach_radar_budget(e, f.cs, f.v.u, f.p);
    const MatrixXcd Phi = MatrixXcd(f.v.theta.asDiagonal());
    const MatrixXcd echo = Phi * f.cs.H_RT * Phi * f.cs.G;
    double direct = (Phi * f.cs.G * f.v.W).squaredNorm() +
                    f.p.rcs * (echo * f.v.W).squaredNorm();
    double quad = 0;
    for (int c = 0; c <= f.cfg.K; ++c)
      quad += std::real(f.v.W.col(c).dot(e.budget_quad * f.v.W.col(c)));
    CHECK(quad == Catch::Approx(direct).epsilon(1e-9));
  }
}

TEST_CASE("budget rows: scaled candidate meets the bound with equality") {
  Fixture f = make_fixture(3, 4, 2, 65);
  BfExpansion e = bf_expand(f.v, f.nch, f.em, f.p, f.scheme);
  bf_attach_radar_budget(e, f.cs, f.v.u, f.p);
  const auto rows = bf_budget_constraints(e, f.p);
  REQUIRE(rows.size() == 2);
  DesignVariables cand = f.v;
  const double pw = bs_power(cand);
  const double scale = std::sqrt(f.p.p_bs / pw);
  cand.W *= scale;
  cand.z *= scale;
  const VectorXd x = e.layout.pack(cand, 0.0);
  CHECK(rows[0].value(x) == Catch::Approx(0.0).margin(1e-9 * f.p.p_bs));
}

// ---- reflection expansion -----------------------------------------------------

TEST_CASE("lifted radar numerator identity: v^H A v equals the direct form") {
  for (unsigned seed : {70u, 71u}) {
    Fixture f = make_fixture(3, 3, 2, seed);
    const MatrixXcd A = radar_lift_A(f.cs, f.v, f.p);
    const int N = f.cfg.N;
    VectorXcd vv(N * N);
    for (int j = 0; j < N; ++j) vv.segment(j * N, N) = f.v.theta(j) * f.v.theta;
    const MatrixXcd Phi = MatrixXcd(f.v.theta.asDiagonal());
    const MatrixXcd H_T = f.cs.G.adjoint() * Phi * f.cs.H_RT * Phi * f.cs.G;
    const Eigen::RowVectorXcd uhT = f.v.u.adjoint() * H_T;
    const double direct =
        f.p.rcs * ((uhT * f.v.W).squaredNorm() + std::norm((uhT * f.v.z)(0)));
    CHECK(std::real(vv.dot(A * vv)) == Catch::Approx(direct).epsilon(1e-9));
  }
}

TEST_CASE("stacked second-moment factor matches the Hadamard reconstruction") {
  Fixture f = make_fixture(2, 2, 1, 80);
  const RisExpansion e = ris_expand(f.v, f.nch, f.cs, f.em, f.p, f.scheme);
  // Gamma_E should equal sigma_E^-2 (sigma_R^2 Diag(diag H) + (G Pi G^H) o H^*)
  MatrixXcd Pi = f.v.W * f.v.W.adjoint();
  Pi.noalias() += f.v.z * f.v.z.adjoint();
  MatrixXcd expect = (f.nch.G * Pi * f.nch.G.adjoint()).cwiseProduct(f.em.H_hat.conjugate());
  expect += MatrixXcd((f.p.sigma2_ris * f.em.diag_H).asDiagonal());
  expect /= f.p.sigma2_eve;
  CHECK((e.Gamma_E - expect).norm() < 1e-10 * std::max(1.0, expect.norm()));
  // and mu_E is its quadratic form at theta_t
  CHECK(e.mu_E == Catch::Approx(std::real(f.v.theta.dot(expect * f.v.theta))).epsilon(1e-10));
}

TEST_CASE("reflection EPSR surrogate is tight at the expansion point") {
  for (unsigned seed : {90u, 91u}) {
    Fixture f = make_fixture(3, 4, 2, seed);
    const RisExpansion e = ris_expand(f.v, f.nch, f.cs, f.em, f.p, f.scheme);
    const VectorXd x_t = e.layout.pack(f.v, 0.0);
    const DeterministicEveRates det = eve_rates_deterministic(f.v, f.nch.G, f.em, f.p);
    const SinrReport rep = sinr_report(f.v, f.nch, f.p);
    for (int k = 0; k < f.cfg.K; ++k) {
      const double lhs = -(ris_epsr_constraint(e, k).value(x_t)) - f.v.r(k) + f.v.r(k);
      const double expect =
          std::log1p(rep.gamma_priv(k)) - det.private_nats(k) + f.v.r(k);
      CHECK(lhs + f.v.r(k) == Catch::Approx(expect).margin(1e-8));
    }
  }
}

TEST_CASE("reflection ECSR surrogate is tight at the expansion point") {
  Fixture f = make_fixture(3, 4, 2, 95);
  f.v.r.setZero();
  const RisExpansion e = ris_expand(f.v, f.nch, f.cs, f.em, f.p, f.scheme);
  const VectorXd x_t = e.layout.pack(f.v, 0.0);
  const DeterministicEveRates det = eve_rates_deterministic(f.v, f.nch.G, f.em, f.p);
  const SinrReport rep = sinr_report(f.v, f.nch, f.p);
  for (int k = 0; k < f.cfg.K; ++k) {
    const double lhs = -ris_ecsr_constraint(e, k).value(x_t);
    CHECK(lhs == Catch::Approx(std::log1p(rep.gamma_s0(k)) - det.common_nats).margin(1e-8));
  }
}

TEST_CASE("theta = 0 reduces the reflection EPSR surrogate to its constant") {
  Fixture f = make_fixture(3, 4, 2, 96);
  const RisExpansion e = ris_expand(f.v, f.nch, f.cs, f.em, f.p, f.scheme);
  DesignVariables zero = f.v;
  zero.theta.setZero();
  zero.r.setZero();
  const VectorXd x0 = e.layout.pack(zero, 0.0);
  CHECK(-ris_epsr_constraint(e, 0).value(x0) == Catch::Approx(e.epsbar5(0)).margin(1e-12));
}

// ---- quartic majorization ------------------------------------------------------

TEST_CASE("shifted-identity quartic gives the constant majorant") {
  const int N = 3;
  Rng rng = make_rng(100);
  std::normal_distribution<double> g(0.0, 1.0);
  VectorXcd theta(N);
  for (int n = 0; n < N; ++n) theta(n) = cplx(g(rng), g(rng));
  const double lam = 1.7, beta_max = 2.0;
  const MatrixXcd D = lam * MatrixXcd::Identity(N * N, N * N);
  const QuarticMajorant q = mm_quartic_majorant(D, theta, beta_max);
  CHECK(q.lam_half == Catch::Approx(0.0).margin(1e-12));
  CHECK(q.d.norm() < 1e-12);
  CHECK(q.value(theta) ==
        Catch::Approx(lam * double(N) * double(N) * std::pow(beta_max, 4)).epsilon(1e-12));
}

TEST_CASE("quartic majorant dominates over the amplitude box") {
  Rng rng = make_rng(101);
  std::normal_distribution<double> g(0.0, 1.0);
  const int N = 3;
  const double beta_max = 1.5;
  for (int inst = 0; inst < 5; ++inst) {
    MatrixXcd D(N * N, N * N);
    for (int i = 0; i < N * N; ++i)
      for (int j = 0; j < N * N; ++j) D(i, j) = cplx(g(rng), g(rng));
    D = MatrixXcd(0.5 * (D + D.adjoint()));
    VectorXcd theta_t(N);
    std::uniform_real_distribution<double> ua(0.0, 2 * M_PI), ub(0.0, beta_max);
    for (int n = 0; n < N; ++n) theta_t(n) = ub(rng) * std::exp(kImag * ua(rng));
    const QuarticMajorant q = mm_quartic_majorant(D, theta_t, beta_max);
    for (int t = 0; t < 1000; ++t) {
      VectorXcd th(N);
      for (int n = 0; n < N; ++n) th(n) = ub(rng) * std::exp(kImag * ua(rng));
      VectorXcd vv(N * N);
      for (int j = 0; j < N; ++j) vv.segment(j * N, N) = th(j) * th;
      const double truth = std::real(vv.dot(D * vv));
      CHECK(q.value(th) >= truth - 1e-8 * std::max(1.0, std::abs(truth)));
    }
    // slack at the expansion point is exactly the cap-relaxation term
    VectorXcd vt(N * N);
    for (int j = 0; j < N; ++j) vt.segment(j * N, N) = theta_t(j) * theta_t;
    const double truth_t = std::real(vt.dot(D * vt));
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(D);
    const double lam = std::max(es.eigenvalues().maxCoeff(), 0.0);
    const double slack = lam * (double(N * N) * std::pow(beta_max, 4) - vt.squaredNorm());
    CHECK(q.value(theta_t) == Catch::Approx(truth_t + slack)
                                  .margin(1e-8 * std::max(1.0, std::abs(truth_t + slack))));
  }
}

TEST_CASE("reflection radar and power surrogates are conservative") {
  for (unsigned seed : {110u, 111u}) {
    Fixture f = make_fixture(3, 3, 2, seed);
    const RisExpansion e = ris_expand(f.v, f.nch, f.cs, f.em, f.p, f.scheme);
    const QuadraticConstraint radar = ris_radar_constraint(e, f.p);
    const QuadraticConstraint power = ris_budget_constraint(e, f.p);
    Rng rng = make_rng(seed + 1);
    std::uniform_real_distribution<double> ua(0.0, 2 * M_PI), ub(0.0, f.p.beta_max);
    int radar_feasible = 0, power_feasible = 0;
    for (int t = 0; t < 200; ++t) {
      DesignVariables cand = f.v;
      for (int n = 0; n < f.cfg.N; ++n)
        cand.theta(n) = ub(rng) * std::exp(kImag * ua(rng));
      const VectorXd x = e.layout.pack(cand, 0.0);
      if (radar.value(x) <= 0) {
        ++radar_feasible;
        CHECK(radar_snr(cand, f.cs, f.p) >= f.p.gamma_r * (1.0 - 1e-9));
      }
      if (power.value(x) <= 0) {
        ++power_feasible;
        CHECK(ris_power(cand, f.cs, f.p) <= f.p.p_ris * (1.0 + 1e-9));
      }
    }
    INFO("radar-feasible " << radar_feasible << " power-feasible " << power_feasible);
    CHECK(power_feasible > 0);  // the sweep must actually exercise the bound
  }
}

TEST_CASE("radar majorant eigen-shift matches the dense lift") {
  Fixture f = make_fixture(2, 3, 1, 120);
  const RisExpansion e = ris_expand(f.v, f.nch, f.cs, f.em, f.p, f.scheme);
  const MatrixXcd D = f.p.gamma_r * radar_lift_B(f.cs, f.v, f.p) - radar_lift_A(f.cs, f.v, f.p);
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(MatrixXcd(0.5 * (D + D.adjoint())));
  CHECK(e.lambda_D ==
        Catch::Approx(std::max(es.eigenvalues().maxCoeff(), 0.0)).margin(1e-12));
  // structured majorant equals the generic dense one
  const QuarticMajorant dense = mm_quartic_majorant(D, f.v.theta, f.p.beta_max);
  Rng rng = make_rng(121);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int t = 0; t < 20; ++t) {
    VectorXcd th(f.cfg.N);
    for (int n = 0; n < f.cfg.N; ++n) th(n) = cplx(g(rng), g(rng));
    const double from_radar_row =
        e.radar_mm.value(th) - f.p.gamma_r * f.p.sigma2_bs * f.v.u.squaredNorm();
    CHECK(from_radar_row == Catch::Approx(dense.value(th)).margin(1e-9 * std::max(1.0, std::abs(dense.value(th)))));
  }
}

TEST_CASE("power majorant eigen-shift matches the dense lift") {
  Fixture f = make_fixture(2, 3, 1, 130);
  const RisExpansion e = ris_expand(f.v, f.nch, f.cs, f.em, f.p, f.scheme);
  const MatrixXcd J = power_lift_J(f.cs, f.v, f.p);
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(MatrixXcd(0.5 * (J + J.adjoint())));
  CHECK(e.lambda_J ==
        Catch::Approx(std::max(es.eigenvalues().maxCoeff(), 0.0))
            .epsilon(1e-9));
  const QuarticMajorant dense = mm_quartic_majorant(J, f.v.theta, f.p.beta_max);
  Rng rng = make_rng(131);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int t = 0; t < 20; ++t) {
    VectorXcd th(f.cfg.N);
    for (int n = 0; n < f.cfg.N; ++n) th(n) = cplx(g(rng), g(rng));
    CHECK(e.power_mm.value(th) ==
          Catch::Approx(dense.value(th)).margin(1e-9 * std::max(1.0, std::abs(dense.value(th)))));
  }
}

// ---- scheme structure ----------------------------------------------------------

TEST_CASE("SDMA layouts carry no common column and no rate variables") {
  Fixture f = make_fixture(3, 4, 2, 140, Scheme{SchemeKind::ARIS_SDMA});
  f.v.W.col(0).setZero();
  const BfExpansion e = bf_expand(f.v, f.nch, f.em, f.p, f.scheme);
  CHECK(e.layout.n_w_cols() == 2);
  CHECK(e.layout.r_count() == 0);
  CHECK(e.layout.dim() == 2 * (3 * 3) + 1);  // 2 W cols + z, plus tau
  const RisExpansion er = ris_expand(f.v, f.nch, f.cs, f.em, f.p, f.scheme);
  CHECK(er.layout.r_count() == 0);
}

TEST_CASE("passive scheme zeroes the amplification terms") {
  const Scheme pris{SchemeKind::PRIS_RSMA};
  Fixture f = make_fixture(3, 4, 2, 150, pris);
  CHECK(f.p.sigma2_ris == 0.0);
  CHECK(f.p.beta_max == 1.0);
  const BfExpansion e = bf_expand(f.v, f.nch, f.em, f.p, pris);
  CHECK(e.sbar_E == Catch::Approx(1.0));
  for (int k = 0; k < f.cfg.K; ++k)
    CHECK(e.sbar_R(k) == Catch::Approx(1.0));
}

TEST_CASE("receive filter in the reflected-link null space zeroes the lift") {
  // M > N so G has a transmit-side null space
  Fixture f = make_fixture(4, 2, 1, 160);
  Eigen::JacobiSVD<MatrixXcd> svd(f.cs.G, Eigen::ComputeFullV);
  f.v.u = svd.matrixV().col(3);  // null-space direction: G u = 0
  REQUIRE((f.cs.G * f.v.u).norm() < 1e-12);
  const MatrixXcd A = radar_lift_A(f.cs, f.v, f.p);
  CHECK(A.norm() < 1e-20);
  const RisExpansion e = ris_expand(f.v, f.nch, f.cs, f.em, f.p, f.scheme);
  CHECK(e.lambda_D >= 0.0);
  CHECK(e.lambda_D < 1e-20);
}

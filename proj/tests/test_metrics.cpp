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

#include "secopt/metrics.hpp"
#include "secopt/surrogates.hpp"

using namespace secopt;

namespace {

struct Instance {
  SystemConfig cfg;
  PhysicalParams p;
  ChannelSet cs;
  NormalizedChannels nch;
  DesignVariables v;
};

Instance make_instance(int M, int N, int K, unsigned seed, double power = 1.0) {
  Instance in;
  in.cfg.M = M;
  in.cfg.N = N;
  in.cfg.K = K;
  in.p = to_linear(in.cfg);
  Rng rng = make_rng(seed);
  in.cs = sample_scene(in.cfg, rng);
  in.nch = normalize(in.cs, in.p);
  in.v = DesignVariables::zeros(M, N, K);
  std::normal_distribution<double> g(0.0, 1.0);
  auto cg = [&] { return cplx(g(rng), g(rng)) * M_SQRT1_2; };
  for (int c = 0; c <= K; ++c)
    for (int i = 0; i < M; ++i) in.v.W(i, c) = cg() * std::sqrt(power / (K + 2));
  for (int i = 0; i < M; ++i) in.v.z(i) = cg() * std::sqrt(power / (K + 2));
  for (int n = 0; n < N; ++n) in.v.theta(n) = 4.0 * cg();
  VectorXcd u(M);
  for (int i = 0; i < M; ++i) u(i) = cg();
  in.v.u = u.normalized();
  for (int k = 0; k < K; ++k) in.v.r(k) = 0.1 * k;
  return in;
}

/// Second, independent SINR path: build Phi explicitly and evaluate the raw
/// receive-model expressions h^H Phi^H G x with unnormalized channels.
double raw_sinr_private(const Instance& in, int k) {
  const MatrixXcd Phi = MatrixXcd(in.v.theta.asDiagonal());
  const Eigen::RowVectorXcd eff = in.cs.h_R[k].adjoint() * Phi.adjoint() * in.cs.G;
  double sig = std::norm((eff * in.v.W.col(k + 1))(0));
  double interf = 0;
  for (int i = 1; i <= in.cfg.K; ++i)
    if (i != k + 1) interf += std::norm((eff * in.v.W.col(i))(0));
  interf += std::norm((eff * in.v.z)(0));
  double ris_noise = 0;
  for (int n = 0; n < in.cfg.N; ++n)
    ris_noise += in.p.sigma2_ris * std::norm(in.cs.h_R[k](n) * in.v.theta(n));
  return sig / (interf + ris_noise + in.p.sigma2_ue);
}

double raw_sinr_common(const Instance& in, int k) {
  const MatrixXcd Phi = MatrixXcd(in.v.theta.asDiagonal());
  const Eigen::RowVectorXcd eff = in.cs.h_R[k].adjoint() * Phi.adjoint() * in.cs.G;
  double sig = std::norm((eff * in.v.W.col(0))(0));
  double interf = 0;
  for (int i = 1; i <= in.cfg.K; ++i) interf += std::norm((eff * in.v.W.col(i))(0));
  interf += std::norm((eff * in.v.z)(0));
  double ris_noise = 0;
  for (int n = 0; n < in.cfg.N; ++n)
    ris_noise += in.p.sigma2_ris * std::norm(in.cs.h_R[k](n) * in.v.theta(n));
  return sig / (interf + ris_noise + in.p.sigma2_ue);
}

}  // namespace

TEST_CASE("zero beams give zero SINRs everywhere") {
  Instance in = make_instance(3, 4, 2, 11);
  in.v.W.setZero();
  in.v.z.setZero();
  Rng rng = make_rng(1);
  const VectorXcd h = eve_channel_sample(in.cfg, in.p, rng);
  const auto [Hbar_e, hbar_e] = normalize_eve(h, in.cs.G, in.p);
  const SinrReport rep = sinr_report(in.v, in.nch, in.p, &hbar_e, &Hbar_e);
  CHECK(rep.gamma_s0.maxCoeff() == 0.0);
  CHECK(rep.gamma_priv.maxCoeff() == 0.0);
  CHECK(*rep.gamma_s0_eve == 0.0);
  CHECK(rep.gamma_priv_eve->maxCoeff() == 0.0);
}

TEST_CASE("nulled common beam gives zero common SINR (K=1)") {
  Instance in = make_instance(3, 4, 1, 12);
  const VectorXcd c = in.nch.Hbar[0].adjoint() * in.v.theta;
  VectorXcd w0 = in.v.W.col(0);
  w0 -= c * (c.dot(w0) / c.squaredNorm());
  in.v.W.col(0) = w0;
  const SinrReport rep = sinr_report(in.v, in.nch, in.p);
  CHECK(rep.gamma_s0(0) < 1e-20);
}

TEST_CASE("dual-implementation SINR oracle agrees to 1e-10") {
  for (unsigned seed : {21u, 22u, 23u}) {
    Instance in = make_instance(3, 5, 2, seed);
    const SinrReport rep = sinr_report(in.v, in.nch, in.p);
    for (int k = 0; k < in.cfg.K; ++k) {
      CHECK(rep.gamma_priv(k) == Catch::Approx(raw_sinr_private(in, k)).epsilon(1e-10));
      CHECK(rep.gamma_s0(k) == Catch::Approx(raw_sinr_common(in, k)).epsilon(1e-10));
    }
  }
}

TEST_CASE("adding Eve-side RIS noise never raises Eve SINRs") {
  Instance in = make_instance(3, 5, 2, 31);
  Rng rng = make_rng(2);
  const VectorXcd h = eve_channel_sample(in.cfg, in.p, rng);
  const auto [Hbar_e, hbar_e] = normalize_eve(h, in.cs.G, in.p);
  PhysicalParams lo = in.p, hi = in.p;
  hi.sigma2_ris *= 10.0;
  const SinrReport a = sinr_report(in.v, in.nch, lo, &hbar_e, &Hbar_e);
  const SinrReport b = sinr_report(in.v, in.nch, hi, &hbar_e, &Hbar_e);
  CHECK(*b.gamma_s0_eve <= *a.gamma_s0_eve + 1e-15);
  for (int k = 0; k < in.cfg.K; ++k)
    CHECK((*b.gamma_priv_eve)(k) <= (*a.gamma_priv_eve)(k) + 1e-15);
}

TEST_CASE("radar SNR trivial zeros") {
  Instance in = make_instance(4, 6, 2, 41);
  PhysicalParams p0 = in.p;
  p0.rcs = 0.0;
  CHECK(radar_snr(in.v, in.cs, p0) == 0.0);
  DesignVariables v0 = in.v;
  v0.theta.setZero();
  CHECK(radar_snr(v0, in.cs, in.p) == 0.0);
}

TEST_CASE("radar SNR matches the Kronecker-lifted fraction") {
  for (unsigned seed : {51u, 52u, 53u, 54u}) {
    Instance in = make_instance(3, 4, 2, seed);
    const double direct = radar_snr(in.v, in.cs, in.p);
    const double lifted = radar_snr_lifted(in.cs, in.v, in.p);
    CHECK(direct == Catch::Approx(lifted).epsilon(1e-9));
  }
}

TEST_CASE("RIS power matches the lifted quartic + quadratic form") {
  for (unsigned seed : {61u, 62u, 63u, 64u}) {
    Instance in = make_instance(3, 4, 2, seed);
    const double direct = ris_power(in.v, in.cs, in.p);
    const double lifted = ris_power_lifted(in.cs, in.v, in.p);
    CHECK(direct == Catch::Approx(lifted).epsilon(1e-9));
  }
}

TEST_CASE("RIS power trivial values") {
  Instance in = make_instance(3, 4, 2, 71);
  DesignVariables v0 = in.v;
  v0.theta.setZero();
  CHECK(ris_power(v0, in.cs, in.p) == 0.0);
  DesignVariables vb = in.v;
  vb.W.setZero();
  vb.z.setZero();
  const MatrixXcd Phi = MatrixXcd(vb.theta.asDiagonal());
  const double expect = 2.0 * in.p.sigma2_ris * vb.theta.squaredNorm() +
                        in.p.rcs * in.p.sigma2_ris * (Phi * in.cs.H_RT * Phi).squaredNorm();
  CHECK(ris_power(vb, in.cs, in.p) == Catch::Approx(expect).epsilon(1e-12));
}

TEST_CASE("BS power arithmetic") {
  DesignVariables v = DesignVariables::zeros(4, 2, 3);
  CHECK(bs_power(v) == 0.0);
  for (int c = 0; c <= 3; ++c) v.W.col(c) = VectorXcd::Unit(4, c % 4);
  v.z.setZero();
  CHECK(bs_power(v) == Catch::Approx(4.0));
  DesignVariables v2 = v;
  v2.W *= 3.0;
  CHECK(bs_power(v2) == Catch::Approx(9.0 * bs_power(v)));
}

TEST_CASE("MC Eve rates: degenerate cases") {
  Instance in = make_instance(3, 4, 2, 81);
  in.v.W.setZero();
  in.v.z.setZero();
  Rng rng = make_rng(3);
  const ErgodicEveRates e = ergodic_eve_rates_mc(in.v, in.cs, in.cfg, in.p, rng, 50);
  CHECK(e.common_bits == 0.0);
  CHECK(e.private_bits.maxCoeff() == 0.0);

  Instance in2 = make_instance(3, 4, 2, 82);
  Rng r1 = make_rng(4), r2 = make_rng(4);
  const ErgodicEveRates one = ergodic_eve_rates_mc(in2.v, in2.cs, in2.cfg, in2.p, r1, 1);
  const VectorXcd h = eve_channel_sample(in2.cfg, in2.p, r2);
  const auto [Hbar_e, hbar_e] = normalize_eve(h, in2.cs.G, in2.p);
  const SinrReport rep = sinr_report(in2.v, in2.nch, in2.p, &hbar_e, &Hbar_e);
  CHECK(one.common_bits == Catch::Approx(std::log2(1.0 + *rep.gamma_s0_eve)).epsilon(1e-12));
}

TEST_CASE("MC Eve rates sit near the moment-based deterministic value") {
  // scenario-typical operating point: matched beams, phase-aligned
  // reflection at moderate amplification (the shape the optimizer produces)
  Instance in = make_instance(8, 16, 3, 91, 1.0);
  const VectorXcd a = VectorXcd::Ones(in.cfg.M) / std::sqrt(double(in.cfg.M));
  const VectorXcd Ga = in.cs.G * a;
  for (int n = 0; n < in.cfg.N; ++n) {
    const cplx t = in.nch.hbar[0](n) * Ga(n);
    in.v.theta(n) = (in.p.beta_max / M_SQRT2) * std::conj(t) / std::abs(t);
  }
  for (int k = 0; k < in.cfg.K; ++k) {
    const VectorXcd ck = in.nch.Hbar[k].adjoint() * in.v.theta;
    in.v.W.col(k + 1) = std::sqrt(0.2) * ck.normalized();
  }
  in.v.W.col(0) = std::sqrt(0.1) * in.v.W.rightCols(in.cfg.K).rowwise().sum().normalized();
  in.v.z = std::sqrt(0.05) * in.v.z.normalized();

  const EveMoment em = eve_second_moment(in.cfg);
  const DeterministicEveRates det = eve_rates_deterministic(in.v, in.cs.G, em, in.p);
  Rng rng = make_rng(5);
  const ErgodicEveRates mc = ergodic_eve_rates_mc(in.v, in.cs, in.cfg, in.p, rng, 100000);
  INFO("common mc " << mc.common_bits << " det " << det.common_nats * kNatsToBits);
  CHECK(mc.common_bits == Catch::Approx(det.common_nats * kNatsToBits).epsilon(0.10));
  for (int k = 0; k < in.cfg.K; ++k) {
    INFO("k " << k << " mc " << mc.private_bits(k) << " det "
              << det.private_nats(k) * kNatsToBits);
    CHECK(mc.private_bits(k) ==
          Catch::Approx(det.private_nats(k) * kNatsToBits).epsilon(0.10));
  }
}

TEST_CASE("secrecy report clamps and composes correctly") {
  Instance in = make_instance(3, 4, 2, 101);
  ErgodicEveRates erg;
  erg.private_bits = VectorXd::Constant(2, 100.0);  // Eve dominates
  erg.common_bits = 0.0;
  erg.private_se = VectorXd::Zero(2);
  in.v.r.setZero();
  const SecrecyReport rep = secrecy_report(in.v, in.cs, in.nch, erg, in.p);
  CHECK(rep.min_epsr == 0.0);

  ErgodicEveRates zero = erg;
  zero.private_bits.setZero();
  const SecrecyReport rep2 = secrecy_report(in.v, in.cs, in.nch, zero, in.p);
  const SinrReport s = sinr_report(in.v, in.nch, in.p);
  for (int k = 0; k < 2; ++k) {
    const double expect = in.v.r(k) * kNatsToBits + std::log2(1.0 + s.gamma_priv(k));
    CHECK(rep2.epsr(k) == Catch::Approx(expect).epsilon(1e-12));
  }
  CHECK(rep2.epsr.minCoeff() == rep2.min_epsr);
  CHECK(rep2.bs_power == Catch::Approx(bs_power(in.v)));
}

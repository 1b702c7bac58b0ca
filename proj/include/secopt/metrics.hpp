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

#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "secopt/channels.hpp"

namespace secopt {

constexpr double kNatsToBits = 1.4426950408889634;  // 1/ln 2, applied once at reporting

/// The five jointly designed blocks. Rate allocations r are kept in nats
/// (the unit all surrogate algebra uses); reports convert to bits.
struct DesignVariables {
  MatrixXcd W;      // M x (K+1), column 0 = common stream
  VectorXcd z;      // artificial noise
  VectorXcd theta;  // RIS reflection coefficients
  VectorXcd u;      // radar receive filter, unit norm
  VectorXd r;       // common-rate allocation, nats

  static DesignVariables zeros(int M, int N, int K) {
    DesignVariables v;
    v.W = MatrixXcd::Zero(M, K + 1);
    v.z = VectorXcd::Zero(M);
    v.theta = VectorXcd::Zero(N);
    v.u = VectorXcd::Zero(M);
    if (M > 0) v.u(0) = 1.0;
    v.r = VectorXd::Zero(K);
    return v;
  }
};

/// Linear SINRs at the users and (optionally) at a concrete Eve draw.
struct SinrReport {
  VectorXd gamma_s0;            // common stream at user k
  VectorXd gamma_priv;          // private stream k at user k
  std::optional<double> gamma_s0_eve;
  std::optional<VectorXd> gamma_priv_eve;
};

namespace detail {

inline double sigma_bar_term(const VectorXcd& theta, const VectorXcd& hbar, double sigma2_ris) {
  // sigma_R^2 || theta^H diag(hbar) ||^2
  return sigma2_ris * theta.cwiseAbs2().dot(hbar.cwiseAbs2());
}

}  // namespace detail

inline SinrReport sinr_report(const DesignVariables& v, const NormalizedChannels& nch,
                              const PhysicalParams& p,
                              const VectorXcd* eve_draw_hbar = nullptr,
                              const MatrixXcd* eve_draw_Hbar = nullptr) {
  const int K = static_cast<int>(nch.Hbar.size());
  SinrReport rep;
  rep.gamma_s0.resize(K);
  rep.gamma_priv.resize(K);
  for (int k = 0; k < K; ++k) {
    const Eigen::RowVectorXcd eff = v.theta.adjoint() * nch.Hbar[k];  // 1 x M
    const VectorXcd gains_w = (eff * v.W).transpose();                // K+1 entries
    const double gain_z = std::norm((eff * v.z)(0));
    const double sbar = detail::sigma_bar_term(v.theta, nch.hbar[k], p.sigma2_ris) + 1.0;
    double sum_priv = 0.0;
    for (int i = 1; i <= K; ++i) sum_priv += std::norm(gains_w(i));
    rep.gamma_s0(k) = std::norm(gains_w(0)) / (sum_priv + gain_z + sbar);
    // private decoding: common stream already removed by SIC
    const double own = std::norm(gains_w(k + 1));
    rep.gamma_priv(k) = own / (sum_priv - own + gain_z + sbar);
  }
  if (eve_draw_hbar && eve_draw_Hbar) {
    const Eigen::RowVectorXcd eff = v.theta.adjoint() * (*eve_draw_Hbar);
    const VectorXcd gains_w = (eff * v.W).transpose();
    const double gain_z = std::norm((eff * v.z)(0));
    const double sbar_e = detail::sigma_bar_term(v.theta, *eve_draw_hbar, p.sigma2_ris) + 1.0;
    double sum_priv = 0.0;
    for (int i = 1; i <= static_cast<int>(v.W.cols()) - 1; ++i) sum_priv += std::norm(gains_w(i));
    rep.gamma_s0_eve = std::norm(gains_w(0)) / (sum_priv + gain_z + sbar_e);
    VectorXd ge(K);
    for (int k = 0; k < K; ++k) {
      // no SIC at the Eve: the common stream stays in the interference
      const double interf = std::norm(gains_w(0)) + sum_priv - std::norm(gains_w(k + 1)) +
                            gain_z + sbar_e;
      ge(k) = std::norm(gains_w(k + 1)) / interf;
    }
    rep.gamma_priv_eve = ge;
  }
  return rep;
}

// ---- sensing and power -----------------------------------------------------

/// Radar output SNR with receive filter u over the double-reflection path.
inline double radar_snr(const DesignVariables& v, const ChannelSet& cs, const PhysicalParams& p) {
  const auto Phi = v.theta.asDiagonal();
  const MatrixXcd H_T = cs.G.adjoint() * Phi * cs.H_RT * Phi * cs.G;   // M x M
  const MatrixXcd H_0 = cs.G.adjoint() * Phi * cs.H_RT * Phi;          // M x N
  const MatrixXcd H_1 = cs.G.adjoint() * Phi;                          // M x N
  const Eigen::RowVectorXcd uhT = v.u.adjoint() * H_T;
  const double num = p.rcs * ((uhT * v.W).squaredNorm() + std::norm((uhT * v.z)(0)));
  const double den = p.rcs * p.sigma2_ris * (v.u.adjoint() * H_0).squaredNorm() +
                     p.sigma2_ris * (v.u.adjoint() * H_1).squaredNorm() +
                     p.sigma2_bs * v.u.squaredNorm();
  return num / den;
}

/// Power the active RIS injects: amplified signal, amplified echo and both
/// amplification-noise passes.
inline double ris_power(const DesignVariables& v, const ChannelSet& cs, const PhysicalParams& p) {
  const auto Phi = v.theta.asDiagonal();
  const MatrixXcd PhiG = Phi * cs.G;
  const MatrixXcd PhiHPhi = Phi * cs.H_RT * Phi;         // N x N
  const MatrixXcd echo = PhiHPhi * cs.G;                 // N x M
  return p.rcs * (echo * v.W).squaredNorm() + (PhiG * v.W).squaredNorm() +
         (PhiG * v.z).squaredNorm() + p.rcs * (echo * v.z).squaredNorm() +
         2.0 * p.sigma2_ris * v.theta.squaredNorm() +
         p.rcs * p.sigma2_ris * PhiHPhi.squaredNorm();
}

inline double bs_power(const DesignVariables& v) { return v.W.squaredNorm() + v.z.squaredNorm(); }

// ---- ergodic Eve rates -----------------------------------------------------

struct ErgodicEveRates {
  double common_bits = 0;        // E{ log2(1 + gamma_s0,E) }
  VectorXd private_bits;         // E{ log2(1 + gamma_k,E) }
  double common_se = 0;          // standard errors of the estimates
  VectorXd private_se;
};

/// Monte-Carlo oracle over the Eve location distribution.
inline ErgodicEveRates ergodic_eve_rates_mc(const DesignVariables& v, const ChannelSet& cs,
                                            const SystemConfig& cfg, const PhysicalParams& p,
                                            Rng& rng, int draws) {
  const int K = cfg.K;
  ErgodicEveRates out;
  out.private_bits = VectorXd::Zero(K);
  out.private_se = VectorXd::Zero(K);
  double sum_c = 0, sumsq_c = 0;
  VectorXd sum_p = VectorXd::Zero(K), sumsq_p = VectorXd::Zero(K);
  const MatrixXcd GW = cs.G * v.W;   // N x (K+1), reused across draws
  const VectorXcd Gz = cs.G * v.z;
  const double inv_sigma_e = 1.0 / std::sqrt(p.sigma2_eve);
  for (int t = 0; t < draws; ++t) {
    const VectorXcd h = eve_channel_sample(cfg, p, rng);
    const VectorXcd hbar = inv_sigma_e * h.conjugate();
    const VectorXcd w_eff = hbar.cwiseProduct(v.theta.conjugate());  // theta^H diag(hbar)
    const VectorXcd gains_w = (w_eff.transpose() * GW).transpose();
    const double gain_z = std::norm((w_eff.transpose() * Gz)(0));
    const double sbar_e = detail::sigma_bar_term(v.theta, hbar, p.sigma2_ris) + 1.0;
    double sum_priv = 0.0;
    for (int i = 1; i <= K; ++i) sum_priv += std::norm(gains_w(i));
    const double rc = std::log2(1.0 + std::norm(gains_w(0)) / (sum_priv + gain_z + sbar_e));
    sum_c += rc;
    sumsq_c += rc * rc;
    for (int k = 0; k < K; ++k) {
      const double interf =
          std::norm(gains_w(0)) + sum_priv - std::norm(gains_w(k + 1)) + gain_z + sbar_e;
      const double rp = std::log2(1.0 + std::norm(gains_w(k + 1)) / interf);
      sum_p(k) += rp;
      sumsq_p(k) += rp * rp;
    }
  }
  const double n = static_cast<double>(draws);
  out.common_bits = sum_c / n;
  out.common_se = draws > 1 ? std::sqrt(std::max(0.0, (sumsq_c / n - out.common_bits * out.common_bits) / (n - 1))) : 0.0;
  for (int k = 0; k < K; ++k) {
    out.private_bits(k) = sum_p(k) / n;
    out.private_se(k) =
        draws > 1 ? std::sqrt(std::max(0.0, (sumsq_p(k) / n - out.private_bits(k) * out.private_bits(k)) / (n - 1))) : 0.0;
  }
  return out;
}

/// Deterministic (moment-in-the-log) Eve rates, in nats. This is the exact
/// function the convex surrogates linearize, so it doubles as their
/// tightness reference.
struct DeterministicEveRates {
  double common_nats = 0;
  VectorXd private_nats;
};

inline DeterministicEveRates eve_rates_deterministic(const DesignVariables& v, const MatrixXcd& G,
                                                     const EveMoment& em, const PhysicalParams& p) {
  const int K = static_cast<int>(v.W.cols()) - 1;
  const MatrixXcd Ghat = em.g_hat(v.theta, G, p);
  const double sbar = 1.0 + v.theta.cwiseAbs2().dot(em.j_tilde_diag(p));
  VectorXd pw(K + 1);
  for (int i = 0; i <= K; ++i) pw(i) = std::real(v.W.col(i).dot(Ghat * v.W.col(i)));
  const double pz = std::real(v.z.dot(Ghat * v.z));
  const double total = sbar + pw.sum() + pz;
  DeterministicEveRates out;
  out.private_nats.resize(K);
  out.common_nats = std::log(total) - std::log(total - pw(0));
  for (int k = 0; k < K; ++k)
    out.private_nats(k) = std::log(total) - std::log(total - pw(k + 1));
  return out;
}

// ---- secrecy summary -------------------------------------------------------

/// [x]^+ clamped secrecy figures in bits, plus the physical-feasibility
/// quantities of the final point.
struct SecrecyReport {
  VectorXd epsr;          // r_k + [R_k - E{R_k,E}]^+
  double min_epsr = 0;
  double ecsr_margin = 0; // min_k R_s0,k - E{R_s0,E} - sum r
  double radar_snr = 0;
  double bs_power = 0;
  double ris_power = 0;
};

inline SecrecyReport secrecy_report(const DesignVariables& v, const ChannelSet& cs,
                                    const NormalizedChannels& nch, const ErgodicEveRates& erg,
                                    const PhysicalParams& p) {
  const int K = static_cast<int>(nch.Hbar.size());
  const SinrReport s = sinr_report(v, nch, p);
  SecrecyReport rep;
  rep.epsr.resize(K);
  double min_common = std::numeric_limits<double>::infinity();
  const double r_sum_bits = v.r.sum() * kNatsToBits;
  for (int k = 0; k < K; ++k) {
    const double rk_bits = std::log2(1.0 + s.gamma_priv(k));
    rep.epsr(k) = v.r(k) * kNatsToBits + std::max(0.0, rk_bits - erg.private_bits(k));
    min_common = std::min(min_common, std::log2(1.0 + s.gamma_s0(k)));
  }
  rep.min_epsr = rep.epsr.minCoeff();
  rep.ecsr_margin = min_common - erg.common_bits - r_sum_bits;
  rep.radar_snr = radar_snr(v, cs, p);
  rep.bs_power = bs_power(v);
  rep.ris_power = ris_power(v, cs, p);
  return rep;
}

}  // namespace secopt

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
#include <cmath>
#include <complex>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "secopt/config.hpp"
#include "secopt/rng.hpp"

namespace secopt {

using cplx = std::complex<double>;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

constexpr cplx kImag{0.0, 1.0};

/// ULA steering vector, entry n = exp(j 2π spacing n sin(angle)).
inline VectorXcd steering_vector(double angle, int count, double spacing) {
  VectorXcd a(count);
  const double phase = 2.0 * M_PI * spacing * std::sin(angle);
  for (int n = 0; n < count; ++n) a(n) = std::exp(kImag * (phase * n));
  return a;
}

namespace detail {

inline cplx std_cgauss(Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  const double re = g(rng), im = g(rng);
  return cplx(re * M_SQRT1_2, im * M_SQRT1_2);
}

inline double pathloss(const PhysicalParams& p, double distance, double exponent) {
  return p.pathloss_ref * std::pow(distance / p.d0, -exponent);
}

}  // namespace detail

/// Rician matrix channel (rx_count x tx_count): LOS steering outer product
/// plus i.i.d. CN(0,1) scatter, scaled by the distance power law.
inline MatrixXcd sample_rician(double rx_angle, double tx_angle, int rx_count, int tx_count,
                               double distance, const PhysicalParams& p, double exponent,
                               Rng& rng) {
  const double gain = std::sqrt(detail::pathloss(p, distance, exponent));
  const double c_los = std::sqrt(p.kappa / (1.0 + p.kappa));
  const double c_nlos = std::sqrt(1.0 / (1.0 + p.kappa));
  MatrixXcd w(rx_count, tx_count);
  for (int j = 0; j < tx_count; ++j)
    for (int i = 0; i < rx_count; ++i) w(i, j) = detail::std_cgauss(rng);
  const MatrixXcd los = steering_vector(rx_angle, rx_count, p.spacing) *
                        steering_vector(tx_angle, tx_count, p.spacing).adjoint();
  return gain * (c_los * los + c_nlos * w);
}

/// Vector channel variant (single-antenna far end): the tx factor drops.
inline VectorXcd sample_rician(double rx_angle, int rx_count, double distance,
                               const PhysicalParams& p, double exponent, Rng& rng) {
  const double gain = std::sqrt(detail::pathloss(p, distance, exponent));
  const double c_los = std::sqrt(p.kappa / (1.0 + p.kappa));
  const double c_nlos = std::sqrt(1.0 / (1.0 + p.kappa));
  VectorXcd w(rx_count);
  for (int i = 0; i < rx_count; ++i) w(i) = detail::std_cgauss(rng);
  return gain * (c_los * steering_vector(rx_angle, rx_count, p.spacing) + c_nlos * w);
}

/// One realization of every link the design needs.
struct ChannelSet {
  MatrixXcd G;                   // N x M, BS -> RIS
  std::vector<VectorXcd> h_R;    // K vectors, RIS -> user k
  VectorXcd h_RT;                // RIS -> target
  MatrixXcd H_RT;                // target response h_RT h_RT^T (plain transpose)
  std::vector<std::array<double, 2>> user_positions;
};

inline double azimuth_from(const std::array<double, 2>& origin, const std::array<double, 2>& point) {
  return std::atan2(point[1] - origin[1], point[0] - origin[0]);
}

inline double distance_between(const std::array<double, 2>& a, const std::array<double, 2>& b) {
  return std::hypot(a[0] - b[0], a[1] - b[1]);
}

inline ChannelSet sample_scene(const SystemConfig& cfg, Rng& rng) {
  const PhysicalParams p = to_linear(cfg);
  ChannelSet cs;
  cs.user_positions.resize(cfg.K);
  std::uniform_real_distribution<double> uni(0.0, 1.0);

  const double bs_to_ris = distance_between(cfg.bs_pos, cfg.ris_pos);
  const double aod_bs = azimuth_from(cfg.bs_pos, cfg.ris_pos);
  const double aoa_ris = azimuth_from(cfg.ris_pos, cfg.bs_pos);
  cs.G = sample_rician(aoa_ris, aod_bs, cfg.N, cfg.M, bs_to_ris, p, cfg.alpha_br, rng);

  cs.h_R.resize(cfg.K);
  for (int k = 0; k < cfg.K; ++k) {
    // area-uniform draw in the user disk
    const double r = cfg.user_disk_radius * std::sqrt(uni(rng));
    const double phi = 2.0 * M_PI * uni(rng);
    cs.user_positions[k] = {cfg.user_disk_center[0] + r * std::cos(phi),
                            cfg.user_disk_center[1] + r * std::sin(phi)};
    const double d = distance_between(cfg.ris_pos, cs.user_positions[k]);
    const double ang = azimuth_from(cfg.ris_pos, cs.user_positions[k]);
    cs.h_R[k] = sample_rician(ang, cfg.N, d, p, cfg.alpha_ru, rng);
  }

  cs.h_RT = sample_rician(cfg.target_angle, cfg.N, cfg.target_range, p, cfg.alpha_rt, rng);
  cs.H_RT = cs.h_RT * cs.h_RT.transpose();
  return cs;
}

/// One draw of the RIS->Eve channel: range with density 2d/(d2^2-d1^2)
/// (inverse CDF), azimuth uniform over the sector.
inline VectorXcd eve_channel_sample(const SystemConfig& cfg, const PhysicalParams& p, Rng& rng) {
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  const double d1sq = cfg.eve_d1 * cfg.eve_d1, d2sq = cfg.eve_d2 * cfg.eve_d2;
  const double d = std::sqrt(d1sq + uni(rng) * (d2sq - d1sq));
  const double th = cfg.eve_theta1 + uni(rng) * (cfg.eve_theta2 - cfg.eve_theta1);
  return sample_rician(th, cfg.N, d, p, cfg.alpha_re, rng);
}

/// Closed-form second moment of the RIS->Eve channel over the annular
/// sector, with its eigen-factors. H_hat = E{h h^H}; J_frown J_frown^H
/// reassembles H_hat.
struct EveMoment {
  MatrixXcd H_hat;     // Hermitian PSD, N x N
  VectorXd eigvals;    // >= 0, descending clip applied
  MatrixXcd eigvecs;   // columns e_n
  MatrixXcd J_frown;   // columns sqrt(lambda_n) e_n
  VectorXd diag_H;     // real diagonal of H_hat

  /// sqrt(lambda_n) diag(e_n^H) applied to a vector: column n of the
  /// per-element factor family used by the reflection-side second moments.
  VectorXcd d_tilde_apply(int n, const VectorXcd& v) const {
    return std::sqrt(eigvals(n)) * eigvecs.col(n).conjugate().cwiseProduct(v);
  }

  /// Diagonal of the averaged per-element (amplification-noise) term,
  /// sigma_R^2 sigma_E^-2 diag(H_hat).
  VectorXd j_tilde_diag(const PhysicalParams& p) const {
    return (p.sigma2_ris / p.sigma2_eve) * diag_H;
  }

  /// sigma_E^-1 J_frown^H Phi^H G: Gram factor of
  /// G_hat_E = sigma_E^-2 G^H Phi H_hat Phi^H G.
  MatrixXcd g_hat_factor(const VectorXcd& theta, const MatrixXcd& G, const PhysicalParams& p) const {
    return (1.0 / std::sqrt(p.sigma2_eve)) *
           (J_frown.adjoint() * theta.conjugate().asDiagonal() * G);
  }

  MatrixXcd g_hat(const VectorXcd& theta, const MatrixXcd& G, const PhysicalParams& p) const {
    const MatrixXcd S = g_hat_factor(theta, G, p);
    return S.adjoint() * S;
  }
};

inline EveMoment eve_second_moment(const SystemConfig& cfg) {
  if (cfg.alpha_re == 2.0)
    throw std::invalid_argument("eve_second_moment: alpha_re = 2 is a pole of the range integral");
  const PhysicalParams p = to_linear(cfg);
  const int N = cfg.N;
  const double a = cfg.alpha_re;
  const double d1 = cfg.eve_d1, d2 = cfg.eve_d2;

  const double range_factor = std::pow(1.0 / p.d0, -a) * 2.0 * p.pathloss_ref *
                              (std::pow(d1, 2.0 - a) - std::pow(d2, 2.0 - a)) /
                              ((1.0 + p.kappa) * (d2 * d2 - d1 * d1) * (a - 2.0));

  const double span = cfg.eve_theta2 - cfg.eve_theta1;
  const double dth = span / cfg.n_theta;
  MatrixXcd acc = MatrixXcd::Zero(N, N);
  for (int i = 0; i < cfg.n_theta; ++i) {
    const VectorXcd a0 = steering_vector(cfg.eve_theta1 + i * dth, N, p.spacing);
    const VectorXcd a1 = steering_vector(cfg.eve_theta1 + (i + 1) * dth, N, p.spacing);
    acc.noalias() += a0 * a0.adjoint();
    acc.noalias() += a1 * a1.adjoint();
  }
  MatrixXcd H = range_factor * (p.kappa * dth / (2.0 * span) * acc + MatrixXcd::Identity(N, N));

  EveMoment m;
  m.H_hat = 0.5 * (H + H.adjoint());  // symmetrize away roundoff
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(m.H_hat);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("eve_second_moment: eigendecomposition failed");
  m.eigvals = es.eigenvalues().cwiseMax(0.0);
  m.eigvecs = es.eigenvectors();
  m.J_frown = m.eigvecs * m.eigvals.cwiseSqrt().asDiagonal();
  m.diag_H = m.H_hat.diagonal().real();
  return m;
}

/// Noise-normalized cascades: Hbar_k = sigma_k^-1 diag(h_k^H) G and the
/// matching per-element row hbar_k = sigma_k^-1 conj(h_k). G rides along for
/// builders that rescale it against other noise floors.
struct NormalizedChannels {
  std::vector<MatrixXcd> Hbar;   // K matrices, N x M
  std::vector<VectorXcd> hbar;   // K vectors (conjugated, normalized)
  MatrixXcd G;
};

inline NormalizedChannels normalize(const ChannelSet& cs, const PhysicalParams& p) {
  NormalizedChannels n;
  const double inv_sigma = 1.0 / std::sqrt(p.sigma2_ue);
  n.Hbar.reserve(cs.h_R.size());
  n.hbar.reserve(cs.h_R.size());
  for (const auto& h : cs.h_R) {
    n.hbar.push_back(inv_sigma * h.conjugate());
    n.Hbar.push_back(n.hbar.back().asDiagonal() * cs.G);
  }
  n.G = cs.G;
  return n;
}

/// Same normalization for an explicit Eve draw.
inline std::pair<MatrixXcd, VectorXcd> normalize_eve(const VectorXcd& h_RE, const MatrixXcd& G,
                                                     const PhysicalParams& p) {
  const VectorXcd hbar = (1.0 / std::sqrt(p.sigma2_eve)) * h_RE.conjugate();
  return {hbar.asDiagonal() * G, hbar};
}

}  // namespace secopt

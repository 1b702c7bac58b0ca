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

// Convex surrogate construction for the two alternating subproblems: rate
// minorants around the current iterate, moment-based deterministic Eve
// rates with matrix-fractional linearization, eigenvalue-shifted quadratic
// majorants for the quartic reflection terms, and the affine radar
// linearization. All rate algebra is in nats.

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "secopt/channels.hpp"
#include "secopt/metrics.hpp"
#include "secopt/scheme.hpp"

namespace secopt {

// ---- real-vector layout ----------------------------------------------------

/// Decision-vector layout shared by all constraint builders. Complex blocks
/// are lifted as [Re; Im] per block, in declaration order, followed by the
/// real variables r (RSMA only) and tau.
struct VarLayout {
  enum class Mode { beamforming, reflection };
  Mode mode = Mode::beamforming;
  int M = 0, N = 0, K = 0;
  bool rsma = true;

  std::vector<int> block_start_c;  // complex offset of each block
  std::vector<int> block_len;
  int n_complex = 0;

  static VarLayout beamforming_layout(int M, int K, bool rsma) {
    VarLayout L;
    L.mode = Mode::beamforming;
    L.M = M;
    L.K = K;
    L.rsma = rsma;
    const int ncols = rsma ? K + 1 : K;  // W columns that are variables
    for (int j = 0; j < ncols + 1; ++j) {  // + z block
      L.block_start_c.push_back(L.n_complex);
      L.block_len.push_back(M);
      L.n_complex += M;
    }
    return L;
  }

  static VarLayout reflection_layout(int N, int K, bool rsma) {
    VarLayout L;
    L.mode = Mode::reflection;
    L.N = N;
    L.K = K;
    L.rsma = rsma;
    L.block_start_c.push_back(0);
    L.block_len.push_back(N);
    L.n_complex = N;
    return L;
  }

  int r_count() const { return rsma ? K : 0; }
  int dim() const { return 2 * n_complex + r_count() + 1; }
  int r_index(int k) const { return 2 * n_complex + k; }
  int tau_index() const { return 2 * n_complex + r_count(); }

  int w_block(int col) const {  // W column (0..K) -> block id
    return rsma ? col : col - 1;
  }
  int z_block() const { return static_cast<int>(block_len.size()) - 1; }
  int n_w_cols() const { return rsma ? K + 1 : K; }

  /// Real indices of complex scalar j within its block lifting.
  std::pair<int, int> reim_index(int block, int j) const {
    const int base = 2 * block_start_c[block];
    return {base + j, base + block_len[block] + j};
  }

  /// Complex view of one block of a real vector.
  VectorXcd get_block(const VectorXd& x, int block) const {
    const int base = 2 * block_start_c[block], n = block_len[block];
    VectorXcd v(n);
    v.real() = x.segment(base, n);
    v.imag() = x.segment(base + n, n);
    return v;
  }

  void set_block(VectorXd& x, int block, const VectorXcd& v) const {
    const int base = 2 * block_start_c[block], n = block_len[block];
    x.segment(base, n) = v.real();
    x.segment(base + n, n) = v.imag();
  }

  /// Lossless pack of the layout's variables (tau appended separately).
  VectorXd pack(const DesignVariables& v, double tau) const {
    VectorXd x = VectorXd::Zero(dim());
    if (mode == Mode::beamforming) {
      for (int col = rsma ? 0 : 1; col <= K; ++col) set_block(x, w_block(col), v.W.col(col));
      set_block(x, z_block(), v.z);
    } else {
      set_block(x, 0, v.theta);
    }
    for (int k = 0; k < r_count(); ++k) x(r_index(k)) = v.r(k);
    x(tau_index()) = tau;
    return x;
  }

  /// Writes the layout's variables back; untouched blocks keep their values.
  double unpack(const VectorXd& x, DesignVariables& v) const {
    if (mode == Mode::beamforming) {
      for (int col = rsma ? 0 : 1; col <= K; ++col) v.W.col(col) = get_block(x, w_block(col));
      if (!rsma) v.W.col(0).setZero();
      v.z = get_block(x, z_block());
    } else {
      v.theta = get_block(x, 0);
    }
    if (rsma)
      for (int k = 0; k < K; ++k) v.r(k) = x(r_index(k));
    else
      v.r.setZero();
    return x(tau_index());
  }
};

// ---- constraint container --------------------------------------------------

enum class Sense { LE, GE };

/// One convex constraint over a VarLayout vector, stored in the canonical
/// form  ||F x||^2 + g'x + d <= 0  (a GE constraint with concave quadratic
/// is flipped on construction; `sense` records how it was authored).
struct QuadraticConstraint {
  std::string name;
  Sense sense = Sense::LE;
  Eigen::MatrixXd F;  // factor rows; empty -> affine constraint
  Eigen::VectorXd g;
  double d = 0;

  double value(const VectorXd& x) const {
    double v = g.dot(x) + d;
    if (F.rows() > 0) v += (F * x).squaredNorm();
    return v;
  }
  double violation(const VectorXd& x) const { return std::max(0.0, value(x)); }
};

/// Incremental builder for the canonical form above.
class ConstraintBuilder {
 public:
  explicit ConstraintBuilder(const VarLayout& L, std::string name, Sense sense)
      : L_(L), c_{} {
    c_.name = std::move(name);
    c_.sense = sense;
    c_.g = VectorXd::Zero(L.dim());
    rows_.reserve(16);
  }

  /// Adds scale * Re{ v^H x_block } to the linear part.
  void linear_re(int block, const VectorXcd& v, double scale) {
    for (int j = 0; j < L_.block_len[block]; ++j) {
      auto [re, im] = L_.reim_index(block, j);
      c_.g(re) += scale * v(j).real();
      c_.g(im) += scale * v(j).imag();
    }
  }

  void linear_real(int idx, double coef) { c_.g(idx) += coef; }
  void constant(double d) { c_.d += d; }

  /// Adds scale * | sum_b c_b^H x_b |^2 as two factor rows; parts lists
  /// (block, functional) pairs.
  void quad_abs2(const std::vector<std::pair<int, VectorXcd>>& parts, double scale) {
    if (scale == 0.0) return;
    const double s = std::sqrt(scale);
    RowVec re_row = RowVec::Zero(L_.dim()), im_row = RowVec::Zero(L_.dim());
    for (const auto& [block, cvec] : parts) {
      for (int j = 0; j < L_.block_len[block]; ++j) {
        auto [re, im] = L_.reim_index(block, j);
        re_row(re) += s * cvec(j).real();
        re_row(im) += s * cvec(j).imag();
        im_row(re) += -s * cvec(j).imag();
        im_row(im) += s * cvec(j).real();
      }
    }
    rows_.push_back(std::move(re_row));
    rows_.push_back(std::move(im_row));
  }

  void quad_abs2(int block, const VectorXcd& c, double scale) { quad_abs2({{block, c}}, scale); }

  /// Adds scale * sum_j dvals_j |x_block(j)|^2 (diagonal quadratic).
  void quad_diag(int block, const VectorXd& dvals, double scale) {
    if (scale == 0.0) return;
    for (int j = 0; j < L_.block_len[block]; ++j) {
      const double w = scale * dvals(j);
      if (w <= 0.0) continue;
      auto [re, im] = L_.reim_index(block, j);
      RowVec row = RowVec::Zero(L_.dim());
      row(re) = std::sqrt(w);
      rows_.push_back(row);
      row(re) = 0;
      row(im) = std::sqrt(w);
      rows_.push_back(std::move(row));
    }
  }

  QuadraticConstraint take() {
    c_.F.resize(static_cast<Eigen::Index>(rows_.size()), L_.dim());
    for (std::size_t i = 0; i < rows_.size(); ++i) c_.F.row(static_cast<Eigen::Index>(i)) = rows_[i];
    rows_.clear();
    return std::move(c_);
  }

 private:
  using RowVec = Eigen::RowVectorXd;
  const VarLayout& L_;
  QuadraticConstraint c_;
  std::vector<RowVec> rows_;
};

/// Factor of a Hermitian PSD matrix, rows f_i with sum_i f_i f_i^H = H;
/// throws when a convex-side block has an eigenvalue below -1e-8 (relative).
inline MatrixXcd psd_factor(const MatrixXcd& H, const std::string& what) {
  const MatrixXcd Hs = 0.5 * (H + H.adjoint());
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(Hs);
  if (es.info() != Eigen::Success) throw std::runtime_error(what + ": eigendecomposition failed");
  const VectorXd lam = es.eigenvalues();
  const double scale = std::max(1.0, lam.cwiseAbs().maxCoeff());
  if (lam.minCoeff() < -1e-8 * scale)
    throw std::runtime_error(what + ": non-convex block (negative eigenvalue " +
                             std::to_string(lam.minCoeff()) + ")");
  int r = 0;
  for (int i = 0; i < lam.size(); ++i)
    if (lam(i) > 1e-14 * scale) ++r;
  MatrixXcd F(r, H.cols());
  int at = 0;
  for (int i = 0; i < lam.size(); ++i)
    if (lam(i) > 1e-14 * scale) F.row(at++) = std::sqrt(lam(i)) * es.eigenvectors().col(i).adjoint();
  return F;
}

// ---- beamforming-side expansion ---------------------------------------------

/// Everything Lemma-style surrogates need at the iterate (W_t, z_t), with
/// theta and u held fixed.
struct BfExpansion {
  VarLayout layout;
  Scheme scheme;
  int M = 0, K = 0;
  MatrixXcd W_t;
  VectorXcd z_t;
  VectorXcd theta_t;

  // user side, per k
  std::vector<VectorXcd> c;         // Hbar_k^H theta_t
  std::vector<cplx> alpha, alpha0;
  VectorXd beta, beta0, sbar_R;
  VectorXd eps0, eps2;

  // Eve side
  double sbar_E = 1.0;
  double ell_E = 0.0;
  MatrixXcd S_E;                    // N x M block of the stacked moment factor
  MatrixXcd R_E;                    // r x M,  R_E^H R_E = G_hat_E
  std::vector<VectorXcd> xi;        // per k, over the private stack
  VectorXd q_E, eps_E, eps1, eps11, epsbar11, epsbarE;
  VectorXcd xi0;                    // common stack
  double q_0E = 0, eps_0E = 0, epsbar12 = 0;
  VectorXd epsbar0E;                // per k

  // radar / budget data at (theta_t, u)
  Eigen::RowVectorXcd hbar_T;       // u^H H_T
  double sbar_radar = 0;            // radar noise denominator at (theta_t, u)
  MatrixXcd budget_quad;            // G^H Phi^H Phi G + zeta^2 G_RT^H G_RT
  double p_ris_static = 0;          // zeta^2 sR^2 ||Phi H_RT Phi||_F^2 + 2 sR^2 ||Phi||_F^2

  bool ridge_flagged = false;

  /// Stack slots for the Eve interference while decoding private k:
  /// W columns by index, -1 for z.
  std::vector<int> private_stack(int k) const {
    std::vector<int> cols;
    if (scheme.rsma()) cols.push_back(0);
    for (int i = 1; i <= K; ++i)
      if (i != k + 1) cols.push_back(i);
    cols.push_back(-1);
    return cols;
  }
  std::vector<int> common_stack() const {
    std::vector<int> cols;
    for (int i = 1; i <= K; ++i) cols.push_back(i);
    cols.push_back(-1);
    return cols;
  }
};

namespace detail {

/// ln(1 + |a|^2/b) minorant constants shared by both subproblem expansions.
inline double rate_minorant_const(const cplx& a, double b, double noise_const) {
  const double a2 = std::norm(a);
  return std::log1p(a2 / b) - a2 / b - a2 * noise_const / (b * (b + a2));
}

struct RankOneInverseStats {
  double q = 0;       // scaled fractional value at the iterate, in [0, 1)
  double eps = 0;     // same with the squared inverse
  VectorXcd y;        // Q^{-1} b
  bool ridged = false;
};

/// Q = I + bb^H / sbar via dense factorization (ridged if degenerate).
inline RankOneInverseStats rank_one_inverse(const VectorXcd& b, double sbar) {
  RankOneInverseStats st;
  MatrixXcd Q = MatrixXcd::Identity(b.size(), b.size());
  Q.noalias() += (1.0 / sbar) * b * b.adjoint();
  if (b.squaredNorm() / sbar > 1e12) {  // cond(Q) = 1 + ||b||^2/sbar
    Q.diagonal().array() += 1e-10;
    st.ridged = true;
  }
  Eigen::LLT<MatrixXcd> llt(Q);
  if (llt.info() != Eigen::Success) {
    Q.diagonal().array() += 1e-10;
    llt.compute(Q);
    st.ridged = true;
    if (llt.info() != Eigen::Success)
      throw std::runtime_error("rank_one_inverse: factorization failed");
  }
  st.y = llt.solve(b);
  st.q = std::real(b.dot(st.y)) / sbar;
  st.eps = st.y.squaredNorm() / sbar;
  return st;
}

}  // namespace detail

inline BfExpansion bf_expand(const DesignVariables& v, const NormalizedChannels& nch,
                             const EveMoment& em, const PhysicalParams& p, Scheme scheme) {
  const int M = static_cast<int>(v.W.rows());
  const int K = static_cast<int>(nch.Hbar.size());
  BfExpansion e;
  e.layout = VarLayout::beamforming_layout(M, K, scheme.rsma());
  e.scheme = scheme;
  e.M = M;
  e.K = K;
  e.W_t = v.W;
  e.z_t = v.z;
  e.theta_t = v.theta;

  e.c.resize(K);
  e.alpha.resize(K);
  e.alpha0.resize(K);
  e.beta.resize(K);
  e.beta0.resize(K);
  e.sbar_R.resize(K);
  e.eps0.resize(K);
  e.eps2.resize(K);
  for (int k = 0; k < K; ++k) {
    e.c[k] = nch.Hbar[k].adjoint() * v.theta;
    const VectorXcd gains = (e.c[k].adjoint() * v.W).transpose();
    const double gz = std::norm(e.c[k].dot(v.z));
    e.sbar_R(k) = detail::sigma_bar_term(v.theta, nch.hbar[k], p.sigma2_ris) + 1.0;
    double sum_priv = 0;
    for (int i = 1; i <= K; ++i) sum_priv += std::norm(gains(i));
    e.alpha[k] = gains(k + 1);
    e.beta(k) = sum_priv - std::norm(gains(k + 1)) + gz + e.sbar_R(k);
    e.alpha0[k] = gains(0);
    e.beta0(k) = sum_priv + gz + e.sbar_R(k);
    e.eps0(k) = detail::rate_minorant_const(e.alpha[k], e.beta(k), e.sbar_R(k));
    e.eps2(k) = detail::rate_minorant_const(e.alpha0[k], e.beta0(k), e.sbar_R(k));
  }

  e.sbar_E = 1.0 + v.theta.cwiseAbs2().dot(em.j_tilde_diag(p));
  e.S_E = em.g_hat_factor(v.theta, nch.G, p);
  e.R_E = psd_factor(e.S_E.adjoint() * e.S_E, "bf_expand G_hat_E");
  double ell = e.sbar_E - 1.0;
  for (int i = 0; i <= K; ++i) ell += (e.R_E * v.W.col(i)).squaredNorm();
  ell += (e.R_E * v.z).squaredNorm();
  e.ell_E = ell;

  const MatrixXcd SW = e.S_E * v.W;  // per-column Eve factor images
  const VectorXcd Sz = e.S_E * v.z;
  const int N = static_cast<int>(e.S_E.rows());

  auto build_stack = [&](const std::vector<int>& cols) {
    VectorXcd b(N * static_cast<int>(cols.size()));
    for (std::size_t s = 0; s < cols.size(); ++s)
      b.segment(static_cast<int>(s) * N, N) = cols[s] < 0 ? Sz : SW.col(cols[s]);
    return b;
  };
  auto gather_xi = [&](const VectorXcd& y, const std::vector<int>& cols) {
    VectorXcd xi(M * static_cast<int>(cols.size()));
    for (std::size_t s = 0; s < cols.size(); ++s)
      xi.segment(static_cast<int>(s) * M, M) =
          e.S_E.adjoint() * y.segment(static_cast<int>(s) * N, N) / e.sbar_E;
    return xi;
  };

  e.xi.resize(K);
  e.q_E.resize(K);
  e.eps_E.resize(K);
  e.eps1.resize(K);
  e.eps11.resize(K);
  e.epsbar11.resize(K);
  e.epsbarE.resize(K);
  e.epsbar0E.resize(K);
  for (int k = 0; k < K; ++k) {
    const auto cols = e.private_stack(k);
    const auto st = detail::rank_one_inverse(build_stack(cols), e.sbar_E);
    e.ridge_flagged |= st.ridged;
    e.xi[k] = gather_xi(st.y, cols);
    e.q_E(k) = st.q;
    e.eps_E(k) = st.eps;
    e.eps1(k) = 1.0 - std::log((1.0 - st.q) / e.sbar_E) - std::log1p(e.ell_E);
    e.eps11(k) = e.eps1(k) - st.q / (1.0 - st.q);
    e.epsbar11(k) = e.eps11(k) - st.eps / (1.0 - st.q) - e.sbar_E / (1.0 + e.ell_E);
    e.epsbarE(k) = e.eps0(k) + e.eps1(k) - e.sbar_E / (1.0 + e.ell_E) -
                   st.eps / (1.0 - st.q) - st.q / (1.0 - st.q);
  }
  {
    const auto cols = e.common_stack();
    const auto st = detail::rank_one_inverse(build_stack(cols), e.sbar_E);
    e.ridge_flagged |= st.ridged;
    e.xi0 = gather_xi(st.y, cols);
    e.q_0E = st.q;
    e.eps_0E = st.eps;
    e.epsbar12 = 1.0 - st.q / (1.0 - st.q) - st.eps / (1.0 - st.q) -
                 e.sbar_E / (1.0 + e.ell_E) - std::log((1.0 - st.q) / e.sbar_E) -
                 std::log1p(e.ell_E);
    for (int k = 0; k < K; ++k)
      e.epsbar0E(k) = 1.0 + e.eps2(k) - std::log((1.0 - st.q) / e.sbar_E) -
                      std::log1p(e.ell_E) - e.sbar_E / (1.0 + e.ell_E) -
                      st.q / (1.0 - st.q) - st.eps / (1.0 - st.q);
  }

  return e;
}

/// Fills the theta/u dependent radar and budget data of a beamforming
/// expansion (separated so tests can exercise the Eve algebra alone).
inline void bf_attach_radar_budget(BfExpansion& e, const ChannelSet& cs, const VectorXcd& u,
                                   const PhysicalParams& p) {
  const auto Phi = e.theta_t.asDiagonal();
  const MatrixXcd H_T = cs.G.adjoint() * Phi * cs.H_RT * Phi * cs.G;
  const MatrixXcd H_0 = cs.G.adjoint() * Phi * cs.H_RT * Phi;
  const MatrixXcd H_1 = cs.G.adjoint() * Phi;
  e.hbar_T = u.adjoint() * H_T;
  e.sbar_radar = p.rcs * p.sigma2_ris * (u.adjoint() * H_0).squaredNorm() +
                 p.sigma2_ris * (u.adjoint() * H_1).squaredNorm() +
                 p.sigma2_bs * u.squaredNorm();
  const MatrixXcd G_RT = Phi * cs.H_RT * Phi * cs.G;
  e.budget_quad = cs.G.adjoint() * e.theta_t.cwiseAbs2().asDiagonal() * cs.G +
                  p.rcs * G_RT.adjoint() * G_RT;
  e.p_ris_static = p.rcs * p.sigma2_ris * (Phi * cs.H_RT * Phi).squaredNorm() +
                   2.0 * p.sigma2_ris * e.theta_t.squaredNorm();
}

// ---- beamforming-side constraints -------------------------------------------

namespace detail {

/// Shared tail: Eve-stack linear/quadratic pieces plus the mutual
/// interference quadratic of the served rate.
inline void bf_add_eve_terms(ConstraintBuilder& b, const BfExpansion& e,
                             const std::vector<int>& stack_cols, const VectorXcd& xi,
                             double q) {
  // 2 Re{xi^H omega} / (1-q) enters the GE side positively -> negated (LE)
  const int M = e.M;
  std::vector<std::pair<int, VectorXcd>> parts;
  for (std::size_t s = 0; s < stack_cols.size(); ++s) {
    const int block =
        stack_cols[s] < 0 ? e.layout.z_block() : e.layout.w_block(stack_cols[s]);
    const VectorXcd seg = xi.segment(static_cast<int>(s) * M, M);
    b.linear_re(block, seg, -2.0 / (1.0 - q));
    parts.emplace_back(block, seg);
  }
  b.quad_abs2(parts, 1.0 / (1.0 - q));  // omega^H xi xi^H omega / (1-q)

  // sum_i w_i^H G_hat w_i + z^H G_hat z over all beams, / (1+ell)
  const double s_ghat = 1.0 / (1.0 + e.ell_E);
  for (int col = e.scheme.rsma() ? 0 : 1; col <= e.K; ++col)
    for (int r = 0; r < e.R_E.rows(); ++r)
      b.quad_abs2(e.layout.w_block(col), e.R_E.row(r).adjoint(), s_ghat);
  for (int r = 0; r < e.R_E.rows(); ++r)
    b.quad_abs2(e.layout.z_block(), e.R_E.row(r).adjoint(), s_ghat);
}

}  // namespace detail

/// Secured-private-rate constraint for user k:
/// surrogate(R_k) - surrogate(E R_k,Eve) + r_k >= tau.
inline QuadraticConstraint bf_epsr_constraint(const BfExpansion& e, int k) {
  ConstraintBuilder b(e.layout, "epsr_" + std::to_string(k), Sense::GE);
  b.constant(-e.epsbarE(k));
  b.linear_re(e.layout.w_block(k + 1), e.c[k] * e.alpha[k], -2.0 / e.beta(k));
  detail::bf_add_eve_terms(b, e, e.private_stack(k), e.xi[k], e.q_E(k));
  const double s_own =
      std::norm(e.alpha[k]) / (e.beta(k) * (e.beta(k) + std::norm(e.alpha[k])));
  for (int i = 1; i <= e.K; ++i) b.quad_abs2(e.layout.w_block(i), e.c[k], s_own);
  b.quad_abs2(e.layout.z_block(), e.c[k], s_own);
  if (e.layout.rsma) b.linear_real(e.layout.r_index(k), -1.0);
  b.linear_real(e.layout.tau_index(), 1.0);
  return b.take();
}

/// Common-stream secrecy constraint at user k:
/// surrogate(R_s0,k) - surrogate(E R_s0,Eve) >= sum_k r_k.
inline QuadraticConstraint bf_ecsr_constraint(const BfExpansion& e, int k) {
  ConstraintBuilder b(e.layout, "ecsr_" + std::to_string(k), Sense::GE);
  b.constant(-e.epsbar0E(k));
  b.linear_re(e.layout.w_block(0), e.c[k] * e.alpha0[k], -2.0 / e.beta0(k));
  detail::bf_add_eve_terms(b, e, e.common_stack(), e.xi0, e.q_0E);
  const double s_own =
      std::norm(e.alpha0[k]) / (e.beta0(k) * (e.beta0(k) + std::norm(e.alpha0[k])));
  for (int i = 0; i <= e.K; ++i) b.quad_abs2(e.layout.w_block(i), e.c[k], s_own);
  b.quad_abs2(e.layout.z_block(), e.c[k], s_own);
  for (int j = 0; j < e.K; ++j) b.linear_real(e.layout.r_index(j), 1.0);
  return b.take();
}

/// Affine radar-return minorant: 2 Re{w_t^H Ht w + z_t^H Hb z} >= threshold.
inline QuadraticConstraint bf_radar_constraint(const BfExpansion& e, const PhysicalParams& p) {
  ConstraintBuilder b(e.layout, "radar", Sense::GE);
  if (p.rcs == 0.0) {
    // no target return: constraint collapses to 0 >= Gamma_r
    b.constant(p.gamma_r > 0 ? 1.0 : 0.0);
    return b.take();
  }
  double thresh = p.gamma_r * e.sbar_radar / p.rcs;
  const VectorXcd hT = e.hbar_T.adjoint();  // M
  for (int col = e.scheme.rsma() ? 0 : 1; col <= e.K; ++col) {
    const cplx gain = (e.hbar_T * e.W_t.col(col))(0);
    thresh += std::norm(gain);
    b.linear_re(e.layout.w_block(col), hT * gain, -2.0);
  }
  const cplx gain_z = (e.hbar_T * e.z_t)(0);
  thresh += std::norm(gain_z);
  b.linear_re(e.layout.z_block(), hT * gain_z, -2.0);
  b.constant(thresh);
  return b.take();
}

/// BS power ball and the beam-dependent part of the RIS power budget.
inline std::vector<QuadraticConstraint> bf_budget_constraints(const BfExpansion& e,
                                                              const PhysicalParams& p) {
  std::vector<QuadraticConstraint> out;
  {
    ConstraintBuilder b(e.layout, "bs_power", Sense::LE);
    for (int col = e.scheme.rsma() ? 0 : 1; col <= e.K; ++col)
      for (int j = 0; j < e.M; ++j)
        b.quad_abs2(e.layout.w_block(col), VectorXcd::Unit(e.M, j), 1.0);
    for (int j = 0; j < e.M; ++j) b.quad_abs2(e.layout.z_block(), VectorXcd::Unit(e.M, j), 1.0);
    b.constant(-p.p_bs);
    out.push_back(b.take());
  }
  if (e.scheme.active_ris()) {
    const double p_avail = p.p_ris - e.p_ris_static;
    if (p_avail <= 0)
      throw std::runtime_error("bf_budget_constraints: RIS static power exceeds budget");
    ConstraintBuilder b(e.layout, "ris_budget", Sense::LE);
    const MatrixXcd R = psd_factor(e.budget_quad, "bf ris_budget");
    for (int col = e.scheme.rsma() ? 0 : 1; col <= e.K; ++col)
      for (int r = 0; r < R.rows(); ++r)
        b.quad_abs2(e.layout.w_block(col), R.row(r).adjoint(), 1.0);
    for (int r = 0; r < R.rows(); ++r)
      b.quad_abs2(e.layout.z_block(), R.row(r).adjoint(), 1.0);
    b.constant(-p_avail);
    out.push_back(b.take());
  }
  return out;
}

// ---- reflection-side expansion ----------------------------------------------

/// Quadratic majorant data for a lifted quartic v^H D v, v = theta (x) theta:
/// majorant(theta) = lam_half theta^H theta + Re{theta^H d} + c.
struct QuarticMajorant {
  double lam_half = 0;
  VectorXcd d;
  double c = 0;

  double value(const VectorXcd& theta) const {
    return lam_half * theta.squaredNorm() + std::real(theta.dot(d)) + c;
  }
};

namespace detail {

/// Real-lift tail shared by the exact and structured entry points: given
/// d_raw = 2 (D - lam I) v_t, produce the convex quadratic majorant pieces.
inline QuarticMajorant mm_tail(const VectorXcd& d_raw, const VectorXcd& theta_t,
                               double const_part) {
  const int N = static_cast<int>(theta_t.size());
  const Eigen::Map<const MatrixXcd> Dd(d_raw.data(), N, N);
  Eigen::MatrixXd Dbar(2 * N, 2 * N);
  Dbar.topLeftCorner(N, N) = Dd.real();
  Dbar.topRightCorner(N, N) = Dd.imag();
  Dbar.bottomLeftCorner(N, N) = Dd.imag();
  Dbar.bottomRightCorner(N, N) = -Dd.real();
  const Eigen::MatrixXd Dsym = Dbar + Dbar.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Dsym);
  const double lam_bar = es.eigenvalues().maxCoeff();

  Eigen::VectorXd theta_bar(2 * N);
  theta_bar.head(N) = theta_t.real();
  theta_bar.tail(N) = theta_t.imag();
  const Eigen::VectorXd mrow = (Dsym - lam_bar * Eigen::MatrixXd::Identity(2 * N, 2 * N)) * theta_bar;

  QuarticMajorant q;
  q.lam_half = 0.5 * lam_bar;
  q.d.resize(N);
  q.d.real() = mrow.head(N);
  q.d.imag() = mrow.tail(N);
  const double c2 = 0.5 * lam_bar * theta_bar.squaredNorm() -
                    theta_bar.dot(Dbar.transpose() * theta_bar);
  q.c = const_part + c2;
  return q;
}

}  // namespace detail

/// Majorant of v^H D v over |theta_n| <= beta_max, tight structure at
/// v_t = theta_t (x) theta_t up to the amplitude-cap relaxation.
inline QuarticMajorant mm_quartic_majorant(const MatrixXcd& D, const VectorXcd& theta_t,
                                           double beta_max) {
  const int N = static_cast<int>(theta_t.size());
  VectorXcd v_t(N * N);
  for (int j = 0; j < N; ++j) v_t.segment(j * N, N) = theta_t(j) * theta_t;
  const MatrixXcd Ds = 0.5 * (D + D.adjoint());
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(Ds);
  const double lam = std::max(es.eigenvalues().maxCoeff(), 0.0);
  const VectorXcd d_raw = 2.0 * (Ds * v_t - lam * v_t);
  const double vDv = std::real(v_t.dot(Ds * v_t));
  const double c1r = lam * v_t.squaredNorm() - vDv +
                     lam * double(N) * double(N) * std::pow(beta_max, 4);
  return detail::mm_tail(d_raw, theta_t, c1r);
}

/// Expansion state for the reflection subproblem at theta_t.
struct RisExpansion {
  VarLayout layout;
  Scheme scheme;
  int N = 0, K = 0;
  VectorXcd theta_t;
  double beta_cap = 1.0;

  // user side
  std::vector<MatrixXcd> m;        // Hbar_k [W z], N x (K+2)
  std::vector<cplx> alpha, alpha0;
  VectorXd beta, beta0, sbar_R;
  VectorXd eps4, eps6;
  std::vector<VectorXd> Bk_diag;   // sigma_R^2 |hbar_k|^2

  // Eve side
  MatrixXcd Gamma_E;
  MatrixXcd Gamma_factor;          // psd factor of Gamma_E, cached for builders
  double mu_E = 0;
  std::vector<VectorXcd> p_vec;    // per k
  VectorXd u_E, eps5, epsbar5, eps13;
  VectorXcd p0_vec;
  double u_0E = 0, eps8 = 0;
  VectorXd eps7, eps14;

  // radar majorization
  double sigma2_u = 0;             // sigma^2 ||u||^2
  VectorXd C_diag;                 // sigma_R^2 |G u|^2
  QuarticMajorant radar_mm;        // majorant of v^H D v, D = Gamma_r B - A
  double lambda_D = 0;

  // power majorization
  VectorXd Gt_diag;                // G_C + G_AN + 2 sigma_R^2
  QuarticMajorant power_mm;        // majorant of v^H Jt v
  double lambda_J = 0;

  bool ridge_flagged = false;
  bool common_zero = false;             // no common beam at the expansion point
  mutable bool budget_suspect = false;  // RHS of the power row went large-negative
};

namespace detail {

/// Columns of [D_tilde_1 G v, ..., D_tilde_N G v].
inline MatrixXcd t_block(const EveMoment& em, const VectorXcd& Gv) {
  const int N = static_cast<int>(Gv.size());
  MatrixXcd T(N, N);
  for (int n = 0; n < N; ++n)
    T.col(n) = std::sqrt(em.eigvals(n)) * em.eigvecs.col(n).conjugate().cwiseProduct(Gv);
  return T;
}

}  // namespace detail

inline RisExpansion ris_expand(const DesignVariables& v, const NormalizedChannels& nch,
                               const ChannelSet& cs, const EveMoment& em,
                               const PhysicalParams& p, Scheme scheme) {
  const int N = static_cast<int>(v.theta.size());
  const int K = static_cast<int>(nch.Hbar.size());
  RisExpansion e;
  e.layout = VarLayout::reflection_layout(N, K, scheme.rsma());
  e.scheme = scheme;
  e.N = N;
  e.K = K;
  e.theta_t = v.theta;
  e.beta_cap = p.beta_max;
  e.common_zero = v.W.col(0).norm() == 0.0;

  // user-side minorant data
  e.m.resize(K);
  e.alpha.resize(K);
  e.alpha0.resize(K);
  e.beta.resize(K);
  e.beta0.resize(K);
  e.sbar_R.resize(K);
  e.eps4.resize(K);
  e.eps6.resize(K);
  e.Bk_diag.resize(K);
  for (int k = 0; k < K; ++k) {
    e.m[k].resize(N, K + 2);
    e.m[k].leftCols(K + 1) = nch.Hbar[k] * v.W;
    e.m[k].col(K + 1) = nch.Hbar[k] * v.z;
    const VectorXcd gains = (v.theta.adjoint() * e.m[k]).transpose();
    e.sbar_R(k) = detail::sigma_bar_term(v.theta, nch.hbar[k], p.sigma2_ris) + 1.0;
    double sum_priv = 0;
    for (int i = 1; i <= K; ++i) sum_priv += std::norm(gains(i));
    const double gz = std::norm(gains(K + 1));
    e.alpha[k] = gains(k + 1);
    e.beta(k) = sum_priv - std::norm(gains(k + 1)) + gz + e.sbar_R(k);
    e.alpha0[k] = gains(0);
    e.beta0(k) = sum_priv + gz + e.sbar_R(k);
    e.eps4(k) = detail::rate_minorant_const(e.alpha[k], e.beta(k), 1.0);
    e.eps6(k) = detail::rate_minorant_const(e.alpha0[k], e.beta0(k), 1.0);
    e.Bk_diag[k] = p.sigma2_ris * nch.hbar[k].cwiseAbs2();
  }

  // Eve second-moment blocks
  const double inv_se = 1.0 / std::sqrt(p.sigma2_eve);
  const double sR = std::sqrt(p.sigma2_ris);
  const MatrixXcd GW = nch.G * v.W;
  const VectorXcd Gz = nch.G * v.z;
  std::vector<MatrixXcd> Tw(K + 1);
  for (int i = 0; i <= K; ++i) Tw[i] = detail::t_block(em, GW.col(i));
  const MatrixXcd Tz = detail::t_block(em, Gz);

  {  // Gamma_E from the Hadamard identity with the full beam set
    MatrixXcd Pi = v.W * v.W.adjoint();
    Pi.noalias() += v.z * v.z.adjoint();
    const MatrixXcd GPG = nch.G * Pi * nch.G.adjoint();
    e.Gamma_E = (1.0 / p.sigma2_eve) *
                (GPG.cwiseProduct(em.H_hat.conjugate()) +
                 (p.sigma2_ris * em.diag_H).asDiagonal().toDenseMatrix());
    e.Gamma_E = 0.5 * (e.Gamma_E + e.Gamma_E.adjoint());
    e.Gamma_factor = psd_factor(e.Gamma_E, "ris Gamma_E");
    e.mu_E = std::real(v.theta.dot(e.Gamma_E * v.theta));
  }

  // Stacked factor per stream: [E, T-blocks of the interfering beams, T(z)].
  // The amplification block contributes N^2 columns, block n holding the
  // diagonal matrix sigma_R sqrt(lam_n) diag(conj(e_n)) column by column.
  auto build_psi = [&](const std::vector<int>& wcols) {
    const int nbeam = static_cast<int>(wcols.size()) + 1;
    MatrixXcd Psi = MatrixXcd::Zero(N, N * N + N * nbeam);
    for (int n = 0; n < N; ++n) {
      const double s = sR * std::sqrt(em.eigvals(n));
      for (int j = 0; j < N; ++j)
        Psi(j, n * N + j) = s * std::conj(em.eigvecs(j, n));
    }
    int at = N * N;
    for (int c : wcols) {
      Psi.middleCols(at, N) = Tw[c];
      at += N;
    }
    Psi.middleCols(at, N) = Tz;
    return MatrixXcd(inv_se * Psi);
  };

  auto stack_stats = [&](const MatrixXcd& Psi, VectorXcd& p_out, double& u_out,
                         double& eps_out) {
    const VectorXcd a = Psi.adjoint() * v.theta;
    const auto st = detail::rank_one_inverse(a, 1.0);
    e.ridge_flagged |= st.ridged;
    p_out = Psi * st.y;
    u_out = st.q;
    eps_out = st.eps;
  };

  e.p_vec.resize(K);
  e.u_E.resize(K);
  e.eps5.resize(K);
  e.epsbar5.resize(K);
  e.eps13.resize(K);
  for (int k = 0; k < K; ++k) {
    std::vector<int> wcols;
    if (scheme.rsma()) wcols.push_back(0);
    for (int i = 1; i <= K; ++i)
      if (i != k + 1) wcols.push_back(i);
    stack_stats(build_psi(wcols), e.p_vec[k], e.u_E(k), e.eps5(k));
    e.eps13(k) = 1.0 - std::log(1.0 - e.u_E(k)) - std::log1p(e.mu_E) -
                 1.0 / (1.0 + e.mu_E) - e.eps5(k) / (1.0 - e.u_E(k)) -
                 e.u_E(k) / (1.0 - e.u_E(k));
    e.epsbar5(k) = 1.0 + e.eps4(k) - std::log(1.0 - e.u_E(k)) - std::log1p(e.mu_E) -
                   1.0 / (1.0 + e.mu_E) -
                   (e.u_E(k) + e.eps5(k)) / (1.0 - e.u_E(k));
  }
  e.eps7.resize(K);
  e.eps14.resize(K);
  {
    std::vector<int> wcols;
    for (int i = 1; i <= K; ++i) wcols.push_back(i);
    stack_stats(build_psi(wcols), e.p0_vec, e.u_0E, e.eps8);
    for (int k = 0; k < K; ++k) {
      e.eps7(k) = e.eps6(k) - std::log(1.0 - e.u_0E) - std::log1p(e.mu_E) -
                  1.0 / (1.0 + e.mu_E) - e.u_0E / (1.0 - e.u_0E) + 1.0;
      e.eps14(k) = 1.0 - std::log(1.0 - e.u_0E) - std::log1p(e.mu_E) -
                   1.0 / (1.0 + e.mu_E) -
                   (e.u_0E + e.eps8) / (1.0 - e.u_0E);
    }
  }

  // ---- radar majorization (structured eigenvalues of the Kronecker lift) ----
  const VectorXcd g = cs.h_RT.conjugate().cwiseProduct(cs.G * v.u);  // Gt^H u
  const VectorXd Dh = cs.h_RT.cwiseAbs2();
  {
    MatrixXcd Pi = v.W * v.W.adjoint();
    Pi.noalias() += v.z * v.z.adjoint();
    // the plain-transpose reflection pairing conjugates the beam Gram block
    const MatrixXcd Sh = cs.h_RT.asDiagonal() * cs.G;  // diag(h_RT) G, N x M
    const MatrixXcd S_r =
        (p.gamma_r * p.sigma2_ris * Dh).asDiagonal().toDenseMatrix() -
        (Sh * Pi * Sh.adjoint()).conjugate();
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(0.5 * (S_r + S_r.adjoint()));
    const double g2 = g.squaredNorm();
    e.lambda_D = p.rcs * std::max(es.eigenvalues().maxCoeff() * g2, 0.0);
    // D v_t and v_t^H D v_t through the Kronecker identity
    const VectorXcd Sth = S_r * v.theta;
    const VectorXcd gth = g * (g.dot(v.theta));
    VectorXcd Dv(N * N), v_t(N * N);
    for (int j = 0; j < N; ++j) {
      Dv.segment(j * N, N) = p.rcs * Sth(j) * gth;
      v_t.segment(j * N, N) = v.theta(j) * v.theta;
    }
    const double vDv =
        p.rcs * std::real(v.theta.dot(Sth)) * std::norm(g.dot(v.theta));
    const double c0 = p.gamma_r * p.sigma2_bs * v.u.squaredNorm();
    const double c1r = e.lambda_D * v_t.squaredNorm() - vDv +
                       e.lambda_D * double(N) * double(N) * std::pow(p.beta_max, 4);
    e.radar_mm = detail::mm_tail(2.0 * (Dv - e.lambda_D * v_t), v.theta, c0 + c1r);
    e.sigma2_u = p.sigma2_bs * v.u.squaredNorm();
    e.C_diag = p.sigma2_ris * (cs.G * v.u).cwiseAbs2();
  }

  // ---- power majorization ----
  {
    const MatrixXcd S_W = cs.h_RT.asDiagonal() * (cs.G * v.W);  // N x (K+1)
    const VectorXcd s_z = cs.h_RT.cwiseProduct(Gz);
    MatrixXcd M_J = (S_W * S_W.adjoint() + s_z * s_z.adjoint()).conjugate();
    M_J += (p.sigma2_ris * Dh).asDiagonal();
    M_J = 0.5 * (M_J + M_J.adjoint());
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(M_J);
    e.lambda_J = p.rcs * Dh.maxCoeff() * std::max(es.eigenvalues().maxCoeff(), 0.0);
    const VectorXcd Mth = M_J * v.theta;
    VectorXcd Jv(N * N), v_t(N * N);
    for (int j = 0; j < N; ++j) {
      Jv.segment(j * N, N) = p.rcs * (Dh(j) * v.theta(j)) * Mth;
      v_t.segment(j * N, N) = v.theta(j) * v.theta;
    }
    const double thDth = v.theta.cwiseAbs2().dot(Dh);
    const double vJv = p.rcs * thDth * std::real(v.theta.dot(Mth));
    const double c2 = e.lambda_J * v_t.squaredNorm() - vJv +
                      e.lambda_J * double(N) * double(N) * std::pow(p.beta_max, 4);
    e.power_mm = detail::mm_tail(2.0 * (Jv - e.lambda_J * v_t), v.theta, c2);
    e.Gt_diag = (GW.cwiseAbs2().rowwise().sum() + Gz.cwiseAbs2()).eval();
    e.Gt_diag.array() += 2.0 * p.sigma2_ris;
  }

  return e;
}

// ---- reflection-side constraints ---------------------------------------------

inline QuadraticConstraint ris_epsr_constraint(const RisExpansion& e, int k) {
  ConstraintBuilder b(e.layout, "epsr_" + std::to_string(k), Sense::GE);
  b.constant(-e.epsbar5(k));
  // linear: 2 Re{theta^H d_Ek}
  const VectorXcd d = e.m[k].col(k + 1) * (std::conj(e.alpha[k]) / e.beta(k)) +
                      e.p_vec[k] / (1.0 - e.u_E(k));
  b.linear_re(0, d, -2.0);
  // quadratic D_Ek
  const double s_own =
      std::norm(e.alpha[k]) / (e.beta(k) * (e.beta(k) + std::norm(e.alpha[k])));
  for (int i = 1; i <= e.K + 1; ++i) b.quad_abs2(0, e.m[k].col(i), s_own);
  b.quad_diag(0, e.Bk_diag[k], s_own);
  b.quad_abs2(0, e.p_vec[k], 1.0 / (1.0 - e.u_E(k)));
  const MatrixXcd& RG = e.Gamma_factor;
  for (int r = 0; r < RG.rows(); ++r)
    b.quad_abs2(0, RG.row(r).adjoint(), 1.0 / (1.0 + e.mu_E));
  if (e.layout.rsma) b.linear_real(e.layout.r_index(k), -1.0);
  b.linear_real(e.layout.tau_index(), 1.0);
  return b.take();
}

inline QuadraticConstraint ris_ecsr_constraint(const RisExpansion& e, int k) {
  ConstraintBuilder b(e.layout, "ecsr_" + std::to_string(k), Sense::GE);
  b.constant(-(e.eps7(k) - e.eps8 / (1.0 - e.u_0E)));
  const VectorXcd ups = e.m[k].col(0) * (std::conj(e.alpha0[k]) / e.beta0(k)) +
                        e.p0_vec / (1.0 - e.u_0E);
  b.linear_re(0, ups, -2.0);
  const double s_own =
      std::norm(e.alpha0[k]) / (e.beta0(k) * (e.beta0(k) + std::norm(e.alpha0[k])));
  for (int i = 0; i <= e.K + 1; ++i) b.quad_abs2(0, e.m[k].col(i), s_own);
  b.quad_diag(0, e.Bk_diag[k], s_own);
  b.quad_abs2(0, e.p0_vec, 1.0 / (1.0 - e.u_0E));
  const MatrixXcd& RG = e.Gamma_factor;
  for (int r = 0; r < RG.rows(); ++r)
    b.quad_abs2(0, RG.row(r).adjoint(), 1.0 / (1.0 + e.mu_E));
  for (int j = 0; j < e.K; ++j) b.linear_real(e.layout.r_index(j), 1.0);
  return b.take();
}

inline QuadraticConstraint ris_radar_constraint(const RisExpansion& e, const PhysicalParams& p) {
  ConstraintBuilder b(e.layout, "radar", Sense::LE);
  b.quad_diag(0, e.C_diag, p.gamma_r);
  b.quad_diag(0, VectorXd::Ones(e.N), e.radar_mm.lam_half);
  b.linear_re(0, e.radar_mm.d, 1.0);
  b.constant(e.radar_mm.c);
  return b.take();
}

inline QuadraticConstraint ris_budget_constraint(const RisExpansion& e, const PhysicalParams& p) {
  ConstraintBuilder b(e.layout, "ris_budget", Sense::LE);
  b.quad_diag(0, e.Gt_diag, 1.0);
  b.quad_diag(0, VectorXd::Ones(e.N), e.power_mm.lam_half);
  b.linear_re(0, e.power_mm.d, 1.0);
  const double rhs = p.p_ris - e.power_mm.c;
  if (rhs < -1e3 * std::max(1.0, p.p_ris)) e.budget_suspect = true;
  b.constant(-rhs);
  return b.take();
}

// ---- dense reference lifts (tests and identity checks) ------------------------

/// Lifted radar numerator: conj(S Pi S^H) (x) (g g^H), S = diag(h_RT) G,
/// g = S^... = diag(h_RT^*) G u. The beam Gram block is conjugated because
/// the double reflection pairs theta with itself through a plain transpose.
inline MatrixXcd radar_lift_A(const ChannelSet& cs, const DesignVariables& v,
                              const PhysicalParams& p) {
  const MatrixXcd Sh = cs.h_RT.asDiagonal() * cs.G;  // N x M
  MatrixXcd Pi = v.W * v.W.adjoint();
  Pi.noalias() += v.z * v.z.adjoint();
  const MatrixXcd left = (Sh * Pi * Sh.adjoint()).conjugate();
  const VectorXcd g = cs.h_RT.conjugate().cwiseProduct((cs.G * v.u).eval());
  return p.rcs * Eigen::kroneckerProduct(left, (g * g.adjoint()).eval()).eval();
}

/// zeta^2 sR^2 diag|h_RT|^2 (x) (Gt^H u u^H Gt): lifted radar noise term.
inline MatrixXcd radar_lift_B(const ChannelSet& cs, const DesignVariables& v,
                              const PhysicalParams& p) {
  const MatrixXcd Gt = cs.G.adjoint() * cs.h_RT.asDiagonal();
  const VectorXcd g = Gt.adjoint() * v.u;
  const MatrixXd Dh = cs.h_RT.cwiseAbs2().asDiagonal();
  return p.rcs * p.sigma2_ris *
         Eigen::kroneckerProduct(Dh, (g * g.adjoint()).eval()).eval();
}

inline VectorXd radar_lift_C(const ChannelSet& cs, const DesignVariables& v,
                             const PhysicalParams& p) {
  return p.sigma2_ris * (cs.G * v.u).cwiseAbs2();
}

/// Lifted RIS power quartic; the beam factors pair with the plain-transpose
/// reflection structure, hence the conjugated Gram blocks.
inline MatrixXcd power_lift_J(const ChannelSet& cs, const DesignVariables& v,
                              const PhysicalParams& p) {
  const int N = static_cast<int>(cs.G.rows());
  const MatrixXcd S_W = cs.h_RT.asDiagonal() * (cs.G * v.W);
  const VectorXcd s_z = cs.h_RT.cwiseProduct((cs.G * v.z).eval());
  MatrixXcd right = (S_W * S_W.adjoint() + s_z * s_z.adjoint()).conjugate();
  right += (p.sigma2_ris * cs.h_RT.cwiseAbs2()).asDiagonal();
  const MatrixXd Dh = cs.h_RT.cwiseAbs2().asDiagonal();
  (void)N;
  return p.rcs * Eigen::kroneckerProduct(Dh, right).eval();
}

/// Lifted radar SNR f(v)/q(v) for identity tests.
inline double radar_snr_lifted(const ChannelSet& cs, const DesignVariables& v,
                               const PhysicalParams& p) {
  const int N = static_cast<int>(cs.G.rows());
  VectorXcd vv(N * N);
  for (int j = 0; j < N; ++j) vv.segment(j * N, N) = v.theta(j) * v.theta;
  const MatrixXcd A = radar_lift_A(cs, v, p);
  const MatrixXcd B = radar_lift_B(cs, v, p);
  const VectorXd C = radar_lift_C(cs, v, p);
  const double f = std::real(vv.dot(A * vv));
  const double q = std::real(vv.dot(B * vv)) + v.theta.cwiseAbs2().dot(C) +
                   p.sigma2_bs * v.u.squaredNorm();
  return f / q;
}

/// Lifted RIS power for identity tests.
inline double ris_power_lifted(const ChannelSet& cs, const DesignVariables& v,
                               const PhysicalParams& p) {
  const int N = static_cast<int>(cs.G.rows());
  VectorXcd vv(N * N);
  for (int j = 0; j < N; ++j) vv.segment(j * N, N) = v.theta(j) * v.theta;
  const MatrixXcd J = power_lift_J(cs, v, p);
  const MatrixXcd GW = cs.G * v.W;
  const VectorXcd Gz = cs.G * v.z;
  const VectorXd Gt_diag =
      (GW.cwiseAbs2().rowwise().sum() + Gz.cwiseAbs2()).eval().array() + 2.0 * p.sigma2_ris;
  return std::real(vv.dot(J * vv)) + v.theta.cwiseAbs2().dot(Gt_diag);
}

}  // namespace secopt

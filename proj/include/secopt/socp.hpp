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

// Dense primal-dual interior-point solver for second-order cone programs in
// inequality form,
//
//     minimize    c'x
//     subject to  G x + s = h,   s in  R+^l  x  Q_{q_1} x ... x Q_{q_p},
//
// using the homogeneous self-dual embedding with Nesterov-Todd scaling and a
// Mehrotra predictor-corrector. The KKT system is solved through normal
// equations (G' W^-2 G, dense Cholesky) with iterative refinement, which is
// the right trade-off for the small, dense programs assembled here.

#include <Eigen/Dense>
#include <algorithm>
#include <cstdio>
#include <cmath>
#include <limits>
#include <vector>

namespace secopt {

enum class ConeStatus {
  optimal,
  max_iterations,
  primal_infeasible,
  dual_infeasible,
  numerical_failure,
};

inline const char* to_string(ConeStatus s) {
  switch (s) {
    case ConeStatus::optimal: return "optimal";
    case ConeStatus::max_iterations: return "max-iterations";
    case ConeStatus::primal_infeasible: return "infeasible";
    case ConeStatus::dual_infeasible: return "unbounded";
    case ConeStatus::numerical_failure: return "numerical-failure";
  }
  return "?";
}

struct ConeProgram {
  Eigen::MatrixXd G;
  Eigen::VectorXd h;
  Eigen::VectorXd c;
  int n_nonneg = 0;
  std::vector<int> soc_dims;

  int rows() const {
    int m = n_nonneg;
    for (int q : soc_dims) m += q;
    return m;
  }
};

struct ConeSettings {
  double feastol = 1e-7;
  double abstol = 1e-7;
  double reltol = 1e-7;
  double feastol_inacc = 1e-4;
  double abstol_inacc = 5e-4;
  double reltol_inacc = 5e-4;
  int max_iters = 100;
  double step_scale = 0.99;   // fraction of the distance to the boundary
  double step_min = 1e-7;
  double step_max = 0.9999;
  double static_reg = 1e-12;  // Cholesky shift, scaled by diagonal magnitude
  int refine_iters = 3;
  bool verbose = false;
};

struct ConeSolution {
  Eigen::VectorXd x, s, z;
  ConeStatus status = ConeStatus::numerical_failure;
  bool reduced_accuracy = false;
  double pobj = 0, dobj = 0, gap = 0, relgap = 0, pres = 0, dres = 0;
  int iters = 0;
};

class ConeSolver {
 public:
  ConeSolution solve(const ConeProgram& prob_in, const ConeSettings& settings = {}) {
    set_ = settings;
    prob_ = prob_in;
    n_ = static_cast<int>(prob_.c.size());
    m_ = prob_.rows();
    l_ = prob_.n_nonneg;
    socs_ = prob_.soc_dims;
    degree_ = l_ + static_cast<int>(socs_.size());

    equilibrate();

    ConeSolution sol;
    sol.x = Eigen::VectorXd::Zero(n_);
    sol.s = Eigen::VectorXd::Zero(m_);
    sol.z = Eigen::VectorXd::Zero(m_);
    if (m_ == 0 || n_ == 0) {  // vacuous program
      sol.status = ConeStatus::optimal;
      return sol;
    }

    // Unit-scaling factorization for the starting point.
    identity_scaling();
    if (!kkt_factor()) return sol;

    Eigen::VectorXd dx(n_), dz(m_);
    kkt_solve(Eigen::VectorXd::Zero(n_), prob_.h, dx, dz);
    x_ = dx;
    s_ = bring_to_cone(-dz);
    kkt_solve(-prob_.c, Eigen::VectorXd::Zero(m_), dx, dz);
    z_ = bring_to_cone(dz);
    tau_ = 1.0;
    kap_ = 1.0;

    const double resx0 = std::max(1.0, prob_.c.norm());
    const double resz0 = std::max(1.0, prob_.h.norm());

    lambda_.resize(m_);
    Eigen::VectorXd x1(n_), z1(m_), x2(n_), z2(m_);
    Eigen::VectorXd ds_by_W(m_), W_dz(m_), ds_comb(m_), tmp(m_);

    ConeStatus code = ConeStatus::max_iterations;
    bool reduced = false;
    Best best;
    double pres_prev = std::numeric_limits<double>::max();

    int iter = 0;
    for (iter = 0; iter <= set_.max_iters; ++iter) {
      // residuals of the embedded system
      const Eigen::VectorXd Gtz = prob_.G.transpose() * z_;
      const Eigen::VectorXd rx = -Gtz - tau_ * prob_.c;
      const double hresx = Gtz.norm();
      const Eigen::VectorXd sGx = s_ + prob_.G * x_;
      const Eigen::VectorXd rz = sGx - tau_ * prob_.h;
      const double hresz = sGx.norm();
      cx_ = prob_.c.dot(x_);
      hz_ = prob_.h.dot(z_);
      const double cx = cx_, hz = hz_;
      const double rt = kap_ + cx + hz;

      const double nx = x_.norm(), nz = z_.norm(), ns = s_.norm();
      gap_ = s_.dot(z_);
      mu_ = (gap_ + kap_ * tau_) / (degree_ + 1);
      pcost_ = cx / tau_;
      dcost_ = -hz / tau_;
      if (pcost_ < 0.0)
        relgap_ = gap_ / (-pcost_);
      else if (dcost_ > 0.0)
        relgap_ = gap_ / dcost_;
      else
        relgap_ = std::numeric_limits<double>::infinity();
      pres_ = rz.norm() / std::max(1.0, resz0 + nx + ns) / tau_;
      dres_ = rx.norm() / std::max(1.0, resx0 + nz) / tau_;
      pinfres_ = (hz / std::max(1.0, nz) < -set_.reltol)
                     ? hresx / std::max(1.0, nz)
                     : std::numeric_limits<double>::infinity();
      dinfres_ = (cx / std::max(1.0, nx) < -set_.reltol)
                     ? hresz / std::max(1.0, nx + ns)
                     : std::numeric_limits<double>::infinity();

      if (set_.verbose)
        std::printf("it %2d pcost % .6e dcost % .6e gap %.2e pres %.2e dres %.2e "
                    "tau %.2e kap %.2e pinf %.1e dinf %.1e\n",
                    iter, pcost_, dcost_, gap_, pres_, dres_, tau_, kap_, pinfres_, dinfres_);
      const bool bad = !std::isfinite(mu_) || !std::isfinite(pres_) || !std::isfinite(dres_);
      if (iter > 0 && (bad || pres_ > 500.0 * pres_prev || gap_ < 0.0)) {
        restore(best);
        code = check_exit(true);
        reduced = true;
        if (code == ConeStatus::max_iterations) code = ConeStatus::numerical_failure;
        break;
      }
      pres_prev = pres_;

      code = check_exit(false);
      if (code != ConeStatus::max_iterations) break;
      if (iter == set_.max_iters) {
        code = check_exit(true);
        reduced = (code != ConeStatus::max_iterations);
        break;
      }

      if (iter == 0 || better_than(best)) save(best, iter);

      if (!update_scalings() || !kkt_factor()) {
        restore(best);
        code = check_exit(true);
        reduced = true;
        if (code == ConeStatus::max_iterations) code = ConeStatus::numerical_failure;
        break;
      }

      // constant right-hand side (-c, h), reused for the tau recovery
      kkt_solve(-prob_.c, prob_.h, x1, z1);
      const double dtau_denom = kap_ / tau_ - prob_.c.dot(x1) - prob_.h.dot(z1);

      // affine (predictor) direction
      kkt_solve(rx, s_ - rz, x2, z2);
      double dtau = (rt - kap_ + prob_.c.dot(x2) + prob_.h.dot(z2)) / dtau_denom;
      z2 += dtau * z1;
      scale_W(z2, W_dz);
      ds_by_W = -W_dz - lambda_;
      double dkap = -kap_ - kap_ / tau_ * dtau;
      const double alpha_aff = line_search(ds_by_W, W_dz, dtau, dkap);

      const double sigma =
          std::clamp(std::pow(1.0 - alpha_aff, 3.0), 1e-6, 1.0 - 1e-3);

      // combined (centering + corrector) direction
      conic_product(lambda_, lambda_, ds_comb);
      conic_product(ds_by_W, W_dz, tmp);
      ds_comb += tmp;
      add_neg_identity(ds_comb, sigma * mu_);
      const double bkap = kap_ * tau_ + dkap * dtau - sigma * mu_;

      conic_division(lambda_, ds_comb, ds_by_W);  // ds_by_W = lambda \ ds_comb
      scale_W(ds_by_W, tmp);                      // W (lambda \ ds_comb)
      const double oms = 1.0 - sigma;
      kkt_solve(oms * rx, tmp - oms * rz, x2, z2);
      dtau = (oms * rt - bkap / tau_ + prob_.c.dot(x2) + prob_.h.dot(z2)) / dtau_denom;
      x2 += dtau * x1;
      z2 += dtau * z1;
      scale_W(z2, W_dz);
      ds_by_W = -(ds_by_W + W_dz);
      dkap = -(bkap + kap_ * dtau) / tau_;

      const double alpha = set_.step_scale * line_search(ds_by_W, W_dz, dtau, dkap);
      scale_W(ds_by_W, tmp);  // unscaled ds

      x_ += alpha * x2;
      z_ += alpha * z2;
      s_ += alpha * tmp;
      kap_ += alpha * dkap;
      tau_ += alpha * dtau;

      if (alpha <= set_.step_min * set_.step_scale * 1.0000001) {
        restore(best);
        code = check_exit(true);
        reduced = true;
        if (code == ConeStatus::max_iterations) code = ConeStatus::numerical_failure;
        break;
      }
    }

    // undo the homogeneous scaling and the row equilibration
    sol.status = code;
    sol.reduced_accuracy = reduced;
    sol.iters = iter;
    const double t = (code == ConeStatus::primal_infeasible || code == ConeStatus::dual_infeasible)
                         ? 1.0
                         : tau_;
    sol.x = x_ / t;
    sol.s = (row_scale_.asDiagonal() * s_) / t;
    sol.z = cost_scale_ * (z_.cwiseQuotient(row_scale_)) / t;
    sol.pobj = cost_scale_ * pcost_;
    sol.dobj = cost_scale_ * dcost_;
    sol.gap = gap_;
    sol.relgap = relgap_;
    sol.pres = pres_;
    sol.dres = dres_;
    return sol;
  }

 private:
  struct SocScaling {
    double eta = 1.0;
    double a = 1.0;          // leading entry of the normalized scaling point
    Eigen::VectorXd q;       // trailing part
  };

  struct Best {
    Eigen::VectorXd x, s, z;
    double tau = 1, kap = 1;
    double score = std::numeric_limits<double>::max();
    double pcost = 0, dcost = 0, gap = 0, relgap = 0, pres = 0, dres = 0;
    double pinfres = 0, dinfres = 0, cx = 0, hz = 0;
  };

  void equilibrate() {
    row_scale_ = Eigen::VectorXd::Ones(prob_.rows());
    int at = 0;
    auto block_scale = [&](int dim) {
      double s = 0.0;
      for (int i = at; i < at + dim; ++i)
        s = std::max({s, prob_.G.row(i).cwiseAbs().maxCoeff(), std::abs(prob_.h(i))});
      if (s <= 0.0 || !std::isfinite(s)) s = 1.0;
      for (int i = at; i < at + dim; ++i) row_scale_(i) = s;
      at += dim;
    };
    for (int i = 0; i < prob_.n_nonneg; ++i) block_scale(1);
    for (int q : prob_.soc_dims) block_scale(q);
    prob_.G = row_scale_.cwiseInverse().asDiagonal() * prob_.G;
    prob_.h = prob_.h.cwiseQuotient(row_scale_);
    cost_scale_ = std::max(1.0, prob_.c.cwiseAbs().maxCoeff());
    prob_.c /= cost_scale_;
  }

  // ---- cone algebra ----------------------------------------------------

  template <typename F>
  void for_each_soc(F&& f) const {
    int at = l_;
    for (std::size_t i = 0; i < socs_.size(); ++i) {
      f(i, at, socs_[i]);
      at += socs_[i];
    }
  }

  Eigen::VectorXd bring_to_cone(const Eigen::VectorXd& r) const {
    double alpha = -0.99;
    for (int i = 0; i < l_; ++i) alpha = std::max(alpha, -r(i));
    for_each_soc([&](std::size_t, int at, int q) {
      alpha = std::max(alpha, r.segment(at + 1, q - 1).norm() - r(at));
    });
    Eigen::VectorXd s = r;
    if (alpha > -1.0) {
      const double shift = 1.0 + alpha;
      for (int i = 0; i < l_; ++i) s(i) += shift;
      for_each_soc([&](std::size_t, int at, int) { s(at) += shift; });
    }
    return s;
  }

  void identity_scaling() {
    lp_w_ = Eigen::VectorXd::Ones(l_);
    soc_scale_.resize(socs_.size());
    for_each_soc([&](std::size_t i, int, int q) {
      soc_scale_[i].eta = 1.0;
      soc_scale_[i].a = 1.0;
      soc_scale_[i].q = Eigen::VectorXd::Zero(q - 1);
    });
  }

  bool update_scalings() {
    for (int i = 0; i < l_; ++i) {
      if (s_(i) <= 0 || z_(i) <= 0) return false;
      lp_w_(i) = std::sqrt(s_(i) / z_(i));
    }
    bool ok = true;
    for_each_soc([&](std::size_t i, int at, int q) {
      const double sres = s_(at) * s_(at) - s_.segment(at + 1, q - 1).squaredNorm();
      const double zres = z_(at) * z_(at) - z_.segment(at + 1, q - 1).squaredNorm();
      if (sres <= 0 || zres <= 0) {
        ok = false;
        return;
      }
      const double snorm = std::sqrt(sres), znorm = std::sqrt(zres);
      const double gamma = std::sqrt(0.5 * (1.0 + s_.segment(at, q).dot(z_.segment(at, q)) /
                                                      (snorm * znorm)));
      SocScaling& sc = soc_scale_[i];
      sc.eta = std::sqrt(snorm / znorm);
      sc.a = (s_(at) / snorm + z_(at) / znorm) / (2.0 * gamma);
      sc.q = (s_.segment(at + 1, q - 1) / snorm - z_.segment(at + 1, q - 1) / znorm) /
             (2.0 * gamma);
    });
    if (!ok) return false;
    scale_W(z_, lambda_);
    return true;
  }

  // out = W v (symmetric NT scaling)
  void scale_W(const Eigen::VectorXd& v, Eigen::VectorXd& out) const {
    out.head(l_) = lp_w_.cwiseProduct(v.head(l_));
    for_each_soc([&](std::size_t i, int at, int q) {
      const SocScaling& sc = soc_scale_[i];
      const double zeta = sc.q.dot(v.segment(at + 1, q - 1));
      out(at) = sc.eta * (sc.a * v(at) + zeta);
      out.segment(at + 1, q - 1) =
          sc.eta * (v.segment(at + 1, q - 1) + (v(at) + zeta / (1.0 + sc.a)) * sc.q);
    });
  }

  // out = W^-1 v
  void scale_Winv(const Eigen::VectorXd& v, Eigen::VectorXd& out) const {
    out.head(l_) = v.head(l_).cwiseQuotient(lp_w_);
    for_each_soc([&](std::size_t i, int at, int q) {
      const SocScaling& sc = soc_scale_[i];
      const double zeta = sc.q.dot(v.segment(at + 1, q - 1));
      out(at) = (sc.a * v(at) - zeta) / sc.eta;
      out.segment(at + 1, q - 1) =
          (v.segment(at + 1, q - 1) + (-v(at) + zeta / (1.0 + sc.a)) * sc.q) / sc.eta;
    });
  }

  void conic_product(const Eigen::VectorXd& u, const Eigen::VectorXd& v,
                     Eigen::VectorXd& w) const {
    w.head(l_) = u.head(l_).cwiseProduct(v.head(l_));
    for_each_soc([&](std::size_t, int at, int q) {
      w(at) = u.segment(at, q).dot(v.segment(at, q));
      w.segment(at + 1, q - 1) =
          u(at) * v.segment(at + 1, q - 1) + v(at) * u.segment(at + 1, q - 1);
    });
  }

  void conic_division(const Eigen::VectorXd& u, const Eigen::VectorXd& w,
                      Eigen::VectorXd& v) const {
    v.head(l_) = w.head(l_).cwiseQuotient(u.head(l_));
    for_each_soc([&](std::size_t, int at, int q) {
      const double u0 = u(at), w0 = w(at);
      const double rho = u0 * u0 - u.segment(at + 1, q - 1).squaredNorm();
      const double zeta = u.segment(at + 1, q - 1).dot(w.segment(at + 1, q - 1));
      v(at) = (u0 * w0 - zeta) / rho;
      v.segment(at + 1, q - 1) = ((zeta / u0 - w0) / rho) * u.segment(at + 1, q - 1) +
                                 w.segment(at + 1, q - 1) / u0;
    });
  }

  void add_neg_identity(Eigen::VectorXd& v, double sigma_mu) const {
    v.head(l_).array() -= sigma_mu;
    for_each_soc([&](std::size_t, int at, int) { v(at) -= sigma_mu; });
  }

  double line_search(const Eigen::VectorXd& ds, const Eigen::VectorXd& dz, double dtau,
                     double dkap) const {
    double alpha = 2.0;
    if (l_ > 0) {
      const double rhomin = ds.head(l_).cwiseQuotient(lambda_.head(l_)).minCoeff();
      const double sigmin = dz.head(l_).cwiseQuotient(lambda_.head(l_)).minCoeff();
      const double worst = std::min(rhomin, sigmin);
      if (worst < 0) alpha = std::min(alpha, 1.0 / (-worst));
    }
    if (dtau < 0) alpha = std::min(alpha, -tau_ / dtau);
    if (dkap < 0) alpha = std::min(alpha, -kap_ / dkap);
    for_each_soc([&](std::size_t, int at, int q) {
      const double det =
          lambda_(at) * lambda_(at) - lambda_.segment(at + 1, q - 1).squaredNorm();
      if (det <= 0) return;
      const double lnorm = std::sqrt(det);
      const double l0 = lambda_(at) / lnorm;
      const Eigen::VectorXd l1 = lambda_.segment(at + 1, q - 1) / lnorm;
      auto frame_step = [&](const Eigen::VectorXd& d) {
        const double cross = l0 * d(at) - l1.dot(d.segment(at + 1, q - 1));
        const double factor = (cross + d(at)) / (l0 + 1.0);
        const double head = cross / lnorm;
        const double tail =
            (d.segment(at + 1, q - 1) - factor * l1).norm() / lnorm;
        return tail - head;
      };
      const double step = std::max({0.0, frame_step(ds), frame_step(dz)});
      if (step > 0) alpha = std::min(alpha, 1.0 / step);
    });
    return std::clamp(alpha, set_.step_min, set_.step_max);
  }

  // ---- KKT -----------------------------------------------------------------

  bool kkt_factor() {
    Gbar_.resize(m_, n_);
    Gbar_.topRows(l_) = lp_w_.cwiseInverse().asDiagonal() * prob_.G.topRows(l_);
    for_each_soc([&](std::size_t i, int at, int q) {
      const SocScaling& sc = soc_scale_[i];
      const auto Gb = prob_.G.middleRows(at, q);
      const Eigen::RowVectorXd zeta = sc.q.transpose() * Gb.bottomRows(q - 1);
      Gbar_.row(at) = (sc.a * Gb.row(0) - zeta) / sc.eta;
      Gbar_.middleRows(at + 1, q - 1) =
          (Gb.bottomRows(q - 1) + sc.q * (-Gb.row(0) + zeta / (1.0 + sc.a))) / sc.eta;
    });
    Eigen::MatrixXd Mn = Gbar_.transpose() * Gbar_;
    const double reg = set_.static_reg * std::max(1.0, Mn.diagonal().maxCoeff());
    Mn.diagonal().array() += reg;
    llt_.compute(Mn);
    return llt_.info() == Eigen::Success;
  }

  // Solve [0 G'; G -W'W] [dx; dz] = [bx; bz] with iterative refinement.
  void kkt_solve(const Eigen::VectorXd& bx, const Eigen::VectorXd& bz, Eigen::VectorXd& dx,
                 Eigen::VectorXd& dz) const {
    Eigen::VectorXd v(m_), t(m_);
    auto base_solve = [&](const Eigen::VectorXd& px, const Eigen::VectorXd& pz,
                          Eigen::VectorXd& ox, Eigen::VectorXd& oz) {
      scale_Winv(pz, v);
      ox = llt_.solve(px + Gbar_.transpose() * v);
      t = Gbar_ * ox - v;
      scale_Winv(t, oz);
    };
    base_solve(bx, bz, dx, dz);
    Eigen::VectorXd ex(n_), ez(m_), cx(n_), cz(m_), Wdz(m_), WWdz(m_);
    for (int it = 0; it < set_.refine_iters; ++it) {
      scale_W(dz, Wdz);
      scale_W(Wdz, WWdz);
      ex = bx - prob_.G.transpose() * dz;
      ez = bz - prob_.G * dx + WWdz;
      const double err = std::max(ex.lpNorm<Eigen::Infinity>(), ez.lpNorm<Eigen::Infinity>());
      const double ref = 1.0 + std::max(bx.lpNorm<Eigen::Infinity>(), bz.lpNorm<Eigen::Infinity>());
      if (err < 1e-14 * ref) break;
      base_solve(ex, ez, cx, cz);
      dx += cx;
      dz += cz;
    }
  }

  // ---- bookkeeping -----------------------------------------------------

  ConeStatus check_exit(bool reduced) const {
    const double feastol = reduced ? set_.feastol_inacc : set_.feastol;
    const double abstol = reduced ? set_.abstol_inacc : set_.abstol;
    const double reltol = reduced ? set_.reltol_inacc : set_.reltol;
    if ((-cx_ > 0 || -hz_ >= -abstol) && pres_ < feastol && dres_ < feastol &&
        (gap_ < abstol || relgap_ < reltol))
      return ConeStatus::optimal;
    if (dinfres_ < feastol && tau_ < kap_) return ConeStatus::dual_infeasible;
    if ((pinfres_ < feastol && tau_ < kap_) ||
        (tau_ < feastol && kap_ < feastol && pinfres_ < feastol))
      return ConeStatus::primal_infeasible;
    return ConeStatus::max_iterations;
  }

  bool better_than(const Best& b) const {
    return std::max({pres_, dres_, relgap_}) <
           std::max({b.pres, b.dres, b.relgap});
  }

  void save(Best& b, int) const {
    b.x = x_;
    b.s = s_;
    b.z = z_;
    b.tau = tau_;
    b.kap = kap_;
    b.pcost = pcost_;
    b.dcost = dcost_;
    b.gap = gap_;
    b.relgap = relgap_;
    b.pres = pres_;
    b.dres = dres_;
    b.pinfres = pinfres_;
    b.dinfres = dinfres_;
    b.cx = cx_;
    b.hz = hz_;
  }

  void restore(const Best& b) {
    if (b.x.size() == 0) return;
    x_ = b.x;
    s_ = b.s;
    z_ = b.z;
    tau_ = b.tau;
    kap_ = b.kap;
    pcost_ = b.pcost;
    dcost_ = b.dcost;
    gap_ = b.gap;
    relgap_ = b.relgap;
    pres_ = b.pres;
    dres_ = b.dres;
    pinfres_ = b.pinfres;
    dinfres_ = b.dinfres;
    cx_ = b.cx;
    hz_ = b.hz;
  }

  ConeSettings set_;
  ConeProgram prob_;
  int n_ = 0, m_ = 0, l_ = 0, degree_ = 0;
  std::vector<int> socs_;

  Eigen::VectorXd row_scale_;
  double cost_scale_ = 1.0;

  Eigen::VectorXd x_, s_, z_, lambda_;
  double tau_ = 1.0, kap_ = 1.0;
  Eigen::VectorXd lp_w_;
  std::vector<SocScaling> soc_scale_;
  Eigen::MatrixXd Gbar_;
  Eigen::LLT<Eigen::MatrixXd> llt_;

  double gap_ = 0, mu_ = 0, pcost_ = 0, dcost_ = 0, relgap_ = 0, pres_ = 0, dres_ = 0;
  double pinfres_ = 0, dinfres_ = 0, cx_ = 0, hz_ = 0;
};

}  // namespace secopt

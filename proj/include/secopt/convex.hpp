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
#include <fstream>
#include <string>
#include <vector>

#include "secopt/socp.hpp"
#include "secopt/surrogates.hpp"

namespace secopt {

enum class SolveStatus { optimal, max_iterations, infeasible, numerical_failure };

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::max_iterations: return "max-iterations";
    case SolveStatus::infeasible: return "infeasible";
    case SolveStatus::numerical_failure: return "numerical-failure";
  }
  return "?";
}

/// Assembled convex subproblem: maximize tau over the layout's variables
/// subject to canonical quadratic constraints, r >= 0 and an optional
/// per-element reflection amplitude cap.
struct ConvexProgram {
  VarLayout layout;
  std::vector<QuadraticConstraint> constraints;
  double amplitude_cap = -1.0;  // |theta_n| <= cap when >= 0 (reflection mode)
  bool suspect_infeasible = false;

  int var_count() const { return layout.dim(); }
};

struct Solution {
  Eigen::VectorXd x;
  double objective = 0;  // tau at the solution
  SolveStatus status = SolveStatus::numerical_failure;
  double max_violation = 0;
  int iterations = 0;
};

namespace detail {

/// With the common beam exactly zero at the expansion point the common
/// secrecy margin is identically zero, so the constraint collapses to
/// "no common rate"; emitting it as rate pins keeps the program
/// non-degenerate.
inline QuadraticConstraint zero_rate_row(const VarLayout& L, int k) {
  QuadraticConstraint c;
  c.name = "ecsr_" + std::to_string(k) + "_common_off";
  c.sense = Sense::LE;
  c.g = Eigen::VectorXd::Zero(L.dim());
  c.g(L.r_index(k)) = 1.0;
  c.d = 0.0;
  return c;
}

}  // namespace detail

inline ConvexProgram assemble_bf_program(const BfExpansion& e, const PhysicalParams& p) {
  ConvexProgram prog;
  prog.layout = e.layout;
  for (int k = 0; k < e.K; ++k) prog.constraints.push_back(bf_epsr_constraint(e, k));
  if (e.scheme.rsma()) {
    const bool common_off = e.W_t.col(0).norm() == 0.0;
    for (int k = 0; k < e.K; ++k)
      prog.constraints.push_back(common_off ? detail::zero_rate_row(e.layout, k)
                                            : bf_ecsr_constraint(e, k));
  }
  prog.constraints.push_back(bf_radar_constraint(e, p));
  for (auto& c : bf_budget_constraints(e, p)) prog.constraints.push_back(std::move(c));
  return prog;
}

inline ConvexProgram assemble_ris_program(const RisExpansion& e, const PhysicalParams& p) {
  ConvexProgram prog;
  prog.layout = e.layout;
  for (int k = 0; k < e.K; ++k) prog.constraints.push_back(ris_epsr_constraint(e, k));
  if (e.scheme.rsma()) {
    const bool common_off = e.common_zero;
    for (int k = 0; k < e.K; ++k)
      prog.constraints.push_back(common_off ? detail::zero_rate_row(e.layout, k)
                                            : ris_ecsr_constraint(e, k));
  }
  prog.constraints.push_back(ris_radar_constraint(e, p));
  if (e.scheme.active_ris()) {
    prog.constraints.push_back(ris_budget_constraint(e, p));
    prog.suspect_infeasible = e.budget_suspect;
  }
  prog.amplitude_cap = p.beta_max;
  return prog;
}

namespace detail {

struct ConicMapping {
  ConeProgram cone;
  // nothing else needed: variables map 1:1
};

inline ConicMapping to_conic(const ConvexProgram& prog) {
  const int n = prog.var_count();
  const VarLayout& L = prog.layout;

  std::vector<const QuadraticConstraint*> affine, quads;
  for (const auto& c : prog.constraints)
    (c.F.rows() == 0 ? affine : quads).push_back(&c);

  int m = static_cast<int>(affine.size()) + L.r_count();
  std::vector<int> socs;
  for (const auto* c : quads) socs.push_back(static_cast<int>(c->F.rows()) + 2);
  if (prog.amplitude_cap >= 0 && L.mode == VarLayout::Mode::reflection)
    for (int i = 0; i < L.N; ++i) socs.push_back(3);
  for (int q : socs) m += q;

  ConicMapping map;
  ConeProgram& cp = map.cone;
  cp.G = Eigen::MatrixXd::Zero(m, n);
  cp.h = Eigen::VectorXd::Zero(m);
  cp.c = Eigen::VectorXd::Zero(n);
  cp.c(L.tau_index()) = -1.0;  // maximize tau
  cp.n_nonneg = static_cast<int>(affine.size()) + L.r_count();
  cp.soc_dims = socs;

  int at = 0;
  for (const auto* c : affine) {  // g'x + d <= 0  ->  s = -g'x - d >= 0
    cp.G.row(at) = c->g;
    cp.h(at) = -c->d;
    ++at;
  }
  for (int k = 0; k < L.r_count(); ++k) {  // r_k >= 0
    cp.G(at, L.r_index(k)) = -1.0;
    ++at;
  }
  for (const auto* c : quads) {
    // Normalize the constraint to unit scale first: the rotated-cone
    // encoding mixes t with the absolute constant 1, which would swamp
    // rows whose natural magnitude is the noise floor.
    const double s = std::max({std::abs(c->d), c->g.cwiseAbs().maxCoeff(),
                               std::pow(c->F.cwiseAbs().maxCoeff(), 2), 1e-300});
    const Eigen::VectorXd g = c->g / s;
    const double d = c->d / s;
    const Eigen::MatrixXd F = c->F / std::sqrt(s);
    // ||Fx||^2 <= t, t = -(g'x + d): rotated cone as (t+1, 2Fx, t-1)
    const int rows = static_cast<int>(F.rows());
    cp.G.row(at) = g;
    cp.h(at) = 1.0 - d;
    cp.G.middleRows(at + 1, rows) = -2.0 * F;
    cp.G.row(at + 1 + rows) = g;
    cp.h(at + 1 + rows) = -1.0 - d;
    at += rows + 2;
  }
  if (prog.amplitude_cap >= 0 && L.mode == VarLayout::Mode::reflection) {
    for (int i = 0; i < L.N; ++i) {
      auto [re, im] = L.reim_index(0, i);
      cp.h(at) = prog.amplitude_cap;
      cp.G(at + 1, re) = -1.0;
      cp.G(at + 2, im) = -1.0;
      at += 3;
    }
  }
  return map;
}

}  // namespace detail

/// Largest violation over every constraint of the program at x.
inline double program_violation(const ConvexProgram& prog, const Eigen::VectorXd& x) {
  double v = 0;
  for (const auto& c : prog.constraints) v = std::max(v, c.violation(x));
  for (int k = 0; k < prog.layout.r_count(); ++k)
    v = std::max(v, -x(prog.layout.r_index(k)));
  if (prog.amplitude_cap >= 0 && prog.layout.mode == VarLayout::Mode::reflection) {
    const VectorXcd th = prog.layout.get_block(x, 0);
    v = std::max(v, th.cwiseAbs().maxCoeff() - prog.amplitude_cap);
  }
  return v;
}

inline Solution solve_program(const ConvexProgram& prog, double tol = 1e-7) {
  const auto map = detail::to_conic(prog);
  ConeSettings st;
  st.feastol = st.abstol = st.reltol = tol;
  const ConeSolution cs = ConeSolver().solve(map.cone, st);
  Solution sol;
  sol.iterations = cs.iters;
  switch (cs.status) {
    case ConeStatus::optimal: sol.status = SolveStatus::optimal; break;
    case ConeStatus::max_iterations: sol.status = SolveStatus::max_iterations; break;
    case ConeStatus::primal_infeasible: sol.status = SolveStatus::infeasible; break;
    case ConeStatus::dual_infeasible: sol.status = SolveStatus::numerical_failure; break;
    case ConeStatus::numerical_failure: sol.status = SolveStatus::numerical_failure; break;
  }
  if (sol.status == SolveStatus::optimal || sol.status == SolveStatus::max_iterations) {
    sol.x = cs.x;
    sol.objective = cs.x(prog.layout.tau_index());
    sol.max_violation = program_violation(prog, cs.x);
  }
  return sol;
}

/// Receive filter as the dominant generalized eigenvector of the
/// (signal, noise) covariance pencil; the quotient value rides along.
struct RadarReceiver {
  VectorXcd u;
  double gamma = 0;
};

inline RadarReceiver radar_receiver(const DesignVariables& v, const ChannelSet& cs,
                                    const PhysicalParams& p) {
  const auto Phi = v.theta.asDiagonal();
  const MatrixXcd H_T = cs.G.adjoint() * Phi * cs.H_RT * Phi * cs.G;
  const MatrixXcd H_0 = cs.G.adjoint() * Phi * cs.H_RT * Phi;
  const MatrixXcd H_1 = cs.G.adjoint() * Phi;
  MatrixXcd Pi = v.W * v.W.adjoint();
  Pi.noalias() += v.z * v.z.adjoint();
  const MatrixXcd sig = p.rcs * H_T * Pi * H_T.adjoint();
  MatrixXcd noise = p.rcs * p.sigma2_ris * H_0 * H_0.adjoint() +
                    p.sigma2_ris * H_1 * H_1.adjoint();
  noise.diagonal().array() += p.sigma2_bs;

  const Eigen::LLT<MatrixXcd> llt(0.5 * (noise + noise.adjoint()));
  const MatrixXcd L = llt.matrixL();
  const MatrixXcd B = L.triangularView<Eigen::Lower>().solve(
      L.triangularView<Eigen::Lower>().solve(0.5 * (sig + sig.adjoint())).adjoint());
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(0.5 * (B + B.adjoint()));
  const int top = static_cast<int>(es.eigenvalues().size()) - 1;
  RadarReceiver out;
  out.gamma = es.eigenvalues()(top);
  out.u = L.adjoint().triangularView<Eigen::Upper>().solve(es.eigenvectors().col(top));
  out.u.normalize();
  return out;
}

/// Sparse-triplet text dump of the conic form, for external cross-checks.
inline void dump_program(const ConvexProgram& prog, const std::string& path) {
  const auto map = detail::to_conic(prog);
  std::ofstream f(path);
  if (!f) throw std::runtime_error("dump_program: cannot write " + path);
  const ConeProgram& cp = map.cone;
  f << "# conic program: minimize c'x s.t. Gx + s = h, s in R+^l x SOC(q_i)\n";
  f << "n " << cp.c.size() << "\n";
  f << "m " << cp.h.size() << "\n";
  f << "nonneg " << cp.n_nonneg << "\n";
  f << "soc";
  for (int q : cp.soc_dims) f << " " << q;
  f << "\n";
  f.precision(17);
  f << "c\n";
  for (int i = 0; i < cp.c.size(); ++i)
    if (cp.c(i) != 0) f << i << " " << cp.c(i) << "\n";
  f << "h\n";
  for (int i = 0; i < cp.h.size(); ++i)
    if (cp.h(i) != 0) f << i << " " << cp.h(i) << "\n";
  f << "G\n";
  for (int i = 0; i < cp.G.rows(); ++i)
    for (int j = 0; j < cp.G.cols(); ++j)
      if (cp.G(i, j) != 0) f << i << " " << j << " " << cp.G(i, j) << "\n";
  f << "end\n";
}

}  // namespace secopt

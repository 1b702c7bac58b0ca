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

// Alternating optimization: beamforming/rate-split step, reflection step,
// then the closed-form receive filter, repeated to convergence of the
// surrogate objective tau (nats).

#include <algorithm>
#include <limits>
#include <vector>

#include "secopt/convex.hpp"

namespace secopt {

struct AoOptions {
  int max_iters = 60;
  double tau_tol = 1e-3;     // |tau_t - tau_{t-1}| stopping threshold, nats
  double solver_tol = 1e-7;
  int multi_start = 1;
};

struct AoIterRecord {
  double tau = 0;            // incumbent surrogate objective after the sweep
  double tau_bf = 0;
  double tau_ris = 0;
  SolveStatus bf_status = SolveStatus::numerical_failure;
  SolveStatus ris_status = SolveStatus::numerical_failure;
  double radar_snr = 0;
  double bs_power = 0;
  double ris_power = 0;
};

struct AoTrace {
  std::vector<AoIterRecord> iters;
  DesignVariables final_vars;
  bool converged = false;
  int iterations = 0;
  Scheme scheme;
};

/// Starting point: matched beams at 90% BS power, phase-aligned reflection
/// at beta_max/sqrt(2) (unit for passive) backed off under the RIS budget,
/// quotient-optimal receive filter, zero common-rate allocation.
inline DesignVariables initialize(const SystemConfig& cfg, const ChannelSet& cs, Scheme scheme,
                                  Rng& rng) {
  const PhysicalParams p = apply_scheme(to_linear(cfg), scheme);
  const NormalizedChannels nch = normalize(cs, p);
  DesignVariables v = DesignVariables::zeros(cfg.M, cfg.N, cfg.K);

  const VectorXcd a = VectorXcd::Ones(cfg.M) / std::sqrt(double(cfg.M));
  const VectorXcd Ga = cs.G * a;
  const double amp = scheme.active_ris() ? p.beta_max / M_SQRT2 : 1.0;
  for (int n = 0; n < cfg.N; ++n) {
    const cplx t = nch.hbar[0](n) * Ga(n);
    v.theta(n) = std::abs(t) > 0 ? amp * std::conj(t) / std::abs(t) : cplx(amp, 0.0);
  }

  const double p_total = 0.9 * p.p_bs;
  const double p_priv = (scheme.rsma() ? 0.7 : 0.9) * p_total;
  const double p_com = (scheme.rsma() ? 0.2 : 0.0) * p_total;
  const double p_an = 0.1 * p_total;
  for (int k = 0; k < cfg.K; ++k) {
    const VectorXcd ck = nch.Hbar[k].adjoint() * v.theta;
    v.W.col(k + 1) = std::sqrt(p_priv / cfg.K) * ck.normalized();
  }
  if (scheme.rsma()) {
    VectorXcd sum = VectorXcd::Zero(cfg.M);
    for (int k = 0; k < cfg.K; ++k) sum += nch.Hbar[k].adjoint() * v.theta;
    v.W.col(0) = std::sqrt(p_com) * sum.normalized();
  }
  std::normal_distribution<double> g(0.0, 1.0);
  VectorXcd zr(cfg.M);
  for (int i = 0; i < cfg.M; ++i) zr(i) = cplx(g(rng), g(rng));
  v.z = std::sqrt(p_an) * zr.normalized();

  if (scheme.active_ris()) {
    int guard = 0;
    while (ris_power(v, cs, p) > 0.9 * p.p_ris && guard++ < 200) v.theta *= 0.95;
  }
  v.u = radar_receiver(v, cs, p).u;
  v.r.setZero();
  return v;
}

namespace detail {

/// Radar-feasibility restoration: the matched-beam starting point aims at
/// the users, so the sensing requirement usually starts violated and the
/// conservative surrogate sets around it are empty. Alternate the
/// quotient-optimal filter, a reflection step that maximizes the majorized
/// radar margin, and a beam step that maximizes the linearized return,
/// until the true SNR clears the requirement with a small margin.
inline void restore_radar_feasibility(DesignVariables& v, const ChannelSet& cs,
                                      const NormalizedChannels& nch, const EveMoment& em,
                                      const PhysicalParams& p, Scheme scheme,
                                      double solver_tol) {
  if (p.gamma_r <= 0 || p.rcs <= 0) return;
  const double target = 1.25 * p.gamma_r;  // ~1 dB of slack for the majorized rows
  const DesignVariables comm = v;  // communication-pointed starting point
  auto update_u = [&](DesignVariables& w) {
    const RadarReceiver rr = radar_receiver(w, cs, p);
    if (rr.gamma >= radar_snr(w, cs, p) - 1e-15) w.u = rr.u;
    return radar_snr(w, cs, p);
  };
  double best = update_u(v);
  if (best >= target) return;

  // Forward-path alignment: co-phase BS -> RIS -> target through each
  // element, the single most effective reflection profile for the return.
  auto forward_align = [&](const VectorXcd& a) {
    DesignVariables cand = v;
    const VectorXcd Ga = cs.G * a;
    const double amp = scheme.active_ris() ? p.beta_max : 1.0;
    for (int n = 0; n < cand.theta.size(); ++n) {
      const cplx t = cs.h_RT(n) * Ga(n);
      cand.theta(n) = std::abs(t) > 0 ? amp * std::conj(t) / std::abs(t) : cplx(amp, 0);
    }
    int guard = 0;
    while (scheme.active_ris() && ris_power(cand, cs, p) > 0.95 * p.p_ris && guard++ < 200)
      cand.theta *= 0.95;
    const double snr = update_u(cand);
    if (snr > best) {
      v = cand;
      best = snr;
    }
  };
  {
    // principal transmit direction of the BS->RIS link
    Eigen::JacobiSVD<MatrixXcd> svd(cs.G, Eigen::ComputeThinV);
    forward_align(svd.matrixV().col(0));
  }

  for (int it = 0; it < 40 && best < target; ++it) {
    if (it > 0) {
      // realign against the current dominant beam
      MatrixXcd Pi = v.W * v.W.adjoint();
      Pi.noalias() += v.z * v.z.adjoint();
      Eigen::SelfAdjointEigenSolver<MatrixXcd> es(Pi);
      forward_align(es.eigenvectors().col(static_cast<int>(Pi.rows()) - 1));
      if (best >= target) break;
    }
    {  // beam step: maximize the linearized return inside the power budgets
      try {
        BfExpansion e = bf_expand(v, nch, em, p, scheme);
        bf_attach_radar_budget(e, cs, v.u, p);
        QuadraticConstraint radar = bf_radar_constraint(e, p);
        radar.g(e.layout.tau_index()) += 1.0;
        ConvexProgram prog;
        prog.layout = e.layout;
        prog.constraints.push_back(std::move(radar));
        PhysicalParams p_headroom = p;
        p_headroom.p_bs *= 0.9;  // keep the initializer's power margin
        for (auto& c : bf_budget_constraints(e, p_headroom))
          prog.constraints.push_back(std::move(c));
        const Solution sol = solve_program(prog, solver_tol);
        if (sol.status == SolveStatus::optimal) {
          DesignVariables cand = v;
          e.layout.unpack(sol.x, cand);
          cand.r = v.r;
          // the common column stays on communication duty; its share of the
          // return is discarded rather than stranded behind the secrecy row
          if (scheme.rsma()) cand.W.col(0) = v.W.col(0);
          const double snr = update_u(cand);
          if (snr > best) {
            v = cand;
            best = snr;
          }
        }
      } catch (const std::exception&) {
        // budget degenerate: rely on the reflection and filter steps
      }
    }
    if (best >= target) break;

    {  // reflection step: maximize tau subject to majorant(theta) + tau <= 0
      const RisExpansion e = ris_expand(v, nch, cs, em, p, scheme);
      QuadraticConstraint radar = ris_radar_constraint(e, p);
      radar.g(e.layout.tau_index()) += 1.0;
      ConvexProgram prog;
      prog.layout = e.layout;
      prog.amplitude_cap = p.beta_max;
      prog.constraints.push_back(std::move(radar));
      if (scheme.active_ris()) prog.constraints.push_back(ris_budget_constraint(e, p));
      const Solution sol = solve_program(prog, solver_tol);
      if (sol.status == SolveStatus::optimal) {
        DesignVariables cand = v;
        e.layout.unpack(sol.x, cand);
        cand.r = v.r;
        const double snr = update_u(cand);
        if (snr > best) {
          v = cand;
          best = snr;
        }
      }
    }
  }
  if (best < target) return;  // let the main loop report the infeasibility

  // Blend communication energy back in: largest comm share that keeps the
  // sensing margin, power renormalized to the initializer's budget.
  const double p_total = bs_power(comm);
  DesignVariables blended = v;
  for (double lam : {0.02, 0.05, 0.1, 0.2, 0.3, 0.5, 0.7, 0.9}) {
    DesignVariables cand = v;
    cand.W = std::sqrt(lam) * v.W + std::sqrt(1.0 - lam) * comm.W;
    cand.z = std::sqrt(lam) * v.z + std::sqrt(1.0 - lam) * comm.z;
    const double pw = bs_power(cand);
    if (pw > 0) {
      cand.W *= std::sqrt(p_total / pw);
      cand.z *= std::sqrt(p_total / pw);
    }
    const double snr = update_u(cand);
    if (snr >= target) {
      blended = cand;
      break;
    }
  }
  v = blended;
}

/// The common-secrecy constraint admits no rate split when the moment-based
/// common margin is negative at the expansion point; shrink the common beam
/// toward zero (where the margin vanishes identically) so the first
/// subproblem starts feasible.
inline void restore_common_margin(DesignVariables& v, const NormalizedChannels& nch,
                                  const EveMoment& em, const PhysicalParams& p, Scheme scheme) {
  if (!scheme.rsma()) return;
  const int K = static_cast<int>(nch.Hbar.size());
  auto margin = [&](const DesignVariables& w) {
    const SinrReport rep = sinr_report(w, nch, p);
    const DeterministicEveRates det = eve_rates_deterministic(w, nch.G, em, p);
    double m = std::numeric_limits<double>::infinity();
    for (int k = 0; k < K; ++k) m = std::min(m, std::log1p(rep.gamma_s0(k)));
    return m - det.common_nats;
  };
  if (margin(v) >= 0) return;
  for (double scale : {0.5, 0.25, 0.1, 0.05, 0.0}) {
    DesignVariables cand = v;
    cand.W.col(0) *= scale;
    if (margin(cand) >= 0) {
      v = cand;
      return;
    }
  }
  v.W.col(0).setZero();
}

}  // namespace detail

namespace detail {

inline AoTrace run_ao_single(const SystemConfig& cfg, const ChannelSet& cs, const EveMoment& em,
                             Scheme scheme, const AoOptions& opts, Rng& rng) {
  const PhysicalParams p = apply_scheme(to_linear(cfg), scheme);
  const NormalizedChannels nch = normalize(cs, p);
  AoTrace trace;
  trace.scheme = scheme;
  DesignVariables v = initialize(cfg, cs, scheme, rng);
  detail::restore_radar_feasibility(v, cs, nch, em, p, scheme, opts.solver_tol);

  double tau_prev = -std::numeric_limits<double>::infinity();
  double tau_incumbent = -std::numeric_limits<double>::infinity();
  bool have_tau = false;
  bool common_repair_done = false;

  for (int it = 0; it < opts.max_iters; ++it) {
    AoIterRecord rec;

    // (a) beamforming, AN and rate split
    try {
      BfExpansion e = bf_expand(v, nch, em, p, scheme);
      bf_attach_radar_budget(e, cs, v.u, p);
      const ConvexProgram prog = assemble_bf_program(e, p);
      const Solution sol = solve_program(prog, opts.solver_tol);
      rec.bf_status = sol.status;
      if (sol.status == SolveStatus::optimal &&
          (!have_tau || sol.objective >= tau_incumbent - 1e-9)) {
        e.layout.unpack(sol.x, v);
        rec.tau_bf = sol.objective;
        tau_incumbent = sol.objective;
        have_tau = true;
      } else if (sol.status == SolveStatus::optimal) {
        rec.bf_status = SolveStatus::max_iterations;  // rejected step, kept block
        rec.tau_bf = sol.objective;
      }
    } catch (const std::exception&) {
      rec.bf_status = SolveStatus::infeasible;
    }

    // (b) reflection coefficients and rate split
    try {
      const RisExpansion e = ris_expand(v, nch, cs, em, p, scheme);
      const ConvexProgram prog = assemble_ris_program(e, p);
      const Solution sol = solve_program(prog, opts.solver_tol);
      rec.ris_status = sol.status;
      if (sol.status == SolveStatus::optimal &&
          (!have_tau || sol.objective >= tau_incumbent - 1e-9)) {
        e.layout.unpack(sol.x, v);
        rec.tau_ris = sol.objective;
        tau_incumbent = sol.objective;
        have_tau = true;
      } else if (sol.status == SolveStatus::optimal) {
        rec.ris_status = SolveStatus::max_iterations;
        rec.tau_ris = sol.objective;
      }
    } catch (const std::exception&) {
      rec.ris_status = SolveStatus::infeasible;
    }

    // (c) receive filter: closed-form quotient maximizer never hurts
    const double snr_before = radar_snr(v, cs, p);
    const RadarReceiver rr = radar_receiver(v, cs, p);
    if (rr.gamma >= snr_before - 1e-9) v.u = rr.u;

    rec.radar_snr = radar_snr(v, cs, p);
    rec.bs_power = bs_power(v);
    rec.ris_power = ris_power(v, cs, p);
    rec.tau = tau_incumbent;
    trace.iters.push_back(rec);
    trace.iterations = it + 1;

    const bool bf_ok = rec.bf_status == SolveStatus::optimal;
    const bool ris_ok = rec.ris_status == SolveStatus::optimal;
    if (!bf_ok && !ris_ok) {
      // a dead first sweep with a common beam usually means the common
      // margin is unattainable around this point: shed the common stream
      // once and retry before giving up
      if (!have_tau && scheme.rsma() && v.W.col(0).norm() > 0 && !common_repair_done) {
        detail::restore_common_margin(v, nch, em, p, scheme);
        common_repair_done = true;
        trace.iters.pop_back();  // the repair retry does not count as a sweep
        --it;
        continue;
      }
      trace.converged = false;  // aborted: no feasible update in a full sweep
      trace.final_vars = v;
      return trace;
    }
    if (have_tau && std::abs(tau_incumbent - tau_prev) <= opts.tau_tol && it > 0) {
      trace.converged = true;
      break;
    }
    tau_prev = tau_incumbent;
  }
  // a clean run that used its whole sweep budget is still a usable design
  trace.converged = have_tau;
  trace.final_vars = v;
  return trace;
}

}  // namespace detail

/// One full run of the alternating algorithm on a fixed scene; optional
/// multi-start keeps the best surrogate objective.
inline AoTrace run_ao(const SystemConfig& cfg, const ChannelSet& cs, const EveMoment& em,
                      Scheme scheme, const AoOptions& opts, Rng& rng) {
  AoTrace best = detail::run_ao_single(cfg, cs, em, scheme, opts, rng);
  for (int s = 1; s < opts.multi_start; ++s) {
    AoTrace cand = detail::run_ao_single(cfg, cs, em, scheme, opts, rng);
    const double tau_best = best.converged && !best.iters.empty()
                                ? best.iters.back().tau
                                : -std::numeric_limits<double>::infinity();
    const double tau_cand = cand.converged && !cand.iters.empty()
                                ? cand.iters.back().tau
                                : -std::numeric_limits<double>::infinity();
    if (tau_cand > tau_best) best = std::move(cand);
  }
  return best;
}

}  // namespace secopt

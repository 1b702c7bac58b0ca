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

// Monte-Carlo experiment runner: sweeps a scenario variable, runs the
// alternating optimizer per scheme and realization on a shared scene, and
// reports oracle-evaluated secrecy/sensing figures with standard errors.

#include <atomic>
#include <chrono>
#include <fstream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "secopt/ao.hpp"
#include "json.hpp"

namespace secopt {

enum class SweepVariable { none, P_bs_dbm, N, ris_x_position, gamma_r_db };

inline const char* to_string(SweepVariable v) {
  switch (v) {
    case SweepVariable::none: return "none";
    case SweepVariable::P_bs_dbm: return "P_bs_dbm";
    case SweepVariable::N: return "N";
    case SweepVariable::ris_x_position: return "ris_x_position";
    case SweepVariable::gamma_r_db: return "gamma_r_db";
  }
  return "?";
}

struct ExperimentSpec {
  std::string name = "experiment";
  SystemConfig base;
  SweepVariable sweep = SweepVariable::none;
  std::vector<double> sweep_values;  // ignored for sweep == none
  std::vector<Scheme> schemes = {Scheme{SchemeKind::ARIS_RSMA}, Scheme{SchemeKind::ARIS_SDMA},
                                 Scheme{SchemeKind::PRIS_RSMA}, Scheme{SchemeKind::PRIS_SDMA}};
  int realizations = 50;
  int eve_draws = 2000;
  AoOptions ao;
  int threads = 0;  // 0 -> hardware concurrency
  bool keep_tau_traces = false;

  SystemConfig config_at(double value) const {
    SystemConfig c = base;
    switch (sweep) {
      case SweepVariable::none: break;
      case SweepVariable::P_bs_dbm: c.P_bs_dbm = value; break;
      case SweepVariable::N: c.N = static_cast<int>(value); break;
      case SweepVariable::ris_x_position: c.ris_pos[0] = value; break;
      case SweepVariable::gamma_r_db: c.gamma_r_db = value; break;
    }
    return c;
  }

  std::vector<double> values() const {
    return sweep == SweepVariable::none ? std::vector<double>{0.0} : sweep_values;
  }
};

struct TrialRow {
  std::string scheme;
  double sweep_value = 0;
  int realization = 0;
  bool ok = false;  // feasible design produced; included in means
  double min_epsr_bits = 0;
  double ecsr_margin_bits = 0;
  double radar_snr_db = 0;
  int iters = 0;
  std::string status;
  double wall_seconds = 0;
  std::vector<double> tau_trace;  // populated for convergence experiments
};

struct AggregatePoint {
  std::string scheme;
  double sweep_value = 0;
  int n_ok = 0;
  int n_failed = 0;
  double mean_min_epsr = 0, se_min_epsr = 0;
  double mean_ecsr_margin = 0, se_ecsr_margin = 0;
  double mean_radar_snr_db = 0, se_radar_snr_db = 0;
  double mean_iters = 0;
  double mean_wall_seconds = 0;
};

struct AggregateResult {
  std::string name;
  SweepVariable sweep = SweepVariable::none;
  std::vector<TrialRow> rows;
  std::vector<AggregatePoint> aggregates;
};

namespace detail {

inline void mean_se(const std::vector<double>& xs, double& mean, double& se) {
  mean = 0;
  se = 0;
  if (xs.empty()) return;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  if (xs.size() < 2) return;
  double var = 0;
  for (double x : xs) var += (x - mean) * (x - mean);
  var /= static_cast<double>(xs.size() - 1);
  se = std::sqrt(var / static_cast<double>(xs.size()));
}

inline void aggregate_rows(AggregateResult& out, const std::vector<Scheme>& schemes,
                           const std::vector<double>& values) {
  for (double val : values) {
    for (const Scheme& s : schemes) {
      AggregatePoint pt;
      pt.scheme = s.name();
      pt.sweep_value = val;
      std::vector<double> epsr, margin, radar, iters, wall;
      for (const TrialRow& r : out.rows) {
        if (r.scheme != pt.scheme || r.sweep_value != val) continue;
        if (!r.ok) {
          ++pt.n_failed;
          continue;
        }
        ++pt.n_ok;
        epsr.push_back(r.min_epsr_bits);
        margin.push_back(r.ecsr_margin_bits);
        radar.push_back(r.radar_snr_db);
        iters.push_back(r.iters);
        wall.push_back(r.wall_seconds);
      }
      mean_se(epsr, pt.mean_min_epsr, pt.se_min_epsr);
      mean_se(margin, pt.mean_ecsr_margin, pt.se_ecsr_margin);
      mean_se(radar, pt.mean_radar_snr_db, pt.se_radar_snr_db);
      double tmp_se;
      mean_se(iters, pt.mean_iters, tmp_se);
      mean_se(wall, pt.mean_wall_seconds, tmp_se);
      out.aggregates.push_back(std::move(pt));
    }
  }
}

}  // namespace detail

inline AggregateResult run_experiment(const ExperimentSpec& spec) {
  AggregateResult out;
  out.name = spec.name;
  out.sweep = spec.sweep;
  const std::vector<double> values = spec.values();

  struct Point {
    SystemConfig cfg;
    EveMoment em;
  };
  std::vector<Point> points;
  points.reserve(values.size());
  for (double v : values) {
    Point pt{spec.config_at(v), {}};
    validate(pt.cfg);
    pt.em = eve_second_moment(pt.cfg);  // once per swept config
    points.push_back(std::move(pt));
  }

  const int n_trials =
      static_cast<int>(values.size()) * spec.realizations * static_cast<int>(spec.schemes.size());
  out.rows.resize(n_trials);

  std::atomic<int> next{0};
  auto worker = [&] {
    for (;;) {
      const int idx = next.fetch_add(1);
      if (idx >= n_trials) return;
      const int per_value = spec.realizations * static_cast<int>(spec.schemes.size());
      const int vi = idx / per_value;
      const int rest = idx % per_value;
      const int real = rest / static_cast<int>(spec.schemes.size());
      const int si = rest % static_cast<int>(spec.schemes.size());
      const Scheme scheme = spec.schemes[si];
      const Point& pt = points[vi];

      TrialRow row;
      row.scheme = scheme.name();
      row.sweep_value = values[vi];
      row.realization = real;
      // streams keyed by realization only: sweep points and schemes share
      // scenes and oracle draws (common random numbers pair the comparisons)
      const std::uint64_t stream = static_cast<std::uint64_t>(real) * 16ULL;
      const auto t0 = std::chrono::steady_clock::now();
      try {
        Rng scene_rng = make_rng(pt.cfg.rng_seed, stream);  // scene shared across schemes
        const ChannelSet cs = sample_scene(pt.cfg, scene_rng);
        Rng ao_rng = make_rng(pt.cfg.rng_seed, stream + 1 + static_cast<std::uint64_t>(si));
        const AoTrace trace = run_ao(pt.cfg, cs, pt.em, scheme, spec.ao, ao_rng);
        row.iters = trace.iterations;
        row.ok = trace.converged;
        row.status = trace.converged ? "converged" : "aborted";
        if (trace.converged) {
          const PhysicalParams p = apply_scheme(to_linear(pt.cfg), scheme);
          const NormalizedChannels nch = normalize(cs, p);
          Rng mc_rng = make_rng(pt.cfg.rng_seed, stream + 5 + static_cast<std::uint64_t>(si));
          const ErgodicEveRates erg =
              ergodic_eve_rates_mc(trace.final_vars, cs, pt.cfg, p, mc_rng, spec.eve_draws);
          const SecrecyReport rep = secrecy_report(trace.final_vars, cs, nch, erg, p);
          row.min_epsr_bits = rep.min_epsr;
          row.ecsr_margin_bits = rep.ecsr_margin;
          row.radar_snr_db = linear_to_db(std::max(rep.radar_snr, 1e-300));
        }
        if (spec.keep_tau_traces && trace.converged) {
          row.tau_trace.reserve(trace.iters.size());
          for (const auto& it : trace.iters)
            row.tau_trace.push_back(std::isfinite(it.tau) ? it.tau : 0.0);
        }
      } catch (const std::exception& e) {
        row.ok = false;
        row.status = std::string("failed: ") + e.what();
      }
      row.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      out.rows[idx] = std::move(row);
    }
  };

  int nthreads = spec.threads > 0 ? spec.threads
                                  : static_cast<int>(std::thread::hardware_concurrency());
  nthreads = std::max(1, std::min(nthreads, n_trials));
  std::vector<std::thread> pool;
  for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();

  detail::aggregate_rows(out, spec.schemes, values);
  return out;
}

// ---- serialization ----------------------------------------------------------

inline std::string results_to_csv(const AggregateResult& res) {
  std::ostringstream os;
  os.precision(12);
  os << "scheme,sweep_value,realization,min_epsr_bits,ecsr_margin_bits,radar_snr_db,iters,status\n";
  for (const auto& r : res.rows)
    os << r.scheme << ',' << r.sweep_value << ',' << r.realization << ',' << r.min_epsr_bits
       << ',' << r.ecsr_margin_bits << ',' << r.radar_snr_db << ',' << r.iters << ','
       << (r.ok ? r.status : "failed") << '\n';
  return os.str();
}

inline nlohmann::ordered_json results_to_json(const AggregateResult& res) {
  nlohmann::ordered_json j;
  j["name"] = res.name;
  j["sweep"] = to_string(res.sweep);
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& r : res.rows) {
    nlohmann::ordered_json row;
    row["scheme"] = r.scheme;
    row["sweep_value"] = r.sweep_value;
    row["realization"] = r.realization;
    row["ok"] = r.ok;
    row["min_epsr_bits"] = r.min_epsr_bits;
    row["ecsr_margin_bits"] = r.ecsr_margin_bits;
    row["radar_snr_db"] = r.radar_snr_db;
    row["iters"] = r.iters;
    row["status"] = r.status;
    row["wall_seconds"] = r.wall_seconds;
    if (!r.tau_trace.empty()) row["tau_trace"] = r.tau_trace;
    j["rows"].push_back(std::move(row));
  }
  j["aggregates"] = nlohmann::ordered_json::array();
  for (const auto& a : res.aggregates) {
    nlohmann::ordered_json pt;
    pt["scheme"] = a.scheme;
    pt["sweep_value"] = a.sweep_value;
    pt["n_ok"] = a.n_ok;
    pt["n_failed"] = a.n_failed;
    pt["mean_min_epsr"] = a.mean_min_epsr;
    pt["se_min_epsr"] = a.se_min_epsr;
    pt["mean_ecsr_margin"] = a.mean_ecsr_margin;
    pt["se_ecsr_margin"] = a.se_ecsr_margin;
    pt["mean_radar_snr_db"] = a.mean_radar_snr_db;
    pt["se_radar_snr_db"] = a.se_radar_snr_db;
    pt["mean_iters"] = a.mean_iters;
    pt["mean_wall_seconds"] = a.mean_wall_seconds;
    j["aggregates"].push_back(std::move(pt));
  }
  return j;
}

inline AggregateResult results_from_json(const nlohmann::json& j) {
  AggregateResult res;
  res.name = j.at("name").get<std::string>();
  const std::string sw = j.at("sweep").get<std::string>();
  for (auto v : {SweepVariable::none, SweepVariable::P_bs_dbm, SweepVariable::N,
                 SweepVariable::ris_x_position, SweepVariable::gamma_r_db})
    if (sw == to_string(v)) res.sweep = v;
  for (const auto& row : j.at("rows")) {
    TrialRow r;
    r.scheme = row.at("scheme").get<std::string>();
    r.sweep_value = row.at("sweep_value").get<double>();
    r.realization = row.at("realization").get<int>();
    r.ok = row.at("ok").get<bool>();
    r.min_epsr_bits = row.at("min_epsr_bits").get<double>();
    r.ecsr_margin_bits = row.at("ecsr_margin_bits").get<double>();
    r.radar_snr_db = row.at("radar_snr_db").get<double>();
    r.iters = row.at("iters").get<int>();
    r.status = row.at("status").get<std::string>();
    r.wall_seconds = row.at("wall_seconds").get<double>();
    if (row.contains("tau_trace")) r.tau_trace = row.at("tau_trace").get<std::vector<double>>();
    res.rows.push_back(std::move(r));
  }
  for (const auto& pt : j.at("aggregates")) {
    AggregatePoint a;
    a.scheme = pt.at("scheme").get<std::string>();
    a.sweep_value = pt.at("sweep_value").get<double>();
    a.n_ok = pt.at("n_ok").get<int>();
    a.n_failed = pt.at("n_failed").get<int>();
    a.mean_min_epsr = pt.at("mean_min_epsr").get<double>();
    a.se_min_epsr = pt.at("se_min_epsr").get<double>();
    a.mean_ecsr_margin = pt.at("mean_ecsr_margin").get<double>();
    a.se_ecsr_margin = pt.at("se_ecsr_margin").get<double>();
    a.mean_radar_snr_db = pt.at("mean_radar_snr_db").get<double>();
    a.se_radar_snr_db = pt.at("se_radar_snr_db").get<double>();
    a.mean_iters = pt.at("mean_iters").get<double>();
    a.mean_wall_seconds = pt.at("mean_wall_seconds").get<double>();
    res.aggregates.push_back(std::move(a));
  }
  return res;
}

inline void emit_results(const AggregateResult& res, const std::string& path,
                         const std::string& format) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("emit_results: cannot write " + path);
  if (format == "csv")
    f << results_to_csv(res);
  else if (format == "json")
    f << results_to_json(res).dump(2) << "\n";
  else
    throw std::invalid_argument("emit_results: unknown format " + format);
}

// ---- figure presets ----------------------------------------------------------

/// Named experiment grids behind the reported figures. Desk scale trims the
/// trial count and oracle draws to workstation budgets.
inline std::vector<ExperimentSpec> figure_presets(bool desk_scale) {
  std::vector<ExperimentSpec> out;
  const int realizations = desk_scale ? 50 : 1000;
  const int draws = desk_scale ? 2000 : 10000;
  auto base_spec = [&](const char* name) {
    ExperimentSpec s;
    s.name = name;
    s.realizations = realizations;
    s.eve_draws = draws;
    return s;
  };
  {
    ExperimentSpec s = base_spec("fig2");  // convergence traces
    s.sweep = SweepVariable::none;
    s.keep_tau_traces = true;
    out.push_back(std::move(s));
  }
  {
    ExperimentSpec s = base_spec("fig3");  // min-EPSR vs BS power budget
    s.sweep = SweepVariable::P_bs_dbm;
    s.sweep_values = {30, 32, 34, 36, 38, 40};
    out.push_back(std::move(s));
  }
  {
    ExperimentSpec s = base_spec("fig4");  // radar SNR vs BS power budget
    s.sweep = SweepVariable::P_bs_dbm;
    s.sweep_values = {30, 32, 34, 36, 38, 40};
    out.push_back(std::move(s));
  }
  {
    ExperimentSpec s = base_spec("fig5");  // element-count sweep
    s.sweep = SweepVariable::N;
    s.sweep_values = {12, 16, 20, 24, 28};
    out.push_back(std::move(s));
  }
  {
    ExperimentSpec s = base_spec("fig6");  // RIS placement sweep
    s.sweep = SweepVariable::ris_x_position;
    s.sweep_values = {5, 10, 15, 20, 25, 30, 35};
    out.push_back(std::move(s));
  }
  {
    ExperimentSpec s = base_spec("fig7");  // sensing requirement sweep
    s.sweep = SweepVariable::gamma_r_db;
    s.sweep_values = {0, 1, 2, 3, 4};
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace secopt

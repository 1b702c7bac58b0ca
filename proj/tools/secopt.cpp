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

#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "secopt/experiments.hpp"
#include "secopt/validation.hpp"

namespace {

using namespace secopt;

nlohmann::ordered_json complex_vector_json(const VectorXcd& v) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (int i = 0; i < v.size(); ++i) arr.push_back({v(i).real(), v(i).imag()});
  return arr;
}

nlohmann::ordered_json complex_matrix_json(const MatrixXcd& m) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (int i = 0; i < m.rows(); ++i) {
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

void dump_channels(const SystemConfig& cfg, const std::string& path) {
  Rng rng = make_rng(cfg.rng_seed);
  const ChannelSet cs = sample_scene(cfg, rng);
  nlohmann::ordered_json j;
  j["G"] = complex_matrix_json(cs.G);
  j["h_R"] = nlohmann::ordered_json::array();
  for (const auto& h : cs.h_R) j["h_R"].push_back(complex_vector_json(h));
  j["h_RT"] = complex_vector_json(cs.h_RT);
  j["user_positions"] = cs.user_positions;
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << j.dump(2) << "\n";
  std::cout << "wrote one channel realization to " << path << "\n";
}

void dump_expansion(const SystemConfig& cfg, const std::string& path) {
  Rng rng = make_rng(cfg.rng_seed);
  const ChannelSet cs = sample_scene(cfg, rng);
  const Scheme scheme{SchemeKind::ARIS_RSMA};
  const PhysicalParams p = apply_scheme(to_linear(cfg), scheme);
  const NormalizedChannels nch = normalize(cs, p);
  const EveMoment em = eve_second_moment(cfg);
  Rng rng2 = make_rng(cfg.rng_seed + 1);
  const DesignVariables v = initialize(cfg, cs, scheme, rng2);
  const BfExpansion bf = bf_expand(v, nch, em, p, scheme);
  const RisExpansion ris = ris_expand(v, nch, cs, em, p, scheme);
  nlohmann::ordered_json j;
  j["sbar_E"] = bf.sbar_E;
  j["ell_E"] = bf.ell_E;
  j["q_E"] = std::vector<double>(bf.q_E.data(), bf.q_E.data() + bf.q_E.size());
  j["epsbarE"] = std::vector<double>(bf.epsbarE.data(), bf.epsbarE.data() + bf.epsbarE.size());
  j["q_0E"] = bf.q_0E;
  j["xi_0"] = complex_vector_json(bf.xi0);
  j["mu_E"] = ris.mu_E;
  j["u_E"] = std::vector<double>(ris.u_E.data(), ris.u_E.data() + ris.u_E.size());
  j["u_0E"] = ris.u_0E;
  j["lambda_D"] = ris.lambda_D;
  j["lambda_J"] = ris.lambda_J;
  j["radar_majorant_d"] = complex_vector_json(ris.radar_mm.d);
  j["radar_majorant_lam_half"] = ris.radar_mm.lam_half;
  j["radar_majorant_c"] = ris.radar_mm.c;
  j["power_majorant_d"] = complex_vector_json(ris.power_mm.d);
  j["power_majorant_lam_half"] = ris.power_mm.lam_half;
  j["power_majorant_c"] = ris.power_mm.c;
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << j.dump(2) << "\n";
  std::cout << "wrote expansion snapshot to " << path << "\n";
}

void dump_first_program(const SystemConfig& cfg, const std::string& path) {
  Rng rng = make_rng(cfg.rng_seed);
  const ChannelSet cs = sample_scene(cfg, rng);
  const Scheme scheme{SchemeKind::ARIS_RSMA};
  const PhysicalParams p = apply_scheme(to_linear(cfg), scheme);
  const NormalizedChannels nch = normalize(cs, p);
  const EveMoment em = eve_second_moment(cfg);
  Rng rng2 = make_rng(cfg.rng_seed + 1);
  const DesignVariables v = initialize(cfg, cs, scheme, rng2);
  BfExpansion e = bf_expand(v, nch, em, p, scheme);
  bf_attach_radar_budget(e, cs, v.u, p);
  dump_program(assemble_bf_program(e, p), path);
  std::cout << "wrote the first beamforming subproblem to " << path << "\n";
}

void dump_trace(const SystemConfig& cfg, const std::string& scheme_name,
                const std::string& path) {
  const auto scheme = Scheme::parse(scheme_name);
  if (!scheme) throw std::runtime_error("unknown scheme " + scheme_name);
  Rng rng = make_rng(cfg.rng_seed);
  const ChannelSet cs = sample_scene(cfg, rng);
  const EveMoment em = eve_second_moment(cfg);
  Rng rng2 = make_rng(cfg.rng_seed + 1);
  const AoTrace tr = run_ao(cfg, cs, em, *scheme, AoOptions{}, rng2);
  nlohmann::ordered_json j;
  j["scheme"] = scheme->name();
  j["converged"] = tr.converged;
  j["iterations"] = tr.iterations;
  j["iters"] = nlohmann::ordered_json::array();
  for (const auto& it : tr.iters) {
    j["iters"].push_back({{"tau", it.tau},
                          {"tau_bf", it.tau_bf},
                          {"tau_ris", it.tau_ris},
                          {"bf_status", to_string(it.bf_status)},
                          {"ris_status", to_string(it.ris_status)},
                          {"radar_snr_db", linear_to_db(std::max(it.radar_snr, 1e-300))},
                          {"bs_power", it.bs_power},
                          {"ris_power", it.ris_power}});
  }
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << j.dump(2) << "\n";
  std::cout << "wrote optimization trace to " << path << "\n";
}

int run_preset(const SystemConfig& base, const std::string& preset, bool desk_scale,
               int realizations, int eve_draws, int threads, const std::string& schemes_csv,
               const std::string& out_dir) {
  std::vector<ExperimentSpec> presets = figure_presets(desk_scale);
  ExperimentSpec* found = nullptr;
  for (auto& s : presets)
    if (s.name == preset) found = &s;
  if (!found) {
    std::cerr << "unknown preset '" << preset << "' (fig2..fig7)\n";
    return 1;
  }
  ExperimentSpec spec = *found;
  spec.base = base;
  if (realizations > 0) spec.realizations = realizations;
  if (eve_draws > 0) spec.eve_draws = eve_draws;
  spec.threads = threads;
  if (!schemes_csv.empty()) {
    spec.schemes.clear();
    std::stringstream ss(schemes_csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      const auto s = Scheme::parse(tok);
      if (!s) {
        std::cerr << "unknown scheme '" << tok << "'\n";
        return 1;
      }
      spec.schemes.push_back(*s);
    }
  }
  std::filesystem::create_directories(out_dir);
  std::cout << "running " << spec.name << ": " << spec.realizations << " realizations x "
            << spec.schemes.size() << " schemes x " << spec.values().size() << " points\n";
  const AggregateResult res = run_experiment(spec);
  const std::string csv = out_dir + "/" + spec.name + ".csv";
  const std::string json = out_dir + "/" + spec.name + ".json";
  emit_results(res, csv, "csv");
  emit_results(res, json, "json");
  std::cout << "wrote " << csv << " and " << json << "\n";
  for (const auto& a : res.aggregates) {
    std::cout << "  " << a.scheme;
    if (res.sweep != SweepVariable::none) std::cout << " @ " << a.sweep_value;
    std::cout << ": min-EPSR " << a.mean_min_epsr << " +- " << a.se_min_epsr << " bits, radar "
              << a.mean_radar_snr_db << " dB, ok " << a.n_ok << "/" << (a.n_ok + a.n_failed)
              << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"active-RIS secure rate-splitting ISAC designer"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "results", preset = "fig2";
  std::string schemes_csv, dump_path, trace_scheme = "ARIS-RSMA";
  bool desk_scale = false, full_validate = false;
  int realizations = -1, eve_draws = -1, threads = 0;

  std::string dump_channels_path, dump_expansion_path, dump_program_path, trace_path;
  auto* run = app.add_subcommand("run", "run an experiment preset");
  run->add_option("--config", config_path, "scenario file (JSON)");
  run->add_option("--preset", preset, "fig2|fig3|fig4|fig5|fig6|fig7");
  run->add_flag("--desk-scale", desk_scale, "workstation-sized trial counts");
  run->add_option("--realizations", realizations, "override trial count");
  run->add_option("--eve-draws", eve_draws, "override final-point oracle draws");
  run->add_option("--threads", threads, "worker threads (0 = hardware)");
  run->add_option("--schemes", schemes_csv, "comma-separated scheme subset");
  run->add_option("--out", out_dir, "output directory");
  run->add_option("--dump-channels", dump_channels_path, "also write one channel realization");
  run->add_option("--dump-expansion", dump_expansion_path, "also write an expansion snapshot");
  run->add_option("--dump-program", dump_program_path, "also write the first subproblem");
  run->add_option("--trace", trace_path, "also write one optimization trace");

  auto* validate = app.add_subcommand("validate", "run the property suites");
  validate->add_flag("--full", full_validate, "include the Monte-Carlo acceptance runs");

  auto* emit = app.add_subcommand("emit-default-config", "write the reference scenario");
  std::string emit_path = "config.json";
  emit->add_option("path", emit_path, "output file");

  auto* dump = app.add_subcommand("dump", "write debug artifacts");
  std::string dump_what = "channels";
  dump->add_option("--config", config_path, "scenario file (JSON)");
  dump->add_option("--what", dump_what, "channels|expansion|program|trace");
  dump->add_option("--scheme", trace_scheme, "scheme for --what trace");
  dump->add_option("path", dump_path, "output file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("emit-default-config")) {
      save_config(SystemConfig{}, emit_path);
      std::cout << "wrote " << emit_path << "\n";
      return 0;
    }

    SystemConfig cfg;
    if (!config_path.empty()) cfg = load_config(config_path);

    if (app.got_subcommand("run")) {
      if (!dump_channels_path.empty()) dump_channels(cfg, dump_channels_path);
      if (!dump_expansion_path.empty()) dump_expansion(cfg, dump_expansion_path);
      if (!dump_program_path.empty()) dump_first_program(cfg, dump_program_path);
      if (!trace_path.empty()) dump_trace(cfg, trace_scheme, trace_path);
      return run_preset(cfg, preset, desk_scale, realizations, eve_draws, threads, schemes_csv,
                        out_dir);
    }

    if (app.got_subcommand("validate")) {
      std::vector<CheckResult> results = checks::property_suite();
      if (full_validate) {
        results.push_back(checks::ao_desk_runs());
        results.push_back(checks::scheme_ordering());
        results.push_back(checks::trend_checks());
        results.push_back(checks::radar_requirement());
      }
      bool all = true;
      for (const auto& r : results) {
        std::cout << (r.pass ? "PASS " : "FAIL ") << r.name << ": " << r.detail << "\n";
        all = all && r.pass;
      }
      return all ? 0 : 2;
    }

    if (app.got_subcommand("dump")) {
      if (dump_what == "channels")
        dump_channels(cfg, dump_path);
      else if (dump_what == "expansion")
        dump_expansion(cfg, dump_path);
      else if (dump_what == "program")
        dump_first_program(cfg, dump_path);
      else if (dump_what == "trace")
        dump_trace(cfg, trace_scheme, dump_path);
      else {
        std::cerr << "unknown dump kind '" << dump_what << "'\n";
        return 1;
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

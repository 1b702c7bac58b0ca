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

#include <array>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "json.hpp"

namespace secopt {

/// Raised on malformed config files or invariant violations; the message
/// names the offending field.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Full scenario description. Distances in metres, angles in radians,
/// powers in dBm, ratio quantities in dB unless suffixed otherwise.
struct SystemConfig {
  int M = 8;   // BS antennas
  int N = 16;  // RIS elements
  int K = 3;   // users

  double P_bs_dbm = 30.0;
  double P_ris_dbm = 20.0;
  double beta_max = 10.0;  // per-element amplitude cap
  double gamma_r_db = 1.0; // radar SNR requirement

  double sigma_bs_dbm = -120.0;
  double sigma_ue_dbm = -80.0;
  double sigma_eve_dbm = -80.0;
  double sigma_ris_dbm = -80.0;

  double kappa_db = 3.0;
  double pathloss_ref_db = -30.0;
  double d0 = 1.0;
  double alpha_br = 2.0;
  double alpha_ru = 2.2;
  double alpha_rt = 2.0;
  double alpha_re = 2.2;
  double rcs = 1.0;  // zeta^2

  std::array<double, 2> bs_pos = {0.0, 0.0};
  std::array<double, 2> ris_pos = {50.0, 0.0};
  std::array<double, 2> user_disk_center = {40.0, 20.0};
  double user_disk_radius = 5.0;
  double target_range = 5.0;                 // from RIS
  double target_angle = 0.25 * M_PI;         // relative to RIS
  double eve_d1 = 30.0;
  double eve_d2 = 35.0;
  double eve_theta1 = M_PI / 6.0;
  double eve_theta2 = M_PI / 3.0;

  int n_theta = 500;  // trapezoid segments for the Eve moment
  int mc_realizations = 1000;
  int mc_eve_draws = 10000;
  unsigned long long rng_seed = 1;
  double element_spacing_wavelengths = 0.5;
};

/// Everything from SystemConfig that enters formulas, in linear units
/// (watts for powers). d0 and the element spacing ride along so channel
/// samplers only need one parameter block.
struct PhysicalParams {
  double p_bs = 0;
  double p_ris = 0;
  double beta_max = 0;
  double gamma_r = 0;
  double sigma2_bs = 0;   // radar receiver noise power
  double sigma2_ue = 0;
  double sigma2_eve = 0;
  double sigma2_ris = 0;  // RIS amplification noise power
  double kappa = 0;
  double pathloss_ref = 0;
  double rcs = 0;
  double d0 = 0;
  double spacing = 0;
};

inline double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watt_to_dbm(double w) { return 10.0 * std::log10(w) + 30.0; }
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double x) { return 10.0 * std::log10(x); }

inline void validate(const SystemConfig& c) {
  auto fail = [](const std::string& m) { throw ConfigError("config invariant violated: " + m); };
  if (c.M < 1) fail("M >= 1");
  if (c.N < 1) fail("N >= 1");
  if (c.K < 1) fail("K >= 1");
  if (!(c.eve_d1 < c.eve_d2)) fail("eve_d1 < eve_d2");
  if (!(c.eve_theta1 < c.eve_theta2)) fail("eve_theta1 < eve_theta2");
  if (c.alpha_re == 2.0) fail("alpha_re != 2 (closed-form moment has a pole)");
  if (!(c.beta_max >= 1.0)) fail("beta_max >= 1");
  for (auto [v, name] : {std::pair{c.P_bs_dbm, "P_bs_dbm"}, {c.P_ris_dbm, "P_ris_dbm"},
                         {c.sigma_bs_dbm, "sigma_bs_dbm"}, {c.sigma_ue_dbm, "sigma_ue_dbm"},
                         {c.sigma_eve_dbm, "sigma_eve_dbm"}, {c.sigma_ris_dbm, "sigma_ris_dbm"}}) {
    if (!std::isfinite(v)) fail(std::string(name) + " finite");
  }
  if (!(c.d0 > 0)) fail("d0 > 0");
  if (!(c.eve_d1 > 0)) fail("eve_d1 > 0");
  if (!(c.target_range > 0)) fail("target_range > 0");
  if (c.user_disk_radius < 0) fail("user_disk_radius >= 0");
  if (c.rcs < 0) fail("rcs >= 0");
  if (c.n_theta < 1) fail("n_theta >= 1");
  if (c.mc_realizations < 1) fail("mc_realizations >= 1");
  if (c.mc_eve_draws < 1) fail("mc_eve_draws >= 1");
  if (!(c.element_spacing_wavelengths > 0)) fail("element_spacing_wavelengths > 0");
}

inline PhysicalParams to_linear(const SystemConfig& c) {
  PhysicalParams p;
  p.p_bs = dbm_to_watt(c.P_bs_dbm);
  p.p_ris = dbm_to_watt(c.P_ris_dbm);
  p.beta_max = c.beta_max;
  p.gamma_r = db_to_linear(c.gamma_r_db);
  p.sigma2_bs = dbm_to_watt(c.sigma_bs_dbm);
  p.sigma2_ue = dbm_to_watt(c.sigma_ue_dbm);
  p.sigma2_eve = dbm_to_watt(c.sigma_eve_dbm);
  p.sigma2_ris = dbm_to_watt(c.sigma_ris_dbm);
  p.kappa = db_to_linear(c.kappa_db);
  p.pathloss_ref = db_to_linear(c.pathloss_ref_db);
  p.rcs = c.rcs;
  p.d0 = c.d0;
  p.spacing = c.element_spacing_wavelengths;
  return p;
}

namespace detail {

inline nlohmann::ordered_json config_to_json(const SystemConfig& c) {
  nlohmann::ordered_json j;
  j["M"] = c.M;
  j["N"] = c.N;
  j["K"] = c.K;
  j["P_bs_dbm"] = c.P_bs_dbm;
  j["P_ris_dbm"] = c.P_ris_dbm;
  j["beta_max"] = c.beta_max;
  j["gamma_r_db"] = c.gamma_r_db;
  j["sigma_bs_dbm"] = c.sigma_bs_dbm;
  j["sigma_ue_dbm"] = c.sigma_ue_dbm;
  j["sigma_eve_dbm"] = c.sigma_eve_dbm;
  j["sigma_ris_dbm"] = c.sigma_ris_dbm;
  j["kappa_db"] = c.kappa_db;
  j["pathloss_ref_db"] = c.pathloss_ref_db;
  j["d0"] = c.d0;
  j["alpha_br"] = c.alpha_br;
  j["alpha_ru"] = c.alpha_ru;
  j["alpha_rt"] = c.alpha_rt;
  j["alpha_re"] = c.alpha_re;
  j["rcs"] = c.rcs;
  j["bs_pos"] = c.bs_pos;
  j["ris_pos"] = c.ris_pos;
  j["user_disk_center"] = c.user_disk_center;
  j["user_disk_radius"] = c.user_disk_radius;
  j["target_range"] = c.target_range;
  j["target_angle"] = c.target_angle;
  j["eve_d1"] = c.eve_d1;
  j["eve_d2"] = c.eve_d2;
  j["eve_theta1"] = c.eve_theta1;
  j["eve_theta2"] = c.eve_theta2;
  j["n_theta"] = c.n_theta;
  j["mc_realizations"] = c.mc_realizations;
  j["mc_eve_draws"] = c.mc_eve_draws;
  j["rng_seed"] = c.rng_seed;
  j["element_spacing_wavelengths"] = c.element_spacing_wavelengths;
  return j;
}

template <typename T>
void get_if_present(const nlohmann::json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("field '") + key + "': " + e.what());
  }
}

inline SystemConfig config_from_json(const nlohmann::json& j) {
  SystemConfig c;  // unspecified fields keep the defaults
  get_if_present(j, "M", c.M);
  get_if_present(j, "N", c.N);
  get_if_present(j, "K", c.K);
  get_if_present(j, "P_bs_dbm", c.P_bs_dbm);
  get_if_present(j, "P_ris_dbm", c.P_ris_dbm);
  get_if_present(j, "beta_max", c.beta_max);
  get_if_present(j, "gamma_r_db", c.gamma_r_db);
  get_if_present(j, "sigma_bs_dbm", c.sigma_bs_dbm);
  get_if_present(j, "sigma_ue_dbm", c.sigma_ue_dbm);
  get_if_present(j, "sigma_eve_dbm", c.sigma_eve_dbm);
  get_if_present(j, "sigma_ris_dbm", c.sigma_ris_dbm);
  get_if_present(j, "kappa_db", c.kappa_db);
  get_if_present(j, "pathloss_ref_db", c.pathloss_ref_db);
  get_if_present(j, "d0", c.d0);
  get_if_present(j, "alpha_br", c.alpha_br);
  get_if_present(j, "alpha_ru", c.alpha_ru);
  get_if_present(j, "alpha_rt", c.alpha_rt);
  get_if_present(j, "alpha_re", c.alpha_re);
  get_if_present(j, "rcs", c.rcs);
  get_if_present(j, "bs_pos", c.bs_pos);
  get_if_present(j, "ris_pos", c.ris_pos);
  get_if_present(j, "user_disk_center", c.user_disk_center);
  get_if_present(j, "user_disk_radius", c.user_disk_radius);
  get_if_present(j, "target_range", c.target_range);
  get_if_present(j, "target_angle", c.target_angle);
  get_if_present(j, "eve_d1", c.eve_d1);
  get_if_present(j, "eve_d2", c.eve_d2);
  get_if_present(j, "eve_theta1", c.eve_theta1);
  get_if_present(j, "eve_theta2", c.eve_theta2);
  get_if_present(j, "n_theta", c.n_theta);
  get_if_present(j, "mc_realizations", c.mc_realizations);
  get_if_present(j, "mc_eve_draws", c.mc_eve_draws);
  get_if_present(j, "rng_seed", c.rng_seed);
  get_if_present(j, "element_spacing_wavelengths", c.element_spacing_wavelengths);
  return c;
}

}  // namespace detail

inline std::string config_to_string(const SystemConfig& c) {
  return detail::config_to_json(c).dump(2) + "\n";
}

inline SystemConfig parse_config(const std::string& text) {
  nlohmann::json j;
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) {
    j = nlohmann::json::object();  // empty file -> full default scenario
  } else {
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("parse failure: ") + e.what());
    }
  }
  SystemConfig c = detail::config_from_json(j);
  validate(c);
  return c;
}

inline SystemConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file: " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

inline void save_config(const SystemConfig& c, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot write config file: " + path);
  f << config_to_string(c);
}

}  // namespace secopt

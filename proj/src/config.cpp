// SPDX-License-Identifier: Apache-2.0
#include "dfrc/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace dfrc {

namespace {

using nlohmann::json;

template <class T>
void read_opt(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

CMat parse_channels(const json& j) {
  if (!j.is_array() || j.empty()) throw ConfigError("config: channels must be a non-empty array");
  const Index k = static_cast<Index>(j.size());
  const Index n = static_cast<Index>(j.at(0).size());
  CMat h(n, k);
  for (Index u = 0; u < k; ++u) {
    const json& col = j.at(static_cast<std::size_t>(u));
    if (static_cast<Index>(col.size()) != n) throw ConfigError("config: ragged channel array");
    for (Index i = 0; i < n; ++i) {
      const json& e = col.at(static_cast<std::size_t>(i));
      if (!e.is_array() || e.size() != 2) throw ConfigError("config: channel entries are [re, im] pairs");
      h(i, u) = Complex(e.at(0).get<double>(), e.at(1).get<double>());
    }
  }
  return h;
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  RunConfig rc;
  ScenarioConfig& sc = rc.scenario;
  try {
    read_opt(j, "n_tx", sc.n_tx);
    read_opt(j, "spacing", sc.spacing);
    if (j.contains("grid")) {
      const json& g = j.at("grid");
      read_opt(g, "start", sc.grid_start);
      read_opt(g, "stop", sc.grid_stop);
      read_opt(g, "step", sc.grid_step);
    }
    read_opt(j, "seed", sc.seed);
    read_opt(j, "k_users", sc.k_users);
    read_opt(j, "users", sc.users);
    if (j.contains("channels")) sc.channels = parse_channels(j.at("channels"));
    if (!j.contains("targets")) throw ConfigError("config: 'targets' is required");
    for (const auto& t : j.at("targets")) {
      if (!t.is_array() || t.size() != 2) throw ConfigError("config: targets are [lo, hi] pairs");
      sc.targets.emplace_back(t.at(0).get<double>(), t.at(1).get<double>());
    }
    read_opt(j, "p_t_dbm", sc.p_t_dbm);
    read_opt(j, "noise_dbm", sc.noise_dbm);
    read_opt(j, "rate_weights", sc.rate_weights);
    if (j.contains("desired_levels")) {
      const auto levels = j.at("desired_levels").get<std::vector<double>>();
      sc.desired_levels = Eigen::Map<const RVec>(levels.data(), static_cast<Index>(levels.size()));
    }
    if (j.contains("synthesis")) {
      const json& s = j.at("synthesis");
      read_opt(s, "scale_tol", sc.synthesis.scale_tol);
      read_opt(s, "max_rounds", sc.synthesis.max_rounds);
      read_opt(s, "mm_iterations_per_round", sc.synthesis.mm_iterations_per_round);
      read_opt(s, "mm_tol", sc.synthesis.mm_tol);
    }
    if (j.contains("solver")) {
      const json& s = j.at("solver");
      AdmmConfig& a = rc.solver;
      read_opt(s, "rho", a.rho);
      read_opt(s, "eps0", a.eps0);
      read_opt(s, "eps1", a.eps1);
      read_opt(s, "eps2", a.eps2);
      read_opt(s, "max_iter", a.max_iter);
      read_opt(s, "seed", a.seed);
      read_opt(s, "wmmse_max_outer", a.wmmse_max_outer);
      read_opt(s, "mm_max_iter", a.mm_max_iter);
      read_opt(s, "qcqp_tol", a.qcqp_tol);
      read_opt(s, "dual_init_scale", a.dual_init_scale);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return rc;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string to_json(const RunConfig& config) {
  const ScenarioConfig& sc = config.scenario;
  json j;
  j["n_tx"] = sc.n_tx;
  j["spacing"] = sc.spacing;
  j["grid"] = {{"start", sc.grid_start}, {"stop", sc.grid_stop}, {"step", sc.grid_step}};
  j["seed"] = sc.seed;
  j["k_users"] = sc.k_users;
  if (!sc.users.empty()) j["users"] = sc.users;
  if (sc.channels) {
    json cols = json::array();
    for (Index u = 0; u < sc.channels->cols(); ++u) {
      json col = json::array();
      for (Index i = 0; i < sc.channels->rows(); ++i)
        col.push_back({(*sc.channels)(i, u).real(), (*sc.channels)(i, u).imag()});
      cols.push_back(col);
    }
    j["channels"] = cols;
  }
  json targets = json::array();
  for (const auto& [lo, hi] : sc.targets) targets.push_back({lo, hi});
  j["targets"] = targets;
  j["p_t_dbm"] = sc.p_t_dbm;
  j["noise_dbm"] = sc.noise_dbm;
  if (!sc.rate_weights.empty()) j["rate_weights"] = sc.rate_weights;
  if (sc.desired_levels)
    j["desired_levels"] = std::vector<double>(sc.desired_levels->data(),
                                              sc.desired_levels->data() + sc.desired_levels->size());
  j["synthesis"] = {{"scale_tol", sc.synthesis.scale_tol},
                    {"max_rounds", sc.synthesis.max_rounds},
                    {"mm_iterations_per_round", sc.synthesis.mm_iterations_per_round},
                    {"mm_tol", sc.synthesis.mm_tol}};
  const AdmmConfig& a = config.solver;
  j["solver"] = {{"rho", a.rho},
                 {"eps0", a.eps0},
                 {"eps1", a.eps1},
                 {"eps2", a.eps2},
                 {"max_iter", a.max_iter},
                 {"seed", a.seed},
                 {"wmmse_max_outer", a.wmmse_max_outer},
                 {"mm_max_iter", a.mm_max_iter},
                 {"qcqp_tol", a.qcqp_tol},
                 {"dual_init_scale", a.dual_init_scale}};
  return j.dump(2);
}

Scenario build_scenario(const ScenarioConfig& config) {
  Scenario s;
  s.geometry = ArrayGeometry{config.n_tx, config.spacing};
  s.geometry.validate();
  s.grid = AngleGrid::uniform(config.grid_start, config.grid_stop, config.grid_step);

  ChannelSet all;
  if (config.channels) {
    all.h = *config.channels;
    if (all.n_tx() != config.n_tx) throw ConfigError("config: channel length != n_tx");
  } else {
    all = generate_channels(config.k_users, s.geometry, config.seed);
  }
  if (config.users.empty()) {
    s.channels = all;
  } else {
    s.channels.h.resize(all.n_tx(), static_cast<Index>(config.users.size()));
    for (std::size_t i = 0; i < config.users.size(); ++i) {
      const int u = config.users[i];
      if (u < 0 || u >= all.k_users()) throw ConfigError("config: user index out of range");
      s.channels.h.col(static_cast<Index>(i)) = all.h.col(u);
    }
  }
  s.channels.noise_power = 1.0;

  s.power_budget = std::pow(10.0, (config.p_t_dbm - config.noise_dbm) / 10.0);
  const Index k = s.channels.k_users();
  if (config.rate_weights.empty()) {
    s.rate_weights = RVec::Ones(k);
  } else {
    if (static_cast<Index>(config.rate_weights.size()) != k)
      throw ConfigError("config: rate_weights needs one entry per served user");
    s.rate_weights = Eigen::Map<const RVec>(config.rate_weights.data(), k);
  }

  if (config.desired_levels) {
    if (config.desired_levels->size() != s.grid.size())
      throw ConfigError("config: desired_levels length != grid size");
    s.desired.levels = *config.desired_levels;
    s.desired.converged = true;
  } else {
    s.desired = synthesize_desired_beampattern(config.targets, s.geometry, s.grid, s.power_budget,
                                               config.synthesis);
  }
  s.validate();
  return s;
}

}  // namespace dfrc

// SPDX-License-Identifier: Apache-2.0
//
// JSON configuration: scenario fields plus an optional solver block.
//
//   {
//     "n_tx": 8, "spacing": 0.5,
//     "grid": {"start": -90, "stop": 90, "step": 1},
//     "seed": 1, "k_users": 4, "users": [1, 3],          // users optional
//     "channels": [[[re, im], ...], ...],               // optional, K x N_t
//     "targets": [[-6, 6], [-56, -44], [44, 56]],
//     "p_t_dbm": 20, "noise_dbm": 0, "rate_weights": [1, 1],
//     "desired_levels": [...],                          // optional, skips synthesis
//     "synthesis": {"scale_tol": 1e-6, "max_rounds": 500, ...},
//     "solver": {"rho": 1, "eps0": ..., "eps1": ..., "eps2": ..., "max_iter": 200}
//   }
//
// "users" selects 0-based columns of the generated (or explicit) channel set.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dfrc/admm.hpp"
#include "dfrc/scenario.hpp"

namespace dfrc {

struct ScenarioConfig {
  int n_tx = 8;
  double spacing = 0.5;
  double grid_start = -90.0;
  double grid_stop = 90.0;
  double grid_step = 1.0;
  std::uint64_t seed = 1;
  int k_users = 4;
  std::vector<int> users;  // empty means all
  std::optional<CMat> channels;
  std::vector<AngularInterval> targets;
  double p_t_dbm = 20.0;
  double noise_dbm = 0.0;
  std::vector<double> rate_weights;  // empty means all ones
  std::optional<RVec> desired_levels;
  SynthesisOptions synthesis;
};

struct RunConfig {
  ScenarioConfig scenario;
  AdmmConfig solver;
};

RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);
std::string to_json(const RunConfig& config);

/// Channels, power conversion and the desired beampattern.
Scenario build_scenario(const ScenarioConfig& config);

}  // namespace dfrc

// SPDX-License-Identifier: Apache-2.0
//
// ADMM orchestration: v-update (WMMSE), u-update (MM), scaled dual ascent.
#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "dfrc/metrics_comms.hpp"
#include "dfrc/scenario.hpp"
#include "dfrc/stacking.hpp"

namespace dfrc {

struct AdmmConfig {
  double rho = 1.0;
  double eps0 = -1.0;  // residual threshold; <= 0 selects 1e-3 * sqrt(P_t)
  double eps1 = 1e-4;  // WMMSE |dWSR| threshold
  double eps2 = -1.0;  // MM step threshold; <= 0 selects 1e-8 * sqrt(P_t)
  int max_iter = 200;
  std::uint64_t seed = 1;
  int wmmse_max_outer = 100;
  int mm_max_iter = 20000;
  double qcqp_tol = 1e-7;
  double dual_init_scale = 1e-3;  // std of the random d entries relative to sqrt(P_t / dim)
  bool pin_radar = false;         // force p_r = 0 even when the mode allows it

  double eps0_for(double power_budget) const;
  double eps2_for(double power_budget) const;
};

struct AdmmState {
  CVec v;
  CVec u;
  CVec d;
  int iteration = 0;
  std::vector<std::pair<double, double>> residual_trace;  // (||r||, ||q||)
};

struct SolveReport {
  PrecoderSolution solution{1, 0};
  double wsr = 0.0;
  double mse = 0.0;
  double rmse = 0.0;
  std::vector<double> objective_trace;  // (1-lambda) WSR - lambda MSE per iteration
  std::vector<std::pair<double, double>> residual_trace;
  bool converged = false;
  int iterations = 0;
  int wmmse_iterations = 0;
  int mm_iterations = 0;
  int qcqp_failures = 0;
  double worst_kkt = 0.0;
};

/// d' = d + D_p (v - u).
CVec dual_update(const CVec& d, const CVec& v, const CVec& u, const StackLayout& layout);

/// MRC private precoders, dominant-eigenvector common precoder, random radar
/// column and dual, c = 1; u is the per-antenna projection of v.
AdmmState initial_state(const Scenario& scenario, const ModeConfig& mode, const AdmmConfig& config);

/// Feasible answer: precoders from u, split from v clipped to the achievable
/// common rate.
PrecoderSolution final_solution(const AdmmState& state, const Scenario& scenario, const ModeConfig& mode);

SolveReport run_admm(const Scenario& scenario, const ModeConfig& mode, double lambda_reg,
                     const AdmmConfig& config = {});

}  // namespace dfrc

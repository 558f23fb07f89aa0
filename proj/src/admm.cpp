// SPDX-License-Identifier: Apache-2.0
#include "dfrc/admm.hpp"

#include <cmath>
#include <random>
#include <string>

#include <Eigen/Eigenvalues>

#include "dfrc/metrics_radar.hpp"
#include "dfrc/mm.hpp"
#include "dfrc/wmmse.hpp"

namespace dfrc {

double AdmmConfig::eps0_for(double power_budget) const {
  return eps0 > 0.0 ? eps0 : 1e-3 * std::sqrt(power_budget);
}

double AdmmConfig::eps2_for(double power_budget) const {
  return eps2 > 0.0 ? eps2 : 1e-8 * std::sqrt(power_budget);
}

CVec dual_update(const CVec& d, const CVec& v, const CVec& u, const StackLayout& layout) {
  if (d.size() != layout.precoder_size() || v.size() != layout.size() || u.size() != layout.size())
    throw DimensionError("dual_update: dimension mismatch");
  return d + (precoder_part(v, layout) - precoder_part(u, layout));
}

AdmmState initial_state(const Scenario& scenario, const ModeConfig& mode, const AdmmConfig& config) {
  scenario.validate();
  const Index n = scenario.n_tx();
  const Index k_users = scenario.k_users();
  const StackLayout layout{n, k_users};
  const CMat& h = scenario.channels.h;

  PrecoderSolution sol(n, k_users);
  for (Index k = 0; k < k_users; ++k) sol.p_private(k) = h.col(k).normalized();
  Eigen::SelfAdjointEigenSolver<CMat> eig(h * h.adjoint());
  sol.p_common() = eig.eigenvectors().col(n - 1);

  std::mt19937_64 rng(config.seed);
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  CVec radar(n);
  for (Index i = 0; i < n; ++i) radar(i) = Complex(normal(rng), normal(rng));
  sol.p_radar() = radar.normalized();
  CVec d(layout.precoder_size());
  const double d_std = config.dual_init_scale * std::sqrt(scenario.power_budget / static_cast<double>(d.size()));
  for (Index i = 0; i < d.size(); ++i) d(i) = d_std * Complex(normal(rng), normal(rng));

  sol.common_split() = RVec::Ones(k_users);
  sol.apply_mode(mode);
  if (config.pin_radar) sol.p_radar().setZero();

  // Equal power per active column, total P_t.
  const std::vector<bool> active = active_columns(mode, k_users, config.pin_radar);
  Index n_active = 0;
  for (bool a : active) n_active += a ? 1 : 0;
  const double col_amp = std::sqrt(scenario.power_budget / static_cast<double>(n_active));
  for (Index col = 0; col < layout.n_columns(); ++col) {
    if (active[static_cast<std::size_t>(col)]) sol.columns().col(col) *= col_amp;
    else d.segment(layout.column_offset(col), n).setZero();
  }

  AdmmState state;
  state.v = stack(sol);
  state.d = std::move(d);
  state.u = state.v;
  precoder_part(state.u, layout) =
      per_antenna_minimizer(precoder_part(state.v, layout), n, layout.n_columns(), active, scenario.power_budget);
  return state;
}

PrecoderSolution final_solution(const AdmmState& state, const Scenario& scenario, const ModeConfig& mode) {
  const StackLayout layout{scenario.n_tx(), scenario.k_users()};
  PrecoderSolution sol = unstack(state.u, layout);
  sol.common_split() = split_part(state.v, layout);
  sol.apply_mode(mode);
  clip_common_split(sol, scenario.channels, mode);
  return sol;
}

SolveReport run_admm(const Scenario& scenario, const ModeConfig& mode, double lambda_reg,
                     const AdmmConfig& config) {
  if (!(lambda_reg >= 0.0 && lambda_reg <= 1.0)) throw ConfigError("admm: lambda must lie in [0, 1]");
  if (!(config.rho >= 0.0)) throw ConfigError("admm: rho must be >= 0");
  if (config.max_iter < 1) throw ConfigError("admm: max_iter must be >= 1");

  const StackLayout layout{scenario.n_tx(), scenario.k_users()};
  AdmmState state = initial_state(scenario, mode, config);
  const double eps0 = config.eps0_for(scenario.power_budget);

  WmmseOptions wopts;
  wopts.tol = config.eps1;
  wopts.max_outer = config.wmmse_max_outer;
  wopts.qcqp_tol = config.qcqp_tol;
  wopts.pin_radar = config.pin_radar;
  MmOptions mopts;
  mopts.tol = config.eps2_for(scenario.power_budget);
  mopts.max_iter = config.mm_max_iter;

  SolveReport report;
  for (int t = 1; t <= config.max_iter; ++t) {
    VUpdateResult vr;
    UUpdateResult ur;
    try {
      vr = v_update(state.u, state.d, scenario, mode, lambda_reg, config.rho, wopts);
      const CVec warm = precoder_part(state.u, layout);
      ur = u_update(vr.v, state.d, scenario, mode, lambda_reg, config.rho, mopts, &warm, config.pin_radar);
    } catch (const Error& e) {
      throw Error("admm iteration " + std::to_string(t) + ": " + e.what());
    }
    const double q_norm = (precoder_part(ur.u, layout) - precoder_part(state.u, layout)).norm();
    state.v = std::move(vr.v);
    state.u = std::move(ur.u);
    const double r_norm = (precoder_part(state.v, layout) - precoder_part(state.u, layout)).norm();
    state.d = dual_update(state.d, state.v, state.u, layout);
    state.iteration = t;
    state.residual_trace.emplace_back(r_norm, q_norm);

    report.wmmse_iterations += vr.iterations;
    report.mm_iterations += ur.iterations;
    report.qcqp_failures += vr.qcqp_failures;
    report.worst_kkt = std::max(report.worst_kkt, vr.worst_kkt);

    const PrecoderSolution sol = final_solution(state, scenario, mode);
    const double w = wsr(sol, scenario.channels, mode, scenario.rate_weights);
    const double m = beampattern_mse(sol, scenario);
    report.objective_trace.push_back((1.0 - lambda_reg) * w - lambda_reg * m);
    report.iterations = t;
    if (r_norm <= eps0 && q_norm <= eps0) {
      report.converged = true;
      break;
    }
  }

  report.solution = final_solution(state, scenario, mode);
  report.wsr = wsr(report.solution, scenario.channels, mode, scenario.rate_weights);
  report.mse = beampattern_mse(report.solution, scenario);
  report.rmse = std::sqrt(report.mse);
  report.residual_trace = std::move(state.residual_trace);
  return report;
}

}  // namespace dfrc

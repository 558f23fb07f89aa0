// SPDX-License-Identifier: Apache-2.0
//
// u-update: majorization-minimization of the quartic beampattern objective
// under the per-antenna power constraint.
//
// The unknown is vec(P) for an N_t x n_columns precoder. With
// Z_m = sum_col D_col^H a_m a_m^H D_col the pattern at theta_m is p^H Z_m p and
//
//   f_u(p) = lambda sum_m (a_m - p^H Z_m p)^2 - rho Re{p^H dhat}.
//
// Two applications of the quadratic upper bound turn f_u into a linear
// surrogate whose per-antenna-constrained minimiser is closed form.
#pragma once

#include <vector>

#include "dfrc/metrics_comms.hpp"
#include "dfrc/scenario.hpp"
#include "dfrc/stacking.hpp"

namespace dfrc {

struct MmWorkState {
  CMat steering;  // N_t x M
  RVec desired;   // a_m = P_d(theta_m)
  Index n_tx = 0;
  Index n_columns = 0;
  std::vector<bool> active;
  double lambda_reg = 1.0;
  double rho = 0.0;
  CVec anchor;  // dhat, length n_columns * n_tx
  double power_budget = 1.0;
  RVec zm_fro_sq;  // ||Z_m||_F^2 = lambda_max(vec(Z_m) vec(Z_m)^H)

  Index n_angles() const { return steering.cols(); }
  Index active_count() const;
  /// Dense Z_m, for tests and diagnostics.
  CMat z_matrix(Index m) const;
};

MmWorkState make_mm_state(CMat steering, RVec desired, Index n_columns, std::vector<bool> active,
                          double lambda_reg, double rho, CVec anchor, double power_budget);

/// q_m(p) = p^H Z_m p for every grid angle.
RVec pattern_values(const CVec& p, const MmWorkState& state);

double surrogate_objective(const CVec& p, const MmWorkState& state);

/// Both majorizers built at p_k. Q' = I (x) B - rank_one_weight * p_k p_k^H
/// restricted to the active columns.
struct Majorizer {
  CVec point;
  RVec q_at_point;
  double c_u = 0.0;
  CMat b;  // N_t x N_t
  double rank_one_weight = 0.0;
  double lambda_max = 0.0;  // largest algebraic eigenvalue of Q'
  double c_u_prime = 0.0;
  CVec k_hat;  // linear coefficient of the second-stage surrogate

  /// C_u + p^H Q' p - rho Re{p^H dhat}
  double first_stage(const CVec& p, const MmWorkState& state) const;
  /// C_u' - Re{p^H k_hat}
  double second_stage(const CVec& p) const;
  CMat q_prime_dense(const MmWorkState& state) const;
};

Majorizer majorize(const CVec& p_k, const MmWorkState& state);

/// Maximiser of Re{p^H k_hat} subject to every antenna row carrying
/// power_budget / n_tx over the active columns. A vanishing antenna
/// sub-vector puts the full antenna power on the first active column.
CVec per_antenna_minimizer(const CVec& k_hat, Index n_tx, Index n_columns,
                           const std::vector<bool>& active, double power_budget);

/// Largest algebraic eigenvalue of a Hermitian matrix by shifted power
/// iteration (shift ||H||_F, accelerated by repeated squaring) from a fixed
/// start. Accurate to tol * ||H||_F.
double largest_eigenvalue(const CMat& h, double tol = 1e-12);

struct MmOptions {
  double tol = 0.0;  // ||p_k - p_{k-1}||_2 threshold; <= 0 selects 1e-8 sqrt(P_t)
  int max_iter = 20000;
  bool record_trace = false;
};

struct MmResult {
  CVec p;
  int iterations = 0;
  bool converged = false;
  std::vector<double> objective_trace;  // f_u at every iterate, start included
};

/// Runs majorize -> per_antenna_minimizer until the step falls below tol.
/// `init` is projected onto the constraint set first.
MmResult mm_minimize(const MmWorkState& state, const CVec& init, const MmOptions& options = {});

struct UUpdateResult {
  CVec u;
  int iterations = 0;
  bool converged = false;
  std::vector<double> objective_trace;
};

/// u-update against dhat = D_p v + d. The split entries of u are copied from v.
/// `init` is the starting precoder part (defaults to v's, projected).
UUpdateResult u_update(const CVec& v, const CVec& d, const Scenario& scenario,
                       const ModeConfig& mode, double lambda_reg, double rho,
                       const MmOptions& options = {}, const CVec* init = nullptr,
                       bool pin_radar = false);

}  // namespace dfrc

// SPDX-License-Identifier: Apache-2.0
//
// v-update: weighted-MMSE alternation between closed-form equalizers/weights
// and a convex QCQP over the precoders and the common-rate split.
#pragma once

#include <vector>

#include "dfrc/metrics_comms.hpp"
#include "dfrc/qcqp.hpp"
#include "dfrc/scenario.hpp"
#include "dfrc/stacking.hpp"

namespace dfrc {

/// Received power terms T_{c,k} and T_k (noise included).
struct InterferenceTerms {
  double common = 1.0;
  double priv = 1.0;
};

InterferenceTerms interference_terms(const PrecoderSolution& sol, const ChannelSet& channels,
                                     Index user, const ModeConfig& mode);

struct EqualizerWeights {
  CVec g_common;
  CVec g_private;
  RVec w_common;
  RVec w_private;
};

/// MMSE equalizers g = p^H h / T and weights w = 1 / eps_MMSE.
EqualizerWeights mmse_step(const PrecoderSolution& sol, const ChannelSet& channels,
                           const ModeConfig& mode);

/// Stream MSEs for arbitrary equalizers.
double mse_common(const PrecoderSolution& sol, const ChannelSet& channels, Index user,
                  const ModeConfig& mode, Complex g);
double mse_private(const PrecoderSolution& sol, const ChannelSet& channels, Index user,
                   const ModeConfig& mode, Complex g);

/// Augmented WMSE xi = w * eps - log2(w).
double augmented_wmse_common(const PrecoderSolution& sol, const ChannelSet& channels, Index user,
                             const ModeConfig& mode, const EqualizerWeights& eqw);
double augmented_wmse_private(const PrecoderSolution& sol, const ChannelSet& channels, Index user,
                              const ModeConfig& mode, const EqualizerWeights& eqw);

/// QCQP of one WMMSE step in the reduced variable space: only active columns
/// are complex unknowns; the split is present only under RSMA.
struct VUpdateQcqp {
  qcqp::ConvexQcqp problem;
  StackLayout layout;
  std::vector<Index> columns;  // active column indices, in order
  bool has_split = false;
  double constant_offset = 0.0;  // objective constant dropped from the QCQP

  /// Reduced-space view of a full solution (hint construction).
  CVec reduce(const PrecoderSolution& sol) const;
  PrecoderSolution expand(const CVec& z, const RVec& y) const;
};

/// Assembles the convex problem for fixed (w, g):
///   min (1-lambda) sum mu_k (-C_k + xi_k(p)) + rho/2 ||p - anchor||^2
///   s.t. sum C + xi_{c,k}(p) <= 1, ||p||^2 <= P_t, c >= 0.
VUpdateQcqp assemble_vupdate_qcqp(const EqualizerWeights& eqw, const ChannelSet& channels,
                                  const ModeConfig& mode, double lambda_reg, double rho,
                                  const CVec& anchor, const RVec& rate_weights,
                                  double power_budget, bool pin_radar = false);

/// -(1-lambda) WSR + rho/2 ||p - anchor||^2 at a solution (split unchecked).
double vupdate_objective(const PrecoderSolution& sol, const ChannelSet& channels,
                         const ModeConfig& mode, double lambda_reg, double rho,
                         const CVec& anchor, const RVec& rate_weights);

struct WmmseOptions {
  double tol = 1e-4;  // |WSR change| stopping threshold, bps/Hz
  int max_outer = 100;
  double qcqp_tol = 1e-7;
  int qcqp_max_iter = 100;
  bool pin_radar = false;
};

struct VUpdateResult {
  CVec v;
  int iterations = 0;
  bool converged = false;
  std::vector<double> objective_trace;  // vupdate_objective per outer iteration
  std::vector<double> wsr_trace;
  double worst_kkt = 0.0;
  int qcqp_failures = 0;
};

/// Weighted-MMSE v-update started from the precoder part of u and its split.
VUpdateResult v_update(const CVec& u, const CVec& d, const Scenario& scenario,
                       const ModeConfig& mode, double lambda_reg, double rho,
                       const WmmseOptions& options = {});

/// Same alternation with an explicit power budget, used for communication-only
/// designs of the baselines (lambda = 0, rho = 0).
VUpdateResult v_update(const CVec& u, const CVec& d, const ChannelSet& channels,
                       const RVec& rate_weights, double power_budget, const ModeConfig& mode,
                       double lambda_reg, double rho, const WmmseOptions& options);

}  // namespace dfrc

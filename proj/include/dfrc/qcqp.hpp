// SPDX-License-Identifier: Apache-2.0
//
// Dense convex QCQP solver over mixed complex/real variables.
//
//   minimize    f_0(z, y)
//   subject to  f_i(z, y) <= 0,   y_j >= 0 for flagged j
//
// with f(z, y) = z^H A z + 2 Re{b^H z} + r^T y + c and every A Hermitian PSD.
// Complex variables are embedded as [Re z; Im z] internally; callers only see
// the complex form.
#pragma once

#include <optional>
#include <vector>

#include "dfrc/types.hpp"

namespace dfrc::qcqp {

struct QuadraticForm {
  CMat quad;      // Hermitian PSD, n_complex x n_complex (empty means zero)
  CVec lin;       // b, contributes 2 Re{b^H z} (empty means zero)
  RVec lin_real;  // r, contributes r^T y (empty means zero)
  double constant = 0.0;

  double value(const CVec& z, const RVec& y) const;
};

struct ConvexQcqp {
  Index n_complex = 0;
  Index n_real = 0;
  QuadraticForm objective;
  std::vector<QuadraticForm> constraints;
  std::vector<bool> nonnegative;  // per real variable; empty means unconstrained

  /// Dimension checks and a PSD check on every quadratic term.
  void validate() const;
};

enum class Status { Optimal, MaxIter, Infeasible };

const char* to_string(Status status);

struct Solution {
  CVec z;
  RVec y;
  double objective_value = 0.0;
  double kkt_residual = 0.0;
  Status status = Status::MaxIter;
  int iterations = 0;
  RVec multipliers;    // one per constraint, then one per bound
  RVec slacks;         // -f_i at the returned point, same order
  std::vector<double> objective_trace;  // objective after each step
};

struct Options {
  double tol = 1e-7;
  int max_iter = 100;
  std::optional<CVec> hint_z;  // initial point; need not be feasible
  std::optional<RVec> hint_y;
};

/// Primal-dual interior-point method with Mehrotra predictor-corrector
/// steps. Slacks are separate variables, so any start works; the hint only
/// shortens the path.
Solution solve(const ConvexQcqp& problem, const Options& options = {});

}  // namespace dfrc::qcqp

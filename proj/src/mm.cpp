// SPDX-License-Identifier: Apache-2.0
#include "dfrc/mm.hpp"

#include <algorithm>
#include <cmath>

namespace dfrc {

namespace {

CVec masked(const CVec& p, Index n_tx, const std::vector<bool>& active) {
  CVec out = p;
  for (std::size_t col = 0; col < active.size(); ++col) {
    if (!active[col]) out.segment(static_cast<Index>(col) * n_tx, n_tx).setZero();
  }
  return out;
}

Eigen::Map<const CMat> as_matrix(const CVec& p, Index n_tx, Index n_columns) {
  return Eigen::Map<const CMat>(p.data(), n_tx, n_columns);
}

// (I (x) B) p restricted to active columns.
CVec apply_block(const CMat& b, const CVec& p, Index n_tx, Index n_columns) {
  CVec out(p.size());
  Eigen::Map<CMat>(out.data(), n_tx, n_columns).noalias() = b * as_matrix(p, n_tx, n_columns);
  return out;
}

}  // namespace

Index MmWorkState::active_count() const {
  return static_cast<Index>(std::count(active.begin(), active.end(), true));
}

CMat MmWorkState::z_matrix(Index m) const {
  const Index dim = n_columns * n_tx;
  CMat z = CMat::Zero(dim, dim);
  const CMat aa = steering.col(m) * steering.col(m).adjoint();
  for (Index col = 0; col < n_columns; ++col) {
    if (active[static_cast<std::size_t>(col)]) z.block(col * n_tx, col * n_tx, n_tx, n_tx) = aa;
  }
  return z;
}

MmWorkState make_mm_state(CMat steering, RVec desired, Index n_columns, std::vector<bool> active,
                          double lambda_reg, double rho, CVec anchor, double power_budget) {
  if (desired.size() != steering.cols()) throw DimensionError("mm: desired pattern size != grid size");
  if (static_cast<Index>(active.size()) != n_columns) throw DimensionError("mm: active mask size mismatch");
  if (anchor.size() != n_columns * steering.rows()) throw DimensionError("mm: anchor length mismatch");
  MmWorkState s;
  s.n_tx = steering.rows();
  s.n_columns = n_columns;
  s.steering = std::move(steering);
  s.desired = std::move(desired);
  s.active = std::move(active);
  s.lambda_reg = lambda_reg;
  s.rho = rho;
  s.anchor = masked(anchor, s.n_tx, s.active);
  s.power_budget = power_budget;
  // ||Z_m||_F^2 = n_active * ||a_m||^4; Q_m is rank one so this is its top eigenvalue.
  const double n_active = static_cast<double>(s.active_count());
  s.zm_fro_sq = s.steering.colwise().squaredNorm().transpose().array().square() * n_active;
  return s;
}

RVec pattern_values(const CVec& p, const MmWorkState& state) {
  const CVec pm = masked(p, state.n_tx, state.active);
  return (state.steering.adjoint() * as_matrix(pm, state.n_tx, state.n_columns)).rowwise().squaredNorm();
}

double surrogate_objective(const CVec& p, const MmWorkState& state) {
  const CVec pm = masked(p, state.n_tx, state.active);
  const RVec q = pattern_values(pm, state);
  return state.lambda_reg * (state.desired - q).squaredNorm() - state.rho * pm.dot(state.anchor).real();
}

double largest_eigenvalue(const CMat& h, double tol) {
  const Index n = h.rows();
  if (n != h.cols()) throw DimensionError("largest_eigenvalue: matrix must be square");
  if (n == 0) throw DimensionError("largest_eigenvalue: empty matrix");
  if (n == 1) return h(0, 0).real();
  const double shift = h.norm();
  if (shift == 0.0) return 0.0;

  // H + shift I is PSD and its top eigenvector is the algebraic maximum of H.
  // Squaring raises it to the power 2^k; the normalised limit spans the
  // dominant eigenspace.
  CMat g = h;
  g.diagonal().array() += shift;
  CMat x = g / g.norm();
  CMat next(n, n);
  for (int k = 0; k < 64; ++k) {
    next.noalias() = x * x;
    const double nrm = next.norm();
    if (nrm == 0.0) break;
    next /= nrm;
    const double change = (next - x).norm();
    x.swap(next);
    if (change < 1e-13) break;
  }
  Index best = 0;
  x.colwise().squaredNorm().maxCoeff(&best);
  CVec v = x.col(best).normalized();
  CVec hv = h * v;
  double estimate = v.dot(hv).real();
  // A few plain power steps polish the Rayleigh quotient.
  for (int it = 0; it < 50; ++it) {
    CVec w = hv + shift * v;
    w.normalize();
    hv.noalias() = h * w;
    const double value = w.dot(hv).real();
    const bool done = std::abs(value - estimate) <= tol * shift;
    v = std::move(w);
    estimate = std::max(estimate, value);
    if (done) break;
  }
  return estimate;
}

double Majorizer::first_stage(const CVec& p, const MmWorkState& state) const {
  const CVec pm = masked(p, state.n_tx, state.active);
  const double quad = pm.dot(apply_block(b, pm, state.n_tx, state.n_columns)).real() -
                      rank_one_weight * std::norm(point.dot(pm));
  return c_u + quad - state.rho * pm.dot(state.anchor).real();
}

double Majorizer::second_stage(const CVec& p) const { return c_u_prime - p.dot(k_hat).real(); }

CMat Majorizer::q_prime_dense(const MmWorkState& state) const {
  const Index dim = state.n_columns * state.n_tx;
  CMat q = CMat::Zero(dim, dim);
  for (Index col = 0; col < state.n_columns; ++col) {
    if (state.active[static_cast<std::size_t>(col)]) q.block(col * state.n_tx, col * state.n_tx, state.n_tx, state.n_tx) = b;
  }
  q -= rank_one_weight * point * point.adjoint();
  return q;
}

Majorizer majorize(const CVec& p_k, const MmWorkState& state) {
  const double lam = state.lambda_reg;
  const double pt = state.power_budget;
  Majorizer mj;
  mj.point = masked(p_k, state.n_tx, state.active);
  mj.q_at_point = pattern_values(mj.point, state);
  const RVec err = mj.q_at_point - state.desired;

  // First stage: q_m^2 <= 2 lmax(Q_m) P_t^2 - q_m(p_k)^2 + 2 q_m(p_k) q_m(p)
  //                        - 2 lmax(Q_m) |p^H p_k|^2.
  mj.c_u = lam * (2.0 * state.zm_fro_sq.array() * pt * pt - mj.q_at_point.array().square() +
                  state.desired.array().square())
                     .sum();
  const RVec weights = 2.0 * lam * err;
  mj.b = state.steering * weights.asDiagonal() * state.steering.adjoint();
  mj.b = 0.5 * (mj.b + mj.b.adjoint()).eval();
  mj.rank_one_weight = 2.0 * lam * state.zm_fro_sq.sum();

  // Second stage needs lambda_max(Q'). With two or more active columns the
  // dominant eigenspace of I (x) B has dimension >= 2, so the rank-one
  // downdate cannot lower it and lambda_max(Q') = lambda_max(B).
  if (state.active_count() >= 2) {
    mj.lambda_max = largest_eigenvalue(mj.b);
  } else {
    mj.lambda_max = largest_eigenvalue(mj.q_prime_dense(state));
  }

  const CVec q_p = apply_block(mj.b, mj.point, state.n_tx, state.n_columns) -
                   mj.rank_one_weight * mj.point.squaredNorm() * mj.point;
  const double pk_q_pk = mj.point.dot(q_p).real();
  mj.c_u_prime = mj.c_u + mj.lambda_max * pt + mj.lambda_max * mj.point.squaredNorm() - pk_q_pk;
  mj.k_hat = -2.0 * (q_p - mj.lambda_max * mj.point) + state.rho * state.anchor;
  mj.k_hat = masked(mj.k_hat, state.n_tx, state.active);
  return mj;
}

CVec per_antenna_minimizer(const CVec& k_hat, Index n_tx, Index n_columns,
                           const std::vector<bool>& active, double power_budget) {
  if (k_hat.size() != n_tx * n_columns) throw DimensionError("per_antenna_minimizer: length mismatch");
  if (static_cast<Index>(active.size()) != n_columns) throw DimensionError("per_antenna_minimizer: mask size");
  const auto first = std::find(active.begin(), active.end(), true);
  if (first == active.end()) throw DimensionError("per_antenna_minimizer: no active column");
  const Index first_col = static_cast<Index>(first - active.begin());
  const double row_amp = std::sqrt(power_budget / static_cast<double>(n_tx));

  CVec p = CVec::Zero(k_hat.size());
  for (Index j = 0; j < n_tx; ++j) {
    double nrm_sq = 0.0;
    for (Index col = 0; col < n_columns; ++col) {
      if (active[static_cast<std::size_t>(col)]) nrm_sq += std::norm(k_hat(col * n_tx + j));
    }
    const double nrm = std::sqrt(nrm_sq);
    if (!(nrm > 1e-300) || !std::isfinite(nrm)) {
      p(first_col * n_tx + j) = row_amp;
      continue;
    }
    for (Index col = 0; col < n_columns; ++col) {
      if (active[static_cast<std::size_t>(col)]) p(col * n_tx + j) = row_amp / nrm * k_hat(col * n_tx + j);
    }
  }
  return p;
}

MmResult mm_minimize(const MmWorkState& state, const CVec& init, const MmOptions& options) {
  const double tol = options.tol > 0.0 ? options.tol : 1e-8 * std::sqrt(state.power_budget);
  MmResult res;
  res.p = per_antenna_minimizer(masked(init, state.n_tx, state.active), state.n_tx, state.n_columns,
                                state.active, state.power_budget);
  if (options.record_trace) res.objective_trace.push_back(surrogate_objective(res.p, state));
  for (int it = 1; it <= options.max_iter; ++it) {
    const Majorizer mj = majorize(res.p, state);
    CVec next = per_antenna_minimizer(mj.k_hat, state.n_tx, state.n_columns, state.active, state.power_budget);
    const double step = (next - res.p).norm();
    res.p = std::move(next);
    res.iterations = it;
    if (options.record_trace) res.objective_trace.push_back(surrogate_objective(res.p, state));
    if (step <= tol) {
      res.converged = true;
      break;
    }
  }
  return res;
}

UUpdateResult u_update(const CVec& v, const CVec& d, const Scenario& scenario,
                       const ModeConfig& mode, double lambda_reg, double rho,
                       const MmOptions& options, const CVec* init, bool pin_radar) {
  const StackLayout layout{scenario.n_tx(), scenario.k_users()};
  if (v.size() != layout.size()) throw DimensionError("u_update: v has the wrong length");
  if (d.size() != layout.precoder_size()) throw DimensionError("u_update: d has the wrong length");
  const CVec anchor = precoder_part(v, layout) + d;
  const MmWorkState state =
      make_mm_state(steering_matrix(scenario.grid, scenario.geometry), scenario.desired.levels,
                    layout.n_columns(), active_columns(mode, layout.k_users, pin_radar), lambda_reg,
                    rho, anchor, scenario.power_budget);
  const CVec start = init != nullptr ? *init : CVec(precoder_part(v, layout));
  MmResult mm = mm_minimize(state, start, options);

  UUpdateResult out;
  out.u.resize(layout.size());
  out.u.head(layout.k_users) = v.head(layout.k_users);
  precoder_part(out.u, layout) = mm.p;
  out.iterations = mm.iterations;
  out.converged = mm.converged;
  out.objective_trace = std::move(mm.objective_trace);
  return out;
}

}  // namespace dfrc

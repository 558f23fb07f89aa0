// SPDX-License-Identifier: Apache-2.0
#include "dfrc/wmmse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dfrc {

namespace {

// Below this magnitude an equalizer is treated as exactly zero.
constexpr double kZeroEqualizer = 1e-150;

RVec received_powers(const PrecoderSolution& sol, const ChannelSet& channels, Index user) {
  return (channels.h.col(user).adjoint() * sol.columns()).cwiseAbs2().transpose();
}

}  // namespace

InterferenceTerms interference_terms(const PrecoderSolution& sol, const ChannelSet& channels,
                                     Index user, const ModeConfig& mode) {
  if (channels.n_tx() != sol.n_tx() || channels.k_users() != sol.k_users())
    throw DimensionError("wmmse: channel / precoder dimension mismatch");
  if (user < 0 || user >= channels.k_users()) throw DimensionError("wmmse: user index out of range");
  const RVec g = received_powers(sol, channels, user);
  const Index k = sol.k_users();
  InterferenceTerms t;
  t.priv = g.segment(1, k).sum() + mode.delta_c() * g(k + 1) + channels.noise_power;
  t.common = t.priv + g(0);
  return t;
}

EqualizerWeights mmse_step(const PrecoderSolution& sol, const ChannelSet& channels,
                           const ModeConfig& mode) {
  const Index k_users = channels.k_users();
  EqualizerWeights e;
  e.g_common = CVec::Zero(k_users);
  e.g_private.resize(k_users);
  e.w_common = RVec::Ones(k_users);
  e.w_private.resize(k_users);
  for (Index k = 0; k < k_users; ++k) {
    const InterferenceTerms t = interference_terms(sol, channels, k, mode);
    const auto h = channels.h.col(k);
    if (mode.common_active()) {
      const Complex hp = h.dot(sol.p_common());  // h^H p_c
      e.g_common(k) = std::conj(hp) / t.common;
      e.w_common(k) = t.common / (t.common - std::norm(hp));
    }
    const Complex hp = h.dot(sol.p_private(k));
    e.g_private(k) = std::conj(hp) / t.priv;
    e.w_private(k) = t.priv / (t.priv - std::norm(hp));
  }
  return e;
}

double mse_common(const PrecoderSolution& sol, const ChannelSet& channels, Index user,
                  const ModeConfig& mode, Complex g) {
  const InterferenceTerms t = interference_terms(sol, channels, user, mode);
  const Complex hp = channels.h.col(user).dot(sol.p_common());
  return std::norm(g) * t.common - 2.0 * (g * hp).real() + 1.0;
}

double mse_private(const PrecoderSolution& sol, const ChannelSet& channels, Index user,
                   const ModeConfig& mode, Complex g) {
  const InterferenceTerms t = interference_terms(sol, channels, user, mode);
  const Complex hp = channels.h.col(user).dot(sol.p_private(user));
  return std::norm(g) * t.priv - 2.0 * (g * hp).real() + 1.0;
}

double augmented_wmse_common(const PrecoderSolution& sol, const ChannelSet& channels, Index user,
                             const ModeConfig& mode, const EqualizerWeights& eqw) {
  const double w = eqw.w_common(user);
  return w * mse_common(sol, channels, user, mode, eqw.g_common(user)) - std::log2(w);
}

double augmented_wmse_private(const PrecoderSolution& sol, const ChannelSet& channels, Index user,
                              const ModeConfig& mode, const EqualizerWeights& eqw) {
  const double w = eqw.w_private(user);
  return w * mse_private(sol, channels, user, mode, eqw.g_private(user)) - std::log2(w);
}

CVec VUpdateQcqp::reduce(const PrecoderSolution& sol) const {
  const Index n = layout.n_tx;
  CVec z(static_cast<Index>(columns.size()) * n);
  for (std::size_t i = 0; i < columns.size(); ++i)
    z.segment(static_cast<Index>(i) * n, n) = sol.columns().col(columns[i]);
  return z;
}

PrecoderSolution VUpdateQcqp::expand(const CVec& z, const RVec& y) const {
  const Index n = layout.n_tx;
  PrecoderSolution sol(n, layout.k_users);
  for (std::size_t i = 0; i < columns.size(); ++i)
    sol.columns().col(columns[i]) = z.segment(static_cast<Index>(i) * n, n);
  if (has_split) sol.common_split() = y;
  return sol;
}

namespace {

// Adds the augmented WMSE of one stream to `form`, scaled by `scale`:
//   w |g|^2 sum_{j in T} |h^H p_j|^2 - 2 w Re{g h^H p_s} + w (|g|^2 sigma^2 + 1) - log2 w.
void add_stream_wmse(qcqp::QuadraticForm& form, const VUpdateQcqp& qp, const CVec& h,
                     const std::vector<double>& interferer_gain, Index stream_col, Complex g,
                     double w, double noise, double scale) {
  const Index n = qp.layout.n_tx;
  const CMat hh = h * h.adjoint();
  const double g2 = std::norm(g);
  for (std::size_t i = 0; i < qp.columns.size(); ++i) {
    const Index col = qp.columns[i];
    const Index off = static_cast<Index>(i) * n;
    const double gain = interferer_gain[static_cast<std::size_t>(col)];
    if (gain != 0.0) form.quad.block(off, off, n, n) += (scale * gain * w * g2) * hh;
    if (col == stream_col) form.lin.segment(off, n) += (-scale * w * std::conj(g)) * h;
  }
  form.constant += scale * (w * (g2 * noise + 1.0) - std::log2(w));
}

qcqp::QuadraticForm zero_form(Index n_complex, Index n_real) {
  qcqp::QuadraticForm f;
  f.quad = CMat::Zero(n_complex, n_complex);
  f.lin = CVec::Zero(n_complex);
  f.lin_real = RVec::Zero(n_real);
  return f;
}

}  // namespace

VUpdateQcqp assemble_vupdate_qcqp(const EqualizerWeights& eqw, const ChannelSet& channels,
                                  const ModeConfig& mode, double lambda_reg, double rho,
                                  const CVec& anchor, const RVec& rate_weights,
                                  double power_budget, bool pin_radar) {
  VUpdateQcqp qp;
  qp.layout = StackLayout{channels.n_tx(), channels.k_users()};
  const Index n = qp.layout.n_tx;
  const Index k_users = qp.layout.k_users;
  if (anchor.size() != qp.layout.precoder_size()) throw DimensionError("v-update: anchor length mismatch");
  if (rate_weights.size() != k_users) throw DimensionError("v-update: one rate weight per user");

  const std::vector<bool> active = active_columns(mode, k_users, pin_radar);
  for (Index col = 0; col < qp.layout.n_columns(); ++col)
    if (active[static_cast<std::size_t>(col)]) qp.columns.push_back(col);

  // A user whose common equalizer vanishes turns its rate constraint into
  // sum(c) <= 0; the split is then pinned at zero.
  bool split_possible = mode.common_active();
  if (split_possible) {
    for (Index k = 0; k < k_users; ++k)
      if (!(std::abs(eqw.g_common(k)) > kZeroEqualizer)) split_possible = false;
  }
  qp.has_split = split_possible;

  const Index nz = static_cast<Index>(qp.columns.size()) * n;
  const Index ny = qp.has_split ? k_users : 0;
  qp.problem.n_complex = nz;
  qp.problem.n_real = ny;

  // Per-column gains of the interference-plus-signal sums T_{c,k} and T_k.
  const double radar_gain = mode.delta_c();
  std::vector<double> private_gain(static_cast<std::size_t>(qp.layout.n_columns()), 1.0);
  private_gain.front() = 0.0;
  private_gain.back() = radar_gain;
  std::vector<double> common_gain = private_gain;
  common_gain.front() = 1.0;

  const double comm_scale = 1.0 - lambda_reg;
  qcqp::QuadraticForm obj = zero_form(nz, ny);
  for (Index k = 0; k < k_users; ++k) {
    add_stream_wmse(obj, qp, channels.h.col(k), private_gain, qp.layout.private_column(k),
                    eqw.g_private(k), eqw.w_private(k), channels.noise_power,
                    comm_scale * rate_weights(k));
    if (qp.has_split) obj.lin_real(k) = -comm_scale * rate_weights(k);
  }

  // rho/2 ||p - anchor||^2; pinned columns are zero so their share is constant.
  CVec anchor_active(nz);
  for (std::size_t i = 0; i < qp.columns.size(); ++i)
    anchor_active.segment(static_cast<Index>(i) * n, n) =
        anchor.segment(qp.layout.column_offset(qp.columns[i]), n);
  obj.quad.diagonal().array() += 0.5 * rho;
  obj.lin -= 0.5 * rho * anchor_active;
  obj.constant += 0.5 * rho * anchor_active.squaredNorm();
  qp.constant_offset = 0.5 * rho * (anchor.squaredNorm() - anchor_active.squaredNorm());
  qp.problem.objective = std::move(obj);

  if (mode.common_active()) {
    for (Index k = 0; k < k_users; ++k) {
      if (!(std::abs(eqw.g_common(k)) > kZeroEqualizer)) continue;  // constant, drops out
      qcqp::QuadraticForm con = zero_form(nz, ny);
      add_stream_wmse(con, qp, channels.h.col(k), common_gain, qp.layout.common_column(),
                      eqw.g_common(k), eqw.w_common(k), channels.noise_power, 1.0);
      if (qp.has_split) con.lin_real.setOnes();
      con.constant -= 1.0;
      qp.problem.constraints.push_back(std::move(con));
    }
  }

  qcqp::QuadraticForm power = zero_form(nz, ny);
  power.quad.diagonal().setOnes();
  power.constant = -power_budget;
  qp.problem.constraints.push_back(std::move(power));
  qp.problem.nonnegative.assign(static_cast<std::size_t>(ny), true);
  return qp;
}

double vupdate_objective(const PrecoderSolution& sol, const ChannelSet& channels,
                         const ModeConfig& mode, double lambda_reg, double rho,
                         const CVec& anchor, const RVec& rate_weights) {
  const CVec p = Eigen::Map<const CVec>(sol.columns().data(), sol.columns().size());
  return -(1.0 - lambda_reg) * wsr_unchecked(sol, channels, mode, rate_weights) +
         0.5 * rho * (p - anchor).squaredNorm();
}

VUpdateResult v_update(const CVec& u, const CVec& d, const Scenario& scenario,
                       const ModeConfig& mode, double lambda_reg, double rho,
                       const WmmseOptions& options) {
  return v_update(u, d, scenario.channels, scenario.rate_weights, scenario.power_budget, mode,
                  lambda_reg, rho, options);
}

VUpdateResult v_update(const CVec& u, const CVec& d, const ChannelSet& channels,
                       const RVec& rate_weights, double power_budget, const ModeConfig& mode,
                       double lambda_reg, double rho, const WmmseOptions& options) {
  const StackLayout layout{channels.n_tx(), channels.k_users()};
  if (u.size() != layout.size()) throw DimensionError("v_update: u has the wrong length");
  if (d.size() != layout.precoder_size()) throw DimensionError("v_update: d has the wrong length");
  const CVec anchor = precoder_part(u, layout) - d;

  PrecoderSolution sol = unstack(u, layout);
  sol.apply_mode(mode);
  if (options.pin_radar) sol.p_radar().setZero();
  clip_common_split(sol, channels, mode);

  VUpdateResult res;
  double prev_wsr = wsr_unchecked(sol, channels, mode, rate_weights);
  for (int it = 1; it <= options.max_outer; ++it) {
    const EqualizerWeights eqw = mmse_step(sol, channels, mode);
    const VUpdateQcqp qp = assemble_vupdate_qcqp(eqw, channels, mode, lambda_reg, rho, anchor,
                                                 rate_weights, power_budget, options.pin_radar);
    qcqp::Options qo;
    qo.tol = options.qcqp_tol;
    qo.max_iter = options.qcqp_max_iter;
    // Pull the previous iterate slightly inside the power ball and halve the
    // split so the hint is usually strictly feasible.
    qo.hint_z = qp.reduce(sol) * (1.0 - 1e-6);
    if (qp.has_split) qo.hint_y = (0.5 * sol.common_split()).cwiseMax(1e-9).eval();
    else qo.hint_y = RVec();

    const qcqp::Solution qs = qcqp::solve(qp.problem, qo);
    res.iterations = it;
    if (qs.status == qcqp::Status::Infeasible) {
      ++res.qcqp_failures;
      break;
    }
    if (qs.status != qcqp::Status::Optimal) ++res.qcqp_failures;
    res.worst_kkt = std::max(res.worst_kkt, qs.kkt_residual);
    sol = qp.expand(qs.z, qs.y);
    if (qp.has_split) sol.common_split() = sol.common_split().cwiseMax(0.0);
    // Interior-point iterates may overshoot the power ball by the solver tolerance.
    const double power = sol.columns().squaredNorm();
    if (power > power_budget) sol.columns() *= std::sqrt(power_budget / power);

    const double w = wsr_unchecked(sol, channels, mode, rate_weights);
    res.wsr_trace.push_back(w);
    res.objective_trace.push_back(
        vupdate_objective(sol, channels, mode, lambda_reg, rho, anchor, rate_weights));
    if (std::abs(w - prev_wsr) <= options.tol) {
      res.converged = true;
      break;
    }
    prev_wsr = w;
  }
  res.v = stack(sol);
  return res;
}

}  // namespace dfrc

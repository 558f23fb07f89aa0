// SPDX-License-Identifier: Apache-2.0
#include "dfrc/metrics_comms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dfrc {

std::string ModeConfig::label() const {
  std::string out = multiple_access == MultipleAccess::Rsma ? "rsma" : "sdma";
  switch (radar_sequence) {
    case RadarSequence::Disabled:
      return out + "-no-rs";
    case RadarSequence::EnabledWithSic:
      return out + "-rs-sic";
    case RadarSequence::EnabledWithoutSic:
      return out + "-rs-nosic";
  }
  return out;
}

ModeConfig ModeConfig::parse(std::string_view label) {
  ModeConfig mode;
  std::string s(label);
  for (auto& ch : s) {
    if (ch == 'x' || ch == '_' || ch == ':') ch = '-';
  }
  auto take = [&](std::string_view prefix) {
    if (s.rfind(prefix, 0) == 0) {
      s.erase(0, prefix.size());
      return true;
    }
    return false;
  };
  if (take("rsma")) {
    mode.multiple_access = MultipleAccess::Rsma;
  } else if (take("sdma")) {
    mode.multiple_access = MultipleAccess::Sdma;
  } else {
    throw ConfigError("mode: expected rsma or sdma in '" + std::string(label) + "'");
  }
  if (s == "-no-rs") {
    mode.radar_sequence = RadarSequence::Disabled;
  } else if (s == "-rs-sic") {
    mode.radar_sequence = RadarSequence::EnabledWithSic;
  } else if (s == "-rs-nosic") {
    mode.radar_sequence = RadarSequence::EnabledWithoutSic;
  } else {
    throw ConfigError("mode: expected no-rs, rs-sic or rs-nosic in '" + std::string(label) + "'");
  }
  return mode;
}

PrecoderSolution::PrecoderSolution(Index n_tx, Index k_users)
    : p_(CMat::Zero(n_tx, k_users + 2)), c_(RVec::Zero(k_users)) {}

PrecoderSolution::PrecoderSolution(CMat columns, RVec common_split)
    : p_(std::move(columns)), c_(std::move(common_split)) {
  if (p_.cols() < 2 || c_.size() != p_.cols() - 2)
    throw DimensionError("precoder: need K+2 columns and K split entries");
}

void PrecoderSolution::apply_mode(const ModeConfig& mode) {
  if (!mode.common_active()) {
    p_common().setZero();
    c_.setZero();
  }
  if (!mode.radar_active()) p_radar().setZero();
}

RVec PrecoderSolution::antenna_powers() const { return p_.rowwise().squaredNorm(); }

namespace {

void check_user(const PrecoderSolution& sol, const ChannelSet& channels, Index user) {
  if (channels.n_tx() != sol.n_tx() || channels.k_users() != sol.k_users())
    throw DimensionError("metrics: channel / precoder dimension mismatch");
  if (user < 0 || user >= channels.k_users()) throw DimensionError("metrics: user index out of range");
}

// |h_k^H p_j|^2 for every column j of P.
RVec received_powers(const PrecoderSolution& sol, const ChannelSet& channels, Index user) {
  return (channels.h.col(user).adjoint() * sol.columns()).cwiseAbs2().transpose();
}

}  // namespace

double sinr_common(const PrecoderSolution& sol, const ChannelSet& channels, Index user,
                   const ModeConfig& mode) {
  check_user(sol, channels, user);
  const RVec g = received_powers(sol, channels, user);
  const Index k = sol.k_users();
  const double denom = g.segment(1, k).sum() + mode.delta_c() * g(k + 1) + channels.noise_power;
  return g(0) / denom;
}

double sinr_private(const PrecoderSolution& sol, const ChannelSet& channels, Index user,
                    const ModeConfig& mode) {
  check_user(sol, channels, user);
  const RVec g = received_powers(sol, channels, user);
  const Index k = sol.k_users();
  const double own = g(1 + user);
  const double denom = g.segment(1, k).sum() - own + mode.delta_c() * g(k + 1) + channels.noise_power;
  return own / denom;
}

double common_rate_at(const PrecoderSolution& sol, const ChannelSet& channels, Index user,
                      const ModeConfig& mode) {
  return std::log2(1.0 + sinr_common(sol, channels, user, mode));
}

double private_rate(const PrecoderSolution& sol, const ChannelSet& channels, Index user,
                    const ModeConfig& mode) {
  return std::log2(1.0 + sinr_private(sol, channels, user, mode));
}

double achievable_common_rate(const PrecoderSolution& sol, const ChannelSet& channels,
                              const ModeConfig& mode) {
  if (channels.k_users() < 1) throw DimensionError("metrics: need at least one user");
  double rc = std::numeric_limits<double>::infinity();
  for (Index k = 0; k < channels.k_users(); ++k) rc = std::min(rc, common_rate_at(sol, channels, k, mode));
  return rc;
}

double wsr_unchecked(const PrecoderSolution& sol, const ChannelSet& channels,
                     const ModeConfig& mode, const RVec& rate_weights) {
  if (rate_weights.size() != channels.k_users()) throw DimensionError("wsr: one weight per user");
  double total = 0.0;
  const bool rsma = mode.common_active();
  for (Index k = 0; k < channels.k_users(); ++k) {
    const double ck = rsma ? sol.common_split()(k) : 0.0;
    total += rate_weights(k) * (ck + private_rate(sol, channels, k, mode));
  }
  return total;
}

double wsr(const PrecoderSolution& sol, const ChannelSet& channels, const ModeConfig& mode,
           const RVec& rate_weights) {
  if (mode.common_active()) {
    const double split = sol.common_split().sum();
    const double rc = achievable_common_rate(sol, channels, mode);
    if (split > rc + kCommonRateTolerance) {
      throw FeasibilityError("wsr: common-rate split exceeds the achievable common rate", split - rc);
    }
    if (sol.common_split().size() > 0 && sol.common_split().minCoeff() < 0.0)
      throw FeasibilityError("wsr: negative common-rate split entry", -sol.common_split().minCoeff());
  }
  return wsr_unchecked(sol, channels, mode, rate_weights);
}

void clip_common_split(PrecoderSolution& sol, const ChannelSet& channels, const ModeConfig& mode) {
  RVec& c = sol.common_split();
  if (!mode.common_active()) {
    c.setZero();
    return;
  }
  c = c.cwiseMax(0.0);
  const double total = c.sum();
  const double rc = achievable_common_rate(sol, channels, mode);
  if (total > rc && total > 0.0) c *= rc / total;
}

double ipr(const PrecoderSolution& sol, const ChannelSet& channels) {
  return (channels.h.adjoint() * sol.p_radar()).cwiseAbs().sum();
}

}  // namespace dfrc

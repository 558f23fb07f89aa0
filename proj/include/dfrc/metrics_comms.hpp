// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>

#include "dfrc/scenario.hpp"
#include "dfrc/types.hpp"

namespace dfrc {

enum class MultipleAccess { Rsma, Sdma };
enum class RadarSequence { Disabled, EnabledWithSic, EnabledWithoutSic };

/// Multiple-access scheme plus radar-sequence handling. Determines which
/// precoder columns are pinned to zero and whether the radar stream is seen as
/// interference by the users.
struct ModeConfig {
  MultipleAccess multiple_access = MultipleAccess::Rsma;
  RadarSequence radar_sequence = RadarSequence::Disabled;

  bool common_active() const { return multiple_access == MultipleAccess::Rsma; }
  bool radar_active() const { return radar_sequence != RadarSequence::Disabled; }
  double delta_c() const { return radar_sequence == RadarSequence::EnabledWithoutSic ? 1.0 : 0.0; }

  /// "rsma-no-rs", "sdma-rs-sic", ...
  std::string label() const;
  static ModeConfig parse(std::string_view label);

  friend bool operator==(const ModeConfig&, const ModeConfig&) = default;
};

/// Precoder matrix P = [p_c, p_1, ..., p_K, p_r] (N_t x (K+2)) together with
/// the common-rate split c.
class PrecoderSolution {
 public:
  PrecoderSolution() = default;
  PrecoderSolution(Index n_tx, Index k_users);
  PrecoderSolution(CMat columns, RVec common_split);

  Index n_tx() const { return p_.rows(); }
  Index k_users() const { return p_.cols() - 2; }

  auto p_common() { return p_.col(0); }
  auto p_common() const { return p_.col(0); }
  auto p_private(Index k) { return p_.col(1 + k); }
  auto p_private(Index k) const { return p_.col(1 + k); }
  auto p_private_block() const { return p_.middleCols(1, k_users()); }
  auto p_radar() { return p_.col(p_.cols() - 1); }
  auto p_radar() const { return p_.col(p_.cols() - 1); }

  const CMat& columns() const { return p_; }
  CMat& columns() { return p_; }
  const RVec& common_split() const { return c_; }
  RVec& common_split() { return c_; }

  /// Zero the columns and split entries the mode pins.
  void apply_mode(const ModeConfig& mode);

  /// Row powers diag(P P^H).
  RVec antenna_powers() const;

 private:
  CMat p_;
  RVec c_;
};

inline constexpr double kCommonRateTolerance = 1e-9;

double sinr_common(const PrecoderSolution& sol, const ChannelSet& channels, Index user,
                   const ModeConfig& mode);
double sinr_private(const PrecoderSolution& sol, const ChannelSet& channels, Index user,
                    const ModeConfig& mode);

/// log2(1 + sinr) for the common stream at one user.
double common_rate_at(const PrecoderSolution& sol, const ChannelSet& channels, Index user,
                      const ModeConfig& mode);
double private_rate(const PrecoderSolution& sol, const ChannelSet& channels, Index user,
                    const ModeConfig& mode);

/// min over users of the common-stream rate.
double achievable_common_rate(const PrecoderSolution& sol, const ChannelSet& channels,
                              const ModeConfig& mode);

/// Weighted sum rate. Throws FeasibilityError when the split exceeds R_c.
double wsr(const PrecoderSolution& sol, const ChannelSet& channels, const ModeConfig& mode,
           const RVec& rate_weights);

/// Same sum without the feasibility audit; used for convergence tracking.
double wsr_unchecked(const PrecoderSolution& sol, const ChannelSet& channels,
                     const ModeConfig& mode, const RVec& rate_weights);

/// Scales the split down uniformly so that sum(c) <= R_c. Negative entries are
/// clipped to zero first.
void clip_common_split(PrecoderSolution& sol, const ChannelSet& channels, const ModeConfig& mode);

/// Total radar-sequence leakage sum_k |h_k^H p_r|.
double ipr(const PrecoderSolution& sol, const ChannelSet& channels);

}  // namespace dfrc

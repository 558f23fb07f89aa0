// SPDX-License-Identifier: Apache-2.0
//
// Stacked ADMM variable layout: v = [c; vec(P)] with P = [p_c, p_1..p_K, p_r].
// Entries 0..K-1 hold the (real) common-rate split, then the N_t-long columns
// follow in order. The selection matrices of the formulation are index ranges
// here.
#pragma once

#include <vector>

#include "dfrc/metrics_comms.hpp"

namespace dfrc {

struct StackLayout {
  Index n_tx = 0;
  Index k_users = 0;

  Index n_columns() const { return k_users + 2; }
  Index precoder_size() const { return n_columns() * n_tx; }
  Index size() const { return k_users + precoder_size(); }

  /// Offset of precoder column `col` inside the precoder part.
  Index column_offset(Index col) const { return col * n_tx; }
  Index common_column() const { return 0; }
  Index private_column(Index k) const { return 1 + k; }
  Index radar_column() const { return k_users + 1; }
};

/// Columns the optimiser may move; pinned columns stay exactly zero.
std::vector<bool> active_columns(const ModeConfig& mode, Index k_users, bool pin_radar = false);

CVec stack(const PrecoderSolution& sol);
PrecoderSolution unstack(const CVec& stacked, const StackLayout& layout);

/// vec(P) view of a stacked vector (the D_p selection).
inline auto precoder_part(const CVec& stacked, const StackLayout& layout) {
  return stacked.tail(layout.precoder_size());
}
inline auto precoder_part(CVec& stacked, const StackLayout& layout) {
  return stacked.tail(layout.precoder_size());
}

/// Real common-rate split stored in the first K entries.
RVec split_part(const CVec& stacked, const StackLayout& layout);

}  // namespace dfrc

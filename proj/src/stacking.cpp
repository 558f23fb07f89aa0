// SPDX-License-Identifier: Apache-2.0
#include "dfrc/stacking.hpp"

namespace dfrc {

std::vector<bool> active_columns(const ModeConfig& mode, Index k_users, bool pin_radar) {
  std::vector<bool> active(static_cast<std::size_t>(k_users + 2), true);
  active.front() = mode.common_active();
  active.back() = mode.radar_active() && !pin_radar;
  return active;
}

CVec stack(const PrecoderSolution& sol) {
  const StackLayout layout{sol.n_tx(), sol.k_users()};
  CVec v(layout.size());
  v.head(layout.k_users) = sol.common_split().cast<Complex>();
  precoder_part(v, layout) = Eigen::Map<const CVec>(sol.columns().data(), layout.precoder_size());
  return v;
}

PrecoderSolution unstack(const CVec& stacked, const StackLayout& layout) {
  if (stacked.size() != layout.size()) throw DimensionError("unstack: stacked vector has the wrong length");
  CMat cols = Eigen::Map<const CMat>(stacked.tail(layout.precoder_size()).eval().data(), layout.n_tx,
                                     layout.n_columns());
  return PrecoderSolution(std::move(cols), split_part(stacked, layout));
}

RVec split_part(const CVec& stacked, const StackLayout& layout) {
  return stacked.head(layout.k_users).real();
}

}  // namespace dfrc

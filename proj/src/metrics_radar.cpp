// SPDX-License-Identifier: Apache-2.0
#include "dfrc/metrics_radar.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dfrc {

RVec beampattern_of(const CMat& columns, const CMat& steering) {
  if (columns.cols() == 0) return RVec::Zero(steering.cols());
  if (columns.rows() != steering.rows()) throw DimensionError("beampattern: N_t mismatch");
  // a^H P P^H a = || P^H a ||^2, evaluated for every grid angle at once.
  return (steering.adjoint() * columns).rowwise().squaredNorm();
}

BeampatternTrace beampattern(const PrecoderSolution& sol, const CMat& steering) {
  BeampatternTrace t;
  t.common = beampattern_of(sol.p_common(), steering);
  t.private_sum = beampattern_of(sol.p_private_block(), steering);
  t.radar = beampattern_of(sol.p_radar(), steering);
  t.total = t.common + t.private_sum + t.radar;
  return t;
}

BeampatternTrace beampattern(const PrecoderSolution& sol, const Scenario& scenario) {
  return beampattern(sol, steering_matrix(scenario.grid, scenario.geometry));
}

double pattern_mse(const RVec& achieved, const RVec& desired) {
  if (achieved.size() != desired.size()) throw DimensionError("mse: pattern sizes differ");
  return (desired - achieved).squaredNorm();
}

double beampattern_mse(const PrecoderSolution& sol, const Scenario& scenario) {
  if (scenario.desired.levels.size() != scenario.grid.size())
    throw DimensionError("mse: desired beampattern missing");
  const CMat steering = steering_matrix(scenario.grid, scenario.geometry);
  return pattern_mse(beampattern_of(sol.columns(), steering), scenario.desired.levels);
}

double beampattern_rmse(const PrecoderSolution& sol, const Scenario& scenario) {
  return std::sqrt(beampattern_mse(sol, scenario));
}

double ibr(const PrecoderSolution& sol, const ChannelSet& channels, double theta_deg,
           const ArrayGeometry& geometry) {
  const CVec a = steering_vector(theta_deg, geometry);
  const Index k_users = sol.k_users();
  double leak = 0.0;
  double pattern = 0.0;
  for (Index k = 0; k < k_users; ++k) {
    const auto pk = sol.p_private(k);
    for (Index j = 0; j < k_users; ++j) {
      if (j != k) leak += std::norm(channels.h.col(j).dot(pk));
    }
    pattern += std::norm(a.dot(pk));
  }
  if (pattern < kIbrDenominatorFloor)
    throw UndefinedIbrError("ibr: private-stream beampattern vanishes at this angle");
  return leak / pattern;
}

double lb_ibr(const ChannelSet& channels, double theta_deg, const ArrayGeometry& geometry) {
  const CVec a = steering_vector(theta_deg, geometry);
  const RVec gains = (channels.h.adjoint() * a).cwiseAbs2();
  const double total = gains.sum();
  double best = std::numeric_limits<double>::infinity();
  for (Index k = 0; k < gains.size(); ++k) best = std::min(best, total - gains(k));
  const double nt = static_cast<double>(geometry.n_tx);
  return std::max(0.0, best) / (nt * nt);
}

RVec lb_ibr_on_grid(const ChannelSet& channels, const AngleGrid& grid,
                    const ArrayGeometry& geometry) {
  RVec out(grid.size());
  for (Index m = 0; m < grid.size(); ++m)
    out(m) = lb_ibr(channels, grid.degrees[static_cast<std::size_t>(m)], geometry);
  return out;
}

}  // namespace dfrc

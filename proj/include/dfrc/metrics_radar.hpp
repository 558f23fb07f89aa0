// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "dfrc/metrics_comms.hpp"
#include "dfrc/scenario.hpp"

namespace dfrc {

/// Transmit beampattern a^H P P^H a on the grid, split by column group.
struct BeampatternTrace {
  RVec total;
  RVec common;
  RVec private_sum;
  RVec radar;
};

BeampatternTrace beampattern(const PrecoderSolution& sol, const CMat& steering);
BeampatternTrace beampattern(const PrecoderSolution& sol, const Scenario& scenario);

/// Pattern of an arbitrary column set, e.g. a radar-only design.
RVec beampattern_of(const CMat& columns, const CMat& steering);

/// sum_m |P_d(theta_m) - a^H P P^H a|^2
double beampattern_mse(const PrecoderSolution& sol, const Scenario& scenario);
double beampattern_rmse(const PrecoderSolution& sol, const Scenario& scenario);
double pattern_mse(const RVec& achieved, const RVec& desired);

inline constexpr double kIbrDenominatorFloor = 1e-12;

/// Interference-to-beampattern ratio of the private streams at theta.
double ibr(const PrecoderSolution& sol, const ChannelSet& channels, double theta_deg,
           const ArrayGeometry& geometry);

/// Precoder-free closed form (1/N_t^2) min_k sum_{j != k} |a^H h_j|^2.
double lb_ibr(const ChannelSet& channels, double theta_deg, const ArrayGeometry& geometry);

RVec lb_ibr_on_grid(const ChannelSet& channels, const AngleGrid& grid,
                    const ArrayGeometry& geometry);

}  // namespace dfrc

// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <random>

#include "dfrc/metrics_comms.hpp"
#include "dfrc/scenario.hpp"

namespace dfrc::test {

inline CMat random_cmat(Index rows, Index cols, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> n(0.0, std::sqrt(0.5) * scale);
  CMat m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = Complex(n(rng), n(rng));
  return m;
}

inline CVec random_cvec(Index n, std::mt19937_64& rng, double scale = 1.0) {
  return random_cmat(n, 1, rng, scale).col(0);
}

inline ChannelSet random_channels(Index n_tx, Index k_users, std::mt19937_64& rng) {
  ChannelSet c;
  c.h = random_cmat(n_tx, k_users, rng);
  return c;
}

inline PrecoderSolution random_solution(Index n_tx, Index k_users, std::mt19937_64& rng,
                                        double scale = 1.0) {
  std::uniform_real_distribution<double> u(0.0, 0.3);
  RVec c(k_users);
  for (Index k = 0; k < k_users; ++k) c(k) = u(rng);
  return PrecoderSolution(random_cmat(n_tx, k_users + 2, rng, scale), c);
}

/// Rows rescaled to power P_t / N_t.
inline CMat per_antenna_feasible(CMat p, double power_budget) {
  const double row = std::sqrt(power_budget / static_cast<double>(p.rows()));
  for (Index i = 0; i < p.rows(); ++i) p.row(i) *= row / p.row(i).norm();
  return p;
}

inline ModeConfig mode_at(int i) {
  static const ModeConfig modes[] = {
      {MultipleAccess::Rsma, RadarSequence::Disabled},
      {MultipleAccess::Rsma, RadarSequence::EnabledWithSic},
      {MultipleAccess::Rsma, RadarSequence::EnabledWithoutSic},
      {MultipleAccess::Sdma, RadarSequence::Disabled},
      {MultipleAccess::Sdma, RadarSequence::EnabledWithSic},
      {MultipleAccess::Sdma, RadarSequence::EnabledWithoutSic},
  };
  return modes[i % 6];
}

/// Small scenario with the desired pattern supplied directly.
inline Scenario small_scenario(Index n_tx, Index k_users, std::uint64_t seed, double power = 10.0) {
  Scenario s;
  s.geometry = ArrayGeometry{static_cast<int>(n_tx), 0.5};
  s.grid = AngleGrid::uniform(-90.0, 90.0, 5.0);
  s.channels = generate_channels(static_cast<int>(k_users), s.geometry, seed);
  s.power_budget = power;
  s.rate_weights = RVec::Ones(k_users);
  s.desired.levels = power * rectangular_template({{-20.0, 20.0}}, s.grid);
  s.desired.converged = true;
  return s;
}

}  // namespace dfrc::test

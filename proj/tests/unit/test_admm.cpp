// SPDX-License-Identifier: Apache-2.0
#include <cmath>

#include "doctest.h"
#include "dfrc/admm.hpp"
#include "dfrc/metrics_radar.hpp"
#include "dfrc/mm.hpp"
#include "support.hpp"

using namespace dfrc;

TEST_CASE("initial state") {
  const Scenario s = test::small_scenario(4, 3, 2);
  const ModeConfig mode{MultipleAccess::Rsma, RadarSequence::EnabledWithSic};
  const AdmmState st = initial_state(s, mode, {});
  const StackLayout l{4, 3};
  const PrecoderSolution v = unstack(st.v, l);
  CHECK(v.common_split().isApproxToConstant(1.0));
  CHECK(v.columns().squaredNorm() == doctest::Approx(s.power_budget).epsilon(1e-12));
  for (Index k = 0; k < 3; ++k) {
    const double align = std::abs(s.channels.h.col(k).dot(v.p_private(k))) /
                         (s.channels.h.col(k).norm() * v.p_private(k).norm());
    CHECK(align == doctest::Approx(1.0).epsilon(1e-12));
  }
  const RVec rows = unstack(st.u, l).antenna_powers();
  for (Index i = 0; i < 4; ++i) CHECK(std::abs(rows(i) - s.power_budget / 4) <= 1e-12);

  const AdmmState again = initial_state(s, mode, {});
  CHECK(again.v == st.v);
  CHECK(again.d == st.d);
}

TEST_CASE("solve report invariants") {
  const Scenario s = test::small_scenario(4, 2, 5);
  const ModeConfig mode{MultipleAccess::Rsma, RadarSequence::EnabledWithSic};
  AdmmConfig cfg;
  cfg.max_iter = 100;
  const SolveReport r = run_admm(s, mode, 1e-3, cfg);
  CHECK(r.converged);
  CHECK(r.qcqp_failures == 0);
  CHECK(r.iterations == static_cast<int>(r.residual_trace.size()));
  CHECK(r.objective_trace.size() == r.residual_trace.size());
  const double eps0 = cfg.eps0_for(s.power_budget);
  CHECK(r.residual_trace.back().first <= eps0);
  CHECK(r.residual_trace.back().second <= eps0);

  const RVec rows = r.solution.antenna_powers();
  for (Index i = 0; i < 4; ++i) CHECK(std::abs(rows(i) - s.power_budget / 4) <= 1e-12);
  const double recomputed = wsr(r.solution, s.channels, mode, s.rate_weights);
  CHECK(std::abs(recomputed - r.wsr) <= 1e-6);
  CHECK(r.rmse == doctest::Approx(beampattern_rmse(r.solution, s)).epsilon(1e-12));
  const double obj = (1 - 1e-3) * r.wsr - 1e-3 * r.mse;
  CHECK(std::abs(r.objective_trace.back() - obj) <= 1e-9 * std::max(1.0, std::abs(obj)));
}

TEST_CASE("pure radar weight matches a direct radar-only run") {
  const Scenario s = test::small_scenario(4, 2, 7);
  const ModeConfig mode{MultipleAccess::Rsma, RadarSequence::EnabledWithSic};
  AdmmConfig cfg;
  cfg.eps0 = 1e-7;
  cfg.max_iter = 2000;
  const SolveReport r = run_admm(s, mode, 1.0, cfg);
  CHECK(r.converged);

  const Index n = s.n_tx();
  const Index cols = s.k_users() + 2;
  const MmWorkState st = make_mm_state(steering_matrix(s.grid, s.geometry), s.desired.levels, cols,
                                       std::vector<bool>(static_cast<std::size_t>(cols), true), 1.0, 0.0,
                                       CVec::Zero(n * cols), s.power_budget);
  CVec start = CVec::Zero(n * cols);
  for (Index i = 0; i < std::min(n, cols); ++i) start(i * n + i) = 1.0;
  MmOptions opts;
  opts.tol = 1e-12;
  opts.max_iter = 200000;
  const MmResult direct = mm_minimize(st, start, opts);
  const double direct_rmse = std::sqrt(pattern_mse(pattern_values(direct.p, st), s.desired.levels));
  MESSAGE("admm " << r.rmse << " direct " << direct_rmse);
  CHECK(std::abs(r.rmse - direct_rmse) <= 1e-6 * std::max(1.0, direct_rmse));
}

TEST_CASE("a pinned radar column makes SIC and no radar sequence identical") {
  const Scenario s = test::small_scenario(4, 2, 9);
  AdmmConfig cfg;
  cfg.pin_radar = true;
  cfg.max_iter = 20;
  const SolveReport a = run_admm(s, {MultipleAccess::Rsma, RadarSequence::EnabledWithSic}, 1e-3, cfg);
  const SolveReport b = run_admm(s, {MultipleAccess::Rsma, RadarSequence::Disabled}, 1e-3, cfg);
  CHECK(a.objective_trace == b.objective_trace);
  CHECK(a.solution.columns() == b.solution.columns());
}

TEST_CASE("invalid inputs are rejected") {
  const Scenario s = test::small_scenario(3, 2, 1);
  CHECK_THROWS_AS(run_admm(s, {}, 1.5), ConfigError);
  AdmmConfig cfg;
  cfg.rho = -1.0;
  CHECK_THROWS_AS(run_admm(s, {}, 0.5, cfg), ConfigError);
}

// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <fstream>

#include <Eigen/Eigenvalues>

#include "doctest.h"
#include "json.hpp"
#include "dfrc/metrics_radar.hpp"
#include "dfrc/mm.hpp"
#include "support.hpp"

using namespace dfrc;

namespace {

MmWorkState random_state(std::mt19937_64& rng, Index n_tx, Index n_columns, double lambda, double rho,
                         double power) {
  const AngleGrid grid = AngleGrid::uniform(-90, 90, 6);
  const CMat a = steering_matrix(grid, {static_cast<int>(n_tx), 0.5});
  std::uniform_real_distribution<double> u(0.0, power);
  RVec desired(grid.size());
  for (Index m = 0; m < desired.size(); ++m) desired(m) = u(rng);
  return make_mm_state(a, desired, n_columns, std::vector<bool>(static_cast<std::size_t>(n_columns), true),
                       lambda, rho, test::random_cvec(n_tx * n_columns, rng), power);
}

CVec random_feasible(std::mt19937_64& rng, Index n_tx, Index n_columns, double power) {
  const CMat p = test::per_antenna_feasible(test::random_cmat(n_tx, n_columns, rng), power);
  return Eigen::Map<const CVec>(p.data(), p.size());
}

double objective_by_terms(const CVec& p, const MmWorkState& s) {
  double f = 0.0;
  for (Index m = 0; m < s.n_angles(); ++m) {
    const double q = (p.adjoint() * s.z_matrix(m) * p)(0).real();
    f += s.lambda_reg * (s.desired(m) - q) * (s.desired(m) - q);
  }
  return f - s.rho * p.dot(s.anchor).real();
}

nlohmann::json sdp_oracle() {
  std::ifstream in(DFRC_ORACLE_DIR "/sdp_beampattern.json");
  REQUIRE(in.good());
  return nlohmann::json::parse(in);
}

}  // namespace

TEST_CASE("largest algebraic eigenvalue") {
  CHECK(largest_eigenvalue(CMat::Identity(5, 5)) == doctest::Approx(1.0).epsilon(1e-12));
  CMat d = CMat::Zero(2, 2);
  d(0, 0) = 3.0;
  d(1, 1) = -5.0;
  CHECK(largest_eigenvalue(d) == doctest::Approx(3.0).epsilon(1e-10));

  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 10; ++trial) {
    const CMat g = test::random_cmat(20, 20, rng);
    const CMat h = 0.5 * (g + g.adjoint());
    const double expect = Eigen::SelfAdjointEigenSolver<CMat>(h).eigenvalues().maxCoeff();
    CHECK(std::abs(largest_eigenvalue(h) - expect) <= 1e-8 * std::abs(expect));
  }
}

TEST_CASE("objective values") {
  std::mt19937_64 rng(2);
  MmWorkState s = random_state(rng, 3, 2, 0.7, 0.0, 4.0);
  CHECK(surrogate_objective(CVec::Zero(6), s) == doctest::Approx(0.7 * s.desired.squaredNorm()));

  const CVec p = test::random_cvec(6, rng);
  MmWorkState lin = random_state(rng, 3, 2, 0.0, 1.3, 4.0);
  CHECK(surrogate_objective(p, lin) == doctest::Approx(-1.3 * p.dot(lin.anchor).real()));

  MmWorkState both = random_state(rng, 3, 2, 0.4, 0.9, 4.0);
  CHECK(std::abs(surrogate_objective(p, both) - objective_by_terms(p, both)) <=
        1e-10 * std::max(1.0, std::abs(objective_by_terms(p, both))));
}

TEST_CASE("rank-one eigenvalue of the quartic term") {
  std::mt19937_64 rng(3);
  const MmWorkState s = random_state(rng, 3, 2, 1.0, 0.0, 4.0);
  for (Index m = 0; m < s.n_angles(); m += 7) {
    const CMat z = s.z_matrix(m);
    const CVec vz = Eigen::Map<const CVec>(z.data(), z.size());
    const CMat q = vz * vz.adjoint();
    CHECK(std::abs(largest_eigenvalue(q) - s.zm_fro_sq(m)) <= 1e-8 * s.zm_fro_sq(m));
    CHECK(z.squaredNorm() == doctest::Approx(s.zm_fro_sq(m)).epsilon(1e-12));
  }
}

TEST_CASE("majorizers touch at the expansion point and dominate") {
  std::mt19937_64 rng(4);
  for (int inst = 0; inst < 5; ++inst) {
    const double power = 4.0;
    const MmWorkState s = random_state(rng, 3, 3, 0.5 + 0.2 * inst, 0.3 * inst, power);
    const CVec pk = random_feasible(rng, 3, 3, power);
    const Majorizer maj = majorize(pk, s);
    const double f = surrogate_objective(pk, s);
    const double scale = std::max(1.0, std::abs(f));
    CHECK(std::abs(maj.first_stage(pk, s) - f) <= 1e-8 * scale);
    CHECK(std::abs(maj.second_stage(pk) - f) <= 1e-8 * scale);

    int violations = 0;
    for (int i = 0; i < 1000; ++i) {
      const CVec p = random_feasible(rng, 3, 3, power);
      const double fu = surrogate_objective(p, s);
      const double f1 = maj.first_stage(p, s);
      const double f2 = maj.second_stage(p);
      const double tol = 1e-9 * std::max(1.0, std::abs(f2));
      if (fu > f1 + tol || f1 > f2 + tol) ++violations;
    }
    CHECK(violations == 0);
  }
}

TEST_CASE("degenerate weights give a zero coefficient") {
  std::mt19937_64 rng(5);
  const MmWorkState s = random_state(rng, 3, 2, 0.0, 0.0, 4.0);
  CHECK(majorize(random_feasible(rng, 3, 2, 4.0), s).k_hat.norm() == 0.0);
}

TEST_CASE("per-antenna minimizer") {
  std::mt19937_64 rng(6);
  const std::vector<bool> all(4, true);
  const CVec k = test::random_cvec(20, rng);
  const CVec p = per_antenna_minimizer(k, 5, 4, all, 7.0);
  const CMat pm = Eigen::Map<const CMat>(p.data(), 5, 4);
  for (Index i = 0; i < 5; ++i) CHECK(std::abs(pm.row(i).squaredNorm() - 7.0 / 5.0) <= 1e-12);

  CVec single = CVec::Zero(4);
  single(2) = Complex(0.0, -3.0);  // row 0, column 1 of a 2 x 2 design
  const CVec q = per_antenna_minimizer(single, 2, 2, std::vector<bool>(2, true), 2.0);
  CHECK(std::abs(q(2) - Complex(0.0, -1.0)) < 1e-15);
  CHECK(q(0) == Complex(0.0, 0.0));
  CHECK(std::abs(std::abs(q(1)) - 1.0) < 1e-15);  // vanishing row gets the first column
  CHECK(q(1) == Complex(1.0, 0.0));
}

TEST_CASE("per-antenna minimizer against a phase-grid search") {
  std::mt19937_64 rng(7);
  const Index n = 2;
  const double power = 2.0;
  const CVec k = test::random_cvec(4, rng);
  const CVec p = per_antenna_minimizer(k, n, 2, std::vector<bool>(2, true), power);
  const double got = p.dot(k).real();

  const double amp = std::sqrt(power / n);
  double best = 0.0;
  const double step = 0.02;
  for (Index row = 0; row < n; ++row) {
    double row_best = -1e300;
    for (double phi = 0.0; phi <= kPi / 2; phi += step)
      for (double a = 0.0; a < 2 * kPi; a += step)
        for (double b = 0.0; b < 2 * kPi; b += step) {
          const Complex x = amp * std::cos(phi) * std::polar(1.0, a);
          const Complex y = amp * std::sin(phi) * std::polar(1.0, b);
          row_best = std::max(row_best, (std::conj(x) * k(row) + std::conj(y) * k(n + row)).real());
        }
    best += row_best;
  }
  CHECK(got >= best);
  CHECK(got - best <= 1e-3 * std::max(1.0, std::abs(got)));
}

TEST_CASE("u-update with no pattern weight is one projection step") {
  const Scenario s = test::small_scenario(4, 2, 3);
  const ModeConfig mode{MultipleAccess::Rsma, RadarSequence::EnabledWithSic};
  const StackLayout l{4, 2};
  std::mt19937_64 rng(8);
  const CVec v = stack(test::random_solution(4, 2, rng));
  const CVec d = test::random_cvec(l.precoder_size(), rng);
  const UUpdateResult r = u_update(v, d, s, mode, 0.0, 1.0);
  const CVec expect = per_antenna_minimizer(precoder_part(v, l) + d, 4, 4, active_columns(mode, 2), s.power_budget);
  CHECK((precoder_part(r.u, l) - expect).norm() < 1e-12);
  CHECK(r.iterations <= 2);
  CHECK(split_part(r.u, l) == split_part(v, l));
}

TEST_CASE("u-update descends and keeps every antenna at P_t / N_t") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    std::mt19937_64 rng(seed);
    const Scenario s = test::small_scenario(4, 2, seed);
    const ModeConfig mode = test::mode_at(static_cast<int>(seed));
    const StackLayout l{4, 2};
    const CVec v = stack(test::random_solution(4, 2, rng));
    const CVec d = test::random_cvec(l.precoder_size(), rng, 0.3);
    MmOptions opts;
    opts.record_trace = true;
    opts.max_iter = 300;
    const UUpdateResult r = u_update(v, d, s, mode, 1e-2, 1.0, opts);
    for (std::size_t i = 1; i < r.objective_trace.size(); ++i)
      CHECK(r.objective_trace[i] <= r.objective_trace[i - 1] + 1e-9 * std::max(1.0, std::abs(r.objective_trace[i - 1])));
    const PrecoderSolution u = unstack(r.u, l);
    const RVec rows = u.antenna_powers();
    for (Index i = 0; i < 4; ++i) CHECK(std::abs(rows(i) - s.power_budget / 4) <= 1e-12);
    if (!mode.common_active()) CHECK(u.p_common().norm() == 0.0);
    if (!mode.radar_active()) CHECK(u.p_radar().norm() == 0.0);
  }
}

TEST_CASE("radar-only matching approaches the semidefinite optimum") {
  const nlohmann::json oracle = sdp_oracle();
  const Index n = oracle.at("n_tx").get<Index>();
  const double power = oracle.at("power_budget").get<double>();
  const AngleGrid grid = AngleGrid::uniform(-90, 90, 1);
  const ArrayGeometry g{static_cast<int>(n), 0.5};
  const auto targets = oracle.at("targets").get<std::vector<AngularInterval>>();
  const RVec desired = oracle.at("alpha").get<double>() * rectangular_template(targets, grid);
  const MmWorkState s = make_mm_state(steering_matrix(grid, g), desired, n, std::vector<bool>(n, true), 1.0,
                                      0.0, CVec::Zero(n * n), power);
  CVec start = CVec::Zero(n * n);
  for (Index i = 0; i < n; ++i) start(i * n + i) = 1.0;
  const MmResult r = mm_minimize(s, start, MmOptions{});
  const double rmse = std::sqrt(pattern_mse(pattern_values(r.p, s), desired));
  const double sdp = oracle.at("rmse_fixed_template").get<double>();
  MESSAGE("mm rmse " << rmse << " vs semidefinite " << sdp << " after " << r.iterations << " steps");
  CHECK(rmse >= sdp * (1 - 1e-6));
  CHECK(rmse <= 1.05 * sdp);
}

// SPDX-License-Identifier: Apache-2.0
#include <cmath>

#include "doctest.h"
#include "dfrc/scenario.hpp"

using namespace dfrc;

TEST_CASE("steering vector values") {
  const CVec a0 = steering_vector(0.0, {4, 0.5});
  for (Index i = 0; i < 4; ++i) CHECK(std::abs(a0(i) - Complex(1, 0)) < 1e-15);

  const CVec a90 = steering_vector(90.0, {2, 0.5});
  CHECK(std::abs(a90(1) - Complex(-1, 0)) < 1e-12);

  const CVec a30 = steering_vector(30.0, {2, 0.5});
  CHECK(std::abs(a30(1) - Complex(0, 1)) < 1e-12);
}

TEST_CASE("steering vector symmetry and modulus") {
  const ArrayGeometry g{7, 0.37};
  for (double th = -90.0; th <= 90.0; th += 7.5) {
    const CVec a = steering_vector(th, g);
    const CVec b = steering_vector(-th, g);
    for (Index i = 0; i < 7; ++i) {
      CHECK(std::abs(std::abs(a(i)) - 1.0) < 1e-14);
      CHECK(std::abs(b(i) - std::conj(a(i))) < 1e-14);
    }
  }
}

TEST_CASE("grid and geometry validation") {
  const AngleGrid g = AngleGrid::uniform(-90, 90, 1);
  CHECK(g.size() == 181);
  CHECK(g.degrees.front() == -90.0);
  CHECK(g.degrees.back() == 90.0);
  CHECK_THROWS_AS(AngleGrid::uniform(-95, 90, 1), ConfigError);
  CHECK_THROWS_AS((ArrayGeometry{0, 0.5}.validate()), ConfigError);
}

TEST_CASE("channel generation") {
  const ArrayGeometry g{8, 0.5};
  const ChannelSet a = generate_channels(4, g, 7);
  const ChannelSet b = generate_channels(4, g, 7);
  CHECK(a.h.rows() == 8);
  CHECK(a.h.cols() == 4);
  CHECK(a.h == b.h);
  CHECK(generate_channels(4, g, 8).h != a.h);

  const ChannelSet big = generate_channels(12500, g, 3);  // 1e5 entries
  const double mean = big.h.cwiseAbs2().mean();
  CHECK(std::abs(mean - 1.0) < 0.02);
}

TEST_CASE("rectangular template") {
  const AngleGrid g = AngleGrid::uniform(-10, 10, 1);
  const RVec t = rectangular_template({{-2, 2}, {5, 6}}, g);
  CHECK(t.sum() == doctest::Approx(7.0));
  CHECK(t(10) == 1.0);
  CHECK(t(0) == 0.0);
}

TEST_CASE("power conversion") {
  CHECK(dbm_to_linear(20) == doctest::Approx(100.0).epsilon(1e-15));
  CHECK(dbm_to_linear(0) == 1.0);
  CHECK(dbm_to_linear(3) == doctest::Approx(1.9953).epsilon(1e-4));
  CHECK(linear_to_db(100.0) == doctest::Approx(20.0));
}

TEST_CASE("synthesis: single antenna radiates isotropically") {
  const AngleGrid g = AngleGrid::uniform(-90, 90, 1);
  const DesiredBeampattern d = synthesize_desired_beampattern({{-90, 90}}, {1, 0.5}, g, 5.0);
  CHECK(d.converged);
  for (Index m = 0; m < g.size(); ++m) CHECK(d.levels(m) == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(d.template_scale == doctest::Approx(5.0).epsilon(1e-9));
}

TEST_CASE("synthesis output is non-negative and concentrated on the targets") {
  const AngleGrid g = AngleGrid::uniform(-90, 90, 2);
  const std::vector<AngularInterval> targets{{-10, 10}};
  const DesiredBeampattern d = synthesize_desired_beampattern(targets, {6, 0.5}, g, 10.0);
  const RVec t = rectangular_template(targets, g);
  CHECK(d.levels.minCoeff() >= 0.0);
  const double in_band = d.levels.dot(t) / t.sum();
  const double out_band = d.levels.dot(RVec::Ones(g.size()) - t) / (static_cast<double>(g.size()) - t.sum());
  CHECK(in_band > 5.0 * out_band);
  CHECK(d.design.rows() == 6);
}

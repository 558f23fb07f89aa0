// SPDX-License-Identifier: Apache-2.0
//
// Physical scenario: ULA geometry, angle grid, user channels and the desired
// radar beampattern. Angles are degrees at every public interface.
#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "dfrc/types.hpp"

namespace dfrc {

struct ArrayGeometry {
  int n_tx = 1;          // antenna count
  double spacing = 0.5;  // element spacing in wavelengths

  void validate() const;
};

struct AngleGrid {
  std::vector<double> degrees;  // strictly increasing, within [-90, 90]

  static AngleGrid uniform(double start, double stop, double step);
  Index size() const { return static_cast<Index>(degrees.size()); }
  void validate() const;
};

/// Column k of `h` is the channel of user k. Powers are normalised to noise.
struct ChannelSet {
  CMat h;
  double noise_power = 1.0;

  Index k_users() const { return h.cols(); }
  Index n_tx() const { return h.rows(); }
};

struct DesiredBeampattern {
  RVec levels;                  // P_d on the angle grid
  double template_scale = 0.0;  // fitted scale of the rectangular template
  bool converged = false;
  int iterations = 0;
  CMat design;  // radar-only precoder (N_t x N_t) whose pattern is `levels`
};

struct Scenario {
  ArrayGeometry geometry;
  AngleGrid grid;
  ChannelSet channels;
  DesiredBeampattern desired;
  double power_budget = 1.0;  // P_t, linear, relative to noise
  RVec rate_weights;          // mu_k > 0

  Index k_users() const { return channels.k_users(); }
  Index n_tx() const { return geometry.n_tx; }
  void validate() const;
};

using AngularInterval = std::pair<double, double>;

CVec steering_vector(double theta_deg, const ArrayGeometry& geometry);

/// N_t x M matrix whose columns are the steering vectors of the grid.
CMat steering_matrix(const AngleGrid& grid, const ArrayGeometry& geometry);

/// i.i.d. CN(0, 1) channels, a pure function of (k_users, n_tx, seed).
ChannelSet generate_channels(int k_users, const ArrayGeometry& geometry, std::uint64_t seed);

/// 0/1 template over the union of the target intervals.
RVec rectangular_template(const std::vector<AngularInterval>& targets, const AngleGrid& grid);

struct SynthesisOptions {
  double scale_tol = 1e-6;  // stop when |d scale| / scale falls below this
  int max_rounds = 500;
  int mm_iterations_per_round = 2000;
  double mm_tol = 1e-9;
};

/// Radar-only beampattern matching against a scale-fitted rectangular
/// template. Alternates the least-squares scale fit with the MM solver run on
/// an N_t-column per-antenna-constrained precoder; the returned levels are the
/// achieved pattern of the final design.
DesiredBeampattern synthesize_desired_beampattern(const std::vector<AngularInterval>& targets,
                                                  const ArrayGeometry& geometry,
                                                  const AngleGrid& grid, double power_budget,
                                                  const SynthesisOptions& options = {});

double dbm_to_linear(double p_dbm);
double linear_to_db(double value);

}  // namespace dfrc

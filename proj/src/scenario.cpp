// SPDX-License-Identifier: Apache-2.0
#include "dfrc/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "dfrc/metrics_radar.hpp"
#include "dfrc/mm.hpp"

namespace dfrc {

void ArrayGeometry::validate() const {
  if (n_tx < 1) throw ConfigError("geometry: n_tx must be >= 1");
  if (!(spacing > 0.0)) throw ConfigError("geometry: spacing must be > 0");
}

AngleGrid AngleGrid::uniform(double start, double stop, double step) {
  if (!(step > 0.0) || stop < start) throw ConfigError("grid: need step > 0 and stop >= start");
  AngleGrid g;
  const auto n = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
  g.degrees.reserve(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) g.degrees.push_back(start + static_cast<double>(i) * step);
  g.validate();
  return g;
}

void AngleGrid::validate() const {
  if (degrees.empty()) throw ConfigError("grid: empty");
  for (std::size_t i = 0; i < degrees.size(); ++i) {
    if (degrees[i] < -90.0 - 1e-12 || degrees[i] > 90.0 + 1e-12)
      throw ConfigError("grid: angles must lie in [-90, 90]");
    if (i > 0 && !(degrees[i] > degrees[i - 1])) throw ConfigError("grid: angles must be strictly increasing");
  }
}

void Scenario::validate() const {
  geometry.validate();
  grid.validate();
  if (channels.n_tx() != geometry.n_tx) throw DimensionError("scenario: channel length != n_tx");
  if (!(power_budget > 0.0)) throw ConfigError("scenario: power budget must be > 0");
  if (rate_weights.size() != channels.k_users()) throw DimensionError("scenario: one rate weight per user");
  if (rate_weights.size() > 0 && !(rate_weights.minCoeff() > 0.0))
    throw ConfigError("scenario: rate weights must be > 0");
  if (desired.levels.size() != grid.size()) throw DimensionError("scenario: desired pattern size != grid size");
}

CVec steering_vector(double theta_deg, const ArrayGeometry& geometry) {
  const double phase = 2.0 * kPi * geometry.spacing * std::sin(theta_deg * kPi / 180.0);
  CVec a(geometry.n_tx);
  for (int i = 0; i < geometry.n_tx; ++i) a(i) = std::polar(1.0, phase * i);
  return a;
}

CMat steering_matrix(const AngleGrid& grid, const ArrayGeometry& geometry) {
  CMat a(geometry.n_tx, grid.size());
  for (Index m = 0; m < grid.size(); ++m)
    a.col(m) = steering_vector(grid.degrees[static_cast<std::size_t>(m)], geometry);
  return a;
}

ChannelSet generate_channels(int k_users, const ArrayGeometry& geometry, std::uint64_t seed) {
  if (k_users < 1) throw ConfigError("channels: k_users must be >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  ChannelSet set;
  set.h.resize(geometry.n_tx, k_users);
  for (int k = 0; k < k_users; ++k) {
    for (int i = 0; i < geometry.n_tx; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      set.h(i, k) = Complex(re, im);
    }
  }
  set.noise_power = 1.0;
  return set;
}

RVec rectangular_template(const std::vector<AngularInterval>& targets, const AngleGrid& grid) {
  RVec t = RVec::Zero(grid.size());
  for (Index m = 0; m < grid.size(); ++m) {
    const double th = grid.degrees[static_cast<std::size_t>(m)];
    for (const auto& [lo, hi] : targets) {
      if (th >= lo - 1e-9 && th <= hi + 1e-9) t(m) = 1.0;
    }
  }
  return t;
}

DesiredBeampattern synthesize_desired_beampattern(const std::vector<AngularInterval>& targets,
                                                  const ArrayGeometry& geometry,
                                                  const AngleGrid& grid, double power_budget,
                                                  const SynthesisOptions& options) {
  geometry.validate();
  grid.validate();
  if (targets.empty()) throw ConfigError("desired beampattern: no target intervals");
  for (const auto& [lo, hi] : targets) {
    if (lo > hi || lo < grid.degrees.front() - 1e-9 || hi > grid.degrees.back() + 1e-9)
      throw ConfigError("desired beampattern: target interval outside the grid");
  }

  const CMat steering = steering_matrix(grid, geometry);
  const RVec templ = rectangular_template(targets, grid);
  const double templ_sq = templ.squaredNorm();
  if (templ_sq == 0.0) throw ConfigError("desired beampattern: targets contain no grid point");

  const Index n = geometry.n_tx;
  // Fixed pseudo-random start keeps the synthesis deterministic.
  std::mt19937_64 rng(0x5eed);
  std::normal_distribution<double> normal(0.0, 1.0);
  CVec start(n * n);
  for (Index i = 0; i < start.size(); ++i) start(i) = Complex(normal(rng), normal(rng));
  const std::vector<bool> active(static_cast<std::size_t>(n), true);
  CVec p = per_antenna_minimizer(start, n, n, active, power_budget);

  DesiredBeampattern out;
  RVec achieved = beampattern_of(Eigen::Map<const CMat>(p.data(), n, n), steering);
  double scale = templ.dot(achieved) / templ_sq;
  MmOptions mm_opts;
  mm_opts.tol = options.mm_tol;
  mm_opts.max_iter = options.mm_iterations_per_round;

  for (int round = 1; round <= options.max_rounds; ++round) {
    MmWorkState state = make_mm_state(steering, scale * templ, n, active, 1.0, 0.0,
                                      CVec::Zero(n * n), power_budget);
    const MmResult mm = mm_minimize(state, p, mm_opts);
    p = mm.p;
    achieved = beampattern_of(Eigen::Map<const CMat>(p.data(), n, n), steering);
    const double next = templ.dot(achieved) / templ_sq;
    const double change = std::abs(next - scale) / std::max(std::abs(next), 1e-300);
    scale = next;
    out.iterations = round;
    if (change < options.scale_tol) {
      out.converged = true;
      break;
    }
  }
  out.levels = achieved.cwiseMax(0.0);
  out.template_scale = scale;
  out.design = Eigen::Map<const CMat>(p.data(), n, n);
  return out;
}

double dbm_to_linear(double p_dbm) { return std::pow(10.0, p_dbm / 10.0); }

double linear_to_db(double value) { return 10.0 * std::log10(value); }

}  // namespace dfrc

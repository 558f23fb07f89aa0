// SPDX-License-Identifier: Apache-2.0
//
// Tradeoff sweeps, orthogonal-resource baselines and result export.
#pragma once

#include <string>
#include <vector>

#include "dfrc/admm.hpp"
#include "dfrc/metrics_radar.hpp"

namespace dfrc {

struct SweepSpec {
  std::vector<double> lambdas;  // sorted, each in [0, 1]
  std::vector<ModeConfig> modes;
  std::vector<std::uint64_t> seeds{1};

  void validate() const;
  /// Logarithmic default grid 1e-7 .. 1e-3, one point per decade.
  static std::vector<double> default_lambdas();
};

/// One point of a WSR / RMSE curve. For baselines `lambda` carries the
/// baseline parameter (time fraction for TDRC, communication power fraction
/// for FDRC) and `mode` is "tdrc" or "fdrc".
struct TradeoffPoint {
  double lambda = 0.0;
  std::string mode;
  double wsr = 0.0;   // bps/Hz
  double rmse = 0.0;
  bool converged = false;
  int iterations = 0;
  bool rmse_applicable = true;
  std::uint64_t seed = 0;
  std::string error;  // non-empty when the point failed
};

std::vector<TradeoffPoint> run_tradeoff_sweep(const Scenario& scenario, const SweepSpec& spec,
                                              const AdmmConfig& config = {});

/// Communication-only and radar-only reference designs shared by the baselines.
struct BaselineInputs {
  double comm_wsr = 0.0;   // RSMA, full power, no radar term
  double comm_rmse = 0.0;  // pattern error of the communication-only design
  PrecoderSolution comm_solution{1, 0};
  CMat radar_design;       // N_t x N_t radar-only precoder
  double radar_rmse = 0.0;
};

/// RSMA WMMSE design with lambda = 0, rho = 0 at the given total power.
PrecoderSolution comm_only_design(const Scenario& scenario, double power, const AdmmConfig& config = {});

/// Per-antenna radar-only design; reuses the synthesis design when present.
CMat radar_only_design(const Scenario& scenario, const AdmmConfig& config = {});

BaselineInputs compute_baseline_inputs(const Scenario& scenario, const AdmmConfig& config = {});

/// wsr = alpha * WSR_comm; rmse = radar-only RMSE (alpha = 1 is flagged
/// not applicable and carries the communication design's pattern error).
std::vector<TradeoffPoint> tdrc_curve(const BaselineInputs& inputs, const std::vector<double>& alphas);

/// `comm_fractions` are P_C / P_t; the radar side uses the radar-only design
/// scaled to P_R = P_t - P_C.
std::vector<TradeoffPoint> fdrc_curve(const Scenario& scenario, const BaselineInputs& inputs,
                                      const std::vector<double>& comm_fractions,
                                      const AdmmConfig& config = {});

/// Pattern of the radar-only design scaled to power P_R.
RVec fdrc_radar_pattern(const Scenario& scenario, const CMat& radar_design, double radar_power);

/// WSR of a curve at the requested RMSE values by linear interpolation on
/// the RMSE axis; NaN outside the sampled range.
std::vector<double> wsr_at_rmse(const std::vector<TradeoffPoint>& curve, const std::vector<double>& rmse);

// Export. Numbers use 12 significant digits so identical inputs give
// identical files.
std::string format_number(double value);
void write_tradeoff_csv(const std::vector<TradeoffPoint>& points, const std::string& path);
void write_tradeoff_json(const std::vector<TradeoffPoint>& points, const std::string& path);
std::vector<TradeoffPoint> read_tradeoff_json(const std::string& path);
void write_beampattern_csv(const BeampatternTrace& trace, const AngleGrid& grid, const std::string& path);
void write_lbibr_csv(const RVec& values, const AngleGrid& grid, const std::string& path);

std::string report_to_json(const SolveReport& report, double lambda_reg, const ModeConfig& mode);
void write_report_json(const SolveReport& report, double lambda_reg, const ModeConfig& mode,
                       const std::string& path);
/// Precoders and split stored by write_report_json.
PrecoderSolution solution_from_json(const std::string& path);

}  // namespace dfrc

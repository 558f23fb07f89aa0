// SPDX-License-Identifier: Apache-2.0
#include "dfrc/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include "json.hpp"
#include "dfrc/mm.hpp"
#include "dfrc/wmmse.hpp"

namespace dfrc {

namespace {

using nlohmann::json;

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("export: cannot write '" + path + "'");
  return out;
}

json point_to_json(const TradeoffPoint& p) {
  json j = {{"lambda", p.lambda},         {"mode", p.mode},
            {"wsr_bps_hz", p.wsr},        {"rmse", p.rmse},
            {"converged", p.converged},   {"iterations", p.iterations},
            {"rmse_applicable", p.rmse_applicable}, {"seed", p.seed}};
  if (!p.error.empty()) j["error"] = p.error;
  return j;
}

double pattern_rmse(const RVec& achieved, const RVec& desired) {
  return std::sqrt(pattern_mse(achieved, desired));
}

}  // namespace

void SweepSpec::validate() const {
  if (lambdas.empty() || modes.empty() || seeds.empty()) throw ConfigError("sweep: empty lambda, mode or seed list");
  for (double l : lambdas)
    if (!(l >= 0.0 && l <= 1.0)) throw ConfigError("sweep: lambda outside [0, 1]");
  if (!std::is_sorted(lambdas.begin(), lambdas.end())) throw ConfigError("sweep: lambdas must be sorted");
}

std::vector<double> SweepSpec::default_lambdas() { return {1e-7, 1e-6, 1e-5, 1e-4, 1e-3}; }

std::vector<TradeoffPoint> run_tradeoff_sweep(const Scenario& scenario, const SweepSpec& spec,
                                              const AdmmConfig& config) {
  spec.validate();
  std::vector<TradeoffPoint> out;
  for (const auto& mode : spec.modes) {
    for (std::uint64_t seed : spec.seeds) {
      for (double lambda : spec.lambdas) {
        TradeoffPoint p;
        p.lambda = lambda;
        p.mode = mode.label();
        p.seed = seed;
        AdmmConfig cfg = config;
        cfg.seed = seed;
        try {
          const SolveReport r = run_admm(scenario, mode, lambda, cfg);
          p.wsr = r.wsr;
          p.rmse = r.rmse;
          p.converged = r.converged;
          p.iterations = r.iterations;
        } catch (const Error& e) {
          p.wsr = std::numeric_limits<double>::quiet_NaN();
          p.rmse = std::numeric_limits<double>::quiet_NaN();
          p.error = e.what();
        }
        out.push_back(std::move(p));
      }
    }
  }
  return out;
}

PrecoderSolution comm_only_design(const Scenario& scenario, double power, const AdmmConfig& config) {
  const ModeConfig mode{MultipleAccess::Rsma, RadarSequence::Disabled};
  const StackLayout layout{scenario.n_tx(), scenario.k_users()};
  if (!(power > 0.0)) return PrecoderSolution(layout.n_tx, layout.k_users);

  Scenario scaled = scenario;
  scaled.power_budget = power;
  const AdmmState init = initial_state(scaled, mode, config);
  WmmseOptions opts;
  opts.tol = config.eps1;
  opts.max_outer = std::max(config.wmmse_max_outer, 500);
  opts.qcqp_tol = config.qcqp_tol;
  const CVec zero_dual = CVec::Zero(layout.precoder_size());
  // Start from the MRC point itself rather than its per-antenna projection.
  const VUpdateResult r = v_update(init.v, zero_dual, scenario.channels, scenario.rate_weights, power,
                                   mode, 0.0, 0.0, opts);
  PrecoderSolution sol = unstack(r.v, layout);
  clip_common_split(sol, scenario.channels, mode);
  return sol;
}

CMat radar_only_design(const Scenario& scenario, const AdmmConfig& config) {
  const Index n = scenario.n_tx();
  if (scenario.desired.design.rows() == n && scenario.desired.design.cols() == n) return scenario.desired.design;
  const std::vector<bool> active(static_cast<std::size_t>(n), true);
  const MmWorkState state = make_mm_state(steering_matrix(scenario.grid, scenario.geometry),
                                          scenario.desired.levels, n, active, 1.0, 0.0,
                                          CVec::Zero(n * n), scenario.power_budget);
  CVec start = CVec::Zero(n * n);
  for (Index i = 0; i < n; ++i) start(i * n + i) = 1.0;
  MmOptions opts;
  opts.tol = config.eps2_for(scenario.power_budget);
  opts.max_iter = config.mm_max_iter;
  const MmResult r = mm_minimize(state, start, opts);
  return Eigen::Map<const CMat>(r.p.data(), n, n);
}

BaselineInputs compute_baseline_inputs(const Scenario& scenario, const AdmmConfig& config) {
  BaselineInputs in;
  const CMat steering = steering_matrix(scenario.grid, scenario.geometry);
  const ModeConfig mode{MultipleAccess::Rsma, RadarSequence::Disabled};
  in.comm_solution = comm_only_design(scenario, scenario.power_budget, config);
  in.comm_wsr = wsr(in.comm_solution, scenario.channels, mode, scenario.rate_weights);
  in.comm_rmse = pattern_rmse(beampattern_of(in.comm_solution.columns(), steering), scenario.desired.levels);
  in.radar_design = radar_only_design(scenario, config);
  in.radar_rmse = pattern_rmse(beampattern_of(in.radar_design, steering), scenario.desired.levels);
  return in;
}

std::vector<TradeoffPoint> tdrc_curve(const BaselineInputs& inputs, const std::vector<double>& alphas) {
  std::vector<TradeoffPoint> out;
  for (double alpha : alphas) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw ConfigError("tdrc: alpha outside [0, 1]");
    TradeoffPoint p;
    p.lambda = alpha;
    p.mode = "tdrc";
    p.wsr = alpha * inputs.comm_wsr;
    p.converged = true;
    if (alpha < 1.0) {
      p.rmse = inputs.radar_rmse;
    } else {
      p.rmse = inputs.comm_rmse;
      p.rmse_applicable = false;
    }
    out.push_back(p);
  }
  return out;
}

RVec fdrc_radar_pattern(const Scenario& scenario, const CMat& radar_design, double radar_power) {
  const double scale = std::sqrt(std::max(radar_power, 0.0) / scenario.power_budget);
  return beampattern_of(scale * radar_design, steering_matrix(scenario.grid, scenario.geometry));
}

std::vector<TradeoffPoint> fdrc_curve(const Scenario& scenario, const BaselineInputs& inputs,
                                      const std::vector<double>& comm_fractions,
                                      const AdmmConfig& config) {
  const ModeConfig mode{MultipleAccess::Rsma, RadarSequence::Disabled};
  std::vector<TradeoffPoint> out;
  for (double beta : comm_fractions) {
    if (!(beta >= 0.0 && beta <= 1.0)) throw ConfigError("fdrc: power fraction outside [0, 1]");
    TradeoffPoint p;
    p.lambda = beta;
    p.mode = "fdrc";
    const double p_comm = beta * scenario.power_budget;
    if (beta == 1.0) {
      p.wsr = inputs.comm_wsr;
    } else if (beta > 0.0) {
      const PrecoderSolution sol = comm_only_design(scenario, p_comm, config);
      p.wsr = wsr(sol, scenario.channels, mode, scenario.rate_weights);
    }
    const RVec pattern = fdrc_radar_pattern(scenario, inputs.radar_design, scenario.power_budget - p_comm);
    p.rmse = pattern_rmse(pattern, scenario.desired.levels);
    p.converged = true;
    out.push_back(p);
  }
  return out;
}

std::vector<double> wsr_at_rmse(const std::vector<TradeoffPoint>& curve, const std::vector<double>& rmse) {
  std::vector<const TradeoffPoint*> pts;
  for (const auto& p : curve)
    if (p.error.empty() && p.rmse_applicable && std::isfinite(p.rmse) && std::isfinite(p.wsr)) pts.push_back(&p);
  std::sort(pts.begin(), pts.end(), [](const auto* a, const auto* b) { return a->rmse < b->rmse; });
  std::vector<double> out;
  for (double r : rmse) {
    double value = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
      const double r0 = pts[i]->rmse;
      const double r1 = pts[i + 1]->rmse;
      if (r < r0 || r > r1) continue;
      const double t = r1 > r0 ? (r - r0) / (r1 - r0) : 0.0;
      value = pts[i]->wsr + t * (pts[i + 1]->wsr - pts[i]->wsr);
      break;
    }
    if (pts.size() == 1 && r == pts.front()->rmse) value = pts.front()->wsr;
    out.push_back(value);
  }
  return out;
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

void write_tradeoff_csv(const std::vector<TradeoffPoint>& points, const std::string& path) {
  std::ofstream out = open_out(path);
  out << "lambda,mode,wsr_bps_hz,rmse,converged,iterations\n";
  for (const auto& p : points) {
    out << format_number(p.lambda) << ',' << p.mode << ',' << format_number(p.wsr) << ','
        << format_number(p.rmse) << ',' << (p.converged ? 1 : 0) << ',' << p.iterations << '\n';
  }
  if (!out) throw Error("export: write failed for '" + path + "'");
}

void write_tradeoff_json(const std::vector<TradeoffPoint>& points, const std::string& path) {
  json arr = json::array();
  for (const auto& p : points) arr.push_back(point_to_json(p));
  std::ofstream out = open_out(path);
  out << arr.dump(2) << '\n';
  if (!out) throw Error("export: write failed for '" + path + "'");
}

std::vector<TradeoffPoint> read_tradeoff_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("import: cannot read '" + path + "'");
  std::vector<TradeoffPoint> out;
  try {
    const json arr = json::parse(in);
    for (const auto& j : arr) {
      TradeoffPoint p;
      p.lambda = j.at("lambda").get<double>();
      p.mode = j.at("mode").get<std::string>();
      p.wsr = j.at("wsr_bps_hz").is_null() ? std::numeric_limits<double>::quiet_NaN() : j.at("wsr_bps_hz").get<double>();
      p.rmse = j.at("rmse").is_null() ? std::numeric_limits<double>::quiet_NaN() : j.at("rmse").get<double>();
      p.converged = j.at("converged").get<bool>();
      p.iterations = j.at("iterations").get<int>();
      p.rmse_applicable = j.value("rmse_applicable", true);
      p.seed = j.value("seed", std::uint64_t{0});
      p.error = j.value("error", std::string());
      out.push_back(std::move(p));
    }
  } catch (const json::exception& e) {
    throw Error("import: '" + path + "': " + e.what());
  }
  return out;
}

void write_beampattern_csv(const BeampatternTrace& trace, const AngleGrid& grid, const std::string& path) {
  std::ofstream out = open_out(path);
  out << "theta_deg,total,common,private_sum,radar\n";
  for (Index m = 0; m < grid.size(); ++m) {
    out << format_number(grid.degrees[static_cast<std::size_t>(m)]) << ',' << format_number(trace.total(m))
        << ',' << format_number(trace.common(m)) << ',' << format_number(trace.private_sum(m)) << ','
        << format_number(trace.radar(m)) << '\n';
  }
  if (!out) throw Error("export: write failed for '" + path + "'");
}

void write_lbibr_csv(const RVec& values, const AngleGrid& grid, const std::string& path) {
  std::ofstream out = open_out(path);
  out << "theta_deg,lb_ibr\n";
  for (Index m = 0; m < grid.size(); ++m)
    out << format_number(grid.degrees[static_cast<std::size_t>(m)]) << ',' << format_number(values(m)) << '\n';
  if (!out) throw Error("export: write failed for '" + path + "'");
}

std::string report_to_json(const SolveReport& report, double lambda_reg, const ModeConfig& mode) {
  json j;
  j["lambda"] = lambda_reg;
  j["mode"] = mode.label();
  j["wsr"] = report.wsr;
  j["mse"] = report.mse;
  j["rmse"] = report.rmse;
  j["iterations"] = report.iterations;
  j["converged"] = report.converged;
  j["objective_trace"] = report.objective_trace;
  json res = json::array();
  for (const auto& [r, q] : report.residual_trace) res.push_back({r, q});
  j["residual_trace"] = res;
  const CMat& p = report.solution.columns();
  json re = json::array();
  json im = json::array();
  for (Index i = 0; i < p.rows(); ++i) {
    json row_re = json::array();
    json row_im = json::array();
    for (Index c = 0; c < p.cols(); ++c) {
      row_re.push_back(p(i, c).real());
      row_im.push_back(p(i, c).imag());
    }
    re.push_back(row_re);
    im.push_back(row_im);
  }
  j["precoders"] = {{"re", re}, {"im", im}};
  const RVec& c = report.solution.common_split();
  j["common_split"] = std::vector<double>(c.data(), c.data() + c.size());
  return j.dump(2);
}

void write_report_json(const SolveReport& report, double lambda_reg, const ModeConfig& mode,
                       const std::string& path) {
  std::ofstream out = open_out(path);
  out << report_to_json(report, lambda_reg, mode) << '\n';
  if (!out) throw Error("export: write failed for '" + path + "'");
}

PrecoderSolution solution_from_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("import: cannot read '" + path + "'");
  try {
    const json j = json::parse(in);
    const auto re = j.at("precoders").at("re").get<std::vector<std::vector<double>>>();
    const auto im = j.at("precoders").at("im").get<std::vector<std::vector<double>>>();
    if (re.empty() || re.size() != im.size()) throw Error("import: malformed precoders");
    const Index rows = static_cast<Index>(re.size());
    const Index cols = static_cast<Index>(re.front().size());
    CMat p(rows, cols);
    for (Index i = 0; i < rows; ++i) {
      if (static_cast<Index>(re[i].size()) != cols || im[i].size() != re[i].size())
        throw Error("import: ragged precoder rows");
      for (Index c = 0; c < cols; ++c) p(i, c) = Complex(re[i][c], im[i][c]);
    }
    const auto split = j.at("common_split").get<std::vector<double>>();
    return PrecoderSolution(std::move(p), Eigen::Map<const RVec>(split.data(), static_cast<Index>(split.size())));
  } catch (const json::exception& e) {
    throw Error("import: '" + path + "': " + e.what());
  }
}

}  // namespace dfrc

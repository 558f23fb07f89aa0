// SPDX-License-Identifier: Apache-2.0
//
// dfrc command-line front end. Exit codes: 0 success, 1 usage or
// configuration error, 2 non-convergence (results are still written).
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dfrc/config.hpp"
#include "dfrc/metrics_radar.hpp"
#include "dfrc/runner.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitNotConverged = 2;

struct Common {
  std::string config;
  std::string out;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config, "scenario JSON")->required()->check(CLI::ExistingFile);
  cmd->add_option("--out", c.out, "output path")->required();
}

std::vector<dfrc::ModeConfig> parse_modes(const std::vector<std::string>& labels) {
  std::vector<dfrc::ModeConfig> out;
  for (const auto& l : labels) out.push_back(dfrc::ModeConfig::parse(l));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"RSMA dual-functional radar-communication precoder toolkit"};
  app.require_subcommand(1);

  Common solve_c;
  std::string solve_mode = "rsma-rs-sic";
  double solve_lambda = 1e-5;
  std::uint64_t solve_seed = 0;
  bool solve_seed_set = false;
  auto* solve = app.add_subcommand("solve", "run the ADMM solver for one lambda");
  add_common(solve, solve_c);
  solve->add_option("--mode", solve_mode, "{rsma,sdma}x{no-rs,rs-sic,rs-nosic}");
  solve->add_option("--lambda", solve_lambda, "regularization weight in [0, 1]")->check(CLI::Range(0.0, 1.0));
  solve->add_option_function<std::uint64_t>("--seed", [&](const std::uint64_t& s) {
    solve_seed = s;
    solve_seed_set = true;
  });

  Common sweep_c;
  std::vector<double> sweep_lambdas = dfrc::SweepSpec::default_lambdas();
  std::vector<std::string> sweep_modes{"rsma-no-rs"};
  std::vector<std::uint64_t> sweep_seeds;
  auto* sweep = app.add_subcommand("sweep", "lambda sweep producing a tradeoff CSV");
  add_common(sweep, sweep_c);
  sweep->add_option("--lambdas", sweep_lambdas)->delimiter(',');
  sweep->add_option("--modes", sweep_modes)->delimiter(',');
  sweep->add_option("--seeds", sweep_seeds)->delimiter(',');

  Common base_c;
  std::string base_kind;
  std::vector<double> base_points{0.0, 0.25, 0.5, 0.75, 1.0};
  auto* baseline = app.add_subcommand("baseline", "orthogonal-resource baseline curve");
  baseline->add_option("kind", base_kind, "tdrc or fdrc")->required()->check(CLI::IsMember({"tdrc", "fdrc"}));
  add_common(baseline, base_c);
  baseline->add_option("--points", base_points, "time fractions (tdrc) or P_C/P_t (fdrc)")->delimiter(',');

  Common bp_c;
  std::string bp_solution;
  auto* bp = app.add_subcommand("beampattern", "beampattern of a stored solution");
  add_common(bp, bp_c);
  bp->add_option("--from-solution", bp_solution, "solution JSON written by solve")
      ->required()
      ->check(CLI::ExistingFile);

  Common lb_c;
  auto* lbibr = app.add_subcommand("lbibr", "precoder-free IBR lower bound over the grid");
  add_common(lbibr, lb_c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitError;
  }

  try {
    if (solve->parsed()) {
      dfrc::RunConfig rc = dfrc::load_config(solve_c.config);
      if (solve_seed_set) rc.solver.seed = solve_seed;
      const dfrc::Scenario scenario = dfrc::build_scenario(rc.scenario);
      const dfrc::ModeConfig mode = dfrc::ModeConfig::parse(solve_mode);
      const dfrc::SolveReport r = dfrc::run_admm(scenario, mode, solve_lambda, rc.solver);
      dfrc::write_report_json(r, solve_lambda, mode, solve_c.out);
      std::printf("wsr %.6f  rmse %.6f  iterations %d  converged %s\n", r.wsr, r.rmse, r.iterations,
                  r.converged ? "yes" : "no");
      return r.converged ? kExitOk : kExitNotConverged;
    }
    if (sweep->parsed()) {
      const dfrc::RunConfig rc = dfrc::load_config(sweep_c.config);
      const dfrc::Scenario scenario = dfrc::build_scenario(rc.scenario);
      dfrc::SweepSpec spec;
      spec.lambdas = sweep_lambdas;
      spec.modes = parse_modes(sweep_modes);
      if (!sweep_seeds.empty()) spec.seeds = sweep_seeds;
      else spec.seeds = {rc.solver.seed};
      const auto points = dfrc::run_tradeoff_sweep(scenario, spec, rc.solver);
      const std::string& out = sweep_c.out;
      if (out.size() >= 5 && out.compare(out.size() - 5, 5, ".json") == 0) dfrc::write_tradeoff_json(points, out);
      else dfrc::write_tradeoff_csv(points, out);
      bool all = true;
      for (const auto& p : points) {
        std::printf("%-12s lambda %-10g wsr %.6f  rmse %.6f%s\n", p.mode.c_str(), p.lambda, p.wsr, p.rmse,
                    p.error.empty() ? (p.converged ? "" : "  (not converged)") : ("  error: " + p.error).c_str());
        all = all && p.converged && p.error.empty();
      }
      return all ? kExitOk : kExitNotConverged;
    }
    if (baseline->parsed()) {
      const dfrc::RunConfig rc = dfrc::load_config(base_c.config);
      const dfrc::Scenario scenario = dfrc::build_scenario(rc.scenario);
      const dfrc::BaselineInputs inputs = dfrc::compute_baseline_inputs(scenario, rc.solver);
      const auto points = base_kind == "tdrc" ? dfrc::tdrc_curve(inputs, base_points)
                                              : dfrc::fdrc_curve(scenario, inputs, base_points, rc.solver);
      dfrc::write_tradeoff_csv(points, base_c.out);
      for (const auto& p : points) std::printf("%s %-6g wsr %.6f  rmse %.6f\n", p.mode.c_str(), p.lambda, p.wsr, p.rmse);
      return kExitOk;
    }
    if (bp->parsed()) {
      const dfrc::RunConfig rc = dfrc::load_config(bp_c.config);
      const dfrc::Scenario scenario = dfrc::build_scenario(rc.scenario);
      const dfrc::PrecoderSolution sol = dfrc::solution_from_json(bp_solution);
      if (sol.columns().rows() != scenario.n_tx() || sol.columns().cols() != scenario.k_users() + 2)
        throw dfrc::DimensionError("beampattern: solution does not match the scenario dimensions");
      dfrc::write_beampattern_csv(dfrc::beampattern(sol, scenario), scenario.grid, bp_c.out);
      return kExitOk;
    }
    if (lbibr->parsed()) {
      const dfrc::RunConfig rc = dfrc::load_config(lb_c.config);
      const dfrc::Scenario scenario = dfrc::build_scenario(rc.scenario);
      dfrc::write_lbibr_csv(dfrc::lb_ibr_on_grid(scenario.channels, scenario.grid, scenario.geometry),
                            scenario.grid, lb_c.out);
      return kExitOk;
    }
  } catch (const dfrc::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}

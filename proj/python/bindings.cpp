// SPDX-License-Identifier: Apache-2.0
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dfrc/config.hpp"
#include "dfrc/metrics_radar.hpp"
#include "dfrc/runner.hpp"

namespace py = pybind11;
using namespace dfrc;

namespace {

py::dict report_dict(const SolveReport& r) {
  py::dict d;
  d["wsr"] = r.wsr;
  d["mse"] = r.mse;
  d["rmse"] = r.rmse;
  d["converged"] = r.converged;
  d["iterations"] = r.iterations;
  d["objective_trace"] = r.objective_trace;
  d["residual_trace"] = r.residual_trace;
  d["precoders"] = r.solution.columns();
  d["common_split"] = r.solution.common_split();
  return d;
}

py::dict point_dict(const TradeoffPoint& p) {
  py::dict d;
  d["lambda"] = p.lambda;
  d["mode"] = p.mode;
  d["wsr"] = p.wsr;
  d["rmse"] = p.rmse;
  d["converged"] = p.converged;
  d["iterations"] = p.iterations;
  d["rmse_applicable"] = p.rmse_applicable;
  d["error"] = p.error;
  return d;
}

py::list points_list(const std::vector<TradeoffPoint>& pts) {
  py::list out;
  for (const auto& p : pts) out.append(point_dict(p));
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "RSMA dual-functional radar-communication precoder toolkit";

  // Translators run newest first, so the derived type is registered last.
  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  py::class_<ModeConfig>(m, "Mode")
      .def(py::init(&ModeConfig::parse), py::arg("label"))
      .def_property_readonly("label", &ModeConfig::label)
      .def_property_readonly("common_active", &ModeConfig::common_active)
      .def_property_readonly("radar_active", &ModeConfig::radar_active)
      .def("__repr__", [](const ModeConfig& mode) { return "Mode('" + mode.label() + "')"; });

  py::class_<AdmmConfig>(m, "SolverConfig")
      .def(py::init<>())
      .def_readwrite("rho", &AdmmConfig::rho)
      .def_readwrite("eps0", &AdmmConfig::eps0)
      .def_readwrite("eps1", &AdmmConfig::eps1)
      .def_readwrite("eps2", &AdmmConfig::eps2)
      .def_readwrite("max_iter", &AdmmConfig::max_iter)
      .def_readwrite("seed", &AdmmConfig::seed)
      .def_readwrite("mm_max_iter", &AdmmConfig::mm_max_iter);

  py::class_<Scenario>(m, "Scenario")
      .def_property_readonly("n_tx", &Scenario::n_tx)
      .def_property_readonly("k_users", &Scenario::k_users)
      .def_readonly("power_budget", &Scenario::power_budget)
      .def_property_readonly("channels", [](const Scenario& s) { return s.channels.h; })
      .def_property_readonly("angles", [](const Scenario& s) { return s.grid.degrees; })
      .def_property_readonly("desired", [](const Scenario& s) { return s.desired.levels; })
      .def_property_readonly("radar_design", [](const Scenario& s) { return s.desired.design; });

  py::class_<RunConfig>(m, "RunConfig")
      .def_readwrite("solver", &RunConfig::solver)
      .def("to_json", [](const RunConfig& c) { return to_json(c); })
      .def("build_scenario", [](const RunConfig& c) { return build_scenario(c.scenario); });

  m.def("parse_config", &parse_config, py::arg("json_text"));
  m.def("load_config", &load_config, py::arg("path"));

  m.def(
      "solve",
      [](const Scenario& s, const std::string& mode, double lambda_reg, const AdmmConfig& cfg) {
        SolveReport r;
        {
          py::gil_scoped_release release;
          r = run_admm(s, ModeConfig::parse(mode), lambda_reg, cfg);
        }
        return report_dict(r);
      },
      py::arg("scenario"), py::arg("mode"), py::arg("lambda_reg"), py::arg("config") = AdmmConfig{});

  m.def(
      "sweep",
      [](const Scenario& s, const std::vector<double>& lambdas, const std::vector<std::string>& modes,
         const AdmmConfig& cfg) {
        SweepSpec spec;
        spec.lambdas = lambdas;
        for (const auto& l : modes) spec.modes.push_back(ModeConfig::parse(l));
        spec.seeds = {cfg.seed};
        std::vector<TradeoffPoint> pts;
        {
          py::gil_scoped_release release;
          pts = run_tradeoff_sweep(s, spec, cfg);
        }
        return points_list(pts);
      },
      py::arg("scenario"), py::arg("lambdas"), py::arg("modes"), py::arg("config") = AdmmConfig{});

  m.def(
      "baseline",
      [](const Scenario& s, const std::string& kind, const std::vector<double>& points, const AdmmConfig& cfg) {
        if (kind != "tdrc" && kind != "fdrc") throw ConfigError("baseline: kind must be tdrc or fdrc");
        const BaselineInputs in = compute_baseline_inputs(s, cfg);
        return points_list(kind == "tdrc" ? tdrc_curve(in, points) : fdrc_curve(s, in, points, cfg));
      },
      py::arg("scenario"), py::arg("kind"), py::arg("points"), py::arg("config") = AdmmConfig{});

  m.def(
      "beampattern",
      [](const Scenario& s, const CMat& precoders) {
        return beampattern_of(precoders, steering_matrix(s.grid, s.geometry));
      },
      py::arg("scenario"), py::arg("precoders"));

  m.def(
      "wsr",
      [](const Scenario& s, const CMat& precoders, const RVec& split, const std::string& mode) {
        return wsr(PrecoderSolution(precoders, split), s.channels, ModeConfig::parse(mode), s.rate_weights);
      },
      py::arg("scenario"), py::arg("precoders"), py::arg("common_split"), py::arg("mode"));

  m.def(
      "lb_ibr", [](const Scenario& s) { return lb_ibr_on_grid(s.channels, s.grid, s.geometry); },
      py::arg("scenario"));

  m.def("steering_vector", [](double theta, int n_tx, double spacing) {
    return steering_vector(theta, ArrayGeometry{n_tx, spacing});
  }, py::arg("theta_deg"), py::arg("n_tx"), py::arg("spacing") = 0.5);

  m.def("dbm_to_linear", &dbm_to_linear, py::arg("p_dbm"));
}

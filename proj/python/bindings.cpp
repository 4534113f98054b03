#include "ftc/batch.hpp"
#include "ftc/fdi_engine.hpp"
#include "ftc/record_io.hpp"
#include "ftc/scenario_io.hpp"
#include "ftc/thruster_allocation.hpp"

#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

namespace py = pybind11;
using namespace ftc;

namespace {

Scenario load(const std::string& arg, const std::vector<std::string>& overrides)
{
  const auto path = resolve_scenario(arg);
  if (!path) {
    throw py::value_error("no scenario file or preset named '" + arg + "'");
  }
  return load_scenario(*path, overrides);
}

py::list issues_of(const ValidationReport& report)
{
  py::list out;
  for (const ValidationIssue& i : report.issues) {
    py::dict d;
    d["kind"] = kind_name(i.kind);
    d["path"] = i.path;
    d["line"] = i.line;
    d["message"] = i.message;
    out.append(d);
  }
  return out;
}

// Runs in memory; returns (summary json, rows as an (n, columns) array).
py::tuple run(const Scenario& scenario, std::optional<int> decimation)
{
  Scenario sc = scenario;
  if (decimation) {
    if (*decimation < 1) {
      throw py::value_error("decimation must be >= 1");
    }
    sc.sim.decimation = *decimation;
  }
  std::vector<double> flat;
  RunSummary summary;
  {
    py::gil_scoped_release release;
    summary = run_scenario(sc, [&](const SimRow& r) {
      const auto v = row_values(r);
      flat.insert(flat.end(), v.begin(), v.end());
    });
  }
  const auto ncol = static_cast<py::ssize_t>(csv_columns().size());
  py::array_t<double> rows({static_cast<py::ssize_t>(flat.size()) / ncol, ncol});
  std::copy(flat.begin(), flat.end(), rows.mutable_data());
  return py::make_tuple(summary_json(summary, sc), rows);
}

}  // namespace

PYBIND11_MODULE(_core, m)
{
  m.doc() = "Thruster fault detection, isolation and reconfiguration simulator";

  py::register_exception<DivergenceError>(m, "DivergenceError", PyExc_RuntimeError);

  py::class_<Scenario>(m, "Scenario")
      .def_readwrite("name", &Scenario::name)
      .def_readonly("description", &Scenario::description)
      .def_property_readonly("dt", [](const Scenario& s) { return s.sim.dt; })
      .def_property_readonly("duration", [](const Scenario& s) { return s.sim.duration; })
      .def_property_readonly("update_period", [](const Scenario& s) { return s.fdi.T_s; })
      .def_property_readonly("faults",
                             [](const Scenario& s) {
                               std::vector<std::tuple<double, int, double>> out;
                               for (const FaultEvent& e : s.faults.events()) {
                                 out.emplace_back(e.time, e.thruster, e.weight);
                               }
                               return out;
                             })
      .def_readonly("overrides", &Scenario::overrides)
      .def("to_json", [](const Scenario& s) { return scenario_to_json(s); })
      .def("__repr__", [](const Scenario& s) { return "<Scenario " + s.name + ">"; });

  m.def("load_scenario", &load, py::arg("source"), py::arg("overrides") = std::vector<std::string>{},
        "Load a scenario file or preset name; raises ValueError listing every issue.");
  m.def(
      "scenario_from_json",
      [](const std::string& text, const std::vector<std::string>& overrides) {
        LoadResult r = check_scenario_text(text, preset_dir(), overrides, "<string>");
        if (!r.report.ok()) {
          throw ScenarioError(r.report);
        }
        return r.scenario;
      },
      py::arg("text"), py::arg("overrides") = std::vector<std::string>{});
  m.def(
      "validate",
      [](const std::string& source, const std::vector<std::string>& overrides) {
        const auto path = resolve_scenario(source);
        return issues_of(check_scenario_file(path ? *path : std::filesystem::path(source),
                                             overrides)
                             .report);
      },
      py::arg("source"), py::arg("overrides") = std::vector<std::string>{},
      "List of issues (dicts with kind, path, line, message); empty when valid.");
  m.def("_run", &run, py::arg("scenario"), py::arg("decimation") = std::nullopt);
  m.def(
      "run_to_directory",
      [](const Scenario& sc, const std::filesystem::path& out_dir, const std::string& stem) {
        RunOutcome r;
        {
          py::gil_scoped_release release;
          r = run_to_directory(sc, out_dir, sc.name, stem);
        }
        py::dict d;
        d["status"] = status_name(r.status);
        d["exit_code"] = exit_code(r.status);
        d["message"] = r.message;
        d["csv"] = r.csv_path;
        d["summary"] = r.summary_path;
        return d;
      },
      py::arg("scenario"), py::arg("out_dir"), py::arg("stem") = std::string{});
  m.def("csv_columns", &csv_columns);
  m.def("preset_dir", &preset_dir);
  m.def("list_presets", [] {
    std::vector<std::tuple<std::string, std::string>> out;
    for (const PresetInfo& p : list_presets()) {
      out.emplace_back(p.name, p.description);
    }
    return out;
  });

  m.def(
      "allocate",
      [](const Vec3& tau, const Vec4& w_hat, double alpha, double arm, double gain,
         double u_max, bool drop_failed) {
        ThrusterBank bank;
        bank.K = Vec4::Constant(gain);
        bank.W_hat = w_hat;
        bank.u_max = u_max;
        bank.validate();
        const ThrusterGeometry g = ThrusterGeometry::make(alpha, arm);
        const Allocation a = allocate(Wrench{tau(0), tau(1), tau(2)}, bank, g, {drop_failed});
        return py::make_tuple(a.clamped, a.saturated);
      },
      py::arg("tau"), py::arg("w_hat") = Vec4::Ones(), py::arg("alpha") = std::numbers::pi / 4.0,
      py::arg("arm") = 0.2, py::arg("gain") = 40.0, py::arg("u_max") = 1.0,
      py::arg("drop_failed") = true, "Thruster commands and a saturation flag for a wrench.");
  m.def(
      "achieved_wrench",
      [](const Vec4& u, const Vec4& w, double alpha, double arm, double gain) {
        ThrusterBank bank;
        bank.K = Vec4::Constant(gain);
        bank.W = w;
        return achieved_wrench(u, bank, ThrusterGeometry::make(alpha, arm)).vec();
      },
      py::arg("u"), py::arg("w") = Vec4::Ones(), py::arg("alpha") = std::numbers::pi / 4.0,
      py::arg("arm") = 0.2, py::arg("gain") = 40.0);
  m.def(
      "predict_sign_pattern",
      [](int thruster, double u_i, double psi, double alpha, double arm) {
        if (thruster < 1 || thruster > kNumThrusters) {
          throw py::value_error("thruster must be 1..4");
        }
        const SignPattern p =
            predict_sign_pattern(thruster, u_i, psi, ThrusterGeometry::make(alpha, arm));
        return py::make_tuple(p.s_x, p.s_y, p.s_psi);
      },
      py::arg("thruster"), py::arg("u_i"), py::arg("psi"),
      py::arg("alpha") = std::numbers::pi / 4.0, py::arg("arm") = 0.2);
}

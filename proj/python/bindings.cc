#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <string>
#include <tuple>
#include <vector>

#include "platoon/fuel_model.h"
#include "platoon/io.h"
#include "platoon/oracle.h"
#include "platoon/planner.h"
#include "platoon/road_graph.h"
#include "platoon/timing.h"

namespace py = pybind11;

namespace platoon {
namespace {

// A route over placeholder nodes, for the timing helpers.
Route anonymous_route(const std::vector<double>& edge_lengths_km) {
  std::vector<NodeId> nodes;
  for (std::size_t i = 0; i <= edge_lengths_km.size(); ++i) {
    nodes.push_back(NodeId{static_cast<std::int64_t>(i)});
  }
  return Route(nodes, edge_lengths_km);
}

std::vector<std::vector<std::int64_t>> node_ids(const std::vector<Route>& routes) {
  std::vector<std::vector<std::int64_t>> out;
  for (const Route& r : routes) {
    std::vector<std::int64_t> ids;
    for (NodeId n : r.nodes()) ids.push_back(n.value);
    out.push_back(std::move(ids));
  }
  return out;
}

std::vector<std::vector<std::string>> role_names(const PlanResult& r) {
  std::vector<std::vector<std::string>> out;
  for (const auto& roles : r.roles) {
    std::vector<std::string> names;
    for (PlatoonRole role : roles) names.emplace_back(to_string(role));
    out.push_back(std::move(names));
  }
  return out;
}

}  // namespace
}  // namespace platoon

PYBIND11_MODULE(_core, m) {
  using namespace platoon;
  m.doc() = "Truck platoon coordination and fuel-optimal speed planning";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<InfeasibleScenario>(m, "InfeasibleScenario",
                                             PyExc_RuntimeError);
  py::register_exception<InvalidScenario>(m, "InvalidScenario",
                                          PyExc_ValueError);
  py::register_exception<TooLarge>(m, "TooLarge", PyExc_RuntimeError);

  py::class_<Scenario>(m, "Scenario")
      .def_static("from_json", &parse_scenario, py::arg("text"))
      .def_static(
          "from_file",
          [](const std::string& path) {
            return parse_scenario(read_text_file(path));
          },
          py::arg("path"))
      .def("to_json", &serialize_scenario)
      .def_property_readonly(
          "truck_count", [](const Scenario& s) { return s.assignments.size(); })
      .def_property_readonly(
          "v_max_kmh", [](const Scenario& s) { return s.params.v_max_kmh; })
      .def_property_readonly("eta",
                             [](const Scenario& s) { return s.params.eta; });

  py::class_<PlanResult>(m, "PlanResult")
      .def_readonly("objective", &PlanResult::objective)
      .def_readonly("baseline_objective", &PlanResult::baseline_objective)
      .def_readonly("savings_fraction", &PlanResult::savings_fraction)
      .def_readonly("fuel_savings_fraction", &PlanResult::fuel_savings_fraction)
      .def_readonly("total_fuel_l", &PlanResult::total_fuel_l)
      .def_readonly("baseline_fuel_l", &PlanResult::baseline_fuel_l)
      .def_readonly("arrivals_h", &PlanResult::arrivals_h)
      .def_readonly("speeds_kmh", &PlanResult::speeds_kmh)
      .def_readonly("warnings", &PlanResult::warnings)
      .def_property_readonly(
          "routes", [](const PlanResult& r) { return node_ids(r.routes); })
      .def_property_readonly(
          "predecessors",
          [](const PlanResult& r) { return r.config.predecessors; })
      .def_property_readonly("roles", &role_names)
      .def_property_readonly(
          "configs_enumerated",
          [](const PlanResult& r) { return r.stats.configs_enumerated; })
      .def_property_readonly(
          "configs_feasible",
          [](const PlanResult& r) { return r.stats.configs_feasible; })
      .def_property_readonly(
          "truncated", [](const PlanResult& r) { return r.stats.truncated; })
      .def("to_json",
           [](const PlanResult& r) { return serialize_plan(make_plan_file(r)); })
      .def("trajectory_csv", &trajectory_csv);

  m.def(
      "plan",
      [](const Scenario& s, std::size_t max_configs, double kkt_tol,
         bool baseline_only, unsigned threads) {
        PlanOptions o;
        o.max_configs = max_configs;
        o.kkt_tol = kkt_tol;
        o.baseline_only = baseline_only;
        o.threads = threads;
        py::gil_scoped_release release;
        return plan(s, o);
      },
      py::arg("scenario"), py::arg("max_configs") = kDefaultMaxConfigs,
      py::arg("kkt_tol") = 1e-6, py::arg("baseline_only") = false,
      py::arg("threads") = 1u);

  m.def("solo_baseline", &solo_baseline, py::arg("scenario"));

  m.def(
      "shortest_path",
      [](const Scenario& s, std::int64_t source, std::int64_t target) {
        const PathResult p =
            shortest_path(s.network, NodeId{source}, NodeId{target});
        return std::make_tuple(node_ids({p.route}).front(), p.route.length(),
                               p.unique);
      },
      py::arg("scenario"), py::arg("source"), py::arg("target"),
      "Node ids, length in km and whether the path is unique.");

  m.def(
      "fuel_per_km",
      [](double v_kmh, double eta_eff, double rolling, double aero) {
        FuelParams p;
        p.rolling = rolling;
        p.aero = aero;
        return fuel_per_km(v_kmh, eta_eff, p);
      },
      py::arg("v_kmh"), py::arg("eta_eff") = 1.0, py::arg("rolling") = 1.0,
      py::arg("aero") = 1.0);

  m.def(
      "earliest_arrival",
      [](const std::vector<double>& edge_lengths_km, double start_h,
         double v_max_kmh) {
        return earliest_arrival(anonymous_route(edge_lengths_km), start_h,
                                v_max_kmh);
      },
      py::arg("edge_lengths_km"), py::arg("start_h"), py::arg("v_max_kmh"));

  m.def(
      "latest_arrival",
      [](const std::vector<double>& edge_lengths_km, double start_h,
         double deadline_h, double v_max_kmh) {
        return latest_arrival(anonymous_route(edge_lengths_km), start_h,
                              deadline_h, v_max_kmh);
      },
      py::arg("edge_lengths_km"), py::arg("start_h"), py::arg("deadline_h"),
      py::arg("v_max_kmh"));

  m.def(
      "brute_force_plan",
      [](const Scenario& s, int speed_levels) {
        OracleResult r;
        {
          py::gil_scoped_release release;
          r = brute_force_plan(s, GridSpec{speed_levels});
        }
        py::dict out;
        out["objective"] = r.objective;
        out["routes"] = node_ids(r.routes);
        out["arrivals_h"] = r.arrivals_h;
        out["patterns"] = r.patterns;
        return out;
      },
      py::arg("scenario"), py::arg("speed_levels") = 50);
}

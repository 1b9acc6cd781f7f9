#include "platoon/scenario.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "platoon/timing.h"

namespace platoon {

namespace {

std::string fmt_id(int id) { return "assignment " + std::to_string(id); }

}  // namespace

std::vector<Diagnostic> validate(const Scenario& scenario) {
  std::vector<Diagnostic> out;
  const FuelParams& p = scenario.params;
  auto bad_param = [&](const std::string& msg) {
    out.push_back({Diagnostic::Kind::kInvalidParams, 0, msg});
  };
  if (!(p.rolling >= 0.0) || !std::isfinite(p.rolling)) {
    bad_param("F_r must be non-negative");
  }
  if (!(p.aero > 0.0) || !std::isfinite(p.aero)) {
    bad_param("F_a must be positive");
  }
  if (!(p.eta > 0.0 && p.eta <= 1.0)) bad_param("eta must lie in (0, 1]");
  if (!(p.v_max_kmh > 0.0) || !std::isfinite(p.v_max_kmh)) {
    bad_param("v_max must be positive");
  }

  const std::size_t k = scenario.assignments.size();
  std::vector<int> ids;
  for (const auto& a : scenario.assignments) ids.push_back(a.id);
  std::sort(ids.begin(), ids.end());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (ids[i] != static_cast<int>(i) + 1) {
      out.push_back({Diagnostic::Kind::kInvalidAssignment, 0,
                     "assignment ids must be exactly 1.." + std::to_string(k)});
      break;
    }
  }

  for (const auto& a : scenario.assignments) {
    auto bad = [&](Diagnostic::Kind kind, const std::string& msg) {
      out.push_back({kind, a.id, fmt_id(a.id) + ": " + msg});
    };
    if (!std::isfinite(a.start_time_h) || !std::isfinite(a.deadline_h)) {
      bad(Diagnostic::Kind::kInvalidAssignment, "times must be finite");
      continue;
    }
    if (!(a.deadline_h > a.start_time_h)) {
      bad(Diagnostic::Kind::kInvalidAssignment,
          "deadline must be later than the start time");
    }
    if (a.origin == a.destination) {
      bad(Diagnostic::Kind::kInvalidAssignment,
          "origin and destination must differ");
      continue;
    }
    bool known = true;
    for (NodeId n : {a.origin, a.destination}) {
      if (!scenario.network.contains(n)) {
        bad(Diagnostic::Kind::kUnknownNode,
            "unknown node " + std::to_string(n.value));
        known = false;
      }
    }
    if (!known || !(p.v_max_kmh > 0.0)) continue;
    try {
      const Route route =
          shortest_path(scenario.network, a.origin, a.destination).route;
      const double earliest =
          earliest_arrival(route, a.start_time_h, p.v_max_kmh).back();
      if (earliest > a.deadline_h + kTimeTolerance) {
        std::ostringstream msg;
        msg.precision(12);
        msg << "infeasible: earliest arrival " << earliest
            << " h is after the deadline " << a.deadline_h << " h";
        bad(Diagnostic::Kind::kInfeasible, msg.str());
      }
    } catch (const UnreachableTarget& e) {
      bad(Diagnostic::Kind::kUnreachable, e.what());
    }
  }
  return out;
}

double reference_deadline(const RoadNetwork& network,
                          const TransportAssignment& assignment,
                          double reference_kmh) {
  const Route route =
      shortest_path(network, assignment.origin, assignment.destination).route;
  return assignment.start_time_h + route.length() / reference_kmh;
}

std::vector<TransportAssignment> assignments_by_id(const Scenario& scenario) {
  std::vector<TransportAssignment> out = scenario.assignments;
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.id < b.id; });
  return out;
}

}  // namespace platoon

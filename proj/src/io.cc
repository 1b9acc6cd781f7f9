#include "platoon/io.h"

#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace platoon {

namespace {

using nlohmann::json;

void require_object(const json& j, std::string_view what) {
  if (!j.is_object()) throw ParseError(std::string(what) + " must be an object");
}

void reject_unknown(const json& j, std::string_view what,
                    std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || key == a;
    if (!ok) {
      throw ParseError("unknown key '" + key + "' in " + std::string(what));
    }
  }
}

template <typename T>
T get(const json& j, const char* key, std::string_view what) {
  if (!j.contains(key)) {
    throw ParseError(std::string(what) + " is missing '" + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ParseError(std::string(what) + "." + key + ": " + e.what());
  }
}

template <typename T>
T get_or(const json& j, const char* key, T fallback, std::string_view what) {
  return j.contains(key) ? get<T>(j, key, what) : fallback;
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
}

}  // namespace

Scenario parse_scenario(std::string_view json_text) {
  const json doc = parse_json(json_text);
  require_object(doc, "scenario");
  reject_unknown(doc, "scenario",
                 {"nodes", "edges", "params", "assignments", "deadline_rule"});

  std::vector<NodeId> nodes;
  for (auto id : get<std::vector<std::int64_t>>(doc, "nodes", "scenario")) {
    nodes.push_back(NodeId{id});
  }
  std::vector<Edge> edges;
  const json& jedges = doc.contains("edges") ? doc.at("edges") : json::array();
  if (!jedges.is_array()) throw ParseError("edges must be a list");
  for (const json& e : jedges) {
    require_object(e, "edge");
    reject_unknown(e, "edge", {"from", "to", "length_km"});
    edges.push_back({NodeId{get<std::int64_t>(e, "from", "edge")},
                     NodeId{get<std::int64_t>(e, "to", "edge")},
                     get<double>(e, "length_km", "edge")});
  }

  Scenario s;
  try {
    s.network = RoadNetwork(std::move(nodes), std::move(edges));
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("invalid network: ") + e.what());
  }

  if (doc.contains("params")) {
    const json& p = doc.at("params");
    require_object(p, "params");
    reject_unknown(p, "params", {"v_max_kmh", "eta", "F_r", "F_a"});
    s.params.v_max_kmh = get_or(p, "v_max_kmh", s.params.v_max_kmh, "params");
    s.params.eta = get_or(p, "eta", s.params.eta, "params");
    s.params.rolling = get_or(p, "F_r", s.params.rolling, "params");
    s.params.aero = get_or(p, "F_a", s.params.aero, "params");
  }

  std::optional<double> reference_kmh;
  if (doc.contains("deadline_rule")) {
    const json& r = doc.at("deadline_rule");
    require_object(r, "deadline_rule");
    reject_unknown(r, "deadline_rule", {"reference_speed_kmh"});
    reference_kmh = get<double>(r, "reference_speed_kmh", "deadline_rule");
    if (!(*reference_kmh > 0.0)) {
      throw ParseError("deadline_rule.reference_speed_kmh must be positive");
    }
  }

  const json& jassign = doc.contains("assignments") ? doc.at("assignments")
                                                    : json::array();
  if (!jassign.is_array()) throw ParseError("assignments must be a list");
  for (const json& a : jassign) {
    require_object(a, "assignment");
    reject_unknown(a, "assignment",
                   {"id", "origin", "destination", "start_time_h", "deadline_h"});
    TransportAssignment t;
    t.id = get<int>(a, "id", "assignment");
    t.origin = NodeId{get<std::int64_t>(a, "origin", "assignment")};
    t.destination = NodeId{get<std::int64_t>(a, "destination", "assignment")};
    t.start_time_h = get<double>(a, "start_time_h", "assignment");
    if (a.contains("deadline_h")) {
      t.deadline_h = get<double>(a, "deadline_h", "assignment");
    } else if (reference_kmh) {
      try {
        t.deadline_h = reference_deadline(s.network, t, *reference_kmh);
      } catch (const std::exception& e) {
        throw ParseError("assignment " + std::to_string(t.id) +
                         ": cannot derive deadline: " + e.what());
      }
    } else {
      throw ParseError("assignment " + std::to_string(t.id) +
                       " has no deadline_h and there is no deadline_rule");
    }
    s.assignments.push_back(t);
  }
  return s;
}

std::string serialize_scenario(const Scenario& scenario) {
  json doc;
  json nodes = json::array();
  for (NodeId n : scenario.network.nodes()) nodes.push_back(n.value);
  doc["nodes"] = nodes;
  json edges = json::array();
  for (const Edge& e : scenario.network.edges()) {
    edges.push_back(
        {{"from", e.from.value}, {"to", e.to.value}, {"length_km", e.length_km}});
  }
  doc["edges"] = edges;
  doc["params"] = {{"v_max_kmh", scenario.params.v_max_kmh},
                   {"eta", scenario.params.eta},
                   {"F_r", scenario.params.rolling},
                   {"F_a", scenario.params.aero}};
  json assignments = json::array();
  for (const auto& a : scenario.assignments) {
    assignments.push_back({{"id", a.id},
                           {"origin", a.origin.value},
                           {"destination", a.destination.value},
                           {"start_time_h", a.start_time_h},
                           {"deadline_h", a.deadline_h}});
  }
  doc["assignments"] = assignments;
  return doc.dump(2) + "\n";
}

PlanFile make_plan_file(const PlanResult& result) {
  PlanFile f;
  for (std::size_t k = 0; k < result.routes.size(); ++k) {
    TruckPlan t;
    t.id = static_cast<int>(k) + 1;
    for (NodeId n : result.routes[k].nodes()) t.route.push_back(n.value);
    t.arrival_times_h = result.arrivals_h[k];
    t.speeds_kmh = result.speeds_kmh[k];
    t.predecessors = result.config.predecessors[k];
    for (PlatoonRole r : result.roles[k]) t.roles.emplace_back(to_string(r));
    f.trucks.push_back(std::move(t));
  }
  PlanSummary& s = f.summary;
  s.objective = result.objective;
  s.baseline_objective = result.baseline_objective;
  s.savings_fraction = result.savings_fraction;
  s.fuel_savings_fraction = result.fuel_savings_fraction;
  s.total_fuel_l = result.total_fuel_l;
  s.baseline_fuel_l = result.baseline_fuel_l;
  s.configs_enumerated = result.stats.configs_enumerated;
  s.configs_feasible = result.stats.configs_feasible;
  s.configs_solved = result.stats.configs_solved;
  s.truncated = result.stats.truncated;
  return f;
}

std::string serialize_plan(const PlanFile& plan) {
  json trucks = json::array();
  for (const TruckPlan& t : plan.trucks) {
    trucks.push_back({{"id", t.id},
                      {"route", t.route},
                      {"arrival_times_h", t.arrival_times_h},
                      {"speeds_kmh", t.speeds_kmh},
                      {"predecessors", t.predecessors},
                      {"roles", t.roles}});
  }
  const PlanSummary& s = plan.summary;
  json doc;
  doc["trucks"] = trucks;
  doc["summary"] = {{"objective", s.objective},
                    {"baseline_objective", s.baseline_objective},
                    {"savings_fraction", s.savings_fraction},
                    {"fuel_savings_fraction", s.fuel_savings_fraction},
                    {"total_fuel_l", s.total_fuel_l},
                    {"baseline_fuel_l", s.baseline_fuel_l},
                    {"configs_enumerated", s.configs_enumerated},
                    {"configs_feasible", s.configs_feasible},
                    {"configs_solved", s.configs_solved},
                    {"truncated", s.truncated}};
  return doc.dump(2) + "\n";
}

PlanFile parse_plan(std::string_view json_text) {
  const json doc = parse_json(json_text);
  require_object(doc, "plan");
  reject_unknown(doc, "plan", {"trucks", "summary"});
  PlanFile f;
  const json& trucks = doc.contains("trucks") ? doc.at("trucks") : json::array();
  if (!trucks.is_array()) throw ParseError("trucks must be a list");
  for (const json& t : trucks) {
    require_object(t, "truck");
    reject_unknown(t, "truck",
                   {"id", "route", "arrival_times_h", "speeds_kmh",
                    "predecessors", "roles"});
    TruckPlan p;
    p.id = get<int>(t, "id", "truck");
    p.route = get<std::vector<std::int64_t>>(t, "route", "truck");
    p.arrival_times_h = get<std::vector<double>>(t, "arrival_times_h", "truck");
    p.speeds_kmh = get<std::vector<double>>(t, "speeds_kmh", "truck");
    p.predecessors = get<std::vector<int>>(t, "predecessors", "truck");
    p.roles = get<std::vector<std::string>>(t, "roles", "truck");
    f.trucks.push_back(std::move(p));
  }
  const json& s = doc.at("summary");
  require_object(s, "summary");
  reject_unknown(s, "summary",
                 {"objective", "baseline_objective", "savings_fraction",
                  "fuel_savings_fraction", "total_fuel_l", "baseline_fuel_l",
                  "configs_enumerated", "configs_feasible", "configs_solved",
                  "truncated"});
  PlanSummary& m = f.summary;
  m.objective = get<double>(s, "objective", "summary");
  m.baseline_objective = get<double>(s, "baseline_objective", "summary");
  m.savings_fraction = get<double>(s, "savings_fraction", "summary");
  m.fuel_savings_fraction = get<double>(s, "fuel_savings_fraction", "summary");
  m.total_fuel_l = get<double>(s, "total_fuel_l", "summary");
  m.baseline_fuel_l = get<double>(s, "baseline_fuel_l", "summary");
  m.configs_enumerated = get<std::uint64_t>(s, "configs_enumerated", "summary");
  m.configs_feasible = get<std::uint64_t>(s, "configs_feasible", "summary");
  m.configs_solved = get<std::uint64_t>(s, "configs_solved", "summary");
  m.truncated = get<bool>(s, "truncated", "summary");
  return f;
}

std::string trajectory_csv(const PlanResult& result) {
  std::ostringstream out;
  out.precision(17);
  out << "truck_id,node_index,node_id,cumulative_km,arrival_time_h\n";
  for (std::size_t k = 0; k < result.routes.size(); ++k) {
    const Route& r = result.routes[k];
    double km = 0.0;
    for (std::size_t i = 0; i < r.nodes().size(); ++i) {
      if (i > 0) km += r.edge_lengths()[i - 1];
      out << k + 1 << ',' << i << ',' << r.nodes()[i].value << ',' << km << ','
          << result.arrivals_h[k][i] << '\n';
    }
  }
  return out.str();
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw std::runtime_error("cannot read " + path.string());
  return buf.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << text;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

}  // namespace platoon

#ifndef PLATOON_IO_H_
#define PLATOON_IO_H_

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "platoon/planner.h"
#include "platoon/scenario.h"

namespace platoon {

/// Malformed scenario or plan document.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Scenario JSON: nodes, edges, optional params, assignments and an optional
/// deadline_rule {reference_speed_kmh} that supplies deadline_h for
/// assignments without one. Unknown keys are rejected.
Scenario parse_scenario(std::string_view json_text);
/// Always writes explicit deadlines and params.
std::string serialize_scenario(const Scenario& scenario);

struct TruckPlan {
  int id = 0;
  std::vector<std::int64_t> route;
  std::vector<double> arrival_times_h;
  std::vector<double> speeds_kmh;
  std::vector<int> predecessors;
  std::vector<std::string> roles;

  bool operator==(const TruckPlan&) const = default;
};

struct PlanSummary {
  double objective = 0.0;
  double baseline_objective = 0.0;
  double savings_fraction = 0.0;
  double fuel_savings_fraction = 0.0;
  double total_fuel_l = 0.0;
  double baseline_fuel_l = 0.0;
  std::uint64_t configs_enumerated = 0;
  std::uint64_t configs_feasible = 0;
  std::uint64_t configs_solved = 0;
  bool truncated = false;

  bool operator==(const PlanSummary&) const = default;
};

struct PlanFile {
  std::vector<TruckPlan> trucks;
  PlanSummary summary;

  bool operator==(const PlanFile&) const = default;
};

PlanFile make_plan_file(const PlanResult& result);
std::string serialize_plan(const PlanFile& plan);
PlanFile parse_plan(std::string_view json_text);

/// truck_id,node_index,node_id,cumulative_km,arrival_time_h; one row per
/// truck per route node.
std::string trajectory_csv(const PlanResult& result);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace platoon

#endif  // PLATOON_IO_H_

#ifndef PLATOON_PLANNER_H_
#define PLATOON_PLANNER_H_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "platoon/feasibility.h"
#include "platoon/fuel_model.h"
#include "platoon/platoon_config.h"
#include "platoon/road_graph.h"
#include "platoon/scenario.h"
#include "platoon/speed_solver.h"
#include "platoon/timing.h"

namespace platoon {

/// Some assignment cannot meet its deadline even alone at v_max.
class InfeasibleScenario : public std::runtime_error {
 public:
  InfeasibleScenario(const std::string& message, std::vector<int> ids)
      : std::runtime_error(message), assignment_ids(std::move(ids)) {}
  std::vector<int> assignment_ids;
};

/// Malformed scenario (bad ids, unknown nodes, unreachable destinations...).
class InvalidScenario : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct PlanOptions {
  std::size_t max_configs = kDefaultMaxConfigs;
  double kkt_tol = 1e-6;
  bool baseline_only = false;
  unsigned threads = 1;  // 0: one per hardware thread
  bool keep_records = false;
};

struct PlanStats {
  std::size_t configs_enumerated = 0;
  std::size_t configs_feasible = 0;
  std::size_t configs_solved = 0;
  bool truncated = false;
  KktResiduals worst_residuals;
};

/// One configuration that passed pruning, with its solve.
struct ConfigRecord {
  PlatoonConfiguration config;
  std::vector<TimeWindows> pruned_windows;
  SolverResult solution;
};

struct PlanResult {
  std::vector<Route> routes;
  PlatoonConfiguration config;
  SpeedPlan plan;
  std::vector<std::vector<double>> arrivals_h;
  std::vector<std::vector<double>> speeds_kmh;
  std::vector<std::vector<PlatoonRole>> roles;

  double objective = 0.0;  // sum eta W^3 / T^2
  double baseline_objective = 0.0;
  double total_fuel_l = 0.0;
  double baseline_fuel_l = 0.0;
  double savings_fraction = 0.0;       // on the objective
  double fuel_savings_fraction = 0.0;  // on total fuel including F_r

  PlanStats stats;
  std::vector<std::string> warnings;
  std::vector<ConfigRecord> records;  // filled when keep_records is set
};

/// Routes every truck on its shortest path, enumerates platoon
/// configurations, prunes them, solves the speed program of each survivor and
/// keeps the lowest objective. Ties go to the configuration enumerated first.
PlanResult plan(const Scenario& scenario, const PlanOptions& options = {});

/// Every truck alone at its own optimal speeds.
PlanResult solo_baseline(const Scenario& scenario);

/// Validates and returns shortest-path routes ordered by truck id.
std::vector<Route> plan_routes(const Scenario& scenario,
                               std::vector<std::string>* warnings = nullptr);

}  // namespace platoon

#endif  // PLATOON_PLANNER_H_

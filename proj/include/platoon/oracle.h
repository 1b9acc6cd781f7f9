#ifndef PLATOON_ORACLE_H_
#define PLATOON_ORACLE_H_

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "platoon/platoon_config.h"
#include "platoon/road_graph.h"
#include "platoon/scenario.h"
#include "platoon/timing.h"

namespace platoon {

/// The instance exceeds the brute-force size guards.
class TooLarge : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kOracleMaxTrucks = 3;
inline constexpr std::size_t kOracleMaxEdges = 6;

struct GridSpec {
  int speed_levels = 50;            // grid intervals per arrival window
  double coincidence_tol_h = 1e-6;  // must match the fuel model
};

struct OracleResult {
  double objective = 0.0;  // sum eta W^3 / T^2, eta by coincidence
  std::vector<Route> routes;
  SpeedPlan plan;
  std::vector<std::vector<double>> arrivals_h;
  std::size_t patterns = 0;  // coincidence patterns searched
};

/// Exhaustive search over every platoon coincidence pattern (for each truck
/// pair, any subset of their common edges) and over arrival times on a grid
/// of `speed_levels` + 1 points per route node spanning its arrival window.
/// Each pattern is minimized exactly over the grid by variable elimination;
/// the winner is scored with the coincidence rule.
OracleResult brute_force_plan(const Scenario& scenario,
                              const GridSpec& grid = {});

/// True iff arrival times on the grid {window ends} + {multiples of
/// `time_grid_step_h` inside the window} satisfy v_max, the deadlines and
/// equal meeting times for `config`.
bool brute_force_feasibility(const PlatoonConfiguration& config,
                             const Scenario& scenario,
                             double time_grid_step_h);

}  // namespace platoon

#endif  // PLATOON_ORACLE_H_

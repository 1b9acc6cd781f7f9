#ifndef PLATOON_FEASIBILITY_H_
#define PLATOON_FEASIBILITY_H_

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "platoon/platoon_config.h"
#include "platoon/road_graph.h"
#include "platoon/timing.h"

namespace platoon {

enum class FeasibilityStatus { kFeasible, kInfeasible };

/// Arrival windows after pruning. On kInfeasible, `truck` and `node_index`
/// locate the first window that emptied.
struct PrunedWindows {
  std::vector<TimeWindows> windows;
  FeasibilityStatus status = FeasibilityStatus::kFeasible;
  int truck = 0;
  std::size_t node_index = 0;
  std::size_t sweeps = 0;

  bool feasible() const { return status == FeasibilityStatus::kFeasible; }
};

/// The pruning did not settle within its sweep budget.
class PruningDidNotConverge : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Fixpoint pruning of arrival windows under a configuration: platooning
/// trucks get the intersection of their windows at both ends of every shared
/// edge, then the v_max bound is propagated along both routes. Sweeps visit
/// trucks by ascending id and nodes by route position until nothing moves by
/// more than kTimeTolerance.
PrunedWindows check_feasibility(const PlatoonConfiguration& config,
                                std::span<const Route> routes,
                                std::vector<TimeWindows> initial,
                                double v_max_kmh);

}  // namespace platoon

#endif  // PLATOON_FEASIBILITY_H_

#ifndef PLATOON_SCENARIO_H_
#define PLATOON_SCENARIO_H_

#include <string>
#include <vector>

#include "platoon/road_graph.h"

namespace platoon {

/// One truck's task. Times are hours on a free real axis (negative start
/// times are allowed).
struct TransportAssignment {
  int id = 0;  // 1..K; higher ids lead platoons
  NodeId origin;
  NodeId destination;
  double start_time_h = 0.0;
  double deadline_h = 0.0;
};

/// Fuel per km is rolling + eta_eff * aero * v^2.
struct FuelParams {
  double rolling = 1.0;    // F_r, l/km
  double aero = 1.0;       // F_a, l h^2 / km^3
  double eta = 0.6;        // follower air-drag factor
  double v_max_kmh = 90.0;
};

struct Scenario {
  RoadNetwork network;
  std::vector<TransportAssignment> assignments;
  FuelParams params;
};

struct Diagnostic {
  enum class Kind {
    kInvalidParams,
    kInvalidAssignment,
    kUnknownNode,
    kUnreachable,
    kInfeasible,
  };
  Kind kind;
  int assignment_id = 0;  // 0 when not tied to an assignment
  std::string message;
};

/// Empty iff the scenario is well formed and every assignment can meet its
/// deadline driving alone on its shortest path at v_max.
std::vector<Diagnostic> validate(const Scenario& scenario);

/// Arrival time when driving the whole shortest path at `reference_kmh`.
double reference_deadline(const RoadNetwork& network,
                          const TransportAssignment& assignment,
                          double reference_kmh);

/// Assignments ordered by id (position k-1 holds id k). Assumes validate()
/// passed.
std::vector<TransportAssignment> assignments_by_id(const Scenario& scenario);

}  // namespace platoon

#endif  // PLATOON_SCENARIO_H_

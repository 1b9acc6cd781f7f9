#ifndef PLATOON_TIMING_H_
#define PLATOON_TIMING_H_

#include <span>
#include <stdexcept>
#include <vector>

#include "platoon/road_graph.h"

namespace platoon {

/// Absolute tolerance (hours) for all arrival-window comparisons.
inline constexpr double kTimeTolerance = 1e-9;

class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Earliest/latest arrival per route node.
struct TimeWindows {
  std::vector<double> lower;
  std::vector<double> upper;

  bool feasible(double tol = kTimeTolerance) const;
};

/// t[0] = t_start, t[i] = t[i-1] + traversal[i-1].
std::vector<double> arrival_times(const Route& route, double t_start,
                                  std::span<const double> traversal_h);

/// All edges at v_max.
std::vector<double> earliest_arrival(const Route& route, double t_start,
                                     double v_max_kmh);

/// Backward from the deadline at v_max. The first node is pinned to t_start;
/// the second node only gets what the backward pass gives it.
std::vector<double> latest_arrival(const Route& route, double t_start,
                                   double t_deadline, double v_max_kmh);

TimeWindows time_windows(const Route& route, double t_start, double t_deadline,
                         double v_max_kmh);

/// Traversal times per truck (position k-1 holds truck k) plus the start
/// times they are measured from.
struct SpeedPlan {
  std::vector<double> start_times_h;
  std::vector<std::vector<double>> traversal_h;

  std::vector<std::vector<double>> arrivals(
      std::span<const Route> routes) const;
  std::vector<std::vector<double>> speeds_kmh(
      std::span<const Route> routes) const;
};

}  // namespace platoon

#endif  // PLATOON_TIMING_H_

#ifndef PLATOON_FUEL_MODEL_H_
#define PLATOON_FUEL_MODEL_H_

#include <span>
#include <stdexcept>
#include <vector>

#include "platoon/platoon_config.h"
#include "platoon/road_graph.h"
#include "platoon/scenario.h"
#include "platoon/timing.h"

namespace platoon {

enum class PlatoonRole { kSolo, kLeader, kFollower };

const char* to_string(PlatoonRole role);

/// Two trucks platoon on an edge when their entry times and speeds agree
/// within these tolerances.
inline constexpr double kCoincidenceTimeTol = 1e-6;   // h
inline constexpr double kCoincidenceSpeedTol = 1e-6;  // km/h

class InconsistentPlan : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Liters per km: F_r + eta_eff * F_a * v^2.
double fuel_per_km(double v_kmh, double eta_eff, const FuelParams& params);

/// Per truck, per edge drag factor from the time/speed coincidence rule: eta
/// if some higher-id truck enters the same edge at the same time with the
/// same speed, 1 otherwise.
std::vector<std::vector<double>> coincidence_eta(std::span<const Route> routes,
                                                 const SpeedPlan& plan,
                                                 double eta);

/// Total liters over all trucks and edges. Follower discounts come from the
/// coincidence rule; when `config` is given, every merge it claims must be
/// matched by coinciding times and speeds, else InconsistentPlan.
double total_fuel(std::span<const Route> routes, const SpeedPlan& plan,
                  const PlatoonConfiguration* config, const FuelParams& params);

/// Sum of eta(k,i) W^3 / T^2 with eta taken from the configuration labels
/// (F_a factored out, F_r dropped).
double speed_dependent_objective(std::span<const Route> routes,
                                 const SpeedPlan& plan,
                                 const PlatoonConfiguration& config,
                                 double eta);

/// Solo, leader (highest id of a platoon) or follower, per truck and edge.
std::vector<std::vector<PlatoonRole>> platoon_roles(
    const PlatoonConfiguration& config, std::span<const Route> routes);

}  // namespace platoon

#endif  // PLATOON_FUEL_MODEL_H_

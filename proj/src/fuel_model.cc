#include "platoon/fuel_model.h"

#include <cmath>
#include <string>

namespace platoon {

const char* to_string(PlatoonRole role) {
  switch (role) {
    case PlatoonRole::kSolo:
      return "solo";
    case PlatoonRole::kLeader:
      return "leader";
    case PlatoonRole::kFollower:
      return "follower";
  }
  return "unknown";
}

double fuel_per_km(double v_kmh, double eta_eff, const FuelParams& params) {
  return params.rolling + eta_eff * params.aero * v_kmh * v_kmh;
}

namespace {

bool coincide(double t1, double v1, double t2, double v2) {
  return std::abs(t1 - t2) <= kCoincidenceTimeTol &&
         std::abs(v1 - v2) <= kCoincidenceSpeedTol;
}

void check_shape(std::span<const Route> routes, const SpeedPlan& plan) {
  if (plan.traversal_h.size() != routes.size() ||
      plan.start_times_h.size() != routes.size()) {
    throw DimensionMismatch("speed plan covers " +
                            std::to_string(plan.traversal_h.size()) +
                            " trucks, routes " + std::to_string(routes.size()));
  }
}

}  // namespace

std::vector<std::vector<double>> coincidence_eta(std::span<const Route> routes,
                                                 const SpeedPlan& plan,
                                                 double eta) {
  check_shape(routes, plan);
  const auto t = plan.arrivals(routes);
  const auto v = plan.speeds_kmh(routes);
  std::vector<std::vector<double>> out(routes.size());
  for (std::size_t k = 0; k < routes.size(); ++k) {
    out[k].assign(routes[k].edge_count(), 1.0);
    for (std::size_t i = 0; i < routes[k].edge_count(); ++i) {
      const Edge e = routes[k].edge(i);
      for (std::size_t other = k + 1; other < routes.size(); ++other) {
        auto j = routes[other].index_of(e.from);
        if (!j || *j + 1 >= routes[other].nodes().size() ||
            routes[other].nodes()[*j + 1] != e.to) {
          continue;
        }
        if (coincide(t[k][i], v[k][i], t[other][*j], v[other][*j])) {
          out[k][i] = eta;
          break;
        }
      }
    }
  }
  return out;
}

double total_fuel(std::span<const Route> routes, const SpeedPlan& plan,
                  const PlatoonConfiguration* config, const FuelParams& params) {
  const auto etas = coincidence_eta(routes, plan, params.eta);
  const auto v = plan.speeds_kmh(routes);
  if (config) {
    const auto t = plan.arrivals(routes);
    for (std::size_t k = 0; k < routes.size(); ++k) {
      for (std::size_t i = 0; i < routes[k].edge_count(); ++i) {
        const int p = config->predecessors.at(k).at(i);
        if (p == static_cast<int>(k) + 1) continue;
        const Route& lead = routes[p - 1];
        auto j = lead.index_of(routes[k].nodes()[i]);
        if (!j || *j + 1 >= lead.nodes().size() ||
            lead.nodes()[*j + 1] != routes[k].nodes()[i + 1] ||
            !coincide(t[k][i], v[k][i], t[p - 1][*j], v[p - 1][*j])) {
          throw InconsistentPlan(
              "truck " + std::to_string(k + 1) + " is configured to follow " +
              std::to_string(p) + " on edge " + std::to_string(i) +
              " but their entry times or speeds differ");
        }
      }
    }
  }
  double liters = 0.0;
  for (std::size_t k = 0; k < routes.size(); ++k) {
    const auto& w = routes[k].edge_lengths();
    for (std::size_t i = 0; i < w.size(); ++i) {
      liters += w[i] * fuel_per_km(v[k][i], etas[k][i], params);
    }
  }
  return liters;
}

double speed_dependent_objective(std::span<const Route> routes,
                                 const SpeedPlan& plan,
                                 const PlatoonConfiguration& config,
                                 double eta) {
  check_shape(routes, plan);
  double sum = 0.0;
  for (std::size_t k = 0; k < routes.size(); ++k) {
    const auto& w = routes[k].edge_lengths();
    for (std::size_t i = 0; i < w.size(); ++i) {
      const double factor =
          config.predecessors[k][i] == static_cast<int>(k) + 1 ? 1.0 : eta;
      const double T = plan.traversal_h[k][i];
      sum += factor * w[i] * w[i] * w[i] / (T * T);
    }
  }
  return sum;
}

std::vector<std::vector<PlatoonRole>> platoon_roles(
    const PlatoonConfiguration& config, std::span<const Route> routes) {
  std::vector<std::vector<PlatoonRole>> roles;
  for (const auto& l : config.predecessors) {
    roles.emplace_back(l.size(), PlatoonRole::kSolo);
  }
  for (std::size_t k = 0; k < config.predecessors.size(); ++k) {
    for (std::size_t i = 0; i < config.predecessors[k].size(); ++i) {
      const int p = config.predecessors[k][i];
      if (p == static_cast<int>(k) + 1) continue;
      roles[k][i] = PlatoonRole::kFollower;
      const Route& lead = routes[p - 1];
      if (auto j = lead.index_of(routes[k].nodes()[i]);
          j && *j < lead.edge_count() && roles[p - 1][*j] == PlatoonRole::kSolo) {
        roles[p - 1][*j] = PlatoonRole::kLeader;
      }
    }
  }
  return roles;
}

}  // namespace platoon

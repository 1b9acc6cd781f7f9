#include "platoon/timing.h"

#include <string>

namespace platoon {

bool TimeWindows::feasible(double tol) const {
  for (std::size_t i = 0; i < lower.size(); ++i) {
    if (lower[i] > upper[i] + tol) return false;
  }
  return true;
}

std::vector<double> arrival_times(const Route& route, double t_start,
                                  std::span<const double> traversal_h) {
  if (traversal_h.size() != route.edge_count()) {
    throw DimensionMismatch("route has " + std::to_string(route.edge_count()) +
                            " edges but " + std::to_string(traversal_h.size()) +
                            " traversal times were given");
  }
  std::vector<double> t{t_start};
  t.reserve(traversal_h.size() + 1);
  for (double dt : traversal_h) t.push_back(t.back() + dt);
  return t;
}

std::vector<double> earliest_arrival(const Route& route, double t_start,
                                     double v_max_kmh) {
  std::vector<double> t{t_start};
  for (double w : route.edge_lengths()) t.push_back(t.back() + w / v_max_kmh);
  return t;
}

std::vector<double> latest_arrival(const Route& route, double t_start,
                                   double t_deadline, double v_max_kmh) {
  const std::size_t n = route.nodes().size();
  std::vector<double> t(n, t_start);
  if (n < 2) return t;
  const auto& w = route.edge_lengths();
  t[n - 1] = t_deadline;
  for (std::size_t i = n - 1; i >= 2; --i) {
    t[i - 1] = t[i] - w[i - 1] / v_max_kmh;
  }
  t[0] = t_start;
  return t;
}

TimeWindows time_windows(const Route& route, double t_start, double t_deadline,
                         double v_max_kmh) {
  return {earliest_arrival(route, t_start, v_max_kmh),
          latest_arrival(route, t_start, t_deadline, v_max_kmh)};
}

std::vector<std::vector<double>> SpeedPlan::arrivals(
    std::span<const Route> routes) const {
  std::vector<std::vector<double>> out;
  for (std::size_t k = 0; k < routes.size(); ++k) {
    out.push_back(arrival_times(routes[k], start_times_h[k], traversal_h[k]));
  }
  return out;
}

std::vector<std::vector<double>> SpeedPlan::speeds_kmh(
    std::span<const Route> routes) const {
  std::vector<std::vector<double>> out;
  for (std::size_t k = 0; k < routes.size(); ++k) {
    const auto& w = routes[k].edge_lengths();
    if (w.size() != traversal_h[k].size()) {
      throw DimensionMismatch("speed plan does not match route of truck " +
                              std::to_string(k + 1));
    }
    std::vector<double> v;
    for (std::size_t i = 0; i < w.size(); ++i) {
      v.push_back(w[i] / traversal_h[k][i]);
    }
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace platoon

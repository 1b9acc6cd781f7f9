#include "platoon/feasibility.h"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

namespace platoon {

namespace {

struct Pruner {
  std::span<const Route> routes;
  std::vector<TimeWindows>& w;
  double v_max;
  double moved = 0.0;

  void raise_lower(std::size_t k, std::size_t i, double value) {
    double& lo = w[k].lower[i];
    if (value > lo) {
      moved = std::max(moved, value - lo);
      lo = value;
    }
  }
  void cut_upper(std::size_t k, std::size_t i, double value) {
    double& hi = w[k].upper[i];
    if (value < hi) {
      moved = std::max(moved, hi - value);
      hi = value;
    }
  }

  void intersect(std::size_t k, std::size_t i, std::size_t p, std::size_t j) {
    const double lo = std::max(w[k].lower[i], w[p].lower[j]);
    const double hi = std::min(w[k].upper[i], w[p].upper[j]);
    raise_lower(k, i, lo);
    raise_lower(p, j, lo);
    cut_upper(k, i, hi);
    cut_upper(p, j, hi);
  }

  // The v_max bound along one route, both directions.
  void propagate(std::size_t k) {
    const auto& len = routes[k].edge_lengths();
    for (std::size_t i = 0; i < len.size(); ++i) {
      raise_lower(k, i + 1, w[k].lower[i] + len[i] / v_max);
    }
    for (std::size_t i = len.size(); i-- > 0;) {
      cut_upper(k, i, w[k].upper[i + 1] - len[i] / v_max);
    }
  }

  std::optional<std::size_t> empty_node(std::size_t k) const {
    for (std::size_t i = 0; i < w[k].lower.size(); ++i) {
      if (w[k].lower[i] > w[k].upper[i] + kTimeTolerance) return i;
    }
    return std::nullopt;
  }
};

}  // namespace

PrunedWindows check_feasibility(const PlatoonConfiguration& config,
                                std::span<const Route> routes,
                                std::vector<TimeWindows> initial,
                                double v_max_kmh) {
  PrunedWindows out;
  out.windows = std::move(initial);
  Pruner pruner{routes, out.windows, v_max_kmh};

  auto infeasible = [&](std::size_t k, std::size_t node) {
    out.status = FeasibilityStatus::kInfeasible;
    out.truck = static_cast<int>(k) + 1;
    out.node_index = node;
    return out;
  };

  for (std::size_t k = 0; k < routes.size(); ++k) {
    if (auto node = pruner.empty_node(k)) return infeasible(k, *node);
  }

  std::size_t total_nodes = 0;
  for (const Route& r : routes) total_nodes += r.nodes().size();
  const std::size_t max_sweeps = 100 * std::max<std::size_t>(total_nodes, 1);

  // Predecessor position lookups do not change between sweeps.
  struct Link {
    std::size_t k, j, p, jl;
  };
  std::vector<Link> links;
  for (std::size_t k = 0; k < routes.size(); ++k) {
    for (std::size_t j = 0; j < routes[k].edge_count(); ++j) {
      const int pred = config.predecessors[k][j];
      if (pred == static_cast<int>(k) + 1) continue;
      const std::size_t p = static_cast<std::size_t>(pred) - 1;
      auto jl = routes[p].index_of(routes[k].nodes()[j]);
      if (!jl || *jl + 1 >= routes[p].nodes().size() ||
          routes[p].nodes()[*jl + 1] != routes[k].nodes()[j + 1]) {
        throw InvalidConfiguration("truck " + std::to_string(k + 1) +
                                   " edge " + std::to_string(j) +
                                   " is not on the route of its predecessor");
      }
      links.push_back({k, j, p, *jl});
    }
  }
  if (links.empty()) return out;

  while (true) {
    if (out.sweeps >= max_sweeps) {
      throw PruningDidNotConverge("window pruning did not settle after " +
                                  std::to_string(max_sweeps) + " sweeps");
    }
    ++out.sweeps;
    pruner.moved = 0.0;
    for (const Link& l : links) {
      pruner.intersect(l.k, l.j, l.p, l.jl);
      pruner.intersect(l.k, l.j + 1, l.p, l.jl + 1);
      pruner.propagate(l.k);
      pruner.propagate(l.p);
      if (auto node = pruner.empty_node(l.k)) return infeasible(l.k, *node);
      if (auto node = pruner.empty_node(l.p)) return infeasible(l.p, *node);
    }
    if (pruner.moved <= kTimeTolerance) break;
  }
  return out;
}

}  // namespace platoon

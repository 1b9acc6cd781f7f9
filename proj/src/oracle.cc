#include "platoon/oracle.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <tuple>

#include "platoon/fuel_model.h"

namespace platoon {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTol = 1e-9;
// Largest table (entries) a single elimination step may touch.
constexpr double kMaxWork = 5e7;

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : p_(n) {
    std::iota(p_.begin(), p_.end(), std::size_t{0});
  }
  std::size_t find(std::size_t x) {
    while (p_[x] != x) x = p_[x] = p_[p_[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) p_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> p_;
};

struct Instance {
  std::vector<Route> routes;
  std::vector<TransportAssignment> assignments;
  FuelParams params;
  std::vector<std::vector<double>> lower, upper;  // arrival windows
  std::vector<std::size_t> offset;                // node slot offsets
};

Instance load(const Scenario& scenario) {
  if (!validate(scenario).empty()) {
    throw std::invalid_argument("scenario does not validate");
  }
  Instance in;
  in.params = scenario.params;
  in.assignments = assignments_by_id(scenario);
  if (in.assignments.size() > kOracleMaxTrucks) {
    throw TooLarge("oracle handles at most " +
                   std::to_string(kOracleMaxTrucks) + " trucks");
  }
  in.offset.push_back(0);
  for (const auto& a : in.assignments) {
    Route r = shortest_path(scenario.network, a.origin, a.destination).route;
    if (r.edge_count() > kOracleMaxEdges) {
      throw TooLarge("oracle handles at most " +
                     std::to_string(kOracleMaxEdges) + " edges per route");
    }
    const auto& w = r.edge_lengths();
    const double v = in.params.v_max_kmh;
    std::vector<double> lo(w.size() + 1), hi(w.size() + 1);
    lo[0] = a.start_time_h;
    for (std::size_t i = 0; i < w.size(); ++i) lo[i + 1] = lo[i] + w[i] / v;
    hi[w.size()] = a.deadline_h;
    for (std::size_t i = w.size(); i-- > 1;) hi[i] = hi[i + 1] - w[i] / v;
    hi[0] = a.start_time_h;
    in.lower.push_back(std::move(lo));
    in.upper.push_back(std::move(hi));
    in.offset.push_back(in.offset.back() + w.size() + 1);
    in.routes.push_back(std::move(r));
  }
  return in;
}

// A merged (truck, edge) pair: trucks k and p traverse the same graph edge
// as edges i and j of their routes, entering and leaving together.
struct Slot {
  std::size_t k, i, p, j;
};

// Arrival-time points after merging, with the grid bounds of each.
struct Points {
  std::vector<std::size_t> of_slot;  // node slot -> point
  std::vector<double> lo, hi;
  std::vector<std::optional<double>> fixed;  // start times
  std::size_t count = 0;
  bool empty = false;
};

Points make_points(const Instance& in, const std::vector<Slot>& merges) {
  UnionFind uf(in.offset.back());
  for (const Slot& s : merges) {
    uf.unite(in.offset[s.k] + s.i, in.offset[s.p] + s.j);
    uf.unite(in.offset[s.k] + s.i + 1, in.offset[s.p] + s.j + 1);
  }
  Points pts;
  pts.of_slot.assign(in.offset.back(), SIZE_MAX);
  std::vector<std::size_t> id(in.offset.back(), SIZE_MAX);
  for (std::size_t k = 0; k < in.routes.size(); ++k) {
    for (std::size_t i = 0; i < in.lower[k].size(); ++i) {
      const std::size_t slot = in.offset[k] + i;
      std::size_t& r = id[uf.find(slot)];
      if (r == SIZE_MAX) {
        r = pts.count++;
        pts.lo.push_back(-kInf);
        pts.hi.push_back(kInf);
        pts.fixed.emplace_back();
      }
      pts.of_slot[slot] = r;
      pts.lo[r] = std::max(pts.lo[r], in.lower[k][i]);
      pts.hi[r] = std::min(pts.hi[r], in.upper[k][i]);
      if (i == 0) {
        const double s = in.assignments[k].start_time_h;
        if (pts.fixed[r] && std::abs(*pts.fixed[r] - s) > kTol) pts.empty = true;
        pts.fixed[r] = s;
      }
    }
  }
  for (std::size_t r = 0; r < pts.count; ++r) {
    if (pts.lo[r] > pts.hi[r] + kTol) pts.empty = true;
    if (pts.fixed[r] && (*pts.fixed[r] < pts.lo[r] - kTol ||
                         *pts.fixed[r] > pts.hi[r] + kTol)) {
      pts.empty = true;
    }
  }
  return pts;
}

std::vector<double> even_grid(double lo, double hi, int levels) {
  if (hi - lo <= 1e-12) return {lo};
  std::vector<double> v;
  for (int m = 0; m <= levels; ++m) v.push_back(lo + m * (hi - lo) / levels);
  return v;
}

// Min-sum factor over a sorted scope, row-major with the last variable
// varying fastest.
struct Factor {
  std::vector<std::size_t> scope;
  std::vector<double> table;
};

class Eliminator {
 public:
  explicit Eliminator(std::vector<std::vector<double>> domains)
      : dom_(std::move(domains)) {}

  void add(Factor f) { factors_.push_back(std::move(f)); }

  // Minimum total cost and one minimizing assignment (value indices).
  double solve(std::vector<std::size_t>& assignment) {
    const std::size_t n = dom_.size();
    std::vector<bool> gone(n, false);
    struct Step {
      std::size_t var;
      std::vector<std::size_t> scope;
      std::vector<std::size_t> argmin;
    };
    std::vector<Step> steps;
    double constant = 0.0;
    for (std::size_t round = 0; round < n; ++round) {
      // Min-degree choice, ties to the lowest index.
      std::size_t best = SIZE_MAX, best_deg = SIZE_MAX;
      for (std::size_t v = 0; v < n; ++v) {
        if (gone[v]) continue;
        const std::size_t deg = neighbours(v).size();
        if (deg < best_deg) {
          best = v;
          best_deg = deg;
        }
      }
      const std::size_t v = best;
      gone[v] = true;
      std::vector<std::size_t> scope = neighbours(v);
      double work = static_cast<double>(dom_[v].size());
      for (std::size_t u : scope) work *= static_cast<double>(dom_[u].size());
      if (work > kMaxWork) {
        throw TooLarge("elimination table too large for the oracle");
      }
      std::vector<Factor> touching;
      std::vector<Factor> rest;
      for (auto& f : factors_) {
        if (std::find(f.scope.begin(), f.scope.end(), v) != f.scope.end()) {
          touching.push_back(std::move(f));
        } else {
          rest.push_back(std::move(f));
        }
      }
      factors_ = std::move(rest);

      Factor out;
      out.scope = scope;
      std::size_t size = 1;
      for (std::size_t u : scope) size *= dom_[u].size();
      out.table.assign(size, kInf);
      Step step{v, scope, std::vector<std::size_t>(size, 0)};
      std::vector<std::size_t> idx(n, 0);
      for (std::size_t flat = 0; flat < size; ++flat) {
        std::size_t rem = flat;
        for (std::size_t s = scope.size(); s-- > 0;) {
          idx[scope[s]] = rem % dom_[scope[s]].size();
          rem /= dom_[scope[s]].size();
        }
        double best_cost = kInf;
        std::size_t arg = 0;
        for (std::size_t x = 0; x < dom_[v].size(); ++x) {
          idx[v] = x;
          double c = 0.0;
          for (const Factor& f : touching) {
            c += f.table[flat_index(f, idx)];
            if (c == kInf) break;
          }
          if (c < best_cost) {
            best_cost = c;
            arg = x;
          }
        }
        out.table[flat] = best_cost;
        step.argmin[flat] = arg;
      }
      if (out.scope.empty()) {
        constant += out.table[0];
      } else {
        factors_.push_back(std::move(out));
      }
      steps.push_back(std::move(step));
    }
    assignment.assign(n, 0);
    for (std::size_t s = steps.size(); s-- > 0;) {
      const Step& st = steps[s];
      std::size_t flat = 0;
      for (std::size_t u : st.scope) flat = flat * dom_[u].size() + assignment[u];
      assignment[st.var] = st.argmin[flat];
    }
    return constant;
  }

 private:
  std::vector<std::size_t> neighbours(std::size_t v) const {
    std::set<std::size_t> s;
    for (const auto& f : factors_) {
      if (std::find(f.scope.begin(), f.scope.end(), v) == f.scope.end()) continue;
      for (std::size_t u : f.scope) {
        if (u != v) s.insert(u);
      }
    }
    return {s.begin(), s.end()};
  }

  std::size_t flat_index(const Factor& f,
                         const std::vector<std::size_t>& idx) const {
    std::size_t flat = 0;
    for (std::size_t u : f.scope) flat = flat * dom_[u].size() + idx[u];
    return flat;
  }

  std::vector<std::vector<double>> dom_;
  std::vector<Factor> factors_;
};

// Common edges of two routes as (edge index in first, edge index in second).
std::vector<std::pair<std::size_t, std::size_t>> common_edges(const Route& a,
                                                              const Route& b) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < a.edge_count(); ++i) {
    for (std::size_t j = 0; j < b.edge_count(); ++j) {
      if (a.nodes()[i] == b.nodes()[j] && a.nodes()[i + 1] == b.nodes()[j + 1]) {
        out.emplace_back(i, j);
      }
    }
  }
  return out;
}

// Platooning must be transitive on every edge.
bool closed(const Instance& in, const std::vector<Slot>& merges) {
  std::set<std::tuple<std::size_t, std::size_t, std::size_t>> together;
  for (const Slot& s : merges) {
    together.insert({s.k, s.p, in.offset[s.k] + s.i});
  }
  auto merged_on = [&](std::size_t a, std::size_t b, std::size_t a_slot) {
    if (a > b) return false;
    return together.count({a, b, a_slot}) > 0;
  };
  for (const Slot& s1 : merges) {
    for (const Slot& s2 : merges) {
      // s1: k~p on edge; s2 shares an endpoint truck on the same graph edge.
      const Edge e1 = in.routes[s1.k].edge(s1.i);
      const Edge e2 = in.routes[s2.k].edge(s2.i);
      if (e1.from != e2.from || e1.to != e2.to) continue;
      std::set<std::size_t> trucks{s1.k, s1.p, s2.k, s2.p};
      if (trucks.size() != 3) continue;
      std::vector<std::size_t> t(trucks.begin(), trucks.end());
      for (std::size_t x = 0; x < 3; ++x) {
        for (std::size_t y = x + 1; y < 3; ++y) {
          const std::size_t slot =
              in.offset[t[x]] + *in.routes[t[x]].index_of(e1.from);
          if (!merged_on(t[x], t[y], slot)) return false;
        }
      }
    }
  }
  return true;
}

struct Candidate {
  double objective = kInf;
  std::vector<std::vector<double>> traversal;
};

Candidate solve_pattern(const Instance& in, const std::vector<Slot>& merges,
                        int levels) {
  Candidate best;
  const Points pts = make_points(in, merges);
  if (pts.empty) return best;

  std::vector<std::vector<double>> dom(pts.count);
  for (std::size_t r = 0; r < pts.count; ++r) {
    dom[r] = pts.fixed[r] ? std::vector<double>{*pts.fixed[r]}
                          : even_grid(pts.lo[r], std::max(pts.lo[r], pts.hi[r]),
                                      levels);
  }

  // Edge groups keyed by (entry point, exit point): merged trucks share both.
  std::map<std::pair<std::size_t, std::size_t>, std::pair<double, double>>
      groups;  // -> (sum eta W^3, W / v_max)
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> top_truck;
  for (std::size_t k = 0; k < in.routes.size(); ++k) {
    for (std::size_t i = 0; i < in.routes[k].edge_count(); ++i) {
      const std::size_t a = pts.of_slot[in.offset[k] + i];
      const std::size_t b = pts.of_slot[in.offset[k] + i + 1];
      if (a == b) return best;
      top_truck[{a, b}] = std::max(top_truck[{a, b}], k);
    }
  }
  for (std::size_t k = 0; k < in.routes.size(); ++k) {
    const auto& w = in.routes[k].edge_lengths();
    for (std::size_t i = 0; i < w.size(); ++i) {
      const std::pair key{pts.of_slot[in.offset[k] + i],
                          pts.of_slot[in.offset[k] + i + 1]};
      const double eta = top_truck[key] == k ? 1.0 : in.params.eta;
      auto& g = groups[key];
      g.first += eta * w[i] * w[i] * w[i];
      g.second = w[i] / in.params.v_max_kmh;
    }
  }

  Eliminator elim(dom);
  for (const auto& [key, g] : groups) {
    auto [a, b] = key;
    const double c = g.first;
    const double d = g.second;
    Factor f;
    const bool swapped = b < a;
    f.scope = swapped ? std::vector<std::size_t>{b, a}
                      : std::vector<std::size_t>{a, b};
    const auto& d0 = dom[f.scope[0]];
    const auto& d1 = dom[f.scope[1]];
    f.table.resize(d0.size() * d1.size());
    for (std::size_t x = 0; x < d0.size(); ++x) {
      for (std::size_t y = 0; y < d1.size(); ++y) {
        const double ta = swapped ? d1[y] : d0[x];
        const double tb = swapped ? d0[x] : d1[y];
        const double T = tb - ta;
        f.table[x * d1.size() + y] = T < d - kTol ? kInf : c / (T * T);
      }
    }
    elim.add(std::move(f));
  }
  std::vector<std::size_t> choice;
  const double cost = elim.solve(choice);
  if (cost == kInf) return best;

  best.traversal.resize(in.routes.size());
  for (std::size_t k = 0; k < in.routes.size(); ++k) {
    for (std::size_t i = 0; i < in.routes[k].edge_count(); ++i) {
      const std::size_t a = pts.of_slot[in.offset[k] + i];
      const std::size_t b = pts.of_slot[in.offset[k] + i + 1];
      best.traversal[k].push_back(dom[b][choice[b]] - dom[a][choice[a]]);
    }
  }
  best.objective = cost;
  return best;
}

double coincidence_objective(const Instance& in, const SpeedPlan& plan) {
  const auto eta = coincidence_eta(in.routes, plan, in.params.eta);
  double sum = 0.0;
  for (std::size_t k = 0; k < in.routes.size(); ++k) {
    const auto& w = in.routes[k].edge_lengths();
    for (std::size_t i = 0; i < w.size(); ++i) {
      const double T = plan.traversal_h[k][i];
      sum += eta[k][i] * w[i] * w[i] * w[i] / (T * T);
    }
  }
  return sum;
}

}  // namespace

OracleResult brute_force_plan(const Scenario& scenario, const GridSpec& grid) {
  if (grid.speed_levels < 2) {
    throw std::invalid_argument("speed_levels must be at least 2");
  }
  if (!(grid.coincidence_tol_h > 0.0)) {
    throw std::invalid_argument("coincidence tolerance must be positive");
  }
  const Instance in = load(scenario);

  // Every pair may platoon on any subset of its common edges.
  struct PairEdges {
    std::size_t k, p;
    std::vector<std::pair<std::size_t, std::size_t>> edges;
  };
  std::vector<PairEdges> pairs;
  std::size_t bits = 0;
  for (std::size_t k = 0; k < in.routes.size(); ++k) {
    for (std::size_t p = k + 1; p < in.routes.size(); ++p) {
      auto e = common_edges(in.routes[k], in.routes[p]);
      if (e.empty()) continue;
      bits += e.size();
      pairs.push_back({k, p, std::move(e)});
    }
  }
  if (bits > 18) throw TooLarge("too many shared edges for the oracle");

  OracleResult result;
  result.routes = in.routes;
  result.objective = kInf;
  for (const auto& a : in.assignments) {
    result.plan.start_times_h.push_back(a.start_time_h);
  }
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << bits); ++mask) {
    std::vector<Slot> merges;
    std::size_t bit = 0;
    for (const auto& pe : pairs) {
      for (const auto& [i, j] : pe.edges) {
        if (mask >> bit & 1) merges.push_back({pe.k, i, pe.p, j});
        ++bit;
      }
    }
    if (!closed(in, merges)) continue;
    ++result.patterns;
    Candidate c = solve_pattern(in, merges, grid.speed_levels);
    if (c.objective == kInf) continue;
    SpeedPlan plan{result.plan.start_times_h, std::move(c.traversal)};
    const double value = coincidence_objective(in, plan);
    if (value < result.objective) {
      result.objective = value;
      result.plan = std::move(plan);
    }
  }
  if (result.objective == kInf) {
    throw std::runtime_error("oracle found no feasible grid schedule");
  }
  result.arrivals_h = result.plan.arrivals(in.routes);
  return result;
}

bool brute_force_feasibility(const PlatoonConfiguration& config,
                             const Scenario& scenario,
                             double time_grid_step_h) {
  if (!(time_grid_step_h > 0.0)) {
    throw std::invalid_argument("time grid step must be positive");
  }
  const Instance in = load(scenario);
  if (config.predecessors.size() != in.routes.size()) {
    throw DimensionMismatch("configuration does not match the scenario");
  }
  std::vector<Slot> merges;
  for (std::size_t k = 0; k < in.routes.size(); ++k) {
    if (config.predecessors[k].size() != in.routes[k].edge_count()) {
      throw DimensionMismatch("configuration does not match the routes");
    }
    for (std::size_t i = 0; i < in.routes[k].edge_count(); ++i) {
      const int pred = config.predecessors[k][i];
      if (pred == static_cast<int>(k) + 1) continue;
      const std::size_t p = static_cast<std::size_t>(pred) - 1;
      const Edge e = in.routes[k].edge(i);
      bool found = false;
      for (std::size_t j = 0; j < in.routes[p].edge_count(); ++j) {
        const Edge f = in.routes[p].edge(j);
        if (f.from == e.from && f.to == e.to) {
          merges.push_back({k, i, p, j});
          found = true;
        }
      }
      if (!found) return false;
    }
  }
  const Points pts = make_points(in, merges);
  if (pts.empty) return false;

  // Grid domains, kept sorted.
  std::vector<std::vector<double>> dom(pts.count);
  for (std::size_t r = 0; r < pts.count; ++r) {
    if (pts.fixed[r]) {
      dom[r] = {*pts.fixed[r]};
      continue;
    }
    const double lo = pts.lo[r];
    const double hi = std::max(lo, pts.hi[r]);
    dom[r].push_back(lo);
    for (double m = std::floor(lo / time_grid_step_h) + 1;; m += 1.0) {
      const double t = m * time_grid_step_h;
      if (t >= hi) break;
      if (t > lo) dom[r].push_back(t);
    }
    if (hi > lo) dom[r].push_back(hi);
  }

  // t_b - t_a >= d constraints. These are monotone, so arc consistency
  // decides satisfiability and the smallest remaining values form a witness.
  struct Arc {
    std::size_t a, b;
    double d;
  };
  std::vector<Arc> arcs;
  for (std::size_t k = 0; k < in.routes.size(); ++k) {
    const auto& w = in.routes[k].edge_lengths();
    for (std::size_t i = 0; i < w.size(); ++i) {
      const std::size_t a = pts.of_slot[in.offset[k] + i];
      const std::size_t b = pts.of_slot[in.offset[k] + i + 1];
      if (a == b) return false;
      arcs.push_back({a, b, w[i] / in.params.v_max_kmh - kTol});
    }
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (const Arc& arc : arcs) {
      auto& da = dom[arc.a];
      auto& db = dom[arc.b];
      if (da.empty() || db.empty()) return false;
      const double need = da.front() + arc.d;
      const auto keep_b = std::lower_bound(db.begin(), db.end(), need);
      if (keep_b != db.begin()) {
        db.erase(db.begin(), keep_b);
        changed = true;
      }
      if (db.empty()) return false;
      const double allow = db.back() - arc.d;
      const auto drop_a = std::upper_bound(da.begin(), da.end(), allow);
      if (drop_a != da.end()) {
        da.erase(drop_a, da.end());
        changed = true;
      }
      if (da.empty()) return false;
    }
  }
  return true;
}

}  // namespace platoon

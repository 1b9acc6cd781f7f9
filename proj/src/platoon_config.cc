#include "platoon/platoon_config.h"

#include <algorithm>
#include <map>
#include <numeric>
#include <utility>

namespace platoon {

namespace {

using EdgeKey = std::pair<std::int64_t, std::int64_t>;

EdgeKey key_of(const Route& route, std::size_t i) {
  return {route.nodes()[i].value, route.nodes()[i + 1].value};
}

std::optional<std::size_t> edge_position(const Route& route, const EdgeKey& key) {
  auto pos = route.index_of(NodeId{key.first});
  if (!pos || *pos + 1 >= route.nodes().size() ||
      route.nodes()[*pos + 1].value != key.second) {
    return std::nullopt;
  }
  return pos;
}

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

// Groups per graph edge (each sorted, size >= 2) after checking the
// predecessor invariants.
std::map<EdgeKey, std::vector<std::vector<int>>> edge_groups(
    const PlatoonConfiguration& config, std::span<const Route> routes) {
  const int trucks = static_cast<int>(routes.size());
  if (config.predecessors.size() != routes.size()) {
    throw InvalidConfiguration("configuration has " +
                               std::to_string(config.predecessors.size()) +
                               " trucks, expected " + std::to_string(trucks));
  }
  std::map<EdgeKey, std::vector<std::pair<int, int>>> links;
  for (int k = 1; k <= trucks; ++k) {
    const auto& l = config.predecessors[k - 1];
    const Route& route = routes[k - 1];
    if (l.size() != route.edge_count()) {
      throw InvalidConfiguration("predecessor sequence of truck " +
                                 std::to_string(k) + " has wrong length");
    }
    for (std::size_t i = 0; i < l.size(); ++i) {
      const int p = l[i];
      if (p == k) continue;
      if (p < k || p > trucks) {
        throw InvalidConfiguration(
            "truck " + std::to_string(k) + " edge " + std::to_string(i) +
            ": predecessor " + std::to_string(p) +
            " must be the truck itself or a higher id");
      }
      const EdgeKey key = key_of(route, i);
      if (!edge_position(routes[p - 1], key)) {
        throw InvalidConfiguration("truck " + std::to_string(k) + " edge " +
                                   std::to_string(i) +
                                   " is not on the route of its predecessor " +
                                   std::to_string(p));
      }
      links[key].emplace_back(k, p);
    }
  }

  std::map<EdgeKey, std::vector<std::vector<int>>> groups;
  for (const auto& [key, pairs] : links) {
    DisjointSets sets(static_cast<std::size_t>(trucks) + 1);
    for (const auto& [a, b] : pairs) sets.unite(a, b);
    std::map<std::size_t, std::vector<int>> members;
    for (const auto& [a, b] : pairs) {
      members[sets.find(a)].push_back(a);
      members[sets.find(b)].push_back(b);
    }
    for (auto& [root, m] : members) {
      std::sort(m.begin(), m.end());
      m.erase(std::unique(m.begin(), m.end()), m.end());
      for (std::size_t t = 0; t < m.size(); ++t) {
        const int k = m[t];
        const int expected = t + 1 < m.size() ? m[t + 1] : k;
        const std::size_t pos = *edge_position(routes[k - 1], key);
        if (config.predecessors[k - 1][pos] != expected) {
          throw InvalidConfiguration(
              "truck " + std::to_string(k) + " edge " + std::to_string(pos) +
              ": predecessor must be " + std::to_string(expected) +
              ", the next higher id in its platoon");
        }
      }
      groups[key].push_back(std::move(m));
    }
  }
  return groups;
}

// Positions (in the lower truck's route) of the edges each pair shares a
// platoon on.
std::map<std::pair<int, int>, std::vector<std::size_t>> grouped_positions(
    const PlatoonConfiguration& config, std::span<const Route> routes) {
  std::map<std::pair<int, int>, std::vector<std::size_t>> out;
  for (const auto& [key, groups] : edge_groups(config, routes)) {
    for (const auto& g : groups) {
      for (std::size_t a = 0; a < g.size(); ++a) {
        const std::size_t pos = *edge_position(routes[g[a] - 1], key);
        for (std::size_t b = a + 1; b < g.size(); ++b) {
          out[{g[a], g[b]}].push_back(pos);
        }
      }
    }
  }
  for (auto& [pair, positions] : out) {
    std::sort(positions.begin(), positions.end());
    for (std::size_t i = 1; i < positions.size(); ++i) {
      if (positions[i] != positions[i - 1] + 1) {
        throw InconsistentChoices(
            "trucks " + std::to_string(pair.first) + " and " +
            std::to_string(pair.second) +
            " would platoon on more than one interval");
      }
    }
  }
  return out;
}

}  // namespace

PlatoonConfiguration PlatoonConfiguration::all_solo(
    std::span<const Route> routes) {
  PlatoonConfiguration c;
  for (std::size_t k = 0; k < routes.size(); ++k) {
    c.predecessors.emplace_back(routes[k].edge_count(), static_cast<int>(k) + 1);
  }
  return c;
}

bool PlatoonConfiguration::is_all_solo() const {
  for (std::size_t k = 0; k < predecessors.size(); ++k) {
    for (int p : predecessors[k]) {
      if (p != static_cast<int>(k) + 1) return false;
    }
  }
  return true;
}

std::optional<SharedPath> pair_shared_path(const Route& r1, const Route& r2,
                                           std::vector<std::string>* warnings) {
  try {
    return shared_subpath(r1, r2);
  } catch (const NonContiguousIntersection& e) {
    if (warnings) {
      warnings->push_back(std::string(e.what()) +
                          "; only the longest common run is considered");
    }
    return longest_shared_run(r1, r2);
  }
}

std::vector<TruckPair> sharing_pairs(std::span<const Route> routes,
                                     std::vector<std::string>* warnings) {
  std::vector<TruckPair> out;
  for (std::size_t a = 0; a < routes.size(); ++a) {
    for (std::size_t b = a + 1; b < routes.size(); ++b) {
      std::vector<std::string> local;
      auto shared = pair_shared_path(routes[a], routes[b], &local);
      if (warnings) {
        for (auto& w : local) {
          warnings->push_back("trucks " + std::to_string(a + 1) + " and " +
                              std::to_string(b + 1) + ": " + w);
        }
      }
      if (shared) {
        out.push_back({static_cast<int>(a) + 1, static_cast<int>(b) + 1,
                       std::move(*shared)});
      }
    }
  }
  return out;
}

std::vector<MergeChoice> candidate_merge_intervals(int k1, int k2,
                                                   const SharedPath& shared,
                                                   const TimeWindows& w1,
                                                   const TimeWindows& w2) {
  const std::size_t nodes = shared.first_indices.size();
  std::vector<bool> overlap(nodes);
  for (std::size_t s = 0; s < nodes; ++s) {
    const std::size_t i = shared.first_indices[s];
    const std::size_t j = shared.second_indices[s];
    overlap[s] = std::max(w1.lower[i], w2.lower[j]) <=
                 std::min(w1.upper[i], w2.upper[j]) + kTimeTolerance;
  }
  std::vector<MergeChoice> out{{k1, k2, std::nullopt}};
  const std::size_t edges = shared.route.edge_count();
  for (std::size_t a = 0; a < edges; ++a) {
    if (!overlap[a]) continue;
    for (std::size_t b = a; b < edges && overlap[b + 1]; ++b) {
      out.push_back({k1, k2, MergeInterval{a, b}});
    }
  }
  return out;
}

PlatoonConfiguration compose_configuration(std::span<const MergeChoice> choices,
                                           std::span<const Route> routes) {
  const int trucks = static_cast<int>(routes.size());
  PlatoonConfiguration config = PlatoonConfiguration::all_solo(routes);
  std::map<EdgeKey, std::vector<std::pair<int, int>>> links;
  for (const MergeChoice& c : choices) {
    if (!(1 <= c.first_truck && c.first_truck < c.second_truck &&
          c.second_truck <= trucks)) {
      throw InvalidConfiguration("merge choice needs 1 <= first < second <= " +
                                 std::to_string(trucks));
    }
    if (!c.interval) continue;
    const Route& r1 = routes[c.first_truck - 1];
    auto shared = pair_shared_path(r1, routes[c.second_truck - 1], nullptr);
    if (!shared || c.interval->first_edge > c.interval->last_edge ||
        c.interval->last_edge >= shared->route.edge_count()) {
      throw InvalidConfiguration(
          "merge interval of trucks " + std::to_string(c.first_truck) +
          " and " + std::to_string(c.second_truck) +
          " lies outside their shared sub-path");
    }
    for (std::size_t e = c.interval->first_edge; e <= c.interval->last_edge;
         ++e) {
      links[key_of(r1, shared->first_indices[e])].emplace_back(
          c.first_truck, c.second_truck);
    }
  }
  for (const auto& [key, pairs] : links) {
    DisjointSets sets(static_cast<std::size_t>(trucks) + 1);
    for (const auto& [a, b] : pairs) sets.unite(a, b);
    std::map<std::size_t, std::vector<int>> members;
    for (const auto& [a, b] : pairs) {
      members[sets.find(a)].push_back(a);
      members[sets.find(b)].push_back(b);
    }
    for (auto& [root, m] : members) {
      std::sort(m.begin(), m.end());
      m.erase(std::unique(m.begin(), m.end()), m.end());
      for (std::size_t t = 0; t + 1 < m.size(); ++t) {
        const std::size_t pos = *edge_position(routes[m[t] - 1], key);
        config.predecessors[m[t] - 1][pos] = m[t + 1];
      }
    }
  }
  check_configuration(config, routes);
  return config;
}

void check_configuration(const PlatoonConfiguration& config,
                         std::span<const Route> routes) {
  grouped_positions(config, routes);
}

std::vector<MergeChoice> encode_configuration(const PlatoonConfiguration& config,
                                              std::span<const Route> routes,
                                              std::span<const TruckPair> pairs) {
  auto grouped = grouped_positions(config, routes);
  std::vector<MergeChoice> out;
  for (const TruckPair& pair : pairs) {
    MergeChoice choice{pair.first, pair.second, std::nullopt};
    auto it = grouped.find({pair.first, pair.second});
    if (it != grouped.end()) {
      const auto& idx = pair.shared.first_indices;
      auto locate = [&](std::size_t pos) -> std::size_t {
        for (std::size_t e = 0; e + 1 < idx.size(); ++e) {
          if (idx[e] == pos) return e;
        }
        throw InvalidConfiguration(
            "trucks " + std::to_string(pair.first) + " and " +
            std::to_string(pair.second) +
            " platoon outside their shared sub-path");
      };
      choice.interval =
          MergeInterval{locate(it->second.front()), locate(it->second.back())};
      grouped.erase(it);
    }
    out.push_back(choice);
  }
  if (!grouped.empty()) {
    throw InvalidConfiguration("configuration groups trucks " +
                               std::to_string(grouped.begin()->first.first) +
                               " and " +
                               std::to_string(grouped.begin()->first.second) +
                               " which share no sub-path");
  }
  return out;
}

ConfigurationEnumerator::ConfigurationEnumerator(
    std::vector<Route> routes, std::span<const TimeWindows> windows,
    std::size_t max_configs)
    : routes_(std::move(routes)), max_configs_(max_configs) {
  pairs_ = sharing_pairs(routes_, &warnings_);
  for (const TruckPair& p : pairs_) {
    candidates_.push_back(candidate_merge_intervals(
        p.first, p.second, p.shared, windows[p.first - 1],
        windows[p.second - 1]));
    std::size_t longest = 0;
    for (const auto& c : candidates_.back()) {
      longest = std::max(longest, c.merged_edges());
    }
    max_level_ += longest;
  }
  const std::size_t n = pairs_.size();
  reachable_.assign(n + 1, std::vector<bool>(max_level_ + 1, false));
  reachable_[n][0] = true;
  for (std::size_t pos = n; pos-- > 0;) {
    for (std::size_t s = 0; s <= max_level_; ++s) {
      for (const auto& c : candidates_[pos]) {
        const std::size_t len = c.merged_edges();
        if (len <= s && reachable_[pos + 1][s - len]) {
          reachable_[pos][s] = true;
          break;
        }
      }
    }
  }
  index_.assign(n, 0);
}

bool ConfigurationEnumerator::fill_from(std::size_t pos, std::size_t remaining) {
  for (std::size_t q = pos; q < pairs_.size(); ++q) {
    bool placed = false;
    for (std::size_t c = 0; c < candidates_[q].size(); ++c) {
      const std::size_t len = candidates_[q][c].merged_edges();
      if (len <= remaining && reachable_[q + 1][remaining - len]) {
        index_[q] = c;
        remaining -= len;
        placed = true;
        break;
      }
    }
    if (!placed) return false;
  }
  return remaining == 0;
}

bool ConfigurationEnumerator::first_at_level(std::size_t level) {
  return reachable_[0][level] && fill_from(0, level);
}

bool ConfigurationEnumerator::advance(std::size_t level) {
  for (std::size_t pos = pairs_.size(); pos-- > 0;) {
    std::size_t prefix = 0;
    for (std::size_t q = 0; q < pos; ++q) {
      prefix += candidates_[q][index_[q]].merged_edges();
    }
    for (std::size_t c = index_[pos] + 1; c < candidates_[pos].size(); ++c) {
      const std::size_t used = prefix + candidates_[pos][c].merged_edges();
      if (used <= level && reachable_[pos + 1][level - used]) {
        index_[pos] = c;
        return fill_from(pos + 1, level - used);
      }
    }
  }
  return false;
}

std::optional<PlatoonConfiguration> ConfigurationEnumerator::compose_current()
    const {
  std::vector<MergeChoice> choices;
  for (std::size_t q = 0; q < pairs_.size(); ++q) {
    choices.push_back(candidates_[q][index_[q]]);
  }
  try {
    PlatoonConfiguration config = compose_configuration(choices, routes_);
    // Closure may group pairs that were not chosen; that configuration is
    // produced by its own canonical choice tuple.
    if (encode_configuration(config, routes_, pairs_) != choices) {
      return std::nullopt;
    }
    return config;
  } catch (const InvalidConfiguration&) {
    return std::nullopt;
  }
}

std::optional<PlatoonConfiguration> ConfigurationEnumerator::produce() {
  while (!exhausted_) {
    bool moved = false;
    if (!started_) {
      started_ = true;
      level_ = 0;
      moved = first_at_level(0);
    } else {
      moved = advance(level_);
    }
    while (!moved && ++level_ <= max_level_) moved = first_at_level(level_);
    if (!moved) {
      exhausted_ = true;
      break;
    }
    if (auto config = compose_current()) return config;
  }
  return std::nullopt;
}

std::optional<PlatoonConfiguration> ConfigurationEnumerator::next() {
  if (yielded_ >= max_configs_) {
    if (!truncated_ && !exhausted_ && produce()) truncated_ = true;
    return std::nullopt;
  }
  auto config = produce();
  if (config) ++yielded_;
  return config;
}

}  // namespace platoon

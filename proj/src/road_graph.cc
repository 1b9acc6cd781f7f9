#include "platoon/road_graph.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <set>
#include <span>

namespace platoon {

Route::Route(std::vector<NodeId> nodes, std::vector<double> edge_lengths_km)
    : nodes_(std::move(nodes)), lengths_(std::move(edge_lengths_km)) {
  if (!nodes_.empty() && lengths_.size() + 1 != nodes_.size()) {
    throw std::invalid_argument("route needs one edge length per hop");
  }
  if (nodes_.empty() && !lengths_.empty()) {
    throw std::invalid_argument("route without nodes cannot have edges");
  }
}

std::vector<Edge> Route::edges() const {
  std::vector<Edge> out;
  out.reserve(lengths_.size());
  for (std::size_t i = 0; i < lengths_.size(); ++i) out.push_back(edge(i));
  return out;
}

double Route::length() const {
  return std::accumulate(lengths_.begin(), lengths_.end(), 0.0);
}

std::optional<std::size_t> Route::index_of(NodeId node) const {
  auto it = std::find(nodes_.begin(), nodes_.end(), node);
  if (it == nodes_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - nodes_.begin());
}

RoadNetwork::RoadNetwork(std::vector<NodeId> nodes, std::vector<Edge> edges)
    : ids_(std::move(nodes)), edges_(std::move(edges)) {
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    if (ids_[i].value < 0) {
      throw InvalidNetwork("node ids must be non-negative, got " +
                           std::to_string(ids_[i].value));
    }
    if (!index_.emplace(ids_[i], i).second) {
      throw InvalidNetwork("duplicate node " + std::to_string(ids_[i].value));
    }
  }
  out_.resize(ids_.size());
  in_.resize(ids_.size());
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const Edge& e : edges_) {
    auto from = index_.find(e.from);
    auto to = index_.find(e.to);
    if (from == index_.end() || to == index_.end()) {
      throw InvalidNetwork("edge (" + std::to_string(e.from.value) + ", " +
                           std::to_string(e.to.value) +
                           ") references an unknown node");
    }
    if (!(e.length_km > 0.0) || !std::isfinite(e.length_km)) {
      throw InvalidNetwork("edge (" + std::to_string(e.from.value) + ", " +
                           std::to_string(e.to.value) +
                           ") must have a positive finite length");
    }
    if (from->second == to->second) {
      throw InvalidNetwork("self loop at node " + std::to_string(e.from.value));
    }
    if (!seen.emplace(from->second, to->second).second) {
      throw InvalidNetwork("duplicate edge (" + std::to_string(e.from.value) +
                           ", " + std::to_string(e.to.value) + ")");
    }
    out_[from->second].push_back({to->second, e.length_km});
    in_[to->second].push_back({from->second, e.length_km});
  }
}

std::optional<double> RoadNetwork::edge_length(NodeId from, NodeId to) const {
  auto f = index_.find(from);
  auto t = index_.find(to);
  if (f == index_.end() || t == index_.end()) return std::nullopt;
  for (const Arc& a : out_[f->second]) {
    if (a.to == t->second) return a.length_km;
  }
  return std::nullopt;
}

std::size_t RoadNetwork::dense_index(NodeId id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw UnknownNode(id);
  return it->second;
}

namespace {

bool is_tight(double via, double best) {
  return via <= best + 1e-9 * std::max(1.0, std::abs(best));
}

}  // namespace

PathResult shortest_path(const RoadNetwork& network, NodeId source,
                         NodeId target) {
  const std::size_t s = network.dense_index(source);
  const std::size_t t = network.dense_index(target);
  const std::size_t n = network.nodes().size();
  constexpr double kInf = std::numeric_limits<double>::infinity();

  std::vector<double> dist(n, kInf);
  dist[s] = 0.0;
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  queue.emplace(0.0, s);
  while (!queue.empty()) {
    auto [d, u] = queue.top();
    queue.pop();
    if (d > dist[u]) continue;
    for (const auto& arc : network.outgoing(u)) {
      if (d + arc.length_km < dist[arc.to]) {
        dist[arc.to] = d + arc.length_km;
        queue.emplace(dist[arc.to], arc.to);
      }
    }
  }
  if (dist[t] == kInf) throw UnreachableTarget(source, target);

  // Walk the shortest-path DAG backwards from the target: the canonical path
  // to v is the smallest (canonical path to u) + v over tight predecessors u.
  const auto& ids = network.nodes();
  std::vector<std::optional<std::vector<NodeId>>> memo(n);
  std::vector<int> count(n, -1);  // number of shortest paths, capped at 2
  memo[s] = std::vector<NodeId>{ids[s]};
  count[s] = 1;

  auto tight_preds = [&](std::size_t v) {
    std::vector<std::size_t> preds;
    for (const auto& arc : network.incoming(v)) {
      if (dist[arc.to] < dist[v] && is_tight(dist[arc.to] + arc.length_km,
                                             dist[v])) {
        preds.push_back(arc.to);
      }
    }
    return preds;
  };

  // Iterative post-order over the DAG; its depth is bounded by n.
  std::vector<std::size_t> stack{t};
  while (!stack.empty()) {
    const std::size_t v = stack.back();
    if (memo[v]) {
      stack.pop_back();
      continue;
    }
    const auto preds = tight_preds(v);
    bool ready = true;
    for (std::size_t u : preds) {
      if (!memo[u]) {
        stack.push_back(u);
        ready = false;
      }
    }
    if (!ready) continue;
    stack.pop_back();
    std::optional<std::vector<NodeId>> best;
    int paths = 0;
    for (std::size_t u : preds) {
      paths = std::min(2, paths + count[u]);
      if (!best || std::lexicographical_compare(memo[u]->begin(),
                                                memo[u]->end(), best->begin(),
                                                best->end())) {
        best = memo[u];
      }
    }
    best->push_back(ids[v]);
    memo[v] = std::move(best);
    count[v] = paths;
  }

  std::vector<NodeId> nodes = *memo[t];
  std::vector<double> lengths;
  lengths.reserve(nodes.size());
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    lengths.push_back(*network.edge_length(nodes[i], nodes[i + 1]));
  }
  return {Route(std::move(nodes), std::move(lengths)), count[t] < 2};
}

namespace {

// Indices i of r1's edges that also appear in r2, with the matching index j.
std::vector<std::pair<std::size_t, std::size_t>> common_edges(const Route& r1,
                                                              const Route& r2) {
  std::unordered_map<NodeId, std::size_t> pos2;
  for (std::size_t j = 0; j < r2.nodes().size(); ++j) {
    pos2.emplace(r2.nodes()[j], j);
  }
  std::vector<std::pair<std::size_t, std::size_t>> common;
  for (std::size_t i = 0; i < r1.edge_count(); ++i) {
    auto it = pos2.find(r1.nodes()[i]);
    if (it == pos2.end()) continue;
    const std::size_t j = it->second;
    if (j + 1 < r2.nodes().size() && r2.nodes()[j + 1] == r1.nodes()[i + 1]) {
      common.emplace_back(i, j);
    }
  }
  return common;
}

SharedPath make_shared(const Route& r1,
                       std::span<const std::pair<std::size_t, std::size_t>> run) {
  SharedPath out;
  std::vector<NodeId> nodes;
  std::vector<double> lengths;
  for (const auto& [i, j] : run) {
    if (nodes.empty()) {
      nodes.push_back(r1.nodes()[i]);
      out.first_indices.push_back(i);
      out.second_indices.push_back(j);
    }
    nodes.push_back(r1.nodes()[i + 1]);
    lengths.push_back(r1.edge_lengths()[i]);
    out.first_indices.push_back(i + 1);
    out.second_indices.push_back(j + 1);
  }
  out.route = Route(std::move(nodes), std::move(lengths));
  return out;
}

bool continues(const std::pair<std::size_t, std::size_t>& prev,
               const std::pair<std::size_t, std::size_t>& next) {
  return next.first == prev.first + 1 && next.second == prev.second + 1;
}

}  // namespace

std::optional<SharedPath> shared_subpath(const Route& r1, const Route& r2) {
  const auto common = common_edges(r1, r2);
  if (common.empty()) return std::nullopt;
  for (std::size_t c = 1; c < common.size(); ++c) {
    if (!continues(common[c - 1], common[c])) {
      throw NonContiguousIntersection(
          "routes share edges that do not form a single path (edge " +
          std::to_string(common[c - 1].first) + " and " +
          std::to_string(common[c].first) +
          " of the first route); shortest paths are not unique");
    }
  }
  return make_shared(r1, common);
}

std::optional<SharedPath> longest_shared_run(const Route& r1, const Route& r2) {
  const auto common = common_edges(r1, r2);
  if (common.empty()) return std::nullopt;
  std::size_t best_begin = 0, best_len = 0;
  std::size_t begin = 0;
  for (std::size_t c = 1; c <= common.size(); ++c) {
    if (c == common.size() || !continues(common[c - 1], common[c])) {
      if (c - begin > best_len) {
        best_len = c - begin;
        best_begin = begin;
      }
      begin = c;
    }
  }
  return make_shared(r1, std::span(common).subspan(best_begin, best_len));
}

}  // namespace platoon

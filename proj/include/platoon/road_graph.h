#ifndef PLATOON_ROAD_GRAPH_H_
#define PLATOON_ROAD_GRAPH_H_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace platoon {

/// Externally supplied node identifier of the road network.
struct NodeId {
  std::int64_t value = 0;

  auto operator<=>(const NodeId&) const = default;
};

}  // namespace platoon

template <>
struct std::hash<platoon::NodeId> {
  std::size_t operator()(const platoon::NodeId& id) const noexcept {
    return std::hash<std::int64_t>{}(id.value);
  }
};

namespace platoon {

struct Edge {
  NodeId from;
  NodeId to;
  double length_km = 0.0;

  bool operator==(const Edge&) const = default;
};

class UnknownNode : public std::invalid_argument {
 public:
  explicit UnknownNode(NodeId id)
      : std::invalid_argument("unknown node " + std::to_string(id.value)) {}
};

class UnreachableTarget : public std::runtime_error {
 public:
  UnreachableTarget(NodeId source, NodeId target)
      : std::runtime_error("node " + std::to_string(target.value) +
                           " is not reachable from node " +
                           std::to_string(source.value)) {}
};

/// Raised when two shortest paths share edges that do not form one path.
/// This only happens when shortest paths are not unique.
class NonContiguousIntersection : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidNetwork : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A simple path through the network. `nodes` has one more entry than
/// `edge_lengths_km` unless the route is empty.
class Route {
 public:
  Route() = default;
  Route(std::vector<NodeId> nodes, std::vector<double> edge_lengths_km);

  const std::vector<NodeId>& nodes() const { return nodes_; }
  const std::vector<double>& edge_lengths() const { return lengths_; }
  std::size_t edge_count() const { return lengths_.size(); }
  Edge edge(std::size_t i) const {
    return {nodes_[i], nodes_[i + 1], lengths_[i]};
  }
  std::vector<Edge> edges() const;
  double length() const;

  /// Position of `node` along the route, if visited.
  std::optional<std::size_t> index_of(NodeId node) const;

  bool operator==(const Route&) const = default;

 private:
  std::vector<NodeId> nodes_;
  std::vector<double> lengths_;
};

/// Immutable weighted directed graph. At most one edge per ordered node pair,
/// all lengths strictly positive.
class RoadNetwork {
 public:
  RoadNetwork() = default;
  RoadNetwork(std::vector<NodeId> nodes, std::vector<Edge> edges);

  const std::vector<NodeId>& nodes() const { return ids_; }
  const std::vector<Edge>& edges() const { return edges_; }
  bool contains(NodeId id) const { return index_.contains(id); }
  std::optional<double> edge_length(NodeId from, NodeId to) const;

  // Dense indexing, used by the search routines.
  std::size_t dense_index(NodeId id) const;
  struct Arc {
    std::size_t to;
    double length_km;
  };
  const std::vector<Arc>& outgoing(std::size_t dense) const {
    return out_[dense];
  }
  const std::vector<Arc>& incoming(std::size_t dense) const {
    return in_[dense];
  }

 private:
  std::vector<NodeId> ids_;
  std::vector<Edge> edges_;
  std::unordered_map<NodeId, std::size_t> index_;
  std::vector<std::vector<Arc>> out_;
  std::vector<std::vector<Arc>> in_;
};

struct PathResult {
  Route route;
  // False when another path of equal length exists; `route` is then the
  // lexicographically smallest node sequence among the minimum-length paths.
  bool unique = true;
};

PathResult shortest_path(const RoadNetwork& network, NodeId source,
                         NodeId target);

/// Common edges of two routes, as one path, with positions in both routes.
struct SharedPath {
  Route route;
  std::vector<std::size_t> first_indices;   // node positions in r1
  std::vector<std::size_t> second_indices;  // node positions in r2
};

/// Throws NonContiguousIntersection if the common edges do not form a single
/// sub-path of both routes.
std::optional<SharedPath> shared_subpath(const Route& r1, const Route& r2);

/// Longest contiguous run of common edges (first one on ties). Used as a
/// fallback when `shared_subpath` rejects the intersection.
std::optional<SharedPath> longest_shared_run(const Route& r1, const Route& r2);

}  // namespace platoon

#endif  // PLATOON_ROAD_GRAPH_H_

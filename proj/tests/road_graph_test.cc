#include "platoon/road_graph.h"

#include <random>
#include <set>

#include <gtest/gtest.h>

#include "test_support.h"

namespace platoon {
namespace {

using testing::bellman_ford;
using testing::make_network;
using testing::N;

std::vector<std::int64_t> ids(const Route& r) {
  std::vector<std::int64_t> out;
  for (NodeId n : r.nodes()) out.push_back(n.value);
  return out;
}

TEST(ShortestPathTest, PrefersTwoHopsOverLongDirectEdge) {
  const auto net = make_network({{1, 2, 1.0}, {2, 3, 1.0}, {1, 3, 3.0}});
  const PathResult p = shortest_path(net, N(1), N(3));
  EXPECT_EQ(ids(p.route), (std::vector<std::int64_t>{1, 2, 3}));
  EXPECT_DOUBLE_EQ(p.route.length(), 2.0);
  EXPECT_TRUE(p.unique);
}

TEST(ShortestPathTest, SourceEqualsTarget) {
  const auto net = make_network({{1, 2, 1.0}});
  const PathResult p = shortest_path(net, N(1), N(1));
  EXPECT_EQ(ids(p.route), (std::vector<std::int64_t>{1}));
  EXPECT_EQ(p.route.edge_count(), 0u);
  EXPECT_DOUBLE_EQ(p.route.length(), 0.0);
}

TEST(ShortestPathTest, Errors) {
  const auto net = make_network({{1, 2, 1.0}, {3, 2, 1.0}});
  EXPECT_THROW(shortest_path(net, N(1), N(9)), UnknownNode);
  EXPECT_THROW(shortest_path(net, N(1), N(3)), UnreachableTarget);
}

TEST(ShortestPathTest, TieBreaksLexicographicallyAndFlags) {
  const auto net =
      make_network({{1, 3, 1.0}, {3, 4, 1.0}, {1, 2, 1.0}, {2, 4, 1.0}});
  const PathResult p = shortest_path(net, N(1), N(4));
  EXPECT_EQ(ids(p.route), (std::vector<std::int64_t>{1, 2, 4}));
  EXPECT_FALSE(p.unique);
}

TEST(RoadNetworkTest, RejectsBadInput) {
  EXPECT_THROW(RoadNetwork({N(1), N(1)}, {}), InvalidNetwork);
  EXPECT_THROW(RoadNetwork({N(-1)}, {}), InvalidNetwork);
  EXPECT_THROW(RoadNetwork({N(1), N(2)}, {{N(1), N(3), 1.0}}), InvalidNetwork);
  EXPECT_THROW(RoadNetwork({N(1), N(2)}, {{N(1), N(2), 0.0}}), InvalidNetwork);
  EXPECT_THROW(RoadNetwork({N(1), N(2)}, {{N(1), N(2), 1.0}, {N(1), N(2), 2.0}}),
               InvalidNetwork);
  EXPECT_THROW(RoadNetwork({N(1)}, {{N(1), N(1), 1.0}}), InvalidNetwork);
}

// Random digraphs: Dijkstra lengths match Bellman-Ford, and every contiguous
// sub-path of a returned route is itself shortest.
TEST(ShortestPathTest, MatchesBellmanFordOnRandomGraphs) {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 25; ++trial) {
    std::vector<NodeId> nodes;
    for (int i = 0; i < 12; ++i) nodes.push_back(N(i));
    std::set<std::pair<int, int>> used;
    std::vector<Edge> edges;
    std::uniform_int_distribution<int> pick(0, 11);
    std::uniform_real_distribution<double> len(1.0, 50.0);
    while (edges.size() < 30) {
      const int a = pick(rng), b = pick(rng);
      if (a == b || !used.insert({a, b}).second) continue;
      edges.push_back({N(a), N(b), len(rng)});
    }
    const RoadNetwork net(nodes, edges);
    for (int s = 0; s < 12; ++s) {
      const auto ref = bellman_ford(net, N(s));
      for (int t = 0; t < 12; ++t) {
        if (std::isinf(ref.at(t))) {
          EXPECT_THROW(shortest_path(net, N(s), N(t)), UnreachableTarget);
          continue;
        }
        const Route r = shortest_path(net, N(s), N(t)).route;
        EXPECT_NEAR(r.length(), ref.at(t), 1e-9 * (1.0 + ref.at(t)));
        for (std::size_t i = 0; i < r.nodes().size(); ++i) {
          const auto from_i = bellman_ford(net, r.nodes()[i]);
          double along = 0.0;
          for (std::size_t j = i + 1; j < r.nodes().size(); ++j) {
            along += r.edge_lengths()[j - 1];
            EXPECT_NEAR(along, from_i.at(r.nodes()[j].value), 1e-9 * (1 + along));
          }
        }
      }
    }
  }
}

TEST(SharedSubpathTest, SingleCommonEdge) {
  const Route r1({N(1), N(2), N(3), N(4)}, {1, 2, 3});
  const Route r2({N(9), N(2), N(3), N(8)}, {5, 2, 6});
  const auto s = shared_subpath(r1, r2);
  ASSERT_TRUE(s);
  EXPECT_EQ(ids(s->route), (std::vector<std::int64_t>{2, 3}));
  EXPECT_EQ(s->first_indices, (std::vector<std::size_t>{1, 2}));
  EXPECT_EQ(s->second_indices, (std::vector<std::size_t>{1, 2}));
}

TEST(SharedSubpathTest, DisjointAndIdentical) {
  const Route r1({N(1), N(2), N(3)}, {1, 2});
  const Route r2({N(4), N(5)}, {1});
  EXPECT_FALSE(shared_subpath(r1, r2));
  const auto same = shared_subpath(r1, r1);
  ASSERT_TRUE(same);
  EXPECT_EQ(same->route, r1);
}

TEST(SharedSubpathTest, SymmetricEdgeSet) {
  const Route r1({N(1), N(2), N(3), N(4), N(5)}, {1, 2, 3, 4});
  const Route r2({N(0), N(2), N(3), N(4), N(7)}, {1, 2, 3, 4});
  const auto a = shared_subpath(r1, r2);
  const auto b = shared_subpath(r2, r1);
  ASSERT_TRUE(a && b);
  EXPECT_EQ(a->route, b->route);
}

TEST(SharedSubpathTest, NonContiguousThrowsAndFallsBack) {
  const Route r1({N(1), N(2), N(3), N(4), N(5), N(6)}, {1, 1, 1, 1, 1});
  const Route r2({N(1), N(2), N(7), N(4), N(5), N(6)}, {1, 1, 1, 1, 1});
  EXPECT_THROW(shared_subpath(r1, r2), NonContiguousIntersection);
  const auto run = longest_shared_run(r1, r2);
  ASSERT_TRUE(run);
  EXPECT_EQ(ids(run->route), (std::vector<std::int64_t>{4, 5, 6}));
}

}  // namespace
}  // namespace platoon

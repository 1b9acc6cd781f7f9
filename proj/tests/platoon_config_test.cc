#include "platoon/platoon_config.h"

#include <random>
#include <set>

#include <gtest/gtest.h>

#include "test_support.h"

namespace platoon {
namespace {

using testing::N;

Route route(std::initializer_list<std::int64_t> nodes, double w = 30.0) {
  std::vector<NodeId> n;
  for (auto v : nodes) n.push_back(N(v));
  return Route(n, std::vector<double>(n.size() - 1, w));
}

TimeWindows windows(std::vector<double> lo, std::vector<double> hi) {
  return {std::move(lo), std::move(hi)};
}

std::vector<std::optional<MergeInterval>> intervals(
    const std::vector<MergeChoice>& choices) {
  std::vector<std::optional<MergeInterval>> out;
  for (const auto& c : choices) out.push_back(c.interval);
  return out;
}

TEST(CandidateMergeIntervalsTest, SingleSharedEdge) {
  const Route r1 = route({1, 2, 3});
  const Route r2 = route({2, 3, 4});
  const auto shared = shared_subpath(r1, r2);
  ASSERT_TRUE(shared);
  // Node 2: [0,1] vs [0.5,2] overlap; node 3 overlaps too.
  const auto w1 = windows({-1, 0, 1}, {-1, 1, 3});
  const auto w2 = windows({0, 1.5, 2}, {0, 2, 4});
  const auto c = candidate_merge_intervals(1, 2, *shared, w1, w2);
  ASSERT_EQ(c.size(), 2u);
  EXPECT_FALSE(c[0].interval);
  EXPECT_EQ(c[1].interval, (MergeInterval{0, 0}));
  EXPECT_EQ(c[1].first_truck, 1);
  EXPECT_EQ(c[1].second_truck, 2);
}

TEST(CandidateMergeIntervalsTest, DifferentFixedStartsAtCommonOrigin) {
  const Route r1 = route({1, 2});
  const Route r2 = route({1, 2});
  const auto shared = shared_subpath(r1, r2);
  const auto w1 = windows({0.0, 1.0}, {0.0, 3.0});
  const auto w2 = windows({0.2, 1.2}, {0.2, 3.0});
  const auto c = candidate_merge_intervals(1, 2, *shared, w1, w2);
  ASSERT_EQ(c.size(), 1u);
  EXPECT_FALSE(c[0].interval);
}

// Shared path of three edges, nodes 0..3; an interval [a,b] survives iff the
// windows overlap at all of nodes a..b+1.
TEST(CandidateMergeIntervalsTest, FailingInteriorNode) {
  const Route r = route({1, 2, 3, 4});
  const auto shared = shared_subpath(r, r);
  const auto ok = windows({0, 1, 2, 3}, {0, 2, 3, 4});

  // Fails at node 1 only: w2 disjoint there.
  auto w2 = ok;
  w2.lower[1] = w2.upper[1] = 2.5;
  auto c = intervals(candidate_merge_intervals(1, 2, *shared, ok, w2));
  EXPECT_EQ(c, (std::vector<std::optional<MergeInterval>>{
                   std::nullopt, MergeInterval{2, 2}}));

  // Fails at node 2 only.
  w2 = ok;
  w2.lower[2] = w2.upper[2] = 3.5;
  c = intervals(candidate_merge_intervals(1, 2, *shared, ok, w2));
  EXPECT_EQ(c, (std::vector<std::optional<MergeInterval>>{
                   std::nullopt, MergeInterval{0, 0}}));

  // Overlap everywhere: all six contiguous intervals, lexicographic.
  c = intervals(candidate_merge_intervals(1, 2, *shared, ok, ok));
  EXPECT_EQ(c, (std::vector<std::optional<MergeInterval>>{
                   std::nullopt, MergeInterval{0, 0}, MergeInterval{0, 1},
                   MergeInterval{0, 2}, MergeInterval{1, 1}, MergeInterval{1, 2},
                   MergeInterval{2, 2}}));
}

TEST(ComposeConfigurationTest, NoMergesIsAllSolo) {
  const std::vector<Route> routes{route({1, 2, 3}), route({4, 2, 3})};
  const std::vector<MergeChoice> none{{1, 2, std::nullopt}};
  const auto c = compose_configuration(none, routes);
  EXPECT_TRUE(c.is_all_solo());
  EXPECT_EQ(c, PlatoonConfiguration::all_solo(routes));
}

// Truck 1 drives x,3,4,5,y,z and platoons with truck 2 from node 3 to 5.
TEST(ComposeConfigurationTest, PlatoonFromNode3To5) {
  const std::vector<Route> routes{route({1, 3, 4, 5, 6, 7}),
                                  route({2, 3, 4, 5, 8})};
  const std::vector<MergeChoice> choice{{1, 2, MergeInterval{0, 1}}};
  const auto c = compose_configuration(choice, routes);
  EXPECT_EQ(c.predecessors[0], (std::vector<int>{1, 2, 2, 1, 1}));
  EXPECT_EQ(c.predecessors[1], (std::vector<int>{2, 2, 2, 2}));
}

TEST(ComposeConfigurationTest, ChainRuleSmallestHigherId) {
  const std::vector<Route> routes{route({1, 9, 2}), route({3, 9, 2}),
                                  route({4, 9, 2})};
  const std::vector<MergeChoice> choices{{1, 2, MergeInterval{0, 0}},
                                         {1, 3, std::nullopt},
                                         {2, 3, MergeInterval{0, 0}}};
  const auto c = compose_configuration(choices, routes);
  EXPECT_EQ(c.predecessors[0][1], 2);
  EXPECT_EQ(c.predecessors[1][1], 3);
  EXPECT_EQ(c.predecessors[2][1], 3);
  // The closure groups 1 with 3 as well, so the canonical encoding differs.
  const auto pairs = sharing_pairs(routes, nullptr);
  const auto enc = encode_configuration(c, routes, pairs);
  EXPECT_EQ(enc[1].interval, (MergeInterval{0, 0}));
}

TEST(ComposeConfigurationTest, ClosureOnTwoIntervalsIsRejected) {
  const std::vector<Route> routes{route({1, 2, 3, 4}), route({1, 2, 3, 4}),
                                  route({1, 2, 3, 4})};
  const std::vector<MergeChoice> choices{{1, 2, MergeInterval{0, 0}},
                                         {1, 3, MergeInterval{2, 2}},
                                         {2, 3, MergeInterval{0, 2}}};
  EXPECT_THROW(compose_configuration(choices, routes), InconsistentChoices);
}

TEST(CheckConfigurationTest, RejectsBrokenInvariants) {
  const std::vector<Route> routes{route({1, 2, 3}), route({5, 2, 3})};
  PlatoonConfiguration c = PlatoonConfiguration::all_solo(routes);
  c.predecessors[0][0] = 2;  // edge 1->2 is not on truck 2's route
  EXPECT_THROW(check_configuration(c, routes), InvalidConfiguration);
  c = PlatoonConfiguration::all_solo(routes);
  c.predecessors[1][1] = 1;  // predecessor must have a higher id
  EXPECT_THROW(check_configuration(c, routes), InvalidConfiguration);
}

std::vector<PlatoonConfiguration> drain(ConfigurationEnumerator& e) {
  std::vector<PlatoonConfiguration> out;
  while (auto c = e.next()) out.push_back(std::move(*c));
  return out;
}

std::vector<TimeWindows> wide_windows(const std::vector<Route>& routes) {
  std::vector<TimeWindows> w;
  for (const auto& r : routes) {
    const std::size_t n = r.nodes().size();
    TimeWindows t{std::vector<double>(n, 0.0), std::vector<double>(n, 100.0)};
    t.upper[0] = 0.0;
    w.push_back(t);
  }
  return w;
}

TEST(ConfigurationEnumeratorTest, DisjointRoutesGiveOnlySolo) {
  const std::vector<Route> routes{route({1, 2}), route({3, 4})};
  ConfigurationEnumerator e(routes, wide_windows(routes));
  const auto all = drain(e);
  ASSERT_EQ(all.size(), 1u);
  EXPECT_TRUE(all[0].is_all_solo());
  EXPECT_FALSE(e.truncated());
}

TEST(ConfigurationEnumeratorTest, TwoSharedEdgesGiveFourConfigurations) {
  const std::vector<Route> routes{route({1, 2, 3, 4}), route({5, 2, 3, 4})};
  ConfigurationEnumerator e(routes, wide_windows(routes));
  const auto all = drain(e);
  ASSERT_EQ(all.size(), 4u);
  EXPECT_TRUE(all[0].is_all_solo());
  EXPECT_EQ(all[1].predecessors[0], (std::vector<int>{1, 2, 1}));
  EXPECT_EQ(all[2].predecessors[0], (std::vector<int>{1, 1, 2}));
  EXPECT_EQ(all[3].predecessors[0], (std::vector<int>{1, 2, 2}));
}

TEST(ConfigurationEnumeratorTest, TruncatesAtCap) {
  const std::vector<Route> routes{route({1, 2, 3, 4}), route({5, 2, 3, 4})};
  ConfigurationEnumerator e(routes, wide_windows(routes), 2);
  EXPECT_EQ(drain(e).size(), 2u);
  EXPECT_TRUE(e.truncated());
  ConfigurationEnumerator exact(routes, wide_windows(routes), 4);
  EXPECT_EQ(drain(exact).size(), 4u);
  EXPECT_FALSE(exact.truncated());
}

std::size_t merged_edges(const std::vector<MergeChoice>& enc) {
  std::size_t n = 0;
  for (const auto& c : enc) n += c.merged_edges();
  return n;
}

// Random three-truck trunks: every yielded configuration is valid, canonical,
// unique, and the merged-edge count never decreases.
TEST(ConfigurationEnumeratorTest, PropertiesOnRandomTrunks) {
  std::mt19937 rng(21);
  for (int trial = 0; trial < 30; ++trial) {
    std::uniform_int_distribution<int> trunk_len(1, 4);
    const int L = trunk_len(rng);
    std::vector<Route> routes;
    for (int k = 1; k <= 3; ++k) {
      std::uniform_int_distribution<int> cut(0, L - 1);
      const int a = cut(rng);
      std::uniform_int_distribution<int> end(a + 1, L);
      const int b = end(rng);
      std::vector<NodeId> nodes{N(10 * k)};
      for (int i = a; i <= b; ++i) nodes.push_back(N(100 + i));
      nodes.push_back(N(10 * k + 1));
      routes.emplace_back(nodes, std::vector<double>(nodes.size() - 1, 10.0));
    }
    ConfigurationEnumerator e(routes, wide_windows(routes));
    const auto all = drain(e);
    ASSERT_FALSE(all.empty());
    EXPECT_TRUE(all[0].is_all_solo());
    std::set<std::vector<std::vector<int>>> seen;
    std::size_t last = 0;
    for (const auto& c : all) {
      EXPECT_NO_THROW(check_configuration(c, routes));
      EXPECT_TRUE(seen.insert(c.predecessors).second) << "duplicate";
      const auto enc = encode_configuration(c, routes, e.pairs());
      EXPECT_EQ(compose_configuration(enc, routes), c);
      const std::size_t m = merged_edges(enc);
      EXPECT_GE(m, last);
      last = m;
    }
  }
}

}  // namespace
}  // namespace platoon

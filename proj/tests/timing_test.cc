#include "platoon/timing.h"

#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "test_support.h"

namespace platoon {
namespace {

using testing::N;

const Route kTwoEdges({N(1), N(2), N(3)}, {90.0, 45.0});

void expect_all_near(const std::vector<double>& got,
                     const std::vector<double>& want) {
  ASSERT_EQ(got.size(), want.size());
  for (std::size_t i = 0; i < got.size(); ++i) {
    EXPECT_NEAR(got[i], want[i], 1e-12) << "index " << i;
  }
}

TEST(ArrivalTimesTest, Recursion) {
  const std::vector<double> T{1.0, 0.5};
  expect_all_near(arrival_times(kTwoEdges, 0.0, T), {0.0, 1.0, 1.5});
  expect_all_near(arrival_times(Route({N(1)}, {}), 3.0, {}), {3.0});
  EXPECT_THROW(arrival_times(kTwoEdges, 0.0, std::vector<double>{1.0}),
               DimensionMismatch);
}

TEST(ArrivalTimesTest, TelescopesOnRandomTraversals) {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(0.1, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<NodeId> nodes{N(0)};
    std::vector<double> w, T;
    for (int i = 1; i <= 6; ++i) {
      nodes.push_back(N(i));
      w.push_back(10.0);
      T.push_back(u(rng));
    }
    const auto t = arrival_times(Route(nodes, w), 1.25, T);
    EXPECT_NEAR(t.back() - t.front(), std::accumulate(T.begin(), T.end(), 0.0),
                1e-12);
  }
}

TEST(EarliestArrivalTest, ForwardAtVmax) {
  expect_all_near(earliest_arrival(kTwoEdges, 0.0, 90.0), {0.0, 1.0, 1.5});
  expect_all_near(earliest_arrival(Route({N(1), N(2)}, {90.0}), 0.0, 90.0),
                  {0.0, 1.0});
  const auto slow = earliest_arrival(kTwoEdges, 0.0, 90.0);
  const auto fast = earliest_arrival(kTwoEdges, 0.0, 180.0);
  for (std::size_t i = 1; i < slow.size(); ++i) {
    EXPECT_NEAR(fast[i] - fast[i - 1], (slow[i] - slow[i - 1]) / 2.0, 1e-12);
  }
}

TEST(LatestArrivalTest, BackwardFromDeadline) {
  expect_all_near(latest_arrival(kTwoEdges, 0.0, 2.0, 90.0), {0.0, 1.5, 2.0});
  expect_all_near(latest_arrival(Route({N(1), N(2)}, {90.0}), 0.0, 5.0, 90.0),
                  {0.0, 5.0});
}

TEST(LatestArrivalTest, TightDeadlineCollapsesWindows) {
  const TimeWindows w = time_windows(kTwoEdges, 0.0, 1.5, 90.0);
  expect_all_near(w.lower, w.upper);
  EXPECT_TRUE(w.feasible());
  EXPECT_FALSE(time_windows(kTwoEdges, 0.0, 1.4, 90.0).feasible());
}

// Any target inside a window is reachable: constant speed up to the target,
// then constant speed from the target to the deadline.
TEST(TimeWindowsTest, EveryWindowPointIsReachable) {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const Route r({N(0), N(1), N(2), N(3), N(4)}, {30.0, 50.0, 20.0, 40.0});
  const double v = 90.0, start = 0.3, deadline = 2.4;
  const TimeWindows w = time_windows(r, start, deadline, v);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t i = 1 + rng() % 3;
    const double target = w.lower[i] + u(rng) * (w.upper[i] - w.lower[i]);
    std::vector<double> T(4);
    double before = 0.0, after = 0.0;
    for (std::size_t e = 0; e < 4; ++e) (e < i ? before : after) += r.edge_lengths()[e];
    for (std::size_t e = 0; e < 4; ++e) {
      const double W = r.edge_lengths()[e];
      T[e] = e < i ? W / before * (target - start)
                   : W / after * (deadline - target);
    }
    const auto t = arrival_times(r, start, T);
    EXPECT_NEAR(t[i], target, 1e-9);
    EXPECT_LE(t.back(), deadline + 1e-9);
    for (std::size_t e = 0; e < 4; ++e) {
      EXPECT_GE(T[e], r.edge_lengths()[e] / v - 1e-9);
    }
  }
}

TEST(SpeedPlanTest, ArrivalsAndSpeeds) {
  SpeedPlan p{{0.5}, {{1.0, 0.5}}};
  const Route routes[] = {kTwoEdges};
  const auto t = p.arrivals(routes);
  const auto v = p.speeds_kmh(routes);
  expect_all_near(t[0], {0.5, 1.5, 2.0});
  expect_all_near(v[0], {90.0, 90.0});
}

}  // namespace
}  // namespace platoon

#include "platoon/feasibility.h"

#include <random>

#include <gtest/gtest.h>

#include "platoon/oracle.h"
#include "test_support.h"

namespace platoon {
namespace {

using testing::assignment;
using testing::make_network;
using testing::routes_of;
using testing::windows_of;

// Truck 1: 1 -> 2 -> 3 -> 4 (45, 90, 45 km). Truck 2 starts at node 2 and
// drives 2 -> 3 -> 6 (90, 30 km). Following truck 2 on edge 2 -> 3 pins truck
// 1 to reach node 2 exactly at truck 2's start time.
Scenario chain(double start2, double deadline1 = 3.0) {
  Scenario s;
  s.network = make_network(
      {{1, 2, 45.0}, {2, 3, 90.0}, {3, 4, 45.0}, {3, 6, 30.0}});
  s.assignments = {assignment(1, 1, 4, 0.0, deadline1),
                   assignment(2, 2, 6, start2, start2 + 2.0)};
  return s;
}

const PlatoonConfiguration kFollowOnMiddle{{{1, 2, 1}, {2, 2}}};

void expect_window(const TimeWindows& w, std::vector<double> lo,
                   std::vector<double> hi) {
  ASSERT_EQ(w.lower.size(), lo.size());
  for (std::size_t i = 0; i < lo.size(); ++i) {
    EXPECT_NEAR(w.lower[i], lo[i], 1e-12) << "lower " << i;
    EXPECT_NEAR(w.upper[i], hi[i], 1e-12) << "upper " << i;
  }
}

TEST(CheckFeasibilityTest, AllSoloLeavesWindowsUnchanged) {
  const Scenario s = chain(0.8);
  const auto routes = routes_of(s);
  const auto initial = windows_of(s, routes);
  const auto out = check_feasibility(PlatoonConfiguration::all_solo(routes),
                                     routes, initial, 90.0);
  ASSERT_TRUE(out.feasible());
  for (std::size_t k = 0; k < routes.size(); ++k) {
    EXPECT_EQ(out.windows[k].lower, initial[k].lower);
    EXPECT_EQ(out.windows[k].upper, initial[k].upper);
  }
}

// Hand arithmetic at v_max = 90: truck 1 must be at node 2 at 0.8, so node 3
// is reached no earlier than 1.8 and node 4 no earlier than 2.3. The shared
// node 3 takes the smaller upper bound, truck 2's 2.8 - 30/90.
TEST(CheckFeasibilityTest, MergePinsMeetingTimeAndPropagates) {
  const Scenario s = chain(0.8);
  const auto routes = routes_of(s);
  const auto out =
      check_feasibility(kFollowOnMiddle, routes, windows_of(s, routes), 90.0);
  ASSERT_TRUE(out.feasible());
  const double hi3 = 2.8 - 30.0 / 90.0;
  expect_window(out.windows[0], {0.0, 0.8, 1.8, 2.3}, {0.0, 0.8, hi3, 3.0});
  expect_window(out.windows[1], {0.8, 1.8, 1.8 + 30.0 / 90.0}, {0.8, hi3, 2.8});
  EXPECT_TRUE(brute_force_feasibility(kFollowOnMiddle, s, 1e-3));
}

// The propagated lower bound 2.3 at truck 1's destination is tight: a
// deadline there is feasible and anything below it is not.
TEST(CheckFeasibilityTest, PropagatedBoundIsTight) {
  for (double deadline : {2.3, 2.29}) {
    const Scenario s = chain(0.8, deadline);
    const auto routes = routes_of(s);
    const bool pruned =
        check_feasibility(kFollowOnMiddle, routes, windows_of(s, routes), 90.0)
            .feasible();
    EXPECT_EQ(pruned, deadline >= 2.3) << deadline;
    EXPECT_EQ(brute_force_feasibility(kFollowOnMiddle, s, 1e-3), pruned)
        << deadline;
  }
}

TEST(CheckFeasibilityTest, DisjointWindowsAreInfeasible) {
  // Truck 1 is at node 2 no later than 3.0 - 1.5 = 1.5.
  const Scenario s = chain(1.6);
  const auto routes = routes_of(s);
  const auto out =
      check_feasibility(kFollowOnMiddle, routes, windows_of(s, routes), 90.0);
  EXPECT_FALSE(out.feasible());
  EXPECT_TRUE(out.truck == 1 || out.truck == 2);
  EXPECT_FALSE(brute_force_feasibility(kFollowOnMiddle, s, 1e-3));
}

// Pruning only shrinks windows, keeps merged nodes identical, and agrees
// with the grid search away from the feasibility boundary.
TEST(CheckFeasibilityTest, AgreesWithGridSearchOnRandomTrunks) {
  std::mt19937 rng(17);
  int compared = 0, infeasible = 0;
  for (int trial = 0; trial < 40; ++trial) {
    testing::RandomScenarioSpec spec;
    spec.trucks = 2 + trial % 2;
    spec.trunk_edges = 2 + trial % 2;
    spec.slack = 1.05;
    spec.jitter_h = 0.6;
    const Scenario s = testing::random_trunk_scenario(rng, spec);
    if (!validate(s).empty()) continue;
    const auto routes = routes_of(s);
    const auto initial = windows_of(s, routes);
    // Wide windows so the enumeration does not pre-filter anything.
    std::vector<TimeWindows> wide;
    for (const auto& r : routes) {
      TimeWindows w{std::vector<double>(r.nodes().size(), -1e6),
                    std::vector<double>(r.nodes().size(), 1e6)};
      wide.push_back(w);
    }
    ConfigurationEnumerator e(routes, wide);
    while (auto c = e.next()) {
      const auto out = check_feasibility(*c, routes, initial, 90.0);
      for (std::size_t k = 0; k < routes.size(); ++k) {
        for (std::size_t i = 0; i < routes[k].nodes().size(); ++i) {
          EXPECT_GE(out.windows[k].lower[i], initial[k].lower[i]);
          EXPECT_LE(out.windows[k].upper[i], initial[k].upper[i]);
        }
      }
      if (!testing::verdict_is_robust(*c, s, 0.02)) continue;
      ++compared;
      infeasible += !out.feasible();
      EXPECT_EQ(brute_force_feasibility(*c, s, 1e-3), out.feasible());
    }
  }
  EXPECT_GT(compared, 20);
  EXPECT_GT(infeasible, 0);
}

}  // namespace
}  // namespace platoon

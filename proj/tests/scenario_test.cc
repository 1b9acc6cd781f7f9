#include "platoon/scenario.h"

#include <gtest/gtest.h>

#include "test_support.h"

namespace platoon {
namespace {

using testing::assignment;
using testing::make_network;

Scenario one_edge(double deadline) {
  Scenario s;
  s.network = make_network({{1, 2, 90.0}});
  s.assignments = {assignment(1, 1, 2, 0.0, deadline)};
  return s;
}

TEST(ValidateTest, BoundaryDeadlineIsFeasible) {
  EXPECT_TRUE(validate(one_edge(1.0)).empty());
}

TEST(ValidateTest, TooTightDeadlineNamesAssignment) {
  const auto d = validate(one_edge(0.9));
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0].kind, Diagnostic::Kind::kInfeasible);
  EXPECT_EQ(d[0].assignment_id, 1);
  EXPECT_NE(d[0].message.find("assignment 1"), std::string::npos);
  EXPECT_NE(d[0].message.find("infeasible"), std::string::npos);
}

TEST(ValidateTest, AcceptsNegativeStartTimes) {
  Scenario s;
  s.network = make_network({{1, 2, 50.0}, {3, 2, 50.0}, {4, 2, 50.0}, {5, 2, 50.0}});
  const double starts[] = {0.2, -0.3, 0.75, -0.05};
  for (int k = 0; k < 4; ++k) {
    s.assignments.push_back(
        assignment(k + 1, k == 0 ? 1 : k + 2, 2, starts[k], starts[k] + 1.0));
  }
  s.params.v_max_kmh = 90.0;
  s.params.eta = 0.6;
  EXPECT_TRUE(validate(s).empty());
}

TEST(ValidateTest, ReportsMalformedScenarios) {
  Scenario s = one_edge(2.0);
  s.params.eta = 1.5;
  s.assignments.push_back(assignment(3, 1, 9, 0.0, 1.0));
  s.assignments.push_back(assignment(2, 2, 1, 0.0, 1.0));
  const auto d = validate(s);
  auto has = [&](Diagnostic::Kind kind) {
    for (const auto& x : d) {
      if (x.kind == kind) return true;
    }
    return false;
  };
  EXPECT_TRUE(has(Diagnostic::Kind::kInvalidParams));
  EXPECT_TRUE(has(Diagnostic::Kind::kUnknownNode));
  EXPECT_TRUE(has(Diagnostic::Kind::kUnreachable));
}

TEST(ValidateTest, RejectsBadIdsAndTimes) {
  Scenario s = one_edge(2.0);
  s.assignments[0].id = 2;
  EXPECT_FALSE(validate(s).empty());
  s = one_edge(2.0);
  s.assignments[0].deadline_h = -1.0;
  EXPECT_FALSE(validate(s).empty());
  s = one_edge(2.0);
  s.assignments[0].destination = s.assignments[0].origin;
  EXPECT_FALSE(validate(s).empty());
}

TEST(ReferenceDeadlineTest, UsesShortestPathLength) {
  Scenario s;
  s.network = make_network({{1, 2, 100.0}, {2, 3, 60.0}, {1, 3, 200.0}});
  EXPECT_DOUBLE_EQ(
      reference_deadline(s.network, assignment(1, 1, 3, 0.5, 0.0), 80.0),
      0.5 + 160.0 / 80.0);
}

}  // namespace
}  // namespace platoon

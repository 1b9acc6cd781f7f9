#include "platoon/cli.h"

#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "platoon/io.h"

namespace platoon {
namespace {

namespace fs = std::filesystem;

const std::string kMerge = PLATOON_SCENARIO_DIR "/two_truck_merge.json";

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::path(::testing::TempDir()) /
           ::testing::UnitTest::GetInstance()->current_test_info()->name();
    fs::create_directories(dir_);
  }

  std::string path(const std::string& name) const {
    return (dir_ / name).string();
  }

  std::string write(const std::string& name, const std::string& text) const {
    write_text_file(path(name), text);
    return path(name);
  }

  int run(std::vector<std::string> args) {
    out_.str("");
    err_.str("");
    return cli::run(args, out_, err_);
  }

  fs::path dir_;
  std::ostringstream out_, err_;
};

TEST_F(CliTest, PlanWritesJsonAndCsv) {
  const std::string json = path("plan.json"), csv = path("traj.csv");
  ASSERT_EQ(run({"plan", "--scenario", kMerge, "--output", json,
                 "--trajectories", csv}),
            cli::kExitOk)
      << err_.str();
  const PlanFile f = parse_plan(read_text_file(json));
  ASSERT_EQ(f.trucks.size(), 2u);
  EXPECT_GT(f.summary.savings_fraction, 0.0);
  EXPECT_EQ(read_text_file(csv).rfind("truck_id,", 0), 0u);
}

TEST_F(CliTest, PlanToStdoutIsDeterministic) {
  ASSERT_EQ(run({"plan", "--scenario", kMerge}), cli::kExitOk);
  const std::string first = out_.str();
  ASSERT_EQ(run({"plan", "--scenario", kMerge, "--threads", "2"}),
            cli::kExitOk);
  EXPECT_EQ(out_.str(), first);
}

TEST_F(CliTest, BaselineOnly) {
  ASSERT_EQ(run({"plan", "--scenario", kMerge, "--baseline-only"}),
            cli::kExitOk);
  const PlanFile f = parse_plan(out_.str());
  EXPECT_DOUBLE_EQ(f.summary.savings_fraction, 0.0);
  for (const auto& t : f.trucks) {
    for (const auto& role : t.roles) EXPECT_EQ(role, "solo");
  }
}

TEST_F(CliTest, IoAndParseErrors) {
  EXPECT_EQ(run({}), cli::kExitIoError);
  EXPECT_EQ(run({"frobnicate"}), cli::kExitIoError);
  EXPECT_EQ(run({"plan"}), cli::kExitIoError);
  EXPECT_EQ(run({"plan", "--scenario", path("missing.json")}),
            cli::kExitIoError);
  EXPECT_EQ(run({"plan", "--scenario", write("bad.json", "{\"nodes\": [1], \"x\": 0}")}),
            cli::kExitIoError);
  EXPECT_EQ(run({"plan", "--scenario", kMerge, "--max-configs", "0"}),
            cli::kExitIoError);
  EXPECT_EQ(run({"plan", "--scenario", kMerge, "--output",
                 path("no/such/dir/plan.json")}),
            cli::kExitIoError);
  EXPECT_EQ(run({"--help"}), cli::kExitOk);
  EXPECT_EQ(run({"plan", "--help"}), cli::kExitOk);
}

TEST_F(CliTest, InfeasibleScenario) {
  auto doc = nlohmann::json::parse(read_text_file(kMerge));
  doc["assignments"][1]["deadline_h"] = 1.0;
  const std::string p = write("infeasible.json", doc.dump());
  EXPECT_EQ(run({"plan", "--scenario", p}), cli::kExitInfeasible);
  EXPECT_NE(err_.str().find("infeasible"), std::string::npos);
  EXPECT_EQ(run({"oracle", "--scenario", p}), cli::kExitInfeasible);
}

TEST_F(CliTest, OracleAndTooLarge) {
  ASSERT_EQ(run({"oracle", "--scenario", kMerge, "--speed-levels", "10"}),
            cli::kExitOk)
      << err_.str();
  const auto doc = nlohmann::json::parse(out_.str());
  EXPECT_EQ(doc.at("speed_levels"), 10);
  EXPECT_EQ(doc.at("trucks").size(), 2u);

  auto big = nlohmann::json::parse(read_text_file(kMerge));
  for (int id = 3; id <= 4; ++id) {
    big["assignments"].push_back({{"id", id},
                                  {"origin", 1},
                                  {"destination", 5},
                                  {"start_time_h", 0.0},
                                  {"deadline_h", 3.0}});
  }
  EXPECT_EQ(run({"oracle", "--scenario", write("big.json", big.dump())}),
            cli::kExitTooLarge);
}

}  // namespace
}  // namespace platoon

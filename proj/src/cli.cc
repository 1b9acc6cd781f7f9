#include "platoon/cli.h"

#include <algorithm>
#include <optional>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "platoon/io.h"
#include "platoon/oracle.h"
#include "platoon/planner.h"

namespace platoon::cli {

namespace {

// Returns an exit code when parsing ends the command (help or error).
std::optional<int> parse(CLI::App& app, std::vector<std::string> args,
                         std::ostream& out, std::ostream& err) {
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << app.get_name() << ": " << e.what() << "\n";
    return kExitIoError;
  }
  return std::nullopt;
}

std::optional<Scenario> load_scenario(const std::string& path,
                                      std::ostream& err) {
  try {
    return parse_scenario(read_text_file(path));
  } catch (const std::exception& e) {
    err << "error: " << path << ": " << e.what() << "\n";
    return std::nullopt;
  }
}

}  // namespace

int run_plan(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err) {
  CLI::App app{"Plan platoons and fuel-optimal speeds", "platoon plan"};
  std::string scenario_path, output_path, trajectory_path;
  PlanOptions options;
  app.add_option("--scenario", scenario_path, "Scenario JSON")->required();
  app.add_option("--output", output_path, "Plan JSON (default: stdout)");
  app.add_option("--trajectories", trajectory_path, "Trajectory CSV");
  app.add_option("--max-configs", options.max_configs,
                 "Configuration enumeration cap")
      ->check(CLI::PositiveNumber);
  app.add_option("--kkt-tol", options.kkt_tol, "KKT residual tolerance")
      ->check(CLI::PositiveNumber);
  app.add_flag("--baseline-only", options.baseline_only,
               "Only the all-solo configuration");
  app.add_option("--threads", options.threads, "Worker threads (0: all)");
  if (auto code = parse(app, args, out, err)) return *code;

  const auto scenario = load_scenario(scenario_path, err);
  if (!scenario) return kExitIoError;

  PlanResult result;
  try {
    result = plan(*scenario, options);
  } catch (const InfeasibleScenario& e) {
    err << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitIoError;
  }
  for (const auto& w : result.warnings) err << "warning: " << w << "\n";

  const std::string text = serialize_plan(make_plan_file(result));
  try {
    if (output_path.empty()) {
      out << text;
    } else {
      write_text_file(output_path, text);
    }
    if (!trajectory_path.empty()) {
      write_text_file(trajectory_path, trajectory_csv(result));
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitIoError;
  }
  return kExitOk;
}

int run_oracle(const std::vector<std::string>& args, std::ostream& out,
               std::ostream& err) {
  CLI::App app{"Brute-force reference optimum for small scenarios",
               "platoon oracle"};
  std::string scenario_path, output_path;
  GridSpec grid;
  app.add_option("--scenario", scenario_path, "Scenario JSON")->required();
  app.add_option("--output", output_path, "Result JSON (default: stdout)");
  app.add_option("--speed-levels", grid.speed_levels, "Grid levels per node")
      ->check(CLI::Range(2, 100000));
  if (auto code = parse(app, args, out, err)) return *code;

  const auto scenario = load_scenario(scenario_path, err);
  if (!scenario) return kExitIoError;

  OracleResult result;
  try {
    plan_routes(*scenario);
    result = brute_force_plan(*scenario, grid);
  } catch (const TooLarge& e) {
    err << "too large: " << e.what() << "\n";
    return kExitTooLarge;
  } catch (const InfeasibleScenario& e) {
    err << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitIoError;
  }

  nlohmann::json doc;
  doc["objective"] = result.objective;
  doc["speed_levels"] = grid.speed_levels;
  doc["patterns"] = result.patterns;
  const auto speeds = result.plan.speeds_kmh(result.routes);
  nlohmann::json trucks = nlohmann::json::array();
  for (std::size_t k = 0; k < result.routes.size(); ++k) {
    std::vector<std::int64_t> route;
    for (NodeId n : result.routes[k].nodes()) route.push_back(n.value);
    trucks.push_back({{"id", k + 1},
                      {"route", route},
                      {"arrival_times_h", result.arrivals_h[k]},
                      {"speeds_kmh", speeds[k]}});
  }
  doc["trucks"] = trucks;
  const std::string text = doc.dump(2) + "\n";
  try {
    if (output_path.empty()) {
      out << text;
    } else {
      write_text_file(output_path, text);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitIoError;
  }
  return kExitOk;
}

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  const std::string usage =
      "usage: platoon plan --scenario PATH [options]\n"
      "       platoon oracle --scenario PATH [--speed-levels N]\n";
  if (args.empty()) {
    err << usage;
    return kExitIoError;
  }
  const std::vector<std::string> rest(args.begin() + 1, args.end());
  if (args[0] == "plan") return run_plan(rest, out, err);
  if (args[0] == "oracle") return run_oracle(rest, out, err);
  if (args[0] == "--help" || args[0] == "-h") {
    out << usage;
    return kExitOk;
  }
  err << "unknown command '" << args[0] << "'\n" << usage;
  return kExitIoError;
}

}  // namespace platoon::cli

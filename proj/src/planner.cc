#include "platoon/planner.h"

#include <algorithm>
#include <optional>
#include <sstream>
#include <thread>

namespace platoon {

namespace {

constexpr std::size_t kBatchSize = 64;

struct Evaluation {
  bool feasible = false;
  std::optional<ConfigRecord> record;
};

Evaluation evaluate(const PlatoonConfiguration& config,
                    std::span<const Route> routes,
                    const std::vector<TimeWindows>& windows,
                    const Scenario& scenario, const SolverOptions& solver) {
  Evaluation e;
  PrunedWindows pruned =
      check_feasibility(config, routes, windows, scenario.params.v_max_kmh);
  if (!pruned.feasible()) return e;
  e.feasible = true;
  const ReducedProgram program = build_reduced_program(config, routes, scenario);
  e.record = ConfigRecord{config, std::move(pruned.windows),
                          solve(program, solver)};
  return e;
}

std::vector<Evaluation> evaluate_batch(
    const std::vector<PlatoonConfiguration>& batch,
    std::span<const Route> routes, const std::vector<TimeWindows>& windows,
    const Scenario& scenario, const SolverOptions& solver, unsigned threads) {
  std::vector<Evaluation> out(batch.size());
  const unsigned workers = std::min<unsigned>(
      threads, static_cast<unsigned>(batch.size()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < batch.size(); ++i) {
      out[i] = evaluate(batch[i], routes, windows, scenario, solver);
    }
    return out;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < batch.size(); i += workers) {
          out[i] = evaluate(batch[i], routes, windows, scenario, solver);
        }
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

void note_residuals(KktResiduals& worst, const KktResiduals& r) {
  worst.stationarity = std::max(worst.stationarity, r.stationarity);
  worst.primal = std::max(worst.primal, r.primal);
  worst.complementarity = std::max(worst.complementarity, r.complementarity);
}

}  // namespace

std::vector<Route> plan_routes(const Scenario& scenario,
                               std::vector<std::string>* warnings) {
  const auto diagnostics = validate(scenario);
  if (!diagnostics.empty()) {
    std::ostringstream msg;
    std::vector<int> infeasible;
    bool only_infeasible = true;
    for (std::size_t i = 0; i < diagnostics.size(); ++i) {
      if (i) msg << "; ";
      msg << diagnostics[i].message;
      if (diagnostics[i].kind == Diagnostic::Kind::kInfeasible) {
        infeasible.push_back(diagnostics[i].assignment_id);
      } else {
        only_infeasible = false;
      }
    }
    if (only_infeasible) throw InfeasibleScenario(msg.str(), infeasible);
    throw InvalidScenario(msg.str());
  }
  std::vector<Route> routes;
  for (const auto& a : assignments_by_id(scenario)) {
    PathResult p = shortest_path(scenario.network, a.origin, a.destination);
    if (!p.unique && warnings) {
      warnings->push_back("assignment " + std::to_string(a.id) +
                          ": shortest path is not unique; using the "
                          "lexicographically smallest");
    }
    routes.push_back(std::move(p.route));
  }
  return routes;
}

PlanResult plan(const Scenario& scenario, const PlanOptions& options) {
  PlanResult result;
  result.routes = plan_routes(scenario, &result.warnings);
  const auto assignments = assignments_by_id(scenario);
  const auto& routes = result.routes;
  const double v_max = scenario.params.v_max_kmh;

  std::vector<TimeWindows> windows;
  for (std::size_t k = 0; k < routes.size(); ++k) {
    windows.push_back(time_windows(routes[k], assignments[k].start_time_h,
                                   assignments[k].deadline_h, v_max));
  }

  SolverOptions solver;
  solver.kkt_tol = options.kkt_tol;
  unsigned threads = options.threads;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());

  std::optional<ConfigRecord> best;
  std::optional<ConfigRecord> baseline;
  auto consider = [&](Evaluation& e) {
    ++result.stats.configs_enumerated;
    if (!e.feasible) return;
    ++result.stats.configs_feasible;
    ConfigRecord& rec = *e.record;
    if (rec.solution.status != SolveStatus::kOptimal) {
      result.warnings.push_back(
          "configuration " + std::to_string(result.stats.configs_enumerated) +
          " not solved: " + to_string(rec.solution.status));
      return;
    }
    ++result.stats.configs_solved;
    note_residuals(result.stats.worst_residuals, rec.solution.residuals);
    if (!baseline && rec.config.is_all_solo()) baseline = rec;
    if (!best || rec.solution.objective < best->solution.objective) best = rec;
    if (options.keep_records) result.records.push_back(std::move(rec));
  };

  if (options.baseline_only) {
    Evaluation e = evaluate(PlatoonConfiguration::all_solo(routes), routes,
                            windows, scenario, solver);
    consider(e);
  } else {
    ConfigurationEnumerator enumerator(routes, windows, options.max_configs);
    for (const auto& w : enumerator.warnings()) result.warnings.push_back(w);
    std::vector<PlatoonConfiguration> batch;
    bool done = false;
    while (!done) {
      batch.clear();
      while (batch.size() < kBatchSize) {
        auto next = enumerator.next();
        if (!next) {
          done = true;
          break;
        }
        batch.push_back(std::move(*next));
      }
      auto evals =
          evaluate_batch(batch, routes, windows, scenario, solver, threads);
      for (auto& e : evals) consider(e);
    }
    result.stats.truncated = enumerator.truncated();
  }

  if (!baseline || !best) {
    throw std::runtime_error("the all-solo configuration could not be solved");
  }

  const FuelParams& params = scenario.params;
  auto speed_plan = [&](const SolverResult& s) {
    SpeedPlan p;
    for (const auto& a : assignments) p.start_times_h.push_back(a.start_time_h);
    p.traversal_h = s.traversal_h;
    return p;
  };

  result.config = best->config;
  result.plan = speed_plan(best->solution);
  result.arrivals_h = result.plan.arrivals(routes);
  result.speeds_kmh = result.plan.speeds_kmh(routes);
  result.roles = platoon_roles(result.config, routes);
  result.objective = best->solution.objective;
  result.total_fuel_l = total_fuel(routes, result.plan, &result.config, params);

  const SpeedPlan base_plan = speed_plan(baseline->solution);
  result.baseline_objective = baseline->solution.objective;
  result.baseline_fuel_l = total_fuel(routes, base_plan, nullptr, params);
  if (result.baseline_objective > 0.0) {
    result.savings_fraction = 1.0 - result.objective / result.baseline_objective;
  }
  if (result.baseline_fuel_l > 0.0) {
    result.fuel_savings_fraction =
        1.0 - result.total_fuel_l / result.baseline_fuel_l;
  }
  return result;
}

PlanResult solo_baseline(const Scenario& scenario) {
  PlanOptions options;
  options.baseline_only = true;
  return plan(scenario, options);
}

}  // namespace platoon

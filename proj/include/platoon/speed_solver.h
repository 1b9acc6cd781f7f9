#ifndef PLATOON_SPEED_SOLVER_H_
#define PLATOON_SPEED_SOLVER_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "platoon/platoon_config.h"
#include "platoon/road_graph.h"
#include "platoon/scenario.h"

namespace platoon {

/// sum(coefficient * x[variable]) compared against rhs.
struct LinearRow {
  std::vector<std::pair<std::size_t, double>> terms;
  double rhs = 0.0;

  double evaluate(std::span<const double> x) const;
};

/// Fuel-optimal traversal times for one configuration, with traversal-time
/// equalities of platooning trucks folded into shared variables:
///
///   min  sum_g c_g / x_g^2
///   s.t. x_g >= lower_bounds[g]          (v_max)
///        deadline rows: sum x <= rhs      (one per truck)
///        meeting rows:  sum x == rhs      (equal arrival at merge nodes)
struct ReducedProgram {
  std::vector<double> coefficients;
  std::vector<double> lower_bounds;
  std::vector<LinearRow> deadline_rows;
  std::vector<LinearRow> meeting_rows;

  /// variable_of[k-1][i]: variable carrying T_k[i].
  std::vector<std::vector<std::size_t>> variable_of;
  std::vector<double> start_times_h;
  std::vector<double> deadlines_h;

  /// Truck `truck` (0-based) follows `lead` on edge `edge`, which is edge
  /// `lead_edge` of the leader's route.
  struct Link {
    std::size_t truck, edge, lead, lead_edge;
  };
  std::vector<Link> links;

  std::size_t variable_count() const { return coefficients.size(); }
  double objective(std::span<const double> x) const;
  std::vector<double> gradient(std::span<const double> x) const;
  /// Per-truck traversal times from variable values.
  std::vector<std::vector<double>> expand(std::span<const double> x) const;
  /// Largest violation (hours) of any bound, deadline or meeting equality.
  double max_violation(std::span<const double> x) const;
};

ReducedProgram build_reduced_program(const PlatoonConfiguration& config,
                                     std::span<const Route> routes,
                                     const Scenario& scenario);

enum class SolveStatus { kOptimal, kInfeasible, kMaxIterations };

const char* to_string(SolveStatus status);

struct KktResiduals {
  double stationarity = 0.0;     // relative to max(1, |grad f|_inf)
  double primal = 0.0;           // hours
  double complementarity = 0.0;  // sum lambda_i s_i / max(1, |f|)
};

struct SolverResult {
  std::vector<double> variables;
  std::vector<std::vector<double>> traversal_h;
  double objective = 0.0;
  KktResiduals residuals;
  int iterations = 0;
  SolveStatus status = SolveStatus::kOptimal;
  std::string message;
};

struct SolverOptions {
  double kkt_tol = 1e-6;
  double feasibility_tol = 1e-8;
  int max_iterations = 2000;  // Newton steps over all barrier stages
};

/// Log-barrier interior point method with equality-constrained Newton steps.
/// Inequalities that can never be strict are pinned before iterating, so a
/// program whose feasible set is a single point returns with zero iterations.
SolverResult solve(const ReducedProgram& program,
                   const SolverOptions& options = {},
                   std::optional<std::span<const double>> warm_start = {});

}  // namespace platoon

#endif  // PLATOON_SPEED_SOLVER_H_

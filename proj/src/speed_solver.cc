#include "platoon/speed_solver.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <Eigen/Dense>

#include "platoon/scenario.h"

namespace platoon {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// An inequality whose largest attainable slack is below this is treated as
// an equality.
constexpr double kPinTol = 1e-9;

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
  }

 private:
  std::vector<std::size_t> parent_;
};

// Accumulates coefficients per variable, dropping cancelled terms.
LinearRow make_row(std::vector<std::pair<std::size_t, double>> terms,
                   double rhs) {
  std::sort(terms.begin(), terms.end());
  LinearRow row;
  row.rhs = rhs;
  for (const auto& [v, c] : terms) {
    if (!row.terms.empty() && row.terms.back().first == v) {
      row.terms.back().second += c;
    } else {
      row.terms.emplace_back(v, c);
    }
  }
  std::erase_if(row.terms, [](const auto& t) { return t.second == 0.0; });
  return row;
}

}  // namespace

double LinearRow::evaluate(std::span<const double> x) const {
  double s = 0.0;
  for (const auto& [v, c] : terms) s += c * x[v];
  return s;
}

double ReducedProgram::objective(std::span<const double> x) const {
  double f = 0.0;
  for (std::size_t g = 0; g < coefficients.size(); ++g) {
    f += coefficients[g] / (x[g] * x[g]);
  }
  return f;
}

std::vector<double> ReducedProgram::gradient(std::span<const double> x) const {
  std::vector<double> g(coefficients.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    g[i] = -2.0 * coefficients[i] / (x[i] * x[i] * x[i]);
  }
  return g;
}

std::vector<std::vector<double>> ReducedProgram::expand(
    std::span<const double> x) const {
  std::vector<std::vector<double>> out(variable_of.size());
  for (std::size_t k = 0; k < variable_of.size(); ++k) {
    for (std::size_t v : variable_of[k]) out[k].push_back(x[v]);
  }
  return out;
}

double ReducedProgram::max_violation(std::span<const double> x) const {
  double worst = 0.0;
  for (std::size_t g = 0; g < lower_bounds.size(); ++g) {
    worst = std::max(worst, lower_bounds[g] - x[g]);
  }
  for (const LinearRow& r : deadline_rows) {
    worst = std::max(worst, r.evaluate(x) - r.rhs);
  }
  for (const LinearRow& r : meeting_rows) {
    worst = std::max(worst, std::abs(r.evaluate(x) - r.rhs));
  }
  return worst;
}

ReducedProgram build_reduced_program(const PlatoonConfiguration& config,
                                     std::span<const Route> routes,
                                     const Scenario& scenario) {
  const auto assignments = assignments_by_id(scenario);
  const FuelParams& params = scenario.params;
  if (config.predecessors.size() != routes.size() ||
      assignments.size() != routes.size()) {
    throw DimensionMismatch("configuration, routes and assignments differ in "
                            "truck count");
  }
  check_configuration(config, routes);

  ReducedProgram p;
  std::vector<std::size_t> offset(routes.size() + 1, 0);
  for (std::size_t k = 0; k < routes.size(); ++k) {
    offset[k + 1] = offset[k] + routes[k].edge_count();
  }
  DisjointSets slots(offset.back());
  for (std::size_t k = 0; k < routes.size(); ++k) {
    for (std::size_t j = 0; j < routes[k].edge_count(); ++j) {
      const int pred = config.predecessors[k][j];
      if (pred == static_cast<int>(k) + 1) continue;
      const std::size_t lead = static_cast<std::size_t>(pred) - 1;
      const std::size_t jl = *routes[lead].index_of(routes[k].nodes()[j]);
      p.links.push_back({k, j, lead, jl});
      slots.unite(offset[k] + j, offset[lead] + jl);
    }
  }

  std::vector<std::size_t> var_of_root(offset.back(), SIZE_MAX);
  p.variable_of.resize(routes.size());
  for (std::size_t k = 0; k < routes.size(); ++k) {
    const auto& w = routes[k].edge_lengths();
    for (std::size_t j = 0; j < w.size(); ++j) {
      std::size_t& v = var_of_root[slots.find(offset[k] + j)];
      if (v == SIZE_MAX) {
        v = p.coefficients.size();
        p.coefficients.push_back(0.0);
        p.lower_bounds.push_back(w[j] / params.v_max_kmh);
      }
      const bool follows = config.predecessors[k][j] != static_cast<int>(k) + 1;
      p.coefficients[v] += (follows ? params.eta : 1.0) * w[j] * w[j] * w[j];
      p.variable_of[k].push_back(v);
    }
  }

  for (std::size_t k = 0; k < routes.size(); ++k) {
    p.start_times_h.push_back(assignments[k].start_time_h);
    p.deadlines_h.push_back(assignments[k].deadline_h);
    std::vector<std::pair<std::size_t, double>> terms;
    for (std::size_t v : p.variable_of[k]) terms.emplace_back(v, 1.0);
    p.deadline_rows.push_back(make_row(
        std::move(terms), assignments[k].deadline_h - assignments[k].start_time_h));
  }

  // Equal arrival at the entry node of each followed edge. The exit node
  // follows from the shared traversal variable.
  for (const auto& l : p.links) {
    std::vector<std::pair<std::size_t, double>> terms;
    for (std::size_t i = 0; i < l.edge; ++i) {
      terms.emplace_back(p.variable_of[l.truck][i], 1.0);
    }
    for (std::size_t i = 0; i < l.lead_edge; ++i) {
      terms.emplace_back(p.variable_of[l.lead][i], -1.0);
    }
    LinearRow row = make_row(std::move(terms), p.start_times_h[l.lead] -
                                                   p.start_times_h[l.truck]);
    if (row.terms.empty() && row.rhs == 0.0) continue;
    p.meeting_rows.push_back(std::move(row));
  }
  return p;
}

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal:
      return "optimal";
    case SolveStatus::kInfeasible:
      return "infeasible";
    case SolveStatus::kMaxIterations:
      return "max_iterations";
  }
  return "unknown";
}

namespace {

// Arrival-time points (merged where trucks meet) plus an origin, with all
// difference constraints of the program. dist(u, v) bounds t_v - t_u.
class TimeNetwork {
 public:
  explicit TimeNetwork(const ReducedProgram& p) {
    const std::size_t trucks = p.variable_of.size();
    std::vector<std::size_t> offset(trucks + 1, 0);
    for (std::size_t k = 0; k < trucks; ++k) {
      offset[k + 1] = offset[k] + p.variable_of[k].size() + 1;
    }
    DisjointSets sets(offset.back());
    for (const auto& l : p.links) {
      sets.unite(offset[l.truck] + l.edge, offset[l.lead] + l.lead_edge);
      sets.unite(offset[l.truck] + l.edge + 1,
                 offset[l.lead] + l.lead_edge + 1);
    }
    std::vector<std::size_t> id(offset.back(), SIZE_MAX);
    point_.resize(trucks);
    for (std::size_t k = 0; k < trucks; ++k) {
      for (std::size_t i = 0; i <= p.variable_of[k].size(); ++i) {
        std::size_t& r = id[sets.find(offset[k] + i)];
        if (r == SIZE_MAX) r = size_++;
        point_[k].push_back(r);
      }
    }
    origin_ = size_++;
    d_.assign(size_ * size_, kInf);
    for (std::size_t u = 0; u < size_; ++u) at(u, u) = 0.0;

    for (std::size_t k = 0; k < trucks; ++k) {
      const std::size_t s = point_[k].front();
      const std::size_t last = point_[k].back();
      tighten(origin_, s, p.start_times_h[k]);
      tighten(s, origin_, -p.start_times_h[k]);
      tighten(origin_, last, p.deadlines_h[k]);
      for (std::size_t i = 0; i < p.variable_of[k].size(); ++i) {
        tighten(point_[k][i + 1], point_[k][i],
                -p.lower_bounds[p.variable_of[k][i]]);
      }
    }
    for (std::size_t m = 0; m < size_; ++m) {
      for (std::size_t u = 0; u < size_; ++u) {
        const double um = at(u, m);
        if (um == kInf) continue;
        for (std::size_t v = 0; v < size_; ++v) {
          const double cand = um + at(m, v);
          if (cand < at(u, v)) at(u, v) = cand;
        }
      }
    }
  }

  bool consistent() const {
    for (std::size_t u = 0; u < size_; ++u) {
      if (dist(u, u) < -kPinTol) return false;
    }
    return true;
  }

  double dist(std::size_t u, std::size_t v) const { return d_[u * size_ + v]; }
  std::size_t point(std::size_t k, std::size_t i) const { return point_[k][i]; }
  std::size_t origin() const { return origin_; }
  std::size_t size() const { return size_; }

 private:
  double& at(std::size_t u, std::size_t v) { return d_[u * size_ + v]; }
  void tighten(std::size_t u, std::size_t v, double w) {
    at(u, v) = std::min(at(u, v), w);
  }

  std::vector<std::vector<std::size_t>> point_;
  std::size_t size_ = 0;
  std::size_t origin_ = 0;
  std::vector<double> d_;
};

struct Representative {
  std::size_t truck, edge;
};

std::vector<Representative> representatives(const ReducedProgram& p) {
  std::vector<Representative> rep(p.variable_count(), {SIZE_MAX, 0});
  for (std::size_t k = 0; k < p.variable_of.size(); ++k) {
    for (std::size_t i = 0; i < p.variable_of[k].size(); ++i) {
      if (rep[p.variable_of[k][i]].truck == SIZE_MAX) {
        rep[p.variable_of[k][i]] = {k, i};
      }
    }
  }
  return rep;
}

// Averages the earliest, latest and, per traversal bound, one schedule that
// keeps that bound slack. Each is feasible, so the average is feasible and
// strict on every inequality that is not pinned.
std::vector<double> interior_times(const TimeNetwork& net,
                                   const std::vector<std::size_t>& slack_from) {
  const std::size_t n = net.size();
  const std::size_t z = net.origin();
  std::vector<double> sum(n, 0.0);
  std::size_t count = 0;
  auto add = [&](auto&& value) {
    for (std::size_t y = 0; y < n; ++y) sum[y] += value(y);
    ++count;
  };
  add([&](std::size_t y) { return net.dist(z, y); });
  add([&](std::size_t y) { return -net.dist(y, z); });
  for (std::size_t c = 0; c < slack_from.size(); ++c) {
    const std::size_t a = slack_from[c];
    const double ea = -net.dist(a, z);
    add([&](std::size_t y) {
      return std::min(net.dist(z, y), ea + net.dist(a, y));
    });
  }
  for (double& s : sum) s /= static_cast<double>(count);
  return sum;
}

struct Barrier {
  // Free variables map to program variables; fixed ones keep `base` values.
  std::vector<std::size_t> free;
  std::vector<double> base;
  std::vector<double> coeff;
  std::vector<double> lower;
  // Deadline rows on free variables: a^T x <= rhs.
  std::vector<std::vector<std::size_t>> rows;
  std::vector<double> row_rhs;
  Eigen::MatrixXd A;
  Eigen::VectorXd b;

  std::size_t inequality_count() const { return free.size() + rows.size(); }

  double objective(const Eigen::VectorXd& x) const {
    double f = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) f += coeff[i] / (x[i] * x[i]);
    return f;
  }

  double row_slack(std::size_t r, const Eigen::VectorXd& x) const {
    double s = row_rhs[r];
    for (std::size_t i : rows[r]) s -= x[i];
    return s;
  }

  bool strictly_feasible(const Eigen::VectorXd& x) const {
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      if (!(x[i] > lower[i])) return false;
    }
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (!(row_slack(r, x) > 0.0)) return false;
    }
    return true;
  }

  double phi(const Eigen::VectorXd& x, double mu) const {
    double v = objective(x);
    for (Eigen::Index i = 0; i < x.size(); ++i) v -= mu * std::log(x[i] - lower[i]);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      v -= mu * std::log(row_slack(r, x));
    }
    return v;
  }

  Eigen::VectorXd grad_phi(const Eigen::VectorXd& x, double mu) const {
    Eigen::VectorXd g(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      g[i] = -2.0 * coeff[i] / (x[i] * x[i] * x[i]) - mu / (x[i] - lower[i]);
    }
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const double s = row_slack(r, x);
      for (std::size_t i : rows[r]) g[i] += mu / s;
    }
    return g;
  }

  Eigen::MatrixXd hess_phi(const Eigen::VectorXd& x, double mu) const {
    const Eigen::Index n = x.size();
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double s = x[i] - lower[i];
      H(i, i) = 6.0 * coeff[i] / std::pow(x[i], 4) + mu / (s * s);
    }
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const double s = row_slack(r, x);
      const double w = mu / (s * s);
      for (std::size_t i : rows[r]) {
        for (std::size_t j : rows[r]) H(i, j) += w;
      }
    }
    return H;
  }

  // Scaled stationarity of the barrier subproblem, which equals the KKT
  // stationarity residual with multipliers mu / slack.
  double stationarity(const Eigen::VectorXd& x, double mu) const {
    Eigen::VectorXd r = grad_phi(x, mu);
    if (A.rows() > 0) {
      const Eigen::VectorXd nu = A.transpose().colPivHouseholderQr().solve(-r);
      r += A.transpose() * nu;
    }
    double gf = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      gf = std::max(gf, 2.0 * coeff[i] / std::abs(x[i] * x[i] * x[i]));
    }
    return r.lpNorm<Eigen::Infinity>() / std::max(1.0, gf);
  }

  // Largest step keeping every inequality strictly satisfied.
  double max_step(const Eigen::VectorXd& x, const Eigen::VectorXd& dx) const {
    double alpha = kInf;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      if (dx[i] < 0.0) alpha = std::min(alpha, (x[i] - lower[i]) / -dx[i]);
    }
    for (std::size_t r = 0; r < rows.size(); ++r) {
      double rate = 0.0;
      for (std::size_t i : rows[r]) rate += dx[i];
      if (rate > 0.0) alpha = std::min(alpha, row_slack(r, x) / rate);
    }
    return alpha;
  }
};

// Newton direction for min phi s.t. A dx = 0, via the Schur complement.
Eigen::VectorXd newton_direction(const Eigen::MatrixXd& H,
                                 const Eigen::VectorXd& g,
                                 const Eigen::MatrixXd& A) {
  const Eigen::LDLT<Eigen::MatrixXd> hf(H);
  if (A.rows() == 0) return -hf.solve(g);
  const Eigen::MatrixXd Y = hf.solve(A.transpose());
  const Eigen::MatrixXd S = A * Y;
  const Eigen::VectorXd nu = S.ldlt().solve(-A * hf.solve(g));
  return -hf.solve(g + A.transpose() * nu);
}

}  // namespace

SolverResult solve(const ReducedProgram& program, const SolverOptions& options,
                   std::optional<std::span<const double>> warm_start) {
  SolverResult result;
  const std::size_t nvar = program.variable_count();
  auto finish_infeasible = [&](std::string message) {
    result.status = SolveStatus::kInfeasible;
    result.message = std::move(message);
    result.residuals.primal = kInf;
    result.objective = kInf;
    return result;
  };

  const TimeNetwork net(program);
  if (!net.consistent()) {
    return finish_infeasible("timing constraints admit no schedule");
  }

  // Pin inequalities that cannot hold strictly.
  const auto rep = representatives(program);
  std::vector<bool> pinned(nvar, false);
  std::vector<std::size_t> slack_from;
  for (std::size_t g = 0; g < nvar; ++g) {
    const std::size_t a = net.point(rep[g].truck, rep[g].edge);
    const std::size_t b = net.point(rep[g].truck, rep[g].edge + 1);
    if (net.dist(a, b) - program.lower_bounds[g] <= kPinTol) {
      pinned[g] = true;
    } else {
      slack_from.push_back(a);
    }
  }
  const std::size_t trucks = program.variable_of.size();
  std::vector<bool> deadline_pinned(trucks, false);
  for (std::size_t k = 0; k < trucks; ++k) {
    const std::size_t last = net.point(k, program.variable_of[k].size());
    const double earliest = -net.dist(last, net.origin());
    deadline_pinned[k] = program.deadlines_h[k] - earliest <= kPinTol;
  }

  // Starting point from the network, or the caller's if strictly feasible.
  std::vector<double> x0(nvar);
  {
    const auto t = interior_times(net, slack_from);
    for (std::size_t g = 0; g < nvar; ++g) {
      x0[g] = pinned[g] ? program.lower_bounds[g]
                        : t[net.point(rep[g].truck, rep[g].edge + 1)] -
                              t[net.point(rep[g].truck, rep[g].edge)];
    }
  }

  Barrier bar;
  bar.base = x0;
  std::vector<std::size_t> free_index(nvar, SIZE_MAX);
  for (std::size_t g = 0; g < nvar; ++g) {
    if (pinned[g]) continue;
    free_index[g] = bar.free.size();
    bar.free.push_back(g);
    bar.coeff.push_back(program.coefficients[g]);
    bar.lower.push_back(program.lower_bounds[g]);
  }
  const Eigen::Index n = static_cast<Eigen::Index>(bar.free.size());

  // Equalities on free variables: meeting rows plus pinned deadlines.
  std::vector<std::pair<const LinearRow*, bool>> eq_rows;
  for (const LinearRow& r : program.meeting_rows) eq_rows.push_back({&r, true});
  for (std::size_t k = 0; k < trucks; ++k) {
    const LinearRow& r = program.deadline_rows[k];
    if (deadline_pinned[k]) {
      eq_rows.push_back({&r, true});
      continue;
    }
    std::vector<std::size_t> idx;
    double rhs = r.rhs;
    for (const auto& [v, c] : r.terms) {
      if (pinned[v]) {
        rhs -= c * program.lower_bounds[v];
      } else {
        idx.push_back(free_index[v]);
      }
    }
    if (idx.empty()) continue;
    bar.rows.push_back(std::move(idx));
    bar.row_rhs.push_back(rhs);
  }
  Eigen::MatrixXd A_all = Eigen::MatrixXd::Zero(
      static_cast<Eigen::Index>(eq_rows.size()), n);
  Eigen::VectorXd b_all(static_cast<Eigen::Index>(eq_rows.size()));
  for (std::size_t r = 0; r < eq_rows.size(); ++r) {
    const LinearRow& row = *eq_rows[r].first;
    double rhs = row.rhs;
    for (const auto& [v, c] : row.terms) {
      if (pinned[v]) {
        rhs -= c * program.lower_bounds[v];
      } else {
        A_all(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(free_index[v])) += c;
      }
    }
    b_all[static_cast<Eigen::Index>(r)] = rhs;
  }
  for (Eigen::Index r = 0; r < A_all.rows(); ++r) {
    if (A_all.row(r).isZero(0.0) && std::abs(b_all[r]) > kPinTol) {
      return finish_infeasible("meeting constraints contradict fixed times");
    }
  }
  // Drop linearly dependent equality rows.
  if (A_all.rows() > 0 && n > 0) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A_all.transpose());
    qr.setThreshold(1e-10);
    const Eigen::Index rank = qr.rank();
    bar.A.resize(rank, n);
    bar.b.resize(rank);
    for (Eigen::Index i = 0; i < rank; ++i) {
      const Eigen::Index r = qr.colsPermutation().indices()[i];
      bar.A.row(i) = A_all.row(r);
      bar.b[i] = b_all[r];
    }
  } else {
    bar.A.resize(0, n);
    bar.b.resize(0);
  }

  Eigen::VectorXd x(n);
  for (Eigen::Index i = 0; i < n; ++i) x[i] = x0[bar.free[i]];
  if (warm_start && warm_start->size() == nvar) {
    Eigen::VectorXd w(n);
    for (Eigen::Index i = 0; i < n; ++i) w[i] = (*warm_start)[bar.free[i]];
    if (bar.strictly_feasible(w) &&
        (bar.A.rows() == 0 || (bar.A * w - bar.b).lpNorm<Eigen::Infinity>() <=
                                  kPinTol)) {
      x = w;
    }
  }
  if (n > 0 && !bar.strictly_feasible(x)) {
    return finish_infeasible("no strictly feasible starting point");
  }

  double mu = 0.0;
  const std::size_t m = bar.inequality_count();
  if (n > bar.A.rows()) {
    mu = bar.objective(x) / static_cast<double>(m);
    const double gap_target = 0.05 * options.kkt_tol;
    bool out_of_budget = false;
    while (true) {
      // Centering.
      const double center_tol = 1e-2 * options.kkt_tol;
      double resid = bar.stationarity(x, mu);
      for (int inner = 0; inner < 100 && resid > center_tol; ++inner) {
        if (result.iterations >= options.max_iterations) {
          out_of_budget = true;
          break;
        }
        const Eigen::VectorXd g = bar.grad_phi(x, mu);
        const Eigen::VectorXd dx =
            newton_direction(bar.hess_phi(x, mu), g, bar.A);
        if (!dx.allFinite()) break;
        // Near the center g.dx can lose its sign to roundoff; the line
        // search then relies on the residual test alone.
        const double slope = std::min(g.dot(dx), 0.0);
        ++result.iterations;
        double alpha = std::min(1.0, 0.99 * bar.max_step(x, dx));
        const double phi0 = bar.phi(x, mu);
        bool moved = false;
        while (alpha > 1e-16) {
          const Eigen::VectorXd trial = x + alpha * dx;
          if (bar.strictly_feasible(trial)) {
            const double phi1 = bar.phi(trial, mu);
            // Below roundoff in phi, fall back to the residual.
            const bool flat =
                std::abs(phi1 - phi0) <= 1e-13 * std::max(1.0, std::abs(phi0));
            if (phi1 <= phi0 + 0.01 * alpha * slope ||
                (flat && bar.stationarity(trial, mu) < resid)) {
              x = trial;
              moved = true;
              break;
            }
          }
          alpha *= 0.5;
        }
        if (!moved) break;
        resid = bar.stationarity(x, mu);
      }
      if (out_of_budget) break;
      if (static_cast<double>(m) * mu / std::max(1.0, std::abs(bar.objective(x))) <=
          gap_target) {
        break;
      }
      mu /= 5.0;
    }
    if (out_of_budget) result.status = SolveStatus::kMaxIterations;
  }

  // Residuals on the reduced space.
  std::vector<double> full = bar.base;
  for (Eigen::Index i = 0; i < n; ++i) full[bar.free[i]] = x[i];
  const double f = program.objective(full);
  if (n > 0 && mu > 0.0) {
    result.residuals.stationarity = bar.stationarity(x, mu);
    result.residuals.complementarity =
        static_cast<double>(m) * mu / std::max(1.0, std::abs(f));
  }
  result.residuals.primal = program.max_violation(full);

  result.variables = full;
  result.traversal_h = program.expand(full);
  result.objective = f;
  if (result.status != SolveStatus::kMaxIterations) {
    const bool ok = result.residuals.stationarity <= options.kkt_tol &&
                    result.residuals.complementarity <= options.kkt_tol &&
                    result.residuals.primal <= options.feasibility_tol;
    if (!ok) {
      result.status = result.residuals.primal > options.feasibility_tol
                          ? SolveStatus::kInfeasible
                          : SolveStatus::kMaxIterations;
      result.message = "KKT residuals above tolerance";
    }
  }
  return result;
}

}  // namespace platoon

#include "oligecon/solver.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace oligecon {

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::IterationLimit: return "iteration_limit";
    case SolveStatus::Infeasible: return "infeasible";
  }
  return "unknown";
}

std::vector<std::pair<int, int>> flow_variables(const Economy& e,
                                                const std::vector<int>& consumers) {
  std::vector<std::pair<int, int>> vars;
  for (int m : consumers)
    for (int k = 0; k < e.n_goods; ++k)
      if (e.beta(k, m) > 0.0) vars.emplace_back(k, m);
  return vars;
}

Eigen::VectorXd pack_flows(const std::vector<std::pair<int, int>>& vars,
                           const Eigen::MatrixXd& flows) {
  Eigen::VectorXd x(vars.size());
  for (size_t i = 0; i < vars.size(); ++i) x(static_cast<int>(i)) = flows(vars[i].first, vars[i].second);
  return x;
}

Eigen::MatrixXd unpack_flows(const Economy& e, const std::vector<std::pair<int, int>>& vars,
                             const Eigen::VectorXd& x) {
  Eigen::MatrixXd flows = Eigen::MatrixXd::Zero(e.n_goods, e.n_goods);
  for (size_t i = 0; i < vars.size(); ++i) flows(vars[i].first, vars[i].second) = x(static_cast<int>(i));
  return flows;
}

namespace {

struct VarIndex {
  std::vector<std::pair<int, int>> vars;
  Eigen::MatrixXi id;  // -1 where not a variable

  explicit VarIndex(const Economy& e, const std::vector<int>& consumers)
      : vars(flow_variables(e, consumers)), id(Eigen::MatrixXi::Constant(e.n_goods, e.n_goods, -1)) {
    for (size_t i = 0; i < vars.size(); ++i) id(vars[i].first, vars[i].second) = static_cast<int>(i);
  }
  int n() const { return static_cast<int>(vars.size()); }
};

std::vector<int> all_companies(const Economy& e) {
  std::vector<int> v(e.companies());
  for (int i = 0; i < e.companies(); ++i) v[i] = e.n_raw + i;
  return v;
}

// value-added of company m as a SmoothExpr over the stage's variables:
// v_m * alpha_m * prod x^beta  -  sum_k v_k x_km
void add_value_added(const Economy& e, const VarIndex& vi, SmoothExpr& expr, int m, double sign) {
  std::vector<int> vars;
  std::vector<double> exps;
  for (int k = 0; k < e.n_goods; ++k) {
    if (e.beta(k, m) <= 0.0) continue;
    const int id = vi.id(k, m);
    vars.push_back(id);
    exps.push_back(e.beta(k, m));
    expr.add_linear(id, -sign * e.prices(k));
  }
  expr.add_term(sign * e.prices(m) * e.alpha(m), std::move(vars), std::move(exps));
}

// output of company m (alpha_m * prod x^beta) with the given sign
void add_output(const Economy& e, const VarIndex& vi, SmoothExpr& expr, int m, double sign) {
  std::vector<int> vars;
  std::vector<double> exps;
  for (int k = 0; k < e.n_goods; ++k) {
    if (e.beta(k, m) <= 0.0) continue;
    vars.push_back(vi.id(k, m));
    exps.push_back(e.beta(k, m));
  }
  expr.add_term(sign * e.alpha(m), std::move(vars), std::move(exps));
}

// availability constraint of supplier m1 restricted to consumers inside
// the variable scope: sum_m2 x_{m1,m2} - y_m1 <= 0; absent when m1 has
// no in-scope consumers.
bool add_balance(const Economy& e, const VarIndex& vi, std::vector<SmoothExpr>& cons, int m1,
                 const std::vector<int>& scope_consumers) {
  SmoothExpr g(vi.n());
  bool any = false;
  for (int m2 : scope_consumers)
    if (e.beta(m1, m2) > 0.0) {
      g.add_linear(vi.id(m1, m2), 1.0);
      any = true;
    }
  if (!any) return false;
  add_output(e, vi, g, m1, -1.0);
  cons.push_back(std::move(g));
  return true;
}

void add_capture_caps(const Economy& e, const CaptureContext& ctx, const VarIndex& vi,
                      std::vector<SmoothExpr>& cons) {
  const std::set<int> members(ctx.oligarch.members.begin(), ctx.oligarch.members.end());
  for (int m1 = e.n_raw; m1 < e.n_goods; ++m1) {
    if (members.count(m1)) continue;
    double baseline_inflow = 0.0;
    SmoothExpr g(vi.n());
    bool any = false;
    for (int m2 : ctx.oligarch.members)
      if (e.beta(m1, m2) > 0.0) {
        g.add_linear(vi.id(m1, m2), 1.0);
        baseline_inflow += ctx.baseline.plan.flows(m1, m2);
        any = true;
      }
    if (!any) continue;
    const double cap =
        ctx.gamma * ctx.baseline.plan.outputs(m1) + (1.0 - ctx.gamma) * baseline_inflow;
    g.set_constant(-cap);
    cons.push_back(std::move(g));
  }
}

ConcaveProgram finish(const Economy& e, const VarIndex& vi, SmoothExpr objective,
                      std::vector<SmoothExpr> cons, double eps) {
  ConcaveProgram p;
  p.n = vi.n();
  p.objective = std::move(objective);
  p.constraints_le0 = std::move(cons);
  p.floor = Eigen::VectorXd::Constant(p.n, eps);
  return p;
}

bool strictly_feasible(const ConcaveProgram& p, const Eigen::VectorXd& x) {
  for (int i = 0; i < p.n; ++i)
    if (std::isfinite(p.floor(i)) && !(x(i) > p.floor(i))) return false;
  for (const auto& g : p.constraints_le0) {
    const double margin = 1e-9 * std::max(1.0, std::abs(g.constant()));
    if (!(g.value(x) < -margin)) return false;
  }
  return true;
}

// Uniform strictly feasible start: shrink t until every constraint has
// slack; works for all balance/cap shapes because production is
// sublinear in the flows.
Eigen::VectorXd uniform_start(const ConcaveProgram& p, double eps) {
  double t = 1.0;
  for (int i = 0; i < 120; ++i) {
    if (t > 1.0001 * eps) {
      Eigen::VectorXd x = Eigen::VectorXd::Constant(p.n, t);
      if (strictly_feasible(p, x)) return x;
    }
    t *= 0.5;
  }
  throw std::runtime_error("solver: no strictly feasible uniform start");
}

// Start from a known feasible plan shrunk slightly toward the floor;
// the shrink re-opens capture caps and balance slacks that the plan
// saturates (cap = baseline inflow at gamma = 0 in particular, where a
// uniform scan has no room when the baseline sits at the floor).
Eigen::VectorXd shrunk_start(const ConcaveProgram& p, const Eigen::VectorXd& reference,
                             double eps) {
  for (double theta : {1e-3, 1e-2, 0.1, 0.3}) {
    Eigen::VectorXd x =
        (Eigen::VectorXd::Constant(p.n, eps) + (1.0 - theta) * (reference.array() - eps).matrix())
            .cwiseMax(1.0000001 * eps);
    if (strictly_feasible(p, x)) return x;
  }
  return uniform_start(p, eps);
}

// Warm starts reuse another stage's solution, whose slacks sit at the
// barrier's final width; scaling the flows down re-opens the balance
// slacks (production is sublinear), the floor clip keeps the bounds.
Eigen::VectorXd push_interior(const Eigen::VectorXd& x, double eps) {
  return (0.9 * x).cwiseMax(1.05 * eps);
}

BarrierOptions options_from(const SolverSettings& s) {
  BarrierOptions o;
  o.kkt_tol = s.kkt_tolerance;
  o.mu_shrink = s.barrier_decrease;
  o.max_newton = s.max_iterations;
  return o;
}

PlanSolution assemble(const Economy& e, const VarIndex& vi, const BarrierResult& r,
                      double objective) {
  PlanSolution sol;
  sol.plan = make_plan(e, unpack_flows(e, vi.vars, r.x));
  sol.objective = objective;
  sol.kkt_residual = r.kkt_residual;
  sol.iterations = r.newton_steps;
  sol.status =
      r.status == BarrierStatus::Converged ? SolveStatus::Optimal : SolveStatus::IterationLimit;
  sol.multipliers.constraints = r.lambda;
  sol.multipliers.floors = r.nu;
  return sol;
}

}  // namespace

ConcaveProgram build_global_program(const Economy& e, const SolverSettings& s) {
  const auto companies = all_companies(e);
  VarIndex vi(e, companies);
  SmoothExpr obj(vi.n());
  for (int m : companies) add_value_added(e, vi, obj, m, 1.0);
  std::vector<SmoothExpr> cons;
  for (int m1 : companies) add_balance(e, vi, cons, m1, companies);
  return finish(e, vi, std::move(obj), std::move(cons), s.epsilon);
}

ConcaveProgram build_oligarch_program(const Economy& e, const CaptureContext& ctx,
                                      const SolverSettings& s) {
  VarIndex vi(e, ctx.oligarch.members);
  SmoothExpr obj(vi.n());
  for (int m : ctx.oligarch.members) add_value_added(e, vi, obj, m, 1.0);
  std::vector<SmoothExpr> cons;
  add_capture_caps(e, ctx, vi, cons);
  for (int m1 : ctx.oligarch.members) add_balance(e, vi, cons, m1, ctx.oligarch.members);
  return finish(e, vi, std::move(obj), std::move(cons), s.epsilon);
}

ConcaveProgram build_adaptation_program(const Economy& e, const OligarchSpec& oligarch,
                                        double oligarch_profit, const SolverSettings& s,
                                        const CaptureContext* capture) {
  const auto companies = all_companies(e);
  VarIndex vi(e, companies);
  const std::set<int> members(oligarch.members.begin(), oligarch.members.end());
  SmoothExpr obj(vi.n());
  for (int m : companies)
    if (!members.count(m)) add_value_added(e, vi, obj, m, 1.0);
  std::vector<SmoothExpr> cons;
  for (int m1 : companies) add_balance(e, vi, cons, m1, companies);
  // profit floor: (profit - eps) - oligarch VA <= 0
  SmoothExpr pf(vi.n());
  pf.set_constant(oligarch_profit - s.epsilon);
  for (int m : oligarch.members) add_value_added(e, vi, pf, m, -1.0);
  cons.push_back(std::move(pf));
  if (capture != nullptr && s.capture_in_adaptation) add_capture_caps(e, *capture, vi, cons);
  return finish(e, vi, std::move(obj), std::move(cons), s.epsilon);
}

PlanSolution solve_global_optimum(const Economy& e, const SolverSettings& s) {
  {
    const auto report = validate_economy(e);
    if (!report.ok())
      throw std::invalid_argument("solve_global_optimum: invalid economy: " + report.summary());
  }
  const auto companies = all_companies(e);
  VarIndex vi(e, companies);
  ConcaveProgram p = build_global_program(e, s);
  BarrierOptions opt = options_from(s);
  const BarrierResult r = maximize_barrier(p, uniform_start(p, s.epsilon), opt);
  PlanSolution sol = assemble(e, vi, r, 0.0);
  sol.objective = total_value_added(e, sol.plan).total;
  return sol;
}

PlanSolution solve_oligarch_stage(const Economy& e, const CaptureContext& ctx,
                                  const SolverSettings& s) {
  if (ctx.baseline.status != SolveStatus::Optimal)
    throw std::invalid_argument("solve_oligarch_stage: baseline solution must be Optimal");
  if (ctx.gamma < 0.0 || ctx.gamma > 1.0)
    throw std::invalid_argument("solve_oligarch_stage: gamma must lie in [0, 1]");
  VarIndex vi(e, ctx.oligarch.members);
  ConcaveProgram p = build_oligarch_program(e, ctx, s);
  BarrierOptions opt = options_from(s);
  const Eigen::VectorXd x0 =
      shrunk_start(p, pack_flows(vi.vars, ctx.baseline.plan.flows), s.epsilon);
  const BarrierResult r = maximize_barrier(p, x0, opt);
  PlanSolution sol = assemble(e, vi, r, 0.0);
  sol.objective = *total_value_added(e, sol.plan, &ctx.oligarch).oligarch_total;
  return sol;
}

PlanSolution solve_adaptation_stage(const Economy& e, const OligarchSpec& oligarch,
                                    double oligarch_profit, const SolverSettings& s,
                                    const CaptureContext* capture) {
  const auto companies = all_companies(e);
  VarIndex vi(e, companies);
  const std::set<int> members(oligarch.members.begin(), oligarch.members.end());
  const double floor = oligarch_profit - s.epsilon;

  SmoothExpr profit(vi.n());
  for (int m : oligarch.members) add_value_added(e, vi, profit, m, 1.0);

  // The profit floor is the one complicating constraint, and its
  // feasible slab can be epsilon-thin (the floor sits within epsilon of
  // the attainable maximum). Instead of a barrier across that slab,
  // ascend its dual: maximize  sum_{m not in O} rho_m + theta * sum_{m
  // in O} rho_m  under the balance constraints alone, and tune the
  // weight theta until the oligarch lands just above the floor. theta
  // is exactly the floor constraint's multiplier.
  auto weighted_program = [&](double theta) {
    ConcaveProgram p;
    p.n = vi.n();
    p.objective = SmoothExpr(vi.n());
    for (int m : companies)
      add_value_added(e, vi, p.objective, m, members.count(m) ? theta : 1.0);
    for (int m1 : companies) add_balance(e, vi, p.constraints_le0, m1, companies);
    if (capture != nullptr && s.capture_in_adaptation) add_capture_caps(e, *capture, vi, p.constraints_le0);
    p.floor = Eigen::VectorXd::Constant(p.n, s.epsilon);
    return p;
  };

  int iterations = 0;
  Eigen::VectorXd warm;
  if (capture != nullptr)
    warm = push_interior(pack_flows(vi.vars, capture->baseline.plan.flows), s.epsilon);
  else
    warm = uniform_start(weighted_program(1.0), s.epsilon);

  const int m_terms = static_cast<int>(weighted_program(1.0).constraints_le0.size()) + 1 + vi.n();
  auto dual_scale = [&](double theta) {
    return std::max(1.0, theta / std::max(1.0, 100.0 * m_terms));
  };

  double prev_theta = -1.0, prev_value = 0.0, prev_profit = 0.0;
  auto solve_at = [&](double theta) {
    const ConcaveProgram p = weighted_program(theta);
    BarrierOptions opt = options_from(s);
    // the weighted objective carries the (possibly huge) floor
    // multiplier as an explicit weight; relax the inner tolerance by
    // the matching dual scale so the scaled residual stays on target
    opt.kkt_tol = s.kkt_tolerance * dual_scale(theta);
    if (prev_theta > 0.0) {
      const double predicted = prev_value + (theta - prev_theta) * prev_profit;
      opt.gap_hint =
          std::max(std::abs(predicted - p.objective.value(warm)) * 1.5, 1e3 * s.kkt_tolerance);
    }
    BarrierResult r = maximize_barrier(p, warm, opt);
    iterations += r.newton_steps;
    warm = push_interior(r.x, s.epsilon);
    prev_theta = theta;
    prev_value = p.objective.value(r.x);
    prev_profit = profit.value(r.x);
    return r;
  };

  auto finish_solution = [&](double theta, const BarrierResult& r) {
    PlanSolution sol = assemble(e, vi, r, 0.0);
    // multipliers of the original floor-constrained program: balances
    // (and caps) carry over, the floor multiplier equals theta
    const ConcaveProgram original = build_adaptation_program(e, oligarch, oligarch_profit, s,
                                                             s.capture_in_adaptation ? capture : nullptr);
    // layout: balances..., profit floor, then capture caps when present;
    // the weighted program has the same list minus the floor
    const int n_weighted = static_cast<int>(r.lambda.size());
    int bal_count = 0;
    for (int m1 : companies) {
      bool any = false;
      for (int m2 : companies)
        if (e.beta(m1, m2) > 0.0) any = true;
      if (any) ++bal_count;
    }
    Eigen::VectorXd lam(original.constraints_le0.size());
    for (int j = 0; j < bal_count; ++j) lam(j) = r.lambda(j);
    lam(bal_count) = theta;
    for (int j = bal_count; j < n_weighted; ++j) lam(j + 1) = r.lambda(j);  // capture caps
    sol.multipliers.constraints = lam;
    sol.kkt_residual = oligecon::kkt_residual(original, r.x, lam, r.nu);
    sol.iterations = iterations;
    if (sol.status == SolveStatus::Optimal && sol.kkt_residual > s.kkt_tolerance)
      sol.status = SolveStatus::IterationLimit;
    sol.objective = total_value_added(e, sol.plan).total;  // full GDP, recomputed
    return sol;
  };

  // theta = 1 maximizes plain GDP; its oligarch profit can exceed the
  // floor by at most epsilon (the floor never sits below the baseline
  // profit minus epsilon), so accepting it keeps complementary
  // slackness within tolerance.
  BarrierResult r = solve_at(1.0);
  double p_lo = profit.value(r.x);
  if (p_lo >= floor || oligarch.members.empty()) return finish_solution(1.0, r);

  // bracket: grow theta until the profit clears the floor
  double theta_lo = 1.0, theta_hi = 1.0;
  double p_hi = p_lo;
  BarrierResult r_hi = r;
  for (int i = 0; i < 40 && p_hi < floor; ++i) {
    theta_hi = theta_hi * 4.0;
    r_hi = solve_at(theta_hi);
    p_hi = profit.value(r_hi.x);
    if (theta_hi > 1e8) break;
  }
  if (p_hi < floor) {
    // even an overwhelming profit weight cannot reach the floor: the
    // handed-over profit exceeds what the balance set supports
    PlanSolution sol = assemble(e, vi, r_hi, 0.0);
    sol.status = theta_hi > 1e8 && r_hi.status == BarrierStatus::Converged
                     ? SolveStatus::Infeasible
                     : SolveStatus::IterationLimit;
    sol.objective = total_value_added(e, sol.plan).total;
    sol.iterations = iterations;
    return sol;
  }

  // bracketed secant on profit(theta) - floor; accept when the profit
  // overshoot keeps the scaled complementarity within the residual budget
  for (int it = 0; it < 60; ++it) {
    const double delta_hi = 0.4 * s.kkt_tolerance * dual_scale(theta_hi) / theta_hi;
    if (p_hi - floor <= delta_hi) break;
    double theta_mid;
    if (p_hi > p_lo + 1e-300) {
      const double target = floor + 0.5 * delta_hi;
      theta_mid = theta_lo + (theta_hi - theta_lo) * (target - p_lo) / (p_hi - p_lo);
      const double lo_guard = theta_lo + 0.02 * (theta_hi - theta_lo);
      const double hi_guard = theta_hi - 0.02 * (theta_hi - theta_lo);
      theta_mid = std::min(std::max(theta_mid, lo_guard), hi_guard);
    } else {
      theta_mid = 0.5 * (theta_lo + theta_hi);
    }
    const BarrierResult r_mid = solve_at(theta_mid);
    const double p_mid = profit.value(r_mid.x);
    if (p_mid >= floor) {
      theta_hi = theta_mid;
      p_hi = p_mid;
      r_hi = r_mid;
    } else {
      theta_lo = theta_mid;
      p_lo = p_mid;
    }
    if (iterations >= s.max_iterations * 40) break;
  }
  return finish_solution(theta_hi, r_hi);
}

double kkt_residual(const Economy& e, ProblemKind kind, const ProductionPlan& plan,
                    const Multipliers& multipliers, const SolverSettings& settings,
                    const CaptureContext* ctx, const OligarchSpec* oligarch,
                    double oligarch_profit) {
  ConcaveProgram p;
  std::vector<std::pair<int, int>> vars;
  switch (kind) {
    case ProblemKind::GlobalOptimum:
      p = build_global_program(e, settings);
      vars = flow_variables(e, all_companies(e));
      break;
    case ProblemKind::OligarchStage:
      if (ctx == nullptr) throw std::invalid_argument("kkt_residual: oligarch stage needs a context");
      p = build_oligarch_program(e, *ctx, settings);
      vars = flow_variables(e, ctx->oligarch.members);
      break;
    case ProblemKind::AdaptationStage:
      if (oligarch == nullptr)
        throw std::invalid_argument("kkt_residual: adaptation stage needs the oligarch");
      p = build_adaptation_program(e, *oligarch, oligarch_profit, settings,
                                   settings.capture_in_adaptation ? ctx : nullptr);
      vars = flow_variables(e, all_companies(e));
      break;
  }
  return kkt_residual(p, pack_flows(vars, plan.flows), multipliers.constraints,
                      multipliers.floors);
}

}  // namespace oligecon

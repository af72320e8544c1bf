#include "oligecon/scenario.hpp"

#include <string>

namespace oligecon {

std::optional<double> inefficiency_ratio(double gdp_loss, double profit_gain, double gain_floor) {
  if (!(gain_floor > 0.0)) throw std::invalid_argument("inefficiency_ratio: gain_floor must be positive");
  if (profit_gain < gain_floor) return std::nullopt;
  return gdp_loss / profit_gain;
}

namespace {

const char* stage_name(ProblemKind k) {
  switch (k) {
    case ProblemKind::GlobalOptimum: return "global-optimum";
    case ProblemKind::OligarchStage: return "oligarch";
    case ProblemKind::AdaptationStage: return "adaptation";
  }
  return "?";
}

void require_optimal(ProblemKind stage, const PlanSolution& sol) {
  if (sol.status != SolveStatus::Optimal)
    throw StageError(stage, sol.status,
                     std::string("scenario stage '") + stage_name(stage) +
                         "' ended with status " + to_string(sol.status));
}

}  // namespace

ScenarioResult run_scenario(const Economy& economy, const OligarchSpec& oligarch, double gamma,
                            const SolverSettings& settings) {
  PlanSolution baseline = solve_global_optimum(economy, settings);
  require_optimal(ProblemKind::GlobalOptimum, baseline);
  return run_scenario(economy, baseline, oligarch, gamma, settings);
}

ScenarioResult run_scenario(const Economy& economy, const PlanSolution& baseline,
                            const OligarchSpec& oligarch, double gamma,
                            const SolverSettings& settings) {
  require_optimal(ProblemKind::GlobalOptimum, baseline);

  CaptureContext ctx{baseline, gamma, oligarch};
  const PlanSolution stage2 = solve_oligarch_stage(economy, ctx, settings);
  require_optimal(ProblemKind::OligarchStage, stage2);

  const PlanSolution stage3 = solve_adaptation_stage(economy, oligarch, stage2.objective,
                                                     settings, &ctx);
  require_optimal(ProblemKind::AdaptationStage, stage3);

  ScenarioResult r;
  r.psi_star = baseline.objective;
  r.oligarch_baseline_profit =
      *total_value_added(economy, baseline.plan, &oligarch).oligarch_total;
  r.oligarch_optimal_profit = stage2.objective;
  r.final_gdp = stage3.objective;
  r.relative_gdp = r.final_gdp / r.psi_star;
  r.profit_gain = r.oligarch_optimal_profit - r.oligarch_baseline_profit;
  r.gdp_loss = r.psi_star - r.final_gdp;
  r.inefficiency_ratio = inefficiency_ratio(r.gdp_loss, r.profit_gain, kGainFloor);
  return r;
}

}  // namespace oligecon

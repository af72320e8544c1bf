#pragma once

#include <optional>
#include <stdexcept>

#include "oligecon/economy.hpp"
#include "oligecon/solver.hpp"

namespace oligecon {

/// Full three-stage outcome for one (economy, oligarch, gamma) triple.
struct ScenarioResult {
  double psi_star = 0.0;                 // no-oligarch optimum
  double oligarch_baseline_profit = 0.0; // member value added under the baseline plan
  double oligarch_optimal_profit = 0.0;  // capture-stage optimum
  double final_gdp = 0.0;                // re-adaptation GDP
  double relative_gdp = 0.0;             // final_gdp / psi_star
  double profit_gain = 0.0;
  double gdp_loss = 0.0;
  std::optional<double> inefficiency_ratio;  // absent below the gain floor
};

/// GDP lost per unit of oligarch profit gained; Undefined (nullopt)
/// when the gain is below gain_floor.
std::optional<double> inefficiency_ratio(double gdp_loss, double profit_gain, double gain_floor);

inline constexpr double kGainFloor = 1e-4;

/// Raised when one of the three stages fails to report Optimal.
struct StageError : std::runtime_error {
  StageError(ProblemKind stage_, SolveStatus status_, const std::string& what)
      : std::runtime_error(what), stage(stage_), status(status_) {}
  ProblemKind stage;
  SolveStatus status;
};

/// Runs stage 1..3 and assembles the result; throws StageError when any
/// stage is not Optimal.
ScenarioResult run_scenario(const Economy& economy, const OligarchSpec& oligarch, double gamma,
                            const SolverSettings& settings);

/// Same, reusing a precomputed baseline so sweeps over (oligarch, gamma)
/// solve stage 1 once per economy.
ScenarioResult run_scenario(const Economy& economy, const PlanSolution& baseline,
                            const OligarchSpec& oligarch, double gamma,
                            const SolverSettings& settings);

}  // namespace oligecon

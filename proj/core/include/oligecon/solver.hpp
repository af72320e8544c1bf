#pragma once

#include <utility>
#include <vector>

#include "oligecon/economy.hpp"
#include "oligecon/program.hpp"

namespace oligecon {

struct SolverSettings {
  double epsilon = 1e-6;        // flow lower bound and profit-floor relaxation
  double kkt_tolerance = 1e-6;  // max accepted KKT residual
  int max_iterations = 500;     // Newton-step budget per solve
  double barrier_decrease = 0.2;
  /// Re-impose the capture caps during re-adaptation (sensitivity runs
  /// only; the model text leaves them out of the second stage).
  bool capture_in_adaptation = false;
};

enum class SolveStatus { Optimal, IterationLimit, Infeasible };

const char* to_string(SolveStatus s);

struct Multipliers {
  Eigen::VectorXd constraints;  // ordered as the stage's program builds them
  Eigen::VectorXd floors;       // per flow variable
};

struct PlanSolution {
  ProductionPlan plan;
  double objective = 0.0;
  double kkt_residual = 0.0;
  int iterations = 0;
  SolveStatus status = SolveStatus::Optimal;
  Multipliers multipliers;
};

/// Inputs of the oligarch stage: the no-oligarch optimum, the capture
/// power gamma in [0,1], and the member set.
struct CaptureContext {
  PlanSolution baseline;
  double gamma = 1.0;
  OligarchSpec oligarch;
};

enum class ProblemKind { GlobalOptimum, OligarchStage, AdaptationStage };

/// The flow variables of a stage's program, as (supplier, consumer)
/// pairs in the order the program indexes them: consumers ascending,
/// suppliers ascending within each consumer.
std::vector<std::pair<int, int>> flow_variables(const Economy& economy,
                                                const std::vector<int>& consumers);

Eigen::VectorXd pack_flows(const std::vector<std::pair<int, int>>& vars,
                           const Eigen::MatrixXd& flows);
Eigen::MatrixXd unpack_flows(const Economy& economy,
                             const std::vector<std::pair<int, int>>& vars,
                             const Eigen::VectorXd& x);

/// Program builders for the three problem shapes. Exposed so that tests
/// can probe gradients, concavity, and KKT conditions directly.
ConcaveProgram build_global_program(const Economy& economy, const SolverSettings& settings);
ConcaveProgram build_oligarch_program(const Economy& economy, const CaptureContext& ctx,
                                      const SolverSettings& settings);
ConcaveProgram build_adaptation_program(const Economy& economy, const OligarchSpec& oligarch,
                                        double oligarch_profit, const SolverSettings& settings,
                                        const CaptureContext* capture = nullptr);

/// Maximizes total value added subject to the per-company availability
/// constraints; flows where beta = 0 stay zero, active flows respect
/// the epsilon floor.
PlanSolution solve_global_optimum(const Economy& economy, const SolverSettings& settings);

/// Maximizes the oligarch's value added over flows into its members,
/// subject to the capture caps on non-member suppliers and internal
/// availability for member suppliers.
PlanSolution solve_oligarch_stage(const Economy& economy, const CaptureContext& ctx,
                                  const SolverSettings& settings);

/// Re-adaptation: maximizes non-member value added over all flows,
/// subject to full balance constraints and the oligarch profit floor
/// (oligarch_profit - epsilon). The reported objective is the full GDP
/// of the plan, recomputed from the flows.
PlanSolution solve_adaptation_stage(const Economy& economy, const OligarchSpec& oligarch,
                                    double oligarch_profit, const SolverSettings& settings,
                                    const CaptureContext* capture = nullptr);

/// KKT residual of a plan for the named problem, with the caller's
/// multipliers (constraint order matches the stage's program builder).
double kkt_residual(const Economy& economy, ProblemKind kind, const ProductionPlan& plan,
                    const Multipliers& multipliers, const SolverSettings& settings,
                    const CaptureContext* ctx = nullptr, const OligarchSpec* oligarch = nullptr,
                    double oligarch_profit = 0.0);

}  // namespace oligecon

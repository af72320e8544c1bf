#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "oligecon/economy.hpp"
#include "oligecon/experiments.hpp"
#include "oligecon/generator.hpp"
#include "oligecon/scenario.hpp"
#include "oligecon/solver.hpp"

namespace oligecon {

// File formats use 1-based good indices (the in-memory API is
// 0-based). Economies carry beta as [row, col, value] triplets of the
// nonzero entries only; plans the same plus the outputs array. Numbers
// round-trip exactly.

nlohmann::json economy_to_json(const Economy& e);
Economy economy_from_json(const nlohmann::json& j);

nlohmann::json oligarch_to_json(const OligarchSpec& o);
/// Members are validated against the economy and the depth rederived.
OligarchSpec oligarch_from_json(const nlohmann::json& j, const Economy& e);

nlohmann::json plan_to_json(const ProductionPlan& p);
ProductionPlan plan_from_json(const nlohmann::json& j, const Economy& e);

nlohmann::json solution_to_json(const PlanSolution& s);
PlanSolution solution_from_json(const nlohmann::json& j, const Economy& e);

nlohmann::json scenario_result_to_json(const ScenarioResult& r);
ScenarioResult scenario_result_from_json(const nlohmann::json& j);

nlohmann::json generator_config_to_json(const GeneratorConfig& c);
GeneratorConfig generator_config_from_json(const nlohmann::json& j);

nlohmann::json solver_settings_to_json(const SolverSettings& s);
SolverSettings solver_settings_from_json(const nlohmann::json& j);

nlohmann::json experiment_config_to_json(const ExperimentConfig& c);
ExperimentConfig experiment_config_from_json(const nlohmann::json& j);

nlohmann::json grid_to_json(const AggregateGrid& g);
AggregateGrid grid_from_json(const nlohmann::json& j);

nlohmann::json load_json(const std::string& path);
void save_json(const nlohmann::json& j, const std::string& path);

}  // namespace oligecon

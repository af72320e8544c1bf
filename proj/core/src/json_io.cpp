#include "oligecon/json_io.hpp"

#include <fstream>
#include <set>
#include <stdexcept>

namespace oligecon {

using nlohmann::json;

namespace {

json triplets(const Eigen::MatrixXd& m) {
  json arr = json::array();
  for (int r = 0; r < m.rows(); ++r)
    for (int c = 0; c < m.cols(); ++c)
      if (m(r, c) != 0.0) arr.push_back(json::array({r + 1, c + 1, m(r, c)}));
  return arr;
}

Eigen::MatrixXd from_triplets(const json& arr, int n, const char* what) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  std::set<std::pair<int, int>> seen;
  for (const auto& t : arr) {
    if (!t.is_array() || t.size() != 3)
      throw std::invalid_argument(std::string(what) + ": triplet must be [row, col, value]");
    const int r = t[0].get<int>(), c = t[1].get<int>();
    if (r < 1 || r > n || c < 1 || c > n)
      throw std::invalid_argument(std::string(what) + ": triplet index out of range");
    if (!seen.insert({r, c}).second)
      throw std::invalid_argument(std::string(what) + ": duplicate triplet");
    m(r - 1, c - 1) = t[2].get<double>();
  }
  return m;
}

json vec(const Eigen::VectorXd& v) {
  json arr = json::array();
  for (int i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

Eigen::VectorXd from_vec(const json& arr, int n, const char* what) {
  if (!arr.is_array() || static_cast<int>(arr.size()) != n)
    throw std::invalid_argument(std::string(what) + ": expected an array of length " +
                                std::to_string(n));
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = arr[i].get<double>();
  return v;
}

json grid_range(const GridRange& r) { return {{"min", r.min}, {"max", r.max}, {"step", r.step}}; }

GridRange grid_range_from(const json& j) {
  return {j.at("min").get<double>(), j.at("max").get<double>(), j.at("step").get<double>()};
}

SolveStatus status_from(const std::string& s) {
  if (s == "optimal") return SolveStatus::Optimal;
  if (s == "iteration_limit") return SolveStatus::IterationLimit;
  if (s == "infeasible") return SolveStatus::Infeasible;
  throw std::invalid_argument("unknown solve status '" + s + "'");
}

GridKind kind_from(const std::string& s) {
  if (s == "relative_gdp_by_depth_size") return GridKind::RelativeGdpByDepthSize;
  if (s == "relative_gdp_by_size_gamma") return GridKind::RelativeGdpBySizeGamma;
  if (s == "inefficiency_by_depth_size") return GridKind::InefficiencyByDepthSize;
  throw std::invalid_argument("unknown grid kind '" + s + "'");
}

}  // namespace

json economy_to_json(const Economy& e) {
  return {{"n_raw", e.n_raw},
          {"n_goods", e.n_goods},
          {"alpha", vec(e.alpha)},
          {"prices", vec(e.prices)},
          {"beta", triplets(e.beta)}};
}

Economy economy_from_json(const json& j) {
  Economy e;
  e.n_raw = j.at("n_raw").get<int>();
  e.n_goods = j.at("n_goods").get<int>();
  if (e.n_goods < 1) throw std::invalid_argument("economy: n_goods must be positive");
  e.alpha = from_vec(j.at("alpha"), e.n_goods, "economy alpha");
  e.prices = from_vec(j.at("prices"), e.n_goods, "economy prices");
  e.beta = from_triplets(j.at("beta"), e.n_goods, "economy beta");
  return e;
}

json oligarch_to_json(const OligarchSpec& o) {
  json members = json::array();
  for (int m : o.members) members.push_back(m + 1);
  return {{"members", members}};
}

OligarchSpec oligarch_from_json(const json& j, const Economy& e) {
  std::vector<int> members;
  for (const auto& m : j.at("members")) members.push_back(m.get<int>() - 1);
  return make_oligarch(e, std::move(members));
}

json plan_to_json(const ProductionPlan& p) {
  return {{"flows", triplets(p.flows)}, {"outputs", vec(p.outputs)}};
}

ProductionPlan plan_from_json(const json& j, const Economy& e) {
  ProductionPlan p;
  p.flows = from_triplets(j.at("flows"), e.n_goods, "plan flows");
  p.outputs = from_vec(j.at("outputs"), e.n_goods, "plan outputs");
  return p;
}

json solution_to_json(const PlanSolution& s) {
  return {{"plan", plan_to_json(s.plan)},
          {"objective", s.objective},
          {"kkt_residual", s.kkt_residual},
          {"iterations", s.iterations},
          {"status", to_string(s.status)}};
}

PlanSolution solution_from_json(const json& j, const Economy& e) {
  PlanSolution s;
  s.plan = plan_from_json(j.at("plan"), e);
  s.objective = j.at("objective").get<double>();
  s.kkt_residual = j.at("kkt_residual").get<double>();
  s.iterations = j.at("iterations").get<int>();
  s.status = status_from(j.at("status").get<std::string>());
  return s;
}

json scenario_result_to_json(const ScenarioResult& r) {
  json j{{"psi_star", r.psi_star},
         {"oligarch_baseline_profit", r.oligarch_baseline_profit},
         {"oligarch_optimal_profit", r.oligarch_optimal_profit},
         {"final_gdp", r.final_gdp},
         {"relative_gdp", r.relative_gdp},
         {"profit_gain", r.profit_gain},
         {"gdp_loss", r.gdp_loss}};
  if (r.inefficiency_ratio)
    j["inefficiency_ratio"] = *r.inefficiency_ratio;
  else
    j["inefficiency_ratio"] = nullptr;
  return j;
}

ScenarioResult scenario_result_from_json(const json& j) {
  ScenarioResult r;
  r.psi_star = j.at("psi_star").get<double>();
  r.oligarch_baseline_profit = j.at("oligarch_baseline_profit").get<double>();
  r.oligarch_optimal_profit = j.at("oligarch_optimal_profit").get<double>();
  r.final_gdp = j.at("final_gdp").get<double>();
  r.relative_gdp = j.at("relative_gdp").get<double>();
  r.profit_gain = j.at("profit_gain").get<double>();
  r.gdp_loss = j.at("gdp_loss").get<double>();
  if (j.contains("inefficiency_ratio") && !j.at("inefficiency_ratio").is_null())
    r.inefficiency_ratio = j.at("inefficiency_ratio").get<double>();
  return r;
}

json generator_config_to_json(const GeneratorConfig& c) {
  return {{"n_raw", c.n_raw},
          {"n_companies", c.n_companies},
          {"beta_range", grid_range(c.beta_range)},
          {"indegree", c.indegree},
          {"scale_range", {{"min", c.scale_min}, {"max", c.scale_max}}},
          {"min_graph_depth", c.min_graph_depth},
          {"oligarch_feasibility",
           {{"enabled", c.oligarch_feasibility.enabled},
            {"size", c.oligarch_feasibility.size},
            {"depth", c.oligarch_feasibility.depth}}},
          {"alpha_range", grid_range(c.alpha_range)},
          {"price_base", c.price_base},
          {"max_attempts", c.max_attempts}};
}

GeneratorConfig generator_config_from_json(const json& j) {
  GeneratorConfig c;
  c.n_raw = j.value("n_raw", c.n_raw);
  c.n_companies = j.value("n_companies", c.n_companies);
  if (j.contains("beta_range")) c.beta_range = grid_range_from(j.at("beta_range"));
  c.indegree = j.value("indegree", c.indegree);
  if (j.contains("scale_range")) {
    c.scale_min = j.at("scale_range").at("min").get<double>();
    c.scale_max = j.at("scale_range").at("max").get<double>();
  }
  c.min_graph_depth = j.value("min_graph_depth", c.min_graph_depth);
  if (j.contains("oligarch_feasibility")) {
    const auto& w = j.at("oligarch_feasibility");
    c.oligarch_feasibility.enabled = w.value("enabled", true);
    c.oligarch_feasibility.size = w.value("size", 12);
    c.oligarch_feasibility.depth = w.value("depth", 3);
  }
  if (j.contains("alpha_range")) c.alpha_range = grid_range_from(j.at("alpha_range"));
  c.price_base = j.value("price_base", c.price_base);
  c.max_attempts = j.value("max_attempts", c.max_attempts);
  return c;
}

json solver_settings_to_json(const SolverSettings& s) {
  return {{"epsilon", s.epsilon},
          {"kkt_tolerance", s.kkt_tolerance},
          {"max_iterations", s.max_iterations},
          {"barrier_decrease", s.barrier_decrease},
          {"capture_in_adaptation", s.capture_in_adaptation}};
}

SolverSettings solver_settings_from_json(const json& j) {
  SolverSettings s;
  s.epsilon = j.value("epsilon", s.epsilon);
  s.kkt_tolerance = j.value("kkt_tolerance", s.kkt_tolerance);
  s.max_iterations = j.value("max_iterations", s.max_iterations);
  s.barrier_decrease = j.value("barrier_decrease", s.barrier_decrease);
  s.capture_in_adaptation = j.value("capture_in_adaptation", s.capture_in_adaptation);
  return s;
}

json experiment_config_to_json(const ExperimentConfig& c) {
  return {{"generator", generator_config_to_json(c.generator)},
          {"replications", c.replications},
          {"depths", c.depths},
          {"sizes", c.sizes},
          {"gammas", c.gammas},
          {"master_seed", c.master_seed},
          {"solver", solver_settings_to_json(c.solver)},
          {"workers", c.workers}};
}

ExperimentConfig experiment_config_from_json(const json& j) {
  ExperimentConfig c;
  if (j.contains("generator")) c.generator = generator_config_from_json(j.at("generator"));
  c.replications = j.value("replications", c.replications);
  if (j.contains("depths")) c.depths = j.at("depths").get<std::vector<int>>();
  if (j.contains("sizes")) c.sizes = j.at("sizes").get<std::vector<int>>();
  if (j.contains("gammas")) c.gammas = j.at("gammas").get<std::vector<double>>();
  c.master_seed = j.value("master_seed", c.master_seed);
  if (j.contains("solver")) c.solver = solver_settings_from_json(j.at("solver"));
  c.workers = j.value("workers", c.workers);
  return c;
}

json grid_to_json(const AggregateGrid& g) {
  json cells = json::array();
  for (size_t i = 0; i < g.rows.size(); ++i)
    for (size_t j = 0; j < g.cols.size(); ++j) {
      const GridCell& c = g.at(i, j);
      json cj{{"row", g.rows[i]},
              {"col", g.cols[j]},
              {"count", c.count},
              {"count_undefined", c.count_undefined},
              {"count_failed", c.count_failed}};
      cj["mean"] = c.mean ? json(*c.mean) : json(nullptr);
      cj["stddev"] = c.stddev ? json(*c.stddev) : json(nullptr);
      cells.push_back(std::move(cj));
    }
  json j{{"kind", to_string(g.kind)},
         {"rows", g.rows},
         {"cols", g.cols},
         {"n_companies", g.n_companies},
         {"cells", cells}};
  if (g.fixed_depth >= 0) j["fixed_depth"] = g.fixed_depth;
  return j;
}

AggregateGrid grid_from_json(const json& j) {
  AggregateGrid g;
  g.kind = kind_from(j.at("kind").get<std::string>());
  g.rows = j.at("rows").get<std::vector<double>>();
  g.cols = j.at("cols").get<std::vector<double>>();
  g.n_companies = j.value("n_companies", 0);
  g.fixed_depth = j.value("fixed_depth", -1);
  g.cells.assign(g.rows.size() * g.cols.size(), GridCell{});
  for (const auto& cj : j.at("cells")) {
    const double row = cj.at("row").get<double>(), col = cj.at("col").get<double>();
    const auto ri = std::find(g.rows.begin(), g.rows.end(), row);
    const auto ci = std::find(g.cols.begin(), g.cols.end(), col);
    if (ri == g.rows.end() || ci == g.cols.end())
      throw std::invalid_argument("grid cell outside the declared axes");
    GridCell& c = g.at(static_cast<size_t>(ri - g.rows.begin()),
                       static_cast<size_t>(ci - g.cols.begin()));
    c.count = cj.at("count").get<int>();
    c.count_undefined = cj.value("count_undefined", 0);
    c.count_failed = cj.value("count_failed", 0);
    if (!cj.at("mean").is_null()) c.mean = cj.at("mean").get<double>();
    if (!cj.at("stddev").is_null()) c.stddev = cj.at("stddev").get<double>();
  }
  return g;
}

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  json j;
  in >> j;
  return j;
}

void save_json(const json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace oligecon

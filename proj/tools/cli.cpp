#include "cli.hpp"

#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <oligecon/json_io.hpp>
#include <oligecon/report.hpp>

namespace oligecon::cli {

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kValidation = 2;
constexpr int kSolver = 3;

struct Failure {
  int code;
  std::string message;
};

nlohmann::json load_or_fail(const std::string& path) {
  if (!std::filesystem::exists(path)) throw Failure{kUsage, "no such file: " + path};
  try {
    return load_json(path);
  } catch (const std::exception& err) {
    throw Failure{kUsage, "cannot read " + path + ": " + err.what()};
  }
}

Economy load_economy(const std::string& path) {
  Economy e;
  try {
    e = economy_from_json(load_or_fail(path));
  } catch (const Failure&) {
    throw;
  } catch (const std::exception& err) {
    throw Failure{kValidation, std::string("bad economy file: ") + err.what()};
  }
  const auto report = validate_economy(e);
  if (!report.ok()) throw Failure{kValidation, "invalid economy: " + report.summary()};
  return e;
}

std::vector<int> parse_members_arg(const std::string& csv) {
  std::vector<int> members;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      members.push_back(std::stoi(tok) - 1);  // file/flag indices are 1-based
    } catch (const std::exception&) {
      throw Failure{kUsage, "bad member list entry: '" + tok + "'"};
    }
  }
  if (members.empty()) throw Failure{kUsage, "empty member list"};
  return members;
}

OligarchSpec resolve_oligarch(const Economy& economy, const std::string& oligarch_file,
                              const std::string& members_csv, int size, int depth,
                              std::uint64_t seed) {
  if (!oligarch_file.empty()) {
    try {
      return oligarch_from_json(load_or_fail(oligarch_file), economy);
    } catch (const Failure&) {
      throw;
    } catch (const std::exception& err) {
      throw Failure{kValidation, std::string("bad oligarch: ") + err.what()};
    }
  }
  if (!members_csv.empty()) {
    try {
      return make_oligarch(economy, parse_members_arg(members_csv));
    } catch (const Failure&) {
      throw;
    } catch (const std::exception& err) {
      throw Failure{kValidation, std::string("bad oligarch: ") + err.what()};
    }
  }
  if (size > 0 && depth > 0) {
    try {
      return generate_oligarch(economy, size, depth, seed);
    } catch (const std::exception& err) {
      throw Failure{kValidation, std::string("cannot generate oligarch: ") + err.what()};
    }
  }
  throw Failure{kUsage, "give --oligarch, --members, or --olig-size with --olig-depth"};
}

void require_optimal(const char* stage, const PlanSolution& sol) {
  if (sol.status != SolveStatus::Optimal)
    throw Failure{kSolver, std::string(stage) + " stage ended with status " +
                               to_string(sol.status)};
}

// ---- subcommand setups ----------------------------------------------------

struct GenArgs {
  std::string config_file, output;
  std::uint64_t seed = 42;
  GeneratorConfig overrides;
  bool has_n_raw = false, has_n_companies = false, has_indegree = false, has_depth = false,
       has_price = false, has_attempts = false;
};

void add_solver_flags(CLI::App* app, SolverSettings& solver) {
  app->add_option("--epsilon", solver.epsilon, "flow lower bound and floor relaxation")
      ->capture_default_str();
  app->add_option("--kkt-tol", solver.kkt_tolerance, "accepted KKT residual")
      ->capture_default_str();
  app->add_option("--max-iterations", solver.max_iterations, "Newton step budget per solve")
      ->capture_default_str();
  app->add_option("--barrier-decrease", solver.barrier_decrease, "barrier shrink factor")
      ->capture_default_str();
}

int cmd_gen(const std::string& config_file, const GeneratorConfig& flags, std::uint64_t seed,
            const std::string& output) {
  GeneratorConfig cfg = flags;
  if (!config_file.empty()) {
    cfg = generator_config_from_json(load_or_fail(config_file));
  }
  try {
    validate_config(cfg);
  } catch (const std::exception& err) {
    throw Failure{kValidation, err.what()};
  }
  Economy economy;
  try {
    economy = generate_economy(cfg, seed);
  } catch (const RejectionExhausted& err) {
    throw Failure{kValidation, err.what()};
  }
  save_json(economy_to_json(economy), output);
  std::cout << "wrote " << output << " (" << economy.n_goods << " goods, seed " << seed << ")\n";
  return kOk;
}

int cmd_solve(const std::string& economy_file, const std::string& oligarch_file,
              const std::string& members_csv, double gamma, const SolverSettings& solver,
              const std::string& output) {
  const Economy economy = load_economy(economy_file);
  const PlanSolution baseline = solve_global_optimum(economy, solver);
  require_optimal("global-optimum", baseline);
  PlanSolution out = baseline;
  if (!oligarch_file.empty() || !members_csv.empty()) {
    const OligarchSpec olig = resolve_oligarch(economy, oligarch_file, members_csv, 0, 0, 0);
    out = solve_oligarch_stage(economy, {baseline, gamma, olig}, solver);
    require_optimal("oligarch", out);
  }
  save_json(solution_to_json(out), output);
  std::cout << "wrote " << output << " (objective " << out.objective << ", "
            << out.iterations << " iterations)\n";
  return kOk;
}

int cmd_scenario(const std::string& economy_file, const std::string& oligarch_file,
                 const std::string& members_csv, int olig_size, int olig_depth,
                 std::uint64_t olig_seed, double gamma, const SolverSettings& solver,
                 const std::string& output) {
  const Economy economy = load_economy(economy_file);
  const OligarchSpec olig =
      resolve_oligarch(economy, oligarch_file, members_csv, olig_size, olig_depth, olig_seed);
  ScenarioResult result;
  try {
    result = run_scenario(economy, olig, gamma, solver);
  } catch (const StageError& err) {
    throw Failure{kSolver, err.what()};
  }
  save_json(scenario_result_to_json(result), output);
  std::cout << "wrote " << output << " (final_gdp " << result.final_gdp << ", relative "
            << result.relative_gdp << ")\n";
  return kOk;
}

int cmd_mc(ExperimentConfig cfg, const std::string& config_file, const std::string& out_dir) {
  if (!config_file.empty()) cfg = experiment_config_from_json(load_or_fail(config_file));
  try {
    validate_config(cfg.generator);
  } catch (const std::exception& err) {
    throw Failure{kValidation, err.what()};
  }
  std::filesystem::create_directories(out_dir);
  std::cout << "running " << cfg.replications << " replications on " << cfg.workers
            << " worker(s)\n";
  const auto records = run_monte_carlo(cfg);

  const std::string records_path = out_dir + "/records.csv";
  const WrittenFile rec = emit_csv(records, records_path);
  std::cout << "wrote " << rec.path << " (" << rec.rows << " records, fnv1a " << rec.checksum
            << ")\n";

  nlohmann::json grids = nlohmann::json::array();
  grids.push_back(grid_to_json(
      aggregate(records, GridKind::RelativeGdpByDepthSize, -1, cfg.generator.n_companies)));
  grids.push_back(grid_to_json(
      aggregate(records, GridKind::InefficiencyByDepthSize, -1, cfg.generator.n_companies)));
  for (int depth : cfg.depths)
    grids.push_back(grid_to_json(
        aggregate(records, GridKind::RelativeGdpBySizeGamma, depth, cfg.generator.n_companies)));
  const std::string grids_path = out_dir + "/grids.json";
  save_json(grids, grids_path);
  std::cout << "wrote " << grids_path << " (" << grids.size() << " grids)\n";
  return kOk;
}

int cmd_report(const std::string& grids_file, const std::string& out_dir) {
  const nlohmann::json j = load_or_fail(grids_file);
  if (!j.is_array() || j.empty()) throw Failure{kValidation, "grids file holds no grids"};
  std::filesystem::create_directories(out_dir);
  std::vector<AggregateGrid> line_family;
  int emitted = 0;
  for (const auto& gj : j) {
    AggregateGrid grid;
    try {
      grid = grid_from_json(gj);
    } catch (const std::exception& err) {
      throw Failure{kValidation, std::string("bad grid: ") + err.what()};
    }
    const std::string kind = to_string(grid.kind);
    if (grid.kind == GridKind::RelativeGdpBySizeGamma) {
      line_family.push_back(grid);
      continue;
    }
    FigureSpec spec;
    spec.title = kind;
    const WrittenFile svg = emit_heatmap_svg(grid, spec, out_dir + "/" + kind + ".svg");
    const WrittenFile csv = emit_csv(grid, out_dir + "/" + kind + ".csv");
    std::cout << "wrote " << svg.path << " and " << csv.path << "\n";
    ++emitted;
  }
  if (!line_family.empty()) {
    FigureSpec spec;
    spec.title = "relative gdp by oligarchization and capture power";
    const WrittenFile svg =
        emit_lines_svg(line_family, spec, out_dir + "/relative_gdp_lines.svg");
    std::cout << "wrote " << svg.path << " (" << svg.rows << " series)\n";
    for (const auto& grid : line_family) {
      const std::string name =
          out_dir + "/relative_gdp_size_gamma_depth" + std::to_string(grid.fixed_depth) + ".csv";
      emit_csv(grid, name);
      std::cout << "wrote " << name << "\n";
    }
    ++emitted;
  }
  if (emitted == 0) throw Failure{kValidation, "nothing to render"};
  return kOk;
}

std::vector<int> int_list(const std::string& csv) {
  std::vector<int> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stoi(tok));
  return out;
}

std::vector<double> double_list(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
  return out;
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"oligecon: oligarch-controlled production-chain economies"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "generate a synthetic economy");
  GeneratorConfig gen_cfg;
  std::string gen_config_file, gen_output;
  std::uint64_t gen_seed = 42;
  gen->add_option("--config", gen_config_file, "GeneratorConfig JSON file");
  gen->add_option("--seed", gen_seed, "generator seed")->capture_default_str();
  gen->add_option("--n-raw", gen_cfg.n_raw, "raw resources")->capture_default_str();
  gen->add_option("--n-companies", gen_cfg.n_companies, "companies")->capture_default_str();
  gen->add_option("--indegree", gen_cfg.indegree, "inputs per company")->capture_default_str();
  gen->add_option("--min-graph-depth", gen_cfg.min_graph_depth, "minimum graph depth")
      ->capture_default_str();
  gen->add_option("--price-base", gen_cfg.price_base, "price schedule base")
      ->capture_default_str();
  gen->add_option("--max-attempts", gen_cfg.max_attempts, "rejection sampling cap")
      ->capture_default_str();
  gen->add_option("-o,--output", gen_output, "economy JSON path")->required();

  // solve
  auto* solve = app.add_subcommand("solve", "solve the GDP optimum (or an oligarch stage)");
  std::string solve_economy, solve_oligarch, solve_members, solve_output;
  double solve_gamma = 1.0;
  SolverSettings solve_settings;
  solve->add_option("economy", solve_economy, "economy JSON file")->required();
  solve->add_option("--oligarch", solve_oligarch, "oligarch JSON file");
  solve->add_option("--members", solve_members, "oligarch member list, 1-based (e.g. 3,4,7)");
  solve->add_option("--gamma", solve_gamma, "capture power in [0,1]")->capture_default_str();
  add_solver_flags(solve, solve_settings);
  solve->add_option("-o,--output", solve_output, "solution JSON path")->required();

  // scenario
  auto* scenario = app.add_subcommand("scenario", "run the three-stage oligarch scenario");
  std::string sc_economy, sc_oligarch, sc_members, sc_output;
  int sc_size = 0, sc_depth = 0;
  std::uint64_t sc_seed = 1;
  double sc_gamma = 1.0;
  SolverSettings sc_settings;
  scenario->add_option("--economy", sc_economy, "economy JSON file")->required();
  scenario->add_option("--oligarch", sc_oligarch, "oligarch JSON file");
  scenario->add_option("--members", sc_members, "oligarch member list, 1-based");
  scenario->add_option("--olig-size", sc_size, "generate an oligarch of this size");
  scenario->add_option("--olig-depth", sc_depth, "generated oligarch depth");
  scenario->add_option("--olig-seed", sc_seed, "generated oligarch seed")->capture_default_str();
  scenario->add_option("--gamma", sc_gamma, "capture power in [0,1]")->capture_default_str();
  add_solver_flags(scenario, sc_settings);
  scenario->add_option("-o,--output", sc_output, "result JSON path")->required();

  // mc
  auto* mc = app.add_subcommand("mc", "Monte Carlo sweep over oligarch structures");
  ExperimentConfig mc_cfg;
  std::string mc_config_file, mc_out_dir = ".";
  std::string mc_depths, mc_sizes, mc_gammas;
  mc->add_option("--config", mc_config_file, "ExperimentConfig JSON file");
  mc->add_option("--seed", mc_cfg.master_seed, "master seed")->capture_default_str();
  mc->add_option("--replications", mc_cfg.replications, "economies to generate")
      ->capture_default_str();
  mc->add_option("--depths", mc_depths, "oligarch depths (default 1,2,3,4,5)");
  mc->add_option("--sizes", mc_sizes, "oligarch sizes (default: all feasible per depth)");
  mc->add_option("--gammas", mc_gammas, "capture powers (default 0,0.25,0.5,0.75,1)");
  mc->add_option("--workers", mc_cfg.workers, "parallel workers")->capture_default_str();
  add_solver_flags(mc, mc_cfg.solver);
  mc->add_option("-o,--output", mc_out_dir, "output directory")->capture_default_str();

  // report
  auto* report = app.add_subcommand("report", "render grids to SVG and CSV");
  std::string rep_grids, rep_out_dir = ".";
  report->add_option("--grids", rep_grids, "grids JSON file")->required();
  report->add_option("-o,--out-dir", rep_out_dir, "output directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (gen->parsed()) return cmd_gen(gen_config_file, gen_cfg, gen_seed, gen_output);
    if (solve->parsed())
      return cmd_solve(solve_economy, solve_oligarch, solve_members, solve_gamma, solve_settings,
                       solve_output);
    if (scenario->parsed())
      return cmd_scenario(sc_economy, sc_oligarch, sc_members, sc_size, sc_depth, sc_seed,
                          sc_gamma, sc_settings, sc_output);
    if (mc->parsed()) {
      if (!mc_depths.empty()) mc_cfg.depths = int_list(mc_depths);
      if (!mc_sizes.empty()) mc_cfg.sizes = int_list(mc_sizes);
      if (!mc_gammas.empty()) mc_cfg.gammas = double_list(mc_gammas);
      return cmd_mc(mc_cfg, mc_config_file, mc_out_dir);
    }
    if (report->parsed()) return cmd_report(rep_grids, rep_out_dir);
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << "\n";
    return f.code;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace oligecon::cli

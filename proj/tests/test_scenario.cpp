#include <oligecon/generator.hpp>
#include <oligecon/scenario.hpp>

#include "doctest.h"
#include "fixtures.hpp"

using namespace oligecon;

TEST_CASE("e8 worked scenario: published values and derived metrics") {
  const Economy e = fixtures::e8();
  const SolverSettings s;
  const OligarchSpec olig = make_oligarch(e, {2, 3, 6});
  const ScenarioResult r = run_scenario(e, olig, 1.0, s);

  CHECK(r.psi_star == doctest::Approx(704.65).epsilon(0.01));
  CHECK(r.oligarch_baseline_profit == doctest::Approx(640.83).epsilon(0.01));
  CHECK(r.oligarch_optimal_profit == doctest::Approx(643.61).epsilon(0.01));
  CHECK(r.profit_gain == doctest::Approx(2.77).epsilon(0.06));

  // internal consistency of the derived fields
  CHECK(r.relative_gdp == doctest::Approx(r.final_gdp / r.psi_star).epsilon(1e-12));
  CHECK(r.gdp_loss == doctest::Approx(r.psi_star - r.final_gdp).epsilon(1e-12));
  REQUIRE(r.inefficiency_ratio.has_value());
  CHECK(*r.inefficiency_ratio == doctest::Approx(r.gdp_loss / r.profit_gain).epsilon(1e-12));

  // regression pin for this implementation's adaptation stage
  CHECK(r.final_gdp == doctest::Approx(668.85).epsilon(0.005));
  CHECK(r.relative_gdp > 0.0);
  CHECK(r.relative_gdp <= 1.0 + 1e-6);
  CHECK(r.gdp_loss >= -1e-6);
}

TEST_CASE("full ownership keeps relative GDP at one") {
  const Economy e = fixtures::e8();
  const SolverSettings s;
  std::vector<int> all;
  for (int m = e.n_raw; m < e.n_goods; ++m) all.push_back(m);
  const OligarchSpec whole = make_oligarch(e, all);
  for (double gamma : {0.0, 1.0}) {
    const ScenarioResult r = run_scenario(e, whole, gamma, s);
    CHECK(r.relative_gdp == doctest::Approx(1.0).epsilon(1e-4));
  }
}

TEST_CASE("inefficiency_ratio operation") {
  CHECK(*inefficiency_ratio(20.82, 2.77, 1e-4) == doctest::Approx(7.516).epsilon(1e-3));
  CHECK_FALSE(inefficiency_ratio(5.0, 1e-9, 1e-4).has_value());
  CHECK(*inefficiency_ratio(0.0, 1.0, 1e-4) == doctest::Approx(0.0));
  CHECK_THROWS_AS(inefficiency_ratio(1.0, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("scenario invariants across the gamma grid") {
  const Economy e = fixtures::e8();
  const SolverSettings s;
  const PlanSolution baseline = solve_global_optimum(e, s);
  const OligarchSpec olig = make_oligarch(e, {2, 3, 6});
  double prev_profit = -1e300;
  for (double gamma : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    const ScenarioResult r = run_scenario(e, baseline, olig, gamma, s);
    CHECK(r.final_gdp <= r.psi_star * (1.0 + 1e-6));
    CHECK(r.oligarch_optimal_profit >= prev_profit - 1e-6);
    prev_profit = r.oligarch_optimal_profit;
    if (gamma == 0.0) CHECK(r.oligarch_optimal_profit >= r.oligarch_baseline_profit - 1e-6);
  }
}

TEST_CASE("scenario on a generated economy") {
  GeneratorConfig cfg;
  cfg.n_companies = 14;
  cfg.min_graph_depth = 4;
  cfg.oligarch_feasibility = {true, 5, 2};
  const Economy e = generate_economy(cfg, 21);
  const SolverSettings s;
  const PlanSolution baseline = solve_global_optimum(e, s);
  const OligarchSpec olig = generate_oligarch(e, 5, 2, 3);
  for (double gamma : {0.0, 1.0}) {
    const ScenarioResult r = run_scenario(e, baseline, olig, gamma, s);
    CHECK(r.final_gdp <= r.psi_star * (1.0 + 1e-6));
    CHECK(r.final_gdp > 0.0);
    CHECK(r.oligarch_optimal_profit >= r.oligarch_baseline_profit - 1e-6);
  }
}

TEST_CASE("solver failures carry stage attribution") {
  const Economy e = fixtures::e8();
  SolverSettings tight;
  tight.max_iterations = 2;
  const OligarchSpec olig = make_oligarch(e, {2, 3, 6});
  try {
    run_scenario(e, olig, 1.0, tight);
    FAIL("expected StageError");
  } catch (const StageError& err) {
    CHECK(err.stage == ProblemKind::GlobalOptimum);
    CHECK(err.status == SolveStatus::IterationLimit);
  }
}

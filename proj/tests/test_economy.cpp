#include <algorithm>
#include <cmath>
#include <random>

#include <oligecon/economy.hpp>
#include <oligecon/generator.hpp>

#include "doctest.h"
#include "fixtures.hpp"

using namespace oligecon;

namespace {

// test-side oracle: longest path by exhaustive DFS over every start node
int brute_force_depth(const Economy& e) {
  int best = 0;
  std::vector<int> stack;
  std::function<void(int, int)> dfs = [&](int u, int len) {
    best = std::max(best, len);
    for (int w = 0; w < e.n_goods; ++w)
      if (e.beta(u, w) > 0.0) dfs(w, len + 1);
  };
  for (int k = 0; k < e.n_goods; ++k) dfs(k, 0);
  return best;
}

// test-side oracle: BFS shortest path
std::optional<int> bfs_shortest(const Economy& e, int a, int b) {
  std::vector<int> dist(e.n_goods, -1);
  dist[a] = 0;
  std::vector<int> q{a};
  for (size_t h = 0; h < q.size(); ++h) {
    int u = q[h];
    for (int w = 0; w < e.n_goods; ++w)
      if (e.beta(u, w) > 0.0 && dist[w] < 0) {
        dist[w] = dist[u] + 1;
        q.push_back(w);
      }
  }
  if (dist[b] < 0) return std::nullopt;
  return dist[b];
}

}  // namespace

TEST_CASE("validate_economy accepts the e8 fixture") {
  CHECK(validate_economy(fixtures::e8()).ok());
}

TEST_CASE("validate_economy flags a diagonal beta entry as not upper triangular") {
  Economy e = fixtures::e8();
  e.beta(2, 2) = 0.1;
  const auto r = validate_economy(e);
  REQUIRE_FALSE(r.ok());
  const bool found = std::any_of(r.issues.begin(), r.issues.end(), [](const ValidationIssue& i) {
    return i.code == ValidationIssue::Code::NotUpperTriangular;
  });
  CHECK(found);
}

TEST_CASE("validate_economy flags a unit column sum as non-decreasing returns") {
  Economy e = fixtures::e8();
  e.beta(3, 4) = 0.9;  // column 5 now sums to 1.0
  const auto r = validate_economy(e);
  REQUIRE_FALSE(r.ok());
  const bool found = std::any_of(r.issues.begin(), r.issues.end(), [](const ValidationIssue& i) {
    return i.code == ValidationIssue::Code::ReturnsToScaleNotDecreasing;
  });
  CHECK(found);
}

TEST_CASE("validate_economy reports every violation at once") {
  Economy e = fixtures::e8();
  e.alpha(4) = -2.0;
  e.prices(7) = 0.0;
  e.beta(0, 1) = 0.2;  // raw column
  const auto r = validate_economy(e);
  CHECK(r.issues.size() >= 3);
}

TEST_CASE("production_output: no-input company returns its technology level") {
  Economy e;
  e.n_raw = 1;
  e.n_goods = 2;
  e.beta = Eigen::MatrixXd::Zero(2, 2);
  e.alpha = Eigen::VectorXd(2);
  e.alpha << 1, 1.3;
  e.prices = Eigen::VectorXd::Ones(2);
  const Eigen::MatrixXd flows = Eigen::MatrixXd::Zero(2, 2);
  CHECK(production_output(e, flows, 1) == doctest::Approx(1.3));
}

TEST_CASE("production_output: single input, beta 0.5, flow 4 gives 2") {
  Economy e = fixtures::single_company(4.0);
  Eigen::MatrixXd flows = Eigen::MatrixXd::Zero(2, 2);
  flows(0, 1) = 4.0;
  CHECK(production_output(e, flows, 1) == doctest::Approx(2.0));
}

TEST_CASE("production_output on the e8 published plan matches the downstream flows") {
  const Economy e = fixtures::e8();
  const Eigen::MatrixXd flows = fixtures::e8_published_flows();
  // independent recomputation, term by term
  const double expected = e.alpha(2) * std::pow(flows(0, 2), 0.4) * std::pow(flows(1, 2), 0.4);
  const double y3 = production_output(e, flows, 2);
  CHECK(y3 == doctest::Approx(expected).epsilon(1e-12));
  // the plan ships 393.8 + 2.9 of good 3 downstream; production covers it
  CHECK(y3 == doctest::Approx(396.7).epsilon(2e-3));
}

TEST_CASE("production_output rejects negative flows") {
  Economy e = fixtures::single_company(4.0);
  Eigen::MatrixXd flows = Eigen::MatrixXd::Zero(2, 2);
  flows(0, 1) = -1.0;
  CHECK_THROWS_AS(production_output(e, flows, 1), std::domain_error);
}

TEST_CASE("production_output is invariant to factor ordering") {
  // metamorphic: multiply the factors in shuffled order on the test side
  const Economy e = fixtures::e8();
  const Eigen::MatrixXd flows = fixtures::e8_published_flows();
  std::mt19937 rng(99);
  for (int m = e.n_raw; m < e.n_goods; ++m) {
    std::vector<int> ks;
    for (int k = 0; k < e.n_goods; ++k)
      if (e.beta(k, m) > 0.0) ks.push_back(k);
    for (int rep = 0; rep < 5; ++rep) {
      std::shuffle(ks.begin(), ks.end(), rng);
      double prod = e.alpha(m);
      for (int k : ks) prod *= std::pow(flows(k, m), e.beta(k, m));
      CHECK(production_output(e, flows, m) == doctest::Approx(prod).epsilon(1e-12));
    }
  }
}

TEST_CASE("value_added: no-input company earns alpha times price") {
  Economy e;
  e.n_raw = 1;
  e.n_goods = 2;
  e.beta = Eigen::MatrixXd::Zero(2, 2);
  e.alpha = Eigen::VectorXd(2);
  e.alpha << 1, 1.3;
  e.prices = Eigen::VectorXd(2);
  e.prices << 1, 2;
  const auto plan = make_plan(e, Eigen::MatrixXd::Zero(2, 2));
  CHECK(value_added(e, plan, 1) == doctest::Approx(2.6));
}

TEST_CASE("value_added: single-input example") {
  Economy e = fixtures::single_company(4.0);
  Eigen::MatrixXd flows = Eigen::MatrixXd::Zero(2, 2);
  flows(0, 1) = 4.0;
  const auto plan = make_plan(e, flows);
  CHECK(value_added(e, plan, 1) == doctest::Approx(4.0));  // 4*2 - 1*4
}

TEST_CASE("zero-flow plan: every company adds alpha times price") {
  const Economy e = fixtures::e8();
  const auto plan = make_plan(e, Eigen::MatrixXd::Zero(8, 8));
  double expected_total = 0.0;
  for (int m = e.n_raw; m < e.n_goods; ++m) {
    CHECK(value_added(e, plan, m) == doctest::Approx(e.alpha(m) * e.prices(m)));
    expected_total += e.alpha(m) * e.prices(m);
  }
  CHECK(total_value_added(e, plan).total == doctest::Approx(expected_total));
}

TEST_CASE("total_value_added reproduces the published e8 numbers") {
  const Economy e = fixtures::e8();
  const auto plan = make_plan(e, fixtures::e8_published_flows());
  const OligarchSpec olig = make_oligarch(e, {2, 3, 6});
  const auto rep = total_value_added(e, plan, &olig);
  CHECK(rep.total == doctest::Approx(704.65).epsilon(0.01));
  CHECK(*rep.oligarch_total == doctest::Approx(640.83).epsilon(0.01));
}

TEST_CASE("total is exactly the ascending sum of value_added") {
  const Economy e = fixtures::e8();
  const auto plan = make_plan(e, fixtures::e8_published_flows());
  const auto rep = total_value_added(e, plan);
  double sum = 0.0;
  for (int m = e.n_raw; m < e.n_goods; ++m) sum += value_added(e, plan, m);
  CHECK(rep.total == sum);  // bitwise: same accumulation order
  for (int n = 0; n < e.n_raw; ++n) CHECK(rep.per_company_value_added(n) == 0.0);
}

TEST_CASE("price scaling is linear in every value") {
  const Economy e = fixtures::e8();
  const auto plan = make_plan(e, fixtures::e8_published_flows());
  const auto base = total_value_added(e, plan);
  for (double c : {0.5, 3.0, 17.0}) {
    Economy scaled = e;
    scaled.prices *= c;
    const auto rep = total_value_added(scaled, make_plan(scaled, plan.flows));
    CHECK(rep.total == doctest::Approx(c * base.total).epsilon(1e-12));
    for (int m = e.n_raw; m < e.n_goods; ++m)
      CHECK(rep.per_company_value_added(m) ==
            doctest::Approx(c * base.per_company_value_added(m)).epsilon(1e-12));
  }
}

TEST_CASE("graph_depth: e8 is 5, matching exhaustive enumeration") {
  const Economy e = fixtures::e8();
  CHECK(graph_depth(e) == 5);
  CHECK(graph_depth(e) == brute_force_depth(e));
}

TEST_CASE("graph_depth: no edges gives 0, a 4-edge chain gives 4") {
  Economy flat;
  flat.n_raw = 2;
  flat.n_goods = 4;
  flat.beta = Eigen::MatrixXd::Zero(4, 4);
  flat.alpha = Eigen::VectorXd::Ones(4);
  flat.prices = Eigen::VectorXd::Ones(4);
  CHECK(graph_depth(flat) == 0);

  Economy chain;
  chain.n_raw = 1;
  chain.n_goods = 5;
  chain.beta = Eigen::MatrixXd::Zero(5, 5);
  for (int i = 0; i + 1 < 5; ++i) chain.beta(i, i + 1) = 0.5;
  chain.alpha = Eigen::VectorXd::Ones(5);
  chain.prices = Eigen::VectorXd::Ones(5);
  CHECK(graph_depth(chain) == 4);
}

TEST_CASE("shortest_path on e8") {
  const Economy e = fixtures::e8();
  CHECK(shortest_path(e, 0, 7) == 3);  // matches BFS oracle below
  CHECK(shortest_path(e, 0, 7) == bfs_shortest(e, 0, 7));
  CHECK(shortest_path(e, 4, 4) == 0);
  CHECK_FALSE(shortest_path(e, 7, 0).has_value());  // no backward edges
  for (int a = 0; a < 8; ++a)
    for (int b = 0; b < 8; ++b)
      CHECK(shortest_path(e, a, b) == bfs_shortest(e, a, b));
}

TEST_CASE("oligarch_depth on e8") {
  const Economy e = fixtures::e8();
  CHECK(oligarch_depth(e, {2, 3, 6}) == 1);
  CHECK(oligarch_depth(e, {7}) == 3);
  CHECK(oligarch_depth(e, {2}) == 1);  // direct raw consumer
  CHECK_THROWS_AS(oligarch_depth(e, {}), std::invalid_argument);
}

TEST_CASE("graph_depth bounds oligarch_depth for reachable members") {
  GeneratorConfig cfg;
  cfg.n_companies = 12;
  cfg.min_graph_depth = 3;
  cfg.oligarch_feasibility.enabled = false;
  for (std::uint64_t seed : {1, 2, 3, 4, 5}) {
    const Economy e = generate_economy(cfg, seed);
    const int dg = graph_depth(e);
    for (int m = e.n_raw; m < e.n_goods; ++m) CHECK(oligarch_depth(e, {m}) <= dg);
  }
}

TEST_CASE("oligarch validation: consistency and membership") {
  const Economy e = fixtures::e8();
  CHECK(validate_oligarch(e, {2, 3, 6}).ok());
  CHECK(validate_oligarch(e, {2, 3}).ok());   // direct link 3->4
  CHECK(validate_oligarch(e, {2, 4}).ok());   // no edge, but 3 and 5 share raw 2
  CHECK_FALSE(validate_oligarch(e, {4, 5}).ok());  // 5 and 6 disconnected
  CHECK_FALSE(validate_oligarch(e, {0, 3}).ok());  // raw index
  CHECK_FALSE(validate_oligarch(e, {}).ok());
  CHECK_FALSE(validate_oligarch(e, {3, 3}).ok());
  CHECK_THROWS_AS(make_oligarch(e, {4, 5}), std::invalid_argument);
}

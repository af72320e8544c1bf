#include "oligecon/economy.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>
#include <stdexcept>

namespace oligecon {

std::string ValidationReport::summary() const {
  if (issues.empty()) return "ok";
  std::ostringstream os;
  for (size_t i = 0; i < issues.size(); ++i) {
    if (i) os << "; ";
    os << issues[i].detail;
  }
  return os.str();
}

namespace {

void add(ValidationReport& r, ValidationIssue::Code c, std::string detail) {
  r.issues.push_back({c, std::move(detail)});
}

std::string idx(int k) { return std::to_string(k + 1); }  // messages use 1-based labels

}  // namespace

ValidationReport validate_economy(const Economy& e) {
  ValidationReport r;
  const int K = e.n_goods;
  if (K <= 0 || e.n_raw < 0 || e.n_raw >= K) {
    add(r, ValidationIssue::Code::BadShape,
        "need 0 <= n_raw < n_goods, got n_raw=" + std::to_string(e.n_raw) +
            " n_goods=" + std::to_string(K));
    return r;
  }
  if (e.beta.rows() != K || e.beta.cols() != K || e.alpha.size() != K || e.prices.size() != K) {
    add(r, ValidationIssue::Code::BadShape, "beta/alpha/prices dimensions do not match n_goods");
    return r;
  }

  bool triangular = true;
  for (int k1 = 0; k1 < K; ++k1)
    for (int k2 = 0; k2 <= k1; ++k2)
      if (e.beta(k1, k2) != 0.0) {
        triangular = false;
        add(r, ValidationIssue::Code::NotUpperTriangular,
            "beta(" + idx(k1) + "," + idx(k2) + ") nonzero: not upper triangular");
      }
  for (int k1 = 0; k1 < K; ++k1)
    for (int k2 = 0; k2 < e.n_raw; ++k2)
      if (e.beta(k1, k2) != 0.0)
        add(r, ValidationIssue::Code::RawColumnNonzero,
            "raw good " + idx(k2) + " has a producer column entry");
  for (int k1 = 0; k1 < K; ++k1)
    for (int k2 = 0; k2 < K; ++k2) {
      const double b = e.beta(k1, k2);
      if (b < 0.0 || b >= 1.0 || !std::isfinite(b))
        add(r, ValidationIssue::Code::BetaOutOfRange,
            "beta(" + idx(k1) + "," + idx(k2) + ") outside [0,1)");
    }
  for (int m = e.n_raw; m < K; ++m) {
    const double s = e.beta.col(m).sum();
    if (s >= 1.0)
      add(r, ValidationIssue::Code::ReturnsToScaleNotDecreasing,
          "company " + idx(m) + " has sum(beta) = " + std::to_string(s) +
              ": returns to scale not decreasing");
  }

  // Kahn toposort on the beta>0 graph; redundant when triangular but
  // reports cycles for inputs that are not.
  if (!triangular) {
    std::vector<int> indeg(K, 0);
    for (int k1 = 0; k1 < K; ++k1)
      for (int k2 = 0; k2 < K; ++k2)
        if (e.beta(k1, k2) > 0.0) ++indeg[k2];
    std::deque<int> q;
    for (int k = 0; k < K; ++k)
      if (indeg[k] == 0) q.push_back(k);
    int seen = 0;
    while (!q.empty()) {
      int u = q.front();
      q.pop_front();
      ++seen;
      for (int w = 0; w < K; ++w)
        if (e.beta(u, w) > 0.0 && --indeg[w] == 0) q.push_back(w);
    }
    if (seen != K) add(r, ValidationIssue::Code::CycleFound, "cycle found in the beta>0 graph");
  }

  for (int k = 0; k < K; ++k) {
    if (!(e.alpha(k) > 0.0) || !std::isfinite(e.alpha(k)))
      add(r, ValidationIssue::Code::NonPositiveAlpha, "alpha(" + idx(k) + ") not positive");
    if (!(e.prices(k) > 0.0) || !std::isfinite(e.prices(k)))
      add(r, ValidationIssue::Code::NonPositivePrice, "price(" + idx(k) + ") not positive");
  }
  return r;
}

double production_output(const Economy& e, const Eigen::MatrixXd& flows, int m) {
  if (!e.is_company(m))
    throw std::invalid_argument("production_output: index " + idx(m) + " is not a company");
  if (flows.rows() != e.n_goods || flows.cols() != e.n_goods)
    throw std::invalid_argument("production_output: flow matrix shape mismatch");
  double log_prod = 0.0;
  for (int k = 0; k < e.n_goods; ++k) {
    const double b = e.beta(k, m);
    if (b == 0.0) continue;  // 0^0 = 1: factor skipped entirely
    const double x = flows(k, m);
    if (x < 0.0)
      throw std::domain_error("production_output: negative flow x(" + idx(k) + "," + idx(m) + ")");
    if (x == 0.0) continue;  // unused input: treated as an omitted factor
    log_prod += b * std::log(x);
  }
  return e.alpha(m) * std::exp(log_prod);
}

Eigen::VectorXd derive_outputs(const Economy& e, const Eigen::MatrixXd& flows) {
  Eigen::VectorXd y = Eigen::VectorXd::Zero(e.n_goods);
  for (int m = e.n_raw; m < e.n_goods; ++m) y(m) = production_output(e, flows, m);
  return y;
}

ProductionPlan make_plan(const Economy& e, Eigen::MatrixXd flows) {
  ProductionPlan p;
  p.outputs = derive_outputs(e, flows);
  p.flows = std::move(flows);
  return p;
}

double value_added(const Economy& e, const ProductionPlan& plan, int m) {
  if (!e.is_company(m))
    throw std::invalid_argument("value_added: index " + idx(m) + " is not a company");
  double cost = 0.0;
  for (int k = 0; k < e.n_goods; ++k) cost += e.prices(k) * plan.flows(k, m);
  return plan.outputs(m) * e.prices(m) - cost;
}

ValueReport total_value_added(const Economy& e, const ProductionPlan& plan,
                              const OligarchSpec* oligarch) {
  ValueReport rep;
  rep.per_company_value_added = Eigen::VectorXd::Zero(e.n_goods);
  rep.total = 0.0;
  for (int m = e.n_raw; m < e.n_goods; ++m) {
    const double rho = value_added(e, plan, m);
    rep.per_company_value_added(m) = rho;
    rep.total += rho;
  }
  if (oligarch != nullptr) {
    double t = 0.0;
    for (int m : oligarch->members) t += rep.per_company_value_added(m);
    rep.oligarch_total = t;
  }
  return rep;
}

int graph_depth(const Economy& e) {
  // indices are topologically sorted, so a single forward DP pass suffices
  std::vector<int> depth(e.n_goods, 0);
  int best = 0;
  for (int m = 0; m < e.n_goods; ++m) {
    for (int k = 0; k < m; ++k)
      if (e.beta(k, m) > 0.0) depth[m] = std::max(depth[m], depth[k] + 1);
    best = std::max(best, depth[m]);
  }
  return best;
}

std::optional<int> shortest_path(const Economy& e, int k1, int k2) {
  if (k1 < 0 || k1 >= e.n_goods || k2 < 0 || k2 >= e.n_goods)
    throw std::invalid_argument("shortest_path: index out of range");
  if (k1 == k2) return 0;
  std::vector<int> dist(e.n_goods, -1);
  dist[k1] = 0;
  std::deque<int> q{k1};
  while (!q.empty()) {
    int u = q.front();
    q.pop_front();
    for (int w = u + 1; w < e.n_goods; ++w) {
      if (e.beta(u, w) > 0.0 && dist[w] < 0) {
        dist[w] = dist[u] + 1;
        if (w == k2) return dist[w];
        q.push_back(w);
      }
    }
  }
  return std::nullopt;
}

std::vector<std::optional<int>> raw_distances(const Economy& e) {
  std::vector<std::optional<int>> dist(e.n_goods);
  for (int n = 0; n < e.n_raw; ++n) dist[n] = 0;
  for (int m = e.n_raw; m < e.n_goods; ++m) {
    std::optional<int> best;
    for (int k = 0; k < m; ++k)
      if (e.beta(k, m) > 0.0 && dist[k])
        if (!best || *dist[k] + 1 < *best) best = *dist[k] + 1;
    dist[m] = best;
  }
  return dist;
}

int oligarch_depth(const Economy& e, const std::vector<int>& members) {
  if (members.empty()) throw std::invalid_argument("oligarch_depth: empty member set");
  const auto dist = raw_distances(e);
  std::optional<int> best;
  for (int m : members) {
    if (!e.is_company(m))
      throw std::invalid_argument("oligarch_depth: index " + idx(m) + " is not a company");
    if (dist[m] && (!best || *dist[m] < *best)) best = *dist[m];
  }
  if (!best)
    throw std::invalid_argument("oligarch_depth: no member reachable from any raw resource");
  return *best;
}

std::vector<std::vector<int>> consistency_adjacency(const Economy& e) {
  std::vector<std::vector<int>> adj(e.n_goods);
  for (int k = e.n_raw; k < e.n_goods; ++k)
    for (int m = k + 1; m < e.n_goods; ++m)
      if (e.beta(k, m) > 0.0) {
        adj[k].push_back(m);
        adj[m].push_back(k);
      }
  for (int n = 0; n < e.n_raw; ++n) {
    std::vector<int> users;
    for (int m = e.n_raw; m < e.n_goods; ++m)
      if (e.beta(n, m) > 0.0) users.push_back(m);
    for (size_t i = 0; i < users.size(); ++i)
      for (size_t j = i + 1; j < users.size(); ++j) {
        adj[users[i]].push_back(users[j]);
        adj[users[j]].push_back(users[i]);
      }
  }
  for (auto& a : adj) {
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
  }
  return adj;
}

ValidationReport validate_oligarch(const Economy& e, const std::vector<int>& members) {
  ValidationReport r;
  if (members.empty()) {
    add(r, ValidationIssue::Code::EmptyMemberSet, "member set is empty");
    return r;
  }
  for (int m : members)
    if (!e.is_company(m))
      add(r, ValidationIssue::Code::MemberOutOfRange, "member " + idx(m) + " is not a company");
  std::vector<int> sorted = members;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    add(r, ValidationIssue::Code::DuplicateMember, "duplicate member index");
  if (!r.ok()) return r;

  const auto dist = raw_distances(e);
  bool reachable = false;
  for (int m : members)
    if (dist[m]) reachable = true;
  if (!reachable)
    add(r, ValidationIssue::Code::Unreachable, "no member reachable from any raw resource");

  // weak connectivity of the induced consistency graph
  const auto adj = consistency_adjacency(e);
  std::vector<char> inset(e.n_goods, 0), seen(e.n_goods, 0);
  for (int m : members) inset[m] = 1;
  std::deque<int> q{members.front()};
  seen[members.front()] = 1;
  size_t visited = 0;
  while (!q.empty()) {
    int u = q.front();
    q.pop_front();
    ++visited;
    for (int w : adj[u])
      if (inset[w] && !seen[w]) {
        seen[w] = 1;
        q.push_back(w);
      }
  }
  if (visited != members.size())
    add(r, ValidationIssue::Code::NotConsistent,
        "member set is not a consistent part of the production chain");
  return r;
}

OligarchSpec make_oligarch(const Economy& e, std::vector<int> members) {
  const auto report = validate_oligarch(e, members);
  if (!report.ok()) throw std::invalid_argument("make_oligarch: " + report.summary());
  std::sort(members.begin(), members.end());
  OligarchSpec spec;
  spec.depth = oligarch_depth(e, members);
  spec.members = std::move(members);
  return spec;
}

}  // namespace oligecon

#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace oligecon {

/// Immutable description of a production-chain economy.
///
/// Goods are indexed 0..n_goods-1 in topological order: indices
/// 0..n_raw-1 are raw resources (harvested at a fixed price, never
/// produced), the rest are goods manufactured by one company each.
/// beta(k, m) is the Cobb-Douglas exponent of good k in company m's
/// production; the matrix is upper triangular with all-zero columns
/// for raw goods. JSON files use 1-based indices (see json_io.hpp).
struct Economy {
  int n_raw = 0;
  int n_goods = 0;
  Eigen::MatrixXd beta;    // n_goods x n_goods
  Eigen::VectorXd alpha;   // technology level per good; raw entries fixed at 1
  Eigen::VectorXd prices;  // value v_k per unit of good k

  int companies() const { return n_goods - n_raw; }
  bool is_raw(int k) const { return k < n_raw; }
  bool is_company(int k) const { return k >= n_raw && k < n_goods; }
};

/// A production plan: the flow matrix x and the outputs y it implies.
/// flows(k, m) is the quantity of good k shipped to company m;
/// outputs is derived, zero for raw indices.
struct ProductionPlan {
  Eigen::MatrixXd flows;
  Eigen::VectorXd outputs;
};

/// A set of oligarch-controlled companies plus its derived depth d(O).
struct OligarchSpec {
  std::vector<int> members;  // sorted company indices
  int depth = 0;
};

/// Per-company value added, its total (the GDP), and optionally the
/// total restricted to an oligarch's members.
struct ValueReport {
  Eigen::VectorXd per_company_value_added;  // length n_goods, raw entries 0
  double total = 0.0;
  std::optional<double> oligarch_total;
};

struct ValidationIssue {
  enum class Code {
    BadShape,
    NotUpperTriangular,
    RawColumnNonzero,
    BetaOutOfRange,
    ReturnsToScaleNotDecreasing,
    CycleFound,
    NonPositiveAlpha,
    NonPositivePrice,
    EmptyMemberSet,
    MemberOutOfRange,
    DuplicateMember,
    NotConsistent,
    Unreachable,
  };
  Code code;
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  bool ok() const { return issues.empty(); }
  std::string summary() const;
};

/// Checks every structural invariant of an economy and reports the
/// complete list of violations (empty when the economy is valid).
ValidationReport validate_economy(const Economy& economy);

/// Cobb-Douglas output of company m under the given flows, with the
/// 0^0 = 1 convention realized by skipping zero-beta factors.
/// Throws std::domain_error on a negative flow into m and
/// std::invalid_argument when m is not a company index.
double production_output(const Economy& economy, const Eigen::MatrixXd& flows, int m);

/// Outputs of every company; raw entries are zero.
Eigen::VectorXd derive_outputs(const Economy& economy, const Eigen::MatrixXd& flows);

/// Builds a plan with outputs derived from the flow matrix.
ProductionPlan make_plan(const Economy& economy, Eigen::MatrixXd flows);

/// Value added of company m: y_m v_m - sum_k v_k x_km.
double value_added(const Economy& economy, const ProductionPlan& plan, int m);

/// Sums value added over all companies in ascending index order; when an
/// oligarch is given also sums over its members.
ValueReport total_value_added(const Economy& economy, const ProductionPlan& plan,
                              const OligarchSpec* oligarch = nullptr);

/// Longest path length (in edges) of the DAG induced by beta > 0.
int graph_depth(const Economy& economy);

/// Edge count of the shortest directed path from k1 to k2, or nullopt
/// when no such path exists.
std::optional<int> shortest_path(const Economy& economy, int k1, int k2);

/// Shortest distance from any raw node to each good; nullopt entries are
/// unreachable from every raw.
std::vector<std::optional<int>> raw_distances(const Economy& economy);

/// min over raws n and members m of shortest_path(n, m).
/// Throws std::invalid_argument when members is empty, contains a
/// non-company index, or no member is reachable from any raw.
int oligarch_depth(const Economy& economy, const std::vector<int>& members);

/// Undirected adjacency among companies used for the oligarch
/// "consistent part of the chain" requirement: production edges in
/// either direction plus links between companies sharing a raw supplier.
std::vector<std::vector<int>> consistency_adjacency(const Economy& economy);

/// Validates an oligarch member set: non-empty, distinct company
/// indices, reachable from the raws, weakly connected in the
/// consistency graph.
ValidationReport validate_oligarch(const Economy& economy, const std::vector<int>& members);

/// Builds an OligarchSpec with derived depth; throws std::invalid_argument
/// when validate_oligarch reports issues.
OligarchSpec make_oligarch(const Economy& economy, std::vector<int> members);

}  // namespace oligecon

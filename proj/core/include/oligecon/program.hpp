#pragma once

#include <functional>
#include <limits>
#include <vector>

#include <Eigen/Dense>

namespace oligecon {

/// One Cobb-Douglas monomial coef * prod_i x[vars[i]]^exps[i].
/// Variables are distinct and exponents positive; with coef > 0 the term
/// is concave on the positive orthant whenever sum(exps) <= 1.
struct CobbTerm {
  double coef = 0.0;
  std::vector<int> vars;
  std::vector<double> exps;
};

/// Sum of Cobb-Douglas terms plus a linear part and a constant.
class SmoothExpr {
 public:
  explicit SmoothExpr(int n) : linear_(Eigen::VectorXd::Zero(n)) {}
  SmoothExpr() : SmoothExpr(0) {}

  void add_term(double coef, std::vector<int> vars, std::vector<double> exps);
  void add_linear(int var, double coef) { linear_(var) += coef; }
  void set_constant(double c) { constant_ = c; }

  double value(const Eigen::VectorXd& x) const;
  void add_gradient(const Eigen::VectorXd& x, Eigen::VectorXd& grad, double scale = 1.0) const;
  void add_hessian(const Eigen::VectorXd& x, Eigen::MatrixXd& hess, double scale = 1.0) const;

  const Eigen::VectorXd& linear() const { return linear_; }
  double constant() const { return constant_; }
  const std::vector<CobbTerm>& terms() const { return terms_; }

 private:
  std::vector<CobbTerm> terms_;
  Eigen::VectorXd linear_;
  double constant_ = 0.0;
};

/// maximize objective(x) s.t. constraints_le0[j](x) <= 0 and
/// x_i >= floor_i (NaN floor entries carry no bound).
struct ConcaveProgram {
  int n = 0;
  SmoothExpr objective;
  std::vector<SmoothExpr> constraints_le0;
  Eigen::VectorXd floor;
};

enum class BarrierStatus { Converged, EarlyStop, IterationLimit };

struct BarrierOptions {
  double kkt_tol = 1e-6;
  double mu_shrink = 0.2;
  int max_newton = 500;
  /// Estimated gap between f(x0) and the optimum; sizes the initial
  /// barrier weight. <= 0 means "derive from |f(x0)|".
  double gap_hint = -1.0;
  /// Optional early-stop predicate checked after every accepted step.
  std::function<bool(const Eigen::VectorXd&)> stop;
};

struct BarrierResult {
  Eigen::VectorXd x;
  BarrierStatus status = BarrierStatus::Converged;
  int newton_steps = 0;
  double kkt_residual = std::numeric_limits<double>::infinity();
  Eigen::VectorXd lambda;  // constraint multipliers
  Eigen::VectorXd nu;      // floor multipliers (0 where no floor)
  double mu_final = 0.0;
};

/// Max-norm KKT residual of the maximization program at (x, lambda, nu):
/// stationarity of grad f - sum lambda_j grad g_j + nu, primal
/// feasibility, and complementary slackness. Stationarity and
/// complementarity are divided by the multiplier scale (interior-point
/// convention), primal feasibility is absolute.
double kkt_residual(const ConcaveProgram& program, const Eigen::VectorXd& x,
                    const Eigen::VectorXd& lambda, const Eigen::VectorXd& nu);

/// max(1, mean |multiplier| / 100): the dual scaling used above.
double multiplier_scale(const Eigen::VectorXd& lambda, const Eigen::VectorXd& nu);

/// Primal log-barrier interior-point method with damped Newton steps,
/// a fraction-to-boundary line search, and a least-squares multiplier
/// polish. x0 must be strictly feasible.
BarrierResult maximize_barrier(const ConcaveProgram& program, const Eigen::VectorXd& x0,
                               const BarrierOptions& options);

}  // namespace oligecon

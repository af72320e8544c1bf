#include "oligecon/program.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace oligecon {

void SmoothExpr::add_term(double coef, std::vector<int> vars, std::vector<double> exps) {
  if (vars.size() != exps.size()) throw std::invalid_argument("SmoothExpr: vars/exps size mismatch");
  terms_.push_back({coef, std::move(vars), std::move(exps)});
}

double SmoothExpr::value(const Eigen::VectorXd& x) const {
  double total = constant_ + linear_.dot(x);
  for (const auto& t : terms_) {
    double lg = 0.0;
    for (size_t i = 0; i < t.vars.size(); ++i) lg += t.exps[i] * std::log(x(t.vars[i]));
    total += t.coef * std::exp(lg);
  }
  return total;
}

void SmoothExpr::add_gradient(const Eigen::VectorXd& x, Eigen::VectorXd& grad, double scale) const {
  grad += scale * linear_;
  for (const auto& t : terms_) {
    double lg = 0.0;
    for (size_t i = 0; i < t.vars.size(); ++i) lg += t.exps[i] * std::log(x(t.vars[i]));
    const double val = scale * t.coef * std::exp(lg);
    for (size_t i = 0; i < t.vars.size(); ++i) grad(t.vars[i]) += t.exps[i] * val / x(t.vars[i]);
  }
}

void SmoothExpr::add_hessian(const Eigen::VectorXd& x, Eigen::MatrixXd& hess, double scale) const {
  for (const auto& t : terms_) {
    double lg = 0.0;
    for (size_t i = 0; i < t.vars.size(); ++i) lg += t.exps[i] * std::log(x(t.vars[i]));
    const double val = scale * t.coef * std::exp(lg);
    for (size_t i = 0; i < t.vars.size(); ++i) {
      const double ri = t.exps[i] / x(t.vars[i]);
      for (size_t j = 0; j < t.vars.size(); ++j) {
        const double rj = t.exps[j] / x(t.vars[j]);
        hess(t.vars[i], t.vars[j]) += val * ri * rj;
      }
      hess(t.vars[i], t.vars[i]) -= val * t.exps[i] / (x(t.vars[i]) * x(t.vars[i]));
    }
  }
}

namespace {

Eigen::VectorXd all_slacks(const ConcaveProgram& p, const Eigen::VectorXd& x) {
  const int m = static_cast<int>(p.constraints_le0.size());
  int nf = 0;
  for (int i = 0; i < p.n; ++i)
    if (std::isfinite(p.floor(i))) ++nf;
  Eigen::VectorXd s(m + nf);
  for (int j = 0; j < m; ++j) s(j) = -p.constraints_le0[j].value(x);
  int idx = m;
  for (int i = 0; i < p.n; ++i)
    if (std::isfinite(p.floor(i))) s(idx++) = x(i) - p.floor(i);
  return s;
}

}  // namespace

double multiplier_scale(const Eigen::VectorXd& lambda, const Eigen::VectorXd& nu) {
  const double total = lambda.cwiseAbs().sum() + nu.cwiseAbs().sum();
  const double terms = static_cast<double>(lambda.size() + nu.size());
  return std::max(1.0, total / std::max(1.0, 100.0 * terms));
}

double kkt_residual(const ConcaveProgram& p, const Eigen::VectorXd& x,
                    const Eigen::VectorXd& lambda, const Eigen::VectorXd& nu) {
  // Dual residuals (stationarity, complementary slackness) are scaled
  // by the multiplier magnitude; an epsilon-thin constraint carries an
  // enormous true multiplier and would otherwise mask a converged
  // primal. Primal feasibility stays absolute.
  const double scale = multiplier_scale(lambda, nu);
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(p.n);
  p.objective.add_gradient(x, grad);
  double res = 0.0;
  for (size_t j = 0; j < p.constraints_le0.size(); ++j) {
    p.constraints_le0[j].add_gradient(x, grad, -lambda(static_cast<int>(j)));
    const double g = p.constraints_le0[j].value(x);
    res = std::max(res, g);  // primal feasibility
    res = std::max(res, std::abs(lambda(static_cast<int>(j)) * g) / scale);
  }
  for (int i = 0; i < p.n; ++i) {
    if (!std::isfinite(p.floor(i))) continue;
    grad(i) += nu(i);
    res = std::max(res, p.floor(i) - x(i));
    res = std::max(res, std::abs(nu(i) * (x(i) - p.floor(i))) / scale);
  }
  return std::max(res, grad.cwiseAbs().maxCoeff() / scale);
}

BarrierResult maximize_barrier(const ConcaveProgram& p, const Eigen::VectorXd& x0,
                               const BarrierOptions& opt) {
  const int n = p.n;
  const int m = static_cast<int>(p.constraints_le0.size());
  int nf = 0;
  for (int i = 0; i < n; ++i)
    if (std::isfinite(p.floor(i))) ++nf;
  const int m_total = std::max(m + nf, 1);

  Eigen::VectorXd x = x0;
  {
    const Eigen::VectorXd s0 = all_slacks(p, x);
    if (s0.size() > 0 && (!(s0.minCoeff() > 0.0) || !s0.allFinite()))
      throw std::invalid_argument("maximize_barrier: start point is not strictly feasible");
  }

  const double gap = opt.gap_hint > 0.0 ? opt.gap_hint : std::abs(p.objective.value(x)) + 1.0;
  double mu = std::max(10.0 * opt.kkt_tol, std::min(gap, 1e8) / m_total);
  const double mu_final = 0.4 * opt.kkt_tol / m_total;

  // phi = f + mu * sum(log slacks); -inf outside the strict interior
  auto phi = [&](const Eigen::VectorXd& xt, double mut, Eigen::VectorXd& slacks_out) -> double {
    slacks_out = all_slacks(p, xt);
    if (slacks_out.size() > 0 && (!slacks_out.allFinite() || slacks_out.minCoeff() <= 0.0))
      return -std::numeric_limits<double>::infinity();
    const double f = p.objective.value(xt);
    if (!std::isfinite(f)) return -std::numeric_limits<double>::infinity();
    double b = 0.0;
    for (int j = 0; j < slacks_out.size(); ++j) b += std::log(slacks_out(j));
    return f + mut * b;
  };

  int newton = 0;
  bool stopped = false;
  Eigen::VectorXd grad(n), d(n), s_old, s_new;
  Eigen::MatrixXd H(n, n);

  while (true) {
    const bool last = mu <= mu_final * 1.001;
    const int inner_cap = 80;
    bool inner_converged = false;
    bool stalled = false;
    for (int it = 0; it < inner_cap; ++it) {
      grad.setZero();
      H.setZero();
      p.objective.add_gradient(x, grad);
      p.objective.add_hessian(x, H);
      for (int j = 0; j < m; ++j) {
        const auto& g = p.constraints_le0[j];
        const double s = -g.value(x);
        Eigen::VectorXd cg = Eigen::VectorXd::Zero(n);
        g.add_gradient(x, cg);
        grad -= (mu / s) * cg;
        g.add_hessian(x, H, -(mu / s));
        H.noalias() -= (mu / (s * s)) * (cg * cg.transpose());
      }
      for (int i = 0; i < n; ++i) {
        if (!std::isfinite(p.floor(i))) continue;
        const double s = x(i) - p.floor(i);
        grad(i) += mu / s;
        H(i, i) -= mu / (s * s);
      }

      // Solve (-H) d = grad with escalating ridge; -H is positive
      // definite up to rounding.
      Eigen::MatrixXd A = -H;
      double ridge = 0.0;
      Eigen::LLT<Eigen::MatrixXd> llt;
      for (int tries = 0; tries < 12; ++tries) {
        llt.compute(ridge == 0.0 ? A : Eigen::MatrixXd(A + ridge * Eigen::MatrixXd::Identity(n, n)));
        if (llt.info() == Eigen::Success) break;
        ridge = ridge == 0.0 ? 1e-12 * A.diagonal().cwiseAbs().maxCoeff() : ridge * 100.0;
      }
      if (llt.info() != Eigen::Success) break;
      d = llt.solve(grad);
      d += llt.solve(grad - A * d);  // one step of iterative refinement
      if (!d.allFinite()) break;

      const double decrement2 = grad.dot(d);
      const double gnorm = grad.cwiseAbs().maxCoeff();
      if (last && gnorm <= 0.4 * opt.kkt_tol) {
        inner_converged = true;
        break;
      }
      if (!last && decrement2 / 2.0 <= 0.1 * mu) {
        inner_converged = true;
        break;
      }
      if (decrement2 / 2.0 <= 1e-18) {
        inner_converged = true;
        break;
      }

      // fraction-to-boundary on the floors, then backtracking with an
      // Armijo test and a slack-ratio guard against boundary jamming
      double alpha = 1.0;
      for (int i = 0; i < n; ++i)
        if (std::isfinite(p.floor(i)) && d(i) < 0.0)
          alpha = std::min(alpha, 0.995 * (x(i) - p.floor(i)) / (-d(i)));
      const double phi0 = phi(x, mu, s_old);
      bool accepted = false;
      for (int bt = 0; bt < 60; ++bt) {
        const Eigen::VectorXd xt = x + alpha * d;
        const double phit = phi(xt, mu, s_new);
        if (std::isfinite(phit) && (s_new.size() == 0 || (s_new.array() >= 0.005 * s_old.array()).all()) &&
            phit >= phi0 + 0.25 * alpha * decrement2) {
          accepted = true;
          break;
        }
        alpha *= 0.5;
      }
      if (!accepted) {
        stalled = true;  // a different barrier weight un-jams the search
        break;
      }
      x += alpha * d;
      ++newton;
      if (opt.stop && opt.stop(x)) {
        stopped = true;
        break;
      }
      if (newton >= opt.max_newton) break;
    }
    if (stopped || last || newton >= opt.max_newton) break;
    // hold the barrier weight until its subproblem is solved, so the
    // schedule cannot outrun the optimization
    if (inner_converged || stalled) mu = std::max(mu * opt.mu_shrink, mu_final);
  }

  BarrierResult r;
  r.newton_steps = newton;
  r.mu_final = mu;
  r.lambda = Eigen::VectorXd::Zero(m);
  r.nu = Eigen::VectorXd::Zero(n);
  for (int j = 0; j < m; ++j)
    r.lambda(j) = mu / std::max(-p.constraints_le0[j].value(x), 1e-300);
  for (int i = 0; i < n; ++i)
    if (std::isfinite(p.floor(i))) r.nu(i) = mu / (x(i) - p.floor(i));
  r.kkt_residual = kkt_residual(p, x, r.lambda, r.nu);

  if (stopped) {
    r.x = x;
    r.status = BarrierStatus::EarlyStop;
    return r;
  }

  // Least-squares multiplier polish: the barrier multipliers carry an
  // O(mu) stationarity error; refitting the near-active lambdas against
  // the actual gradient usually tightens the reported residual.
  // Inactive constraints keep their (tiny) barrier values so the fit
  // cannot break their complementary slackness.
  if (m > 0) {
    const double active_slack = std::sqrt(mu);
    std::vector<int> active;
    for (int j = 0; j < m; ++j)
      if (-p.constraints_le0[j].value(x) <= active_slack) active.push_back(j);
    if (!active.empty()) {
      Eigen::VectorXd g0 = Eigen::VectorXd::Zero(n);
      p.objective.add_gradient(x, g0);
      for (int i = 0; i < n; ++i)
        if (std::isfinite(p.floor(i))) g0(i) += r.nu(i);
      for (int j = 0; j < m; ++j) {
        const bool is_active =
            std::find(active.begin(), active.end(), j) != active.end();
        if (!is_active) p.constraints_le0[j].add_gradient(x, g0, -r.lambda(j));
      }
      Eigen::MatrixXd G(n, static_cast<int>(active.size()));
      for (size_t a = 0; a < active.size(); ++a) {
        Eigen::VectorXd cg = Eigen::VectorXd::Zero(n);
        p.constraints_le0[active[a]].add_gradient(x, cg);
        G.col(static_cast<int>(a)) = cg;
      }
      Eigen::VectorXd fit = G.colPivHouseholderQr().solve(g0).cwiseMax(0.0);
      Eigen::VectorXd lam_ls = r.lambda;
      for (size_t a = 0; a < active.size(); ++a) lam_ls(active[a]) = fit(static_cast<int>(a));
      const double res_ls = kkt_residual(p, x, lam_ls, r.nu);
      if (res_ls < r.kkt_residual) {
        r.lambda = lam_ls;
        r.kkt_residual = res_ls;
      }
    }
  }

  r.x = x;
  r.status =
      r.kkt_residual <= opt.kkt_tol ? BarrierStatus::Converged : BarrierStatus::IterationLimit;
  return r;
}

}  // namespace oligecon

#pragma once

#include <oligecon/economy.hpp>

namespace fixtures {

// Eight-good worked example: two raw resources feeding six companies.
// Technology levels recovered by inverting the first-order conditions
// of the published optimal plan.
inline oligecon::Economy e8() {
  oligecon::Economy e;
  e.n_raw = 2;
  e.n_goods = 8;
  e.beta = Eigen::MatrixXd::Zero(8, 8);
  e.beta(0, 2) = 0.4;
  e.beta(0, 3) = 0.4;
  e.beta(1, 2) = 0.4;
  e.beta(1, 4) = 0.1;
  e.beta(2, 3) = 0.4;
  e.beta(2, 5) = 0.1;
  e.beta(3, 4) = 0.3;
  e.beta(3, 5) = 0.6;
  e.beta(3, 6) = 0.2;
  e.beta(4, 6) = 0.2;
  e.beta(5, 7) = 0.6;
  e.beta(6, 7) = 0.2;
  e.alpha = Eigen::VectorXd(8);
  e.alpha << 1, 1, 4, 10, 10, 2, 8, 6;
  e.prices = Eigen::VectorXd(8);
  e.prices << 1.21, 1.1, 1.33, 1.46, 1.61, 1.77, 1.95, 2.14;
  return e;
}

// The published optimal plan of the e8 economy (flows printed to one
// decimal in the source figure).
inline Eigen::MatrixXd e8_published_flows() {
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(8, 8);
  x(0, 2) = 298.4;
  x(0, 3) = 740.6;
  x(1, 2) = 328.3;
  x(1, 4) = 2.8;
  x(2, 3) = 393.8;
  x(2, 5) = 2.9;
  x(3, 4) = 6.4;
  x(3, 5) = 27.5;
  x(3, 6) = 3.4;
  x(4, 6) = 3.1;
  x(5, 7) = 16.3;
  x(6, 7) = 11.4;
  return x;
}

// One raw good feeding a single company: beta = 0.5, alpha = 1,
// v = (1, v_m).  Closed-form optimum x* = (beta * alpha * v_m / v_raw)^(1/(1-beta)).
inline oligecon::Economy single_company(double v_m) {
  oligecon::Economy e;
  e.n_raw = 1;
  e.n_goods = 2;
  e.beta = Eigen::MatrixXd::Zero(2, 2);
  e.beta(0, 1) = 0.5;
  e.alpha = Eigen::VectorXd::Ones(2);
  e.prices = Eigen::VectorXd(2);
  e.prices << 1.0, v_m;
  return e;
}

// Two raws feeding one company (two flow variables, unconstrained
// balance): handy for grid-search oracles.
inline oligecon::Economy two_input_company(double b1, double b2, double alpha, double v_m) {
  oligecon::Economy e;
  e.n_raw = 2;
  e.n_goods = 3;
  e.beta = Eigen::MatrixXd::Zero(3, 3);
  e.beta(0, 2) = b1;
  e.beta(1, 2) = b2;
  e.alpha = Eigen::VectorXd::Ones(3);
  e.alpha(2) = alpha;
  e.prices = Eigen::VectorXd(3);
  e.prices << 1.0, 1.2, v_m;
  return e;
}

// raw -> company -> company chain: three flow variables with one
// binding availability constraint.
inline oligecon::Economy chain3() {
  oligecon::Economy e;
  e.n_raw = 1;
  e.n_goods = 3;
  e.beta = Eigen::MatrixXd::Zero(3, 3);
  e.beta(0, 1) = 0.5;
  e.beta(1, 2) = 0.6;
  e.alpha = Eigen::VectorXd::Ones(3);
  e.alpha(1) = 1.5;
  e.alpha(2) = 1.2;
  e.prices = Eigen::VectorXd(3);
  e.prices << 1.0, 1.3, 2.5;
  return e;
}

}  // namespace fixtures

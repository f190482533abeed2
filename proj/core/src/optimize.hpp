#pragma once

#include <Eigen/Dense>
#include <functional>

// Internal deterministic optimizer and constraint transforms shared by the
// estimation, decimation, and GARCH-filter fits. Not installed.

namespace tailgc::detail {

struct MaximizeOptions {
  int max_iterations = 500;
  double loglik_tol = 1e-9;  // stop when successive objective values differ by less
  double grad_tol = 1e-8;    // or when the gradient sup-norm falls below
};

struct MaximizeResult {
  Eigen::VectorXd x;
  double f = 0.0;
  bool converged = false;
  int iterations = 0;
};

// Objective returns the value at x and fills grad (same dimension as x).
using Objective = std::function<double(const Eigen::VectorXd&, Eigen::VectorXd&)>;

// Dense BFGS ascent with backtracking (Armijo) line search. Fully
// deterministic: no randomization, fixed tie-breaking, fixed iteration cap.
MaximizeResult maximize_bfgs(const Objective& objective, Eigen::VectorXd x0,
                             const MaximizeOptions& opts = {});

// ---- smooth reparameterizations ---------------------------------------------
//
// Probabilities are optimized through strictly monotone smooth maps onto
// [kEps, 1-kEps] and simplices onto the eps-interior, so the likelihood's
// boundary log-singularities are never touched and no constraint handling is
// needed inside the optimizer.

constexpr double kEps = 1e-8;

double sigmoid(double u);
double to_unit(double u);        // kEps + (1-2 kEps) * sigmoid(u)
double to_unit_dd(double u);     // d to_unit / du
double from_unit(double p);      // pseudo-inverse, input clipped into (kEps, 1-kEps)

// w = kEps + (1 - m*kEps) * softmax(u), so w is a strict-interior simplex.
void to_simplex(const Eigen::VectorXd& u, Eigen::VectorXd& w);
// Accumulates du += J^T dw for the map above.
void simplex_chain(const Eigen::VectorXd& u, const Eigen::VectorXd& dw, Eigen::VectorXd& du);
// Pseudo-inverse for warm starts (exact up to the eps mixing).
void from_simplex(const Eigen::VectorXd& w, Eigen::VectorXd& u);

}  // namespace tailgc::detail

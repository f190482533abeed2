#include "optimize.hpp"

#include <algorithm>
#include <cmath>

namespace tailgc::detail {

MaximizeResult maximize_bfgs(const Objective& objective, Eigen::VectorXd x0,
                             const MaximizeOptions& opts) {
  const int n = static_cast<int>(x0.size());
  MaximizeResult result;
  result.x = std::move(x0);

  Eigen::VectorXd grad(n), grad_new(n);
  double f = objective(result.x, grad);
  Eigen::MatrixXd h_inv = Eigen::MatrixXd::Identity(n, n);

  constexpr double kArmijo = 1e-4;
  bool first_update = true;

  int iter = 0;
  for (; iter < opts.max_iterations; ++iter) {
    if (grad.lpNorm<Eigen::Infinity>() < opts.grad_tol) {
      result.converged = true;
      break;
    }

    Eigen::VectorXd direction = h_inv * grad;
    double slope = grad.dot(direction);
    if (slope <= 0.0) {
      // Inverse-Hessian approximation lost positive definiteness; reset.
      h_inv.setIdentity();
      direction = grad;
      slope = grad.squaredNorm();
    }

    // Backtracking line search on the ascent direction.
    double alpha = 1.0;
    double f_new = f;
    Eigen::VectorXd x_new = result.x;
    bool improved = false;
    for (int ls = 0; ls < 60; ++ls) {
      x_new = result.x + alpha * direction;
      f_new = objective(x_new, grad_new);
      if (std::isfinite(f_new) && f_new >= f + kArmijo * alpha * slope) {
        improved = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!improved) {
      // No ascent possible at line-search resolution: the objective is flat
      // at working precision, which satisfies the f-difference criterion.
      result.converged = true;
      break;
    }

    // Ascent secant pair: maximizing f equals minimizing -f, whose gradient
    // difference is grad_old - grad_new; curvature s.y > 0 then corresponds
    // to local concavity and keeps the inverse-Hessian update well defined.
    const Eigen::VectorXd s = x_new - result.x;
    const Eigen::VectorXd y = grad - grad_new;
    const double sy = s.dot(y);

    const double f_change = std::fabs(f_new - f);
    result.x = std::move(x_new);
    f = f_new;
    grad = grad_new;

    if (f_change < opts.loglik_tol) {
      result.converged = true;
      ++iter;
      break;
    }

    // BFGS inverse-Hessian update (skip when curvature is not usable).
    if (sy > 1e-12 * s.norm() * y.norm() && sy > 0.0) {
      if (first_update) {
        h_inv *= sy / y.squaredNorm();
        first_update = false;
      }
      const double rho = 1.0 / sy;
      const Eigen::VectorXd hy = h_inv * y;
      // H <- (I - rho s y^T) H (I - rho y s^T) + rho s s^T
      h_inv.noalias() -= rho * (s * hy.transpose() + hy * s.transpose());
      h_inv.noalias() += rho * rho * (y.dot(hy)) * (s * s.transpose());
      h_inv.noalias() += rho * (s * s.transpose());
    }
  }

  result.f = f;
  result.iterations = iter;
  return result;
}

double sigmoid(double u) {
  if (u >= 0.0) {
    return 1.0 / (1.0 + std::exp(-u));
  }
  const double e = std::exp(u);
  return e / (1.0 + e);
}

double to_unit(double u) { return kEps + (1.0 - 2.0 * kEps) * sigmoid(u); }

double to_unit_dd(double u) {
  const double s = sigmoid(u);
  return (1.0 - 2.0 * kEps) * s * (1.0 - s);
}

double from_unit(double p) {
  const double lo = 2.0 * kEps;
  const double hi = 1.0 - 2.0 * kEps;
  const double clipped = std::clamp(p, lo, hi);
  const double s = (clipped - kEps) / (1.0 - 2.0 * kEps);
  return std::log(s / (1.0 - s));
}

void to_simplex(const Eigen::VectorXd& u, Eigen::VectorXd& w) {
  const int m = static_cast<int>(u.size());
  w.resize(m);
  const double max_u = u.maxCoeff();
  double total = 0.0;
  for (int k = 0; k < m; ++k) {
    w[k] = std::exp(u[k] - max_u);
    total += w[k];
  }
  const double mix = 1.0 - m * kEps;
  for (int k = 0; k < m; ++k) w[k] = kEps + mix * (w[k] / total);
}

void simplex_chain(const Eigen::VectorXd& u, const Eigen::VectorXd& dw, Eigen::VectorXd& du) {
  const int m = static_cast<int>(u.size());
  Eigen::VectorXd s(m);
  const double max_u = u.maxCoeff();
  double total = 0.0;
  for (int k = 0; k < m; ++k) {
    s[k] = std::exp(u[k] - max_u);
    total += s[k];
  }
  s /= total;
  const double mix = 1.0 - m * kEps;
  const double weighted = dw.dot(s);
  for (int j = 0; j < m; ++j) du[j] += mix * s[j] * (dw[j] - weighted);
}

void from_simplex(const Eigen::VectorXd& w, Eigen::VectorXd& u) {
  const int m = static_cast<int>(w.size());
  u.resize(m);
  const double mix = 1.0 - m * kEps;
  for (int k = 0; k < m; ++k) {
    const double core = std::max((w[k] - kEps) / mix, 1e-12);
    u[k] = std::log(core);
  }
}

}  // namespace tailgc::detail

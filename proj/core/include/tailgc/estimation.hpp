#pragma once

#include <Eigen/Dense>
#include <vector>

#include "tailgc/dgp.hpp"
#include "tailgc/series.hpp"

namespace tailgc {

// =============================================================================
// Likelihoods, Yule–Walker moment estimators, MLE, and BIC order selection
//
// All likelihoods are conditional: the DAR(p)/bivariate models condition on
// the first p observations, the VDAR(1) model on the first observation.
// Maximum-likelihood fits run a deterministic quasi-Newton ascent through
// smooth reparameterizations keeping probabilities in [1e-8, 1-1e-8] (and
// simplices strictly interior), then map back and project exactly onto the
// parameter domain. Degenerate all-constant series yield the boundary fit
// (nu=0, chi equal to the constant) flagged converged=false instead of an
// error, so batch pipelines keep going.
// =============================================================================

struct DarFit {
  DarParams params;
  double loglik = 0.0;
  int p = 0;
  bool converged = false;
  int iterations = 0;
};

struct BiVdarFit {
  BiVdarParams params;
  double loglik = 0.0;    // joint two-equation conditional log-likelihood
  double loglik_x = 0.0;  // X-equation term (X given its own and Y's past)
  double loglik_y = 0.0;  // Y-equation term
  int p = 0;
  bool converged = false;
  int iterations = 0;
};

struct Vdar1Fit {
  Vdar1Params params;
  double loglik = 0.0;
  bool converged = false;
  int iterations = 0;
};

// ---- log-likelihoods ---------------------------------------------------------

// Conditional DAR(p) log-likelihood of x under params. Returns -inf when an
// observed pattern has zero conditional probability (degenerate likelihood).
double loglik_dar(const BinarySeries& x, const DarParams& params);

// X-equation conditional log-likelihood: x explained by its own past and the
// past of y, using params.eq1. The symmetric call with (y, x) and the
// equation roles swapped covers the Y equation.
double loglik_vdar_bivariate(const BinarySeries& x, const BinarySeries& y,
                             const BiVdarParams& params);

// Single-equation form of the above (the equation whose target is x).
double loglik_vdar_equation(const BinarySeries& x, const BinarySeries& y,
                            const BiVdarEquation& eq);

// N-variate VDAR(1) log-likelihood of the panel.
double loglik_vdar1(const BinaryPanel& panel, const Vdar1Params& params);

// Gradient-returning variants (d loglik / d natural parameter, same struct
// shape). The formulas extend smoothly off the simplex, so finite-difference
// validation may perturb single coordinates.
double loglik_dar_gradient(const BinarySeries& x, const DarParams& params, DarParams& grad);
double loglik_vdar_equation_gradient(const BinarySeries& x, const BinarySeries& y,
                                     const BiVdarEquation& eq, BiVdarEquation& grad);
double loglik_vdar1_gradient(const BinaryPanel& panel, const Vdar1Params& params,
                             Vdar1Params& grad);

// ---- Yule–Walker moment estimators -------------------------------------------

struct YwDiagnostics {
  bool wild_estimate = false;      // some mapped probability fell outside [-0.5, 1.5]
  std::vector<int> uniform_rows;   // rows whose lambda was undefined (set uniform)
};

// Solve the order-p vector Yule–Walker system from sample autocovariances of
// (x, y), then invert the moment mapping to model parameters. Negative VAR
// coefficients are clipped to zero before normalization; mapped
// probabilities are clipped into [0,1], with the wild_estimate flag raised
// when any lands outside [-0.5, 1.5] before clipping. Throws
// "Yule–Walker system singular" on a degenerate covariance system.
BiVdarParams yule_walker_bivariate(const BinarySeries& x, const BinarySeries& y, int p,
                                   YwDiagnostics* diag = nullptr);

// Lag-1 moment estimator Phi_1 = C_1 C_0^{-1} and the row-wise mapping
// nu_i = sum_j Phi_ij, lambda_ij = Phi_ij / nu_i, chi_i = phi0_i / (1 - nu_i).
Vdar1Params yule_walker_vdar1(const BinaryPanel& panel, YwDiagnostics* diag = nullptr);

// Moment-to-parameter mappings exposed for direct verification: phi holds
// [Phi_1..Phi_p] and phi0 the intercept of the companion VAR representation.
BiVdarParams bivdar_from_var_coefficients(const std::vector<Eigen::Matrix2d>& phi,
                                          const Eigen::Vector2d& phi0,
                                          YwDiagnostics* diag = nullptr);
Vdar1Params vdar1_from_var_coefficients(const Eigen::MatrixXd& phi1,
                                        const Eigen::VectorXd& phi0,
                                        YwDiagnostics* diag = nullptr);

// ---- maximum likelihood ------------------------------------------------------

// MLE of the DAR(p) model, warm-started at the (univariate) Yule–Walker
// solution. Requires T >= p+2.
DarFit mle_dar(const BinarySeries& x, int p);

// MLE of both bivariate equations (they share no parameters, so the joint
// maximum is the pair of equation maxima). loglik is the joint value;
// loglik_x / loglik_y are the per-equation conditional terms.
BiVdarFit mle_vdar_bivariate(const BinarySeries& x, const BinarySeries& y, int p);

// MLE of the N-variate VDAR(1) model. Exactly permutation-equivariant:
// relabeling panel columns permutes the fitted lambda rows and columns
// identically, bit for bit.
Vdar1Fit mle_vdar1(const BinaryPanel& panel);

// BIC order selection over p = 1..p_max using the joint two-equation
// likelihood: BIC(p) = 2(2p+1) ln T - 2 [loglik_x + loglik_y]; ties go to
// the smaller order.
int select_order_bic(const BinarySeries& x, const BinarySeries& y, int p_max);

}  // namespace tailgc

#pragma once

#include <vector>

#include "pattern.hpp"
#include "tailgc/estimation.hpp"

// Internal fitting entry points shared between the estimation module, the
// LR test / decimation, and the network builders. Not installed.

namespace tailgc::detail {

bool is_constant(const BinarySeries& x);

// Equation-level fit: target x given source y at order p. Carries the
// embedded restricted DAR fit at the same order, which the LR test reuses;
// the restricted optimum (lambda = 0) is always among the candidates, so
// loglik >= dar.loglik holds exactly.
struct EquationFit {
  BiVdarEquation eq;
  double loglik = 0.0;
  bool converged = false;
  int iterations = 0;
  DarFit dar;
};
EquationFit fit_bivdar_equation(const BinarySeries& x, const BinarySeries& y, int p);

// One scan over p = 1..p_max for an ordered pair: everything BIC selection
// and both directions of the LR test need, fitted once.
struct PairScan {
  int p_star = 1;
  std::vector<double> bic;         // indexed p-1
  std::vector<EquationFit> eq_xy;  // x given y, per p
  std::vector<EquationFit> eq_yx;  // y given x, per p
};
PairScan scan_pair(const BinarySeries& x, const BinarySeries& y, int p_max);

// VDAR(1) single-row fit over a restricted support. lambda vectors are full
// length N with exact zeros off support. When snap_lambda is set, entries
// hugging the epsilon floor are snapped to exact 0/1 and the row is
// renormalized (used by the standalone MLE; decimation keeps its explicit
// support bookkeeping instead).
struct RowStart {
  double nu = 0.3;
  double chi = 0.5;
  std::vector<double> lambda;
};
struct RowFit {
  double nu = 0.0;
  double chi = 0.0;
  std::vector<double> lambda;
  double loglik = 0.0;
  bool converged = false;
  int iterations = 0;
};
RowFit fit_vdar1_row(const Vdar1RowCounts& counts, const std::vector<char>& support,
                     const std::vector<RowStart>& starts, bool snap_lambda);

// Maximized Bernoulli log-likelihood of one row over t = 2..T (the
// all-marginal null model used by decimation's tilt).
double bernoulli_row_loglik(const Vdar1RowCounts& counts);

}  // namespace tailgc::detail

#pragma once

#include <cstdint>
#include <vector>

#include "tailgc/dgp.hpp"
#include "tailgc/series.hpp"

// Internal sufficient statistics for the likelihood computations. Each
// conditional term of the DAR/VDAR likelihoods depends on the data only
// through a small bit pattern, so the T-term sum collapses to a sum over
// distinct patterns weighted by their counts. This makes every objective
// evaluation O(#patterns) instead of O(T) and is what keeps the Monte Carlo
// acceptance runs fast. Not installed.

namespace tailgc::detail {

// DAR(p): pattern (X_t; X_{t-1}..X_{t-p}),
// key = X_t | X_{t-1}<<1 | ... | X_{t-p}<<p; dense table of size 2^(p+1).
struct DarCounts {
  int p = 0;
  long long terms = 0;  // T - p
  std::vector<double> count;
};
DarCounts build_dar_counts(const BinarySeries& x, int p);

// Bivariate equation: pattern (X_t; X-lags; Y-lags),
// key = X_t | xlags<<1 | ylags<<(p+1); dense table of size 2^(2p+1).
struct BiVdarCounts {
  int p = 0;
  long long terms = 0;
  std::vector<double> count;
};
BiVdarCounts build_bivdar_counts(const BinarySeries& x, const BinarySeries& y, int p);

// VDAR(1) row i: pattern (X^i_t; previous full panel state). Observed states
// are stored sparsely as bitmasks (panel width <= 64), sorted by (mask, cur)
// so downstream arithmetic is order-deterministic.
struct Vdar1RowCounts {
  int n = 0;
  long long terms = 0;  // T - 1
  std::vector<std::uint64_t> mask;
  std::vector<std::uint8_t> cur;
  std::vector<double> count;
};
std::vector<Vdar1RowCounts> build_vdar1_counts(const BinaryPanel& panel);

// ---- likelihood evaluators ---------------------------------------------------
//
// Each returns the conditional log-likelihood and, when grad is non-null,
// accumulates d loglik / d(natural parameters) into it (same struct shape as
// the parameters; simplex constraints are NOT assumed, so finite-difference
// checks may perturb coordinates freely). A zero or negative conditional
// probability at an observed pattern yields -inf.

double dar_loglik_from_counts(const DarCounts& counts, const DarParams& params,
                              DarParams* grad);

double bivdar_loglik_from_counts(const BiVdarCounts& counts, const BiVdarEquation& eq,
                                 BiVdarEquation* grad);

// lambda_row has one entry per panel column; sum_lambda is computed from the
// vector itself (not assumed 1) so the formula extends off the simplex.
double vdar1_row_loglik_from_counts(const Vdar1RowCounts& counts, double nu, double chi,
                                    const std::vector<double>& lambda_row, double* d_nu,
                                    double* d_chi, std::vector<double>* d_lambda);

}  // namespace tailgc::detail

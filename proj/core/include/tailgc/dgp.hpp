#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "tailgc/series.hpp"

namespace tailgc {

// =============================================================================
// Data-generating processes
//
// DAR(p): X_t = V_t · X_{t-tau_t} + (1-V_t) · Z_t with V_t ~ B(nu),
// tau_t ~ M(gamma_1..gamma_p), Z_t ~ B(chi). The bivariate VDAR(p) adds a
// cross-copy switch J_t ~ B(lambda) choosing between the target's own past
// and the other series' past; VDAR(1) generalizes to N series with one
// row-stochastic copy matrix lambda. The GARCH scenarios are the continuous
// benchmark processes whose VaR exceedances feed the causality tests.
// =============================================================================

struct DarParams {
  double nu = 0.0;                // copy probability
  double chi = 0.0;               // innovation (marginal) success probability
  std::vector<double> gamma;      // length-p simplex of lag weights

  int p() const { return static_cast<int>(gamma.size()); }
  void validate() const;          // throws std::invalid_argument
};

// One equation of the bivariate model: with probability nu the target copies
// — from the other series' past (weights gamma_cross) with probability
// lambda, from its own past (weights gamma_self) otherwise — and with
// probability 1-nu it innovates from Bernoulli(chi).
struct BiVdarEquation {
  double nu = 0.0;
  double lambda = 0.0;
  double chi = 0.0;
  std::vector<double> gamma_self;
  std::vector<double> gamma_cross;

  int p() const { return static_cast<int>(gamma_self.size()); }
  void validate() const;
};

struct BiVdarParams {
  BiVdarEquation eq1;  // X equation; cross terms read Y
  BiVdarEquation eq2;  // Y equation; cross terms read X

  int p() const { return eq1.p(); }
  void validate() const;  // both equations valid and of equal order
};

struct Vdar1Params {
  std::vector<double> nu;
  std::vector<double> chi;
  Eigen::MatrixXd lambda;  // N×N, nonnegative, rows sum to 1

  int n() const { return static_cast<int>(nu.size()); }
  void validate() const;
};

// Benchmark scenarios: a bivariate AR(1) with GARCH(1,1) innovations and
// variance spillover. NULL has no interaction, ALTER1 adds causality in mean
// (b=2), ALTER2 causality in variance (c=0.7).
enum class GarchScenario { kNull, kAlter1, kAlter2 };

struct GarchCoefficients {
  // x_{i,t} = beta_i1 x_{1,t-1} + beta_i2 x_{2,t-1} + u_{i,t},  u = sigma·eps
  // sigma²_{i,t} = g_i0 + g_i1 sigma²_{i,t-1} + g_i2 u²_{1,t-1} + g_i3 u²_{2,t-1}
  double beta11, beta12, g10, g11, g12, g13;
  double beta21, beta22, g20, g21, g22, g23;
};

GarchCoefficients garch_coefficients(GarchScenario scenario);

// ---- simulators -------------------------------------------------------------
//
// Every simulator is a pure function of (params, T, seed): identical inputs
// produce byte-identical output. First p (binary) states are i.i.d.
// Bernoulli(chi); the GARCH recursion discards a 1000-step burn-in.

BinarySeries simulate_dar(const DarParams& params, int T, std::uint64_t seed);

// When copula_rho is given, the innovation pair (Z¹,Z²) is drawn each step by
// thresholding a correlated standard-normal pair at the Phi^{-1}(chi_i)
// quantiles (Gaussian copula with Bernoulli marginals); chi_i must then lie
// strictly inside (0,1).
std::pair<BinarySeries, BinarySeries> simulate_vdar_bivariate(
    const BiVdarParams& params, int T, std::uint64_t seed,
    std::optional<double> copula_rho = std::nullopt);

BinaryPanel simulate_vdar1(const Vdar1Params& params, int T, std::uint64_t seed);

enum class StarKind { kOut, kMixed };

// Star-shaped VDAR(1) coupling on N nodes with node 0 as the center.
//   out:   the center follows itself (lambda_00 = 1); every leaf copies the
//          center or itself with weight 1/2 each — the center causes all.
//   mixed: each leaf is assigned by an i.i.d. fair coin (drawn from `seed`,
//          so the topology is reproducible) to the causing set (it drives
//          the center) or the caused set (the center drives it). With S
//          causing leaves the center row puts weight 1/(1+S) on itself and
//          on each causing leaf; caused leaves copy center/self with weight
//          1/2 each; causing leaves follow only themselves.
// All nodes get nu_i = nu and chi_i = chi.
Vdar1Params star_coupling(int N, StarKind kind, std::uint64_t seed, double chi = 0.1,
                          double nu = 0.5);

std::pair<RealSeries, RealSeries> simulate_garch(GarchScenario scenario, int T,
                                                 std::uint64_t seed);

}  // namespace tailgc

// Simulator tests: determinism, stationary moments, exact small-system
// Markov-chain oracles, and the benchmark GARCH scenarios.

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "tailgc/dgp.hpp"
#include "tailgc/series.hpp"

namespace tailgc {
namespace {

DarParams basic_dar() {
  DarParams p;
  p.nu = 0.5;
  p.chi = 0.2;
  p.gamma = {0.7, 0.3};
  return p;
}

TEST(SimulateDar, DeterministicAndBinary) {
  const DarParams params = basic_dar();
  const BinarySeries a = simulate_dar(params, 500, 99);
  const BinarySeries b = simulate_dar(params, 500, 99);
  EXPECT_EQ(a.values(), b.values());
  EXPECT_EQ(a.size(), 500u);
  const BinarySeries c = simulate_dar(params, 500, 100);
  EXPECT_NE(a.values(), c.values());
}

TEST(SimulateDar, StationaryMeanEqualsChi) {
  // The copy mechanism redistributes existing values, so the stationary hit
  // probability equals the innovation probability chi.
  DarParams params = basic_dar();
  params.chi = 0.1;
  const int t_len = 200000;
  const BinarySeries x = simulate_dar(params, t_len, 4);
  const double se = std::sqrt(0.1 * 0.9 / t_len);
  EXPECT_NEAR(sample_mean(x), params.chi, 8 * se);  // wide: copying adds autocorrelation
}

TEST(SimulateDar, ValidatesParameters) {
  DarParams bad = basic_dar();
  bad.nu = 1.5;
  EXPECT_THROW(simulate_dar(bad, 100, 1), std::invalid_argument);
  bad = basic_dar();
  bad.gamma = {0.7, 0.7};  // not a simplex
  EXPECT_THROW(simulate_dar(bad, 100, 1), std::invalid_argument);
  bad = basic_dar();
  bad.gamma.clear();
  EXPECT_THROW(simulate_dar(bad, 100, 1), std::invalid_argument);
}

BiVdarParams coupled_bivdar(double lambda1) {
  BiVdarParams p;
  p.eq1.nu = 0.5;
  p.eq1.lambda = lambda1;
  p.eq1.chi = 0.05;
  p.eq1.gamma_self = {1.0};
  p.eq1.gamma_cross = {1.0};
  p.eq2 = p.eq1;
  p.eq2.lambda = 0.0;
  return p;
}

TEST(SimulateBivariate, DeterministicPairAndStationaryMean) {
  const BiVdarParams params = coupled_bivdar(0.5);
  const auto [x, y] = simulate_vdar_bivariate(params, 100000, 21);
  const auto [x2, y2] = simulate_vdar_bivariate(params, 100000, 21);
  EXPECT_EQ(x.values(), x2.values());
  EXPECT_EQ(y.values(), y2.values());
  // Both marginals keep the innovation probability as stationary mean.
  EXPECT_NEAR(sample_mean(x), 0.05, 0.01);
  EXPECT_NEAR(sample_mean(y), 0.05, 0.01);
}

TEST(SimulateBivariate, CouplingInducesLaggedDependence) {
  const auto [x, y] = simulate_vdar_bivariate(coupled_bivdar(0.5), 100000, 33);
  // X copies Y's past, so corr(X_t, Y_{t-1}) is material. The reverse lag is
  // nonzero too (the source's own autocorrelation propagates the lag-0
  // dependence backwards), but it must be clearly smaller.
  EXPECT_GT(lagged_cross_correlation(x, y, 1), 0.1);
  EXPECT_LT(std::abs(lagged_cross_correlation(y, x, 1)),
            0.5 * lagged_cross_correlation(x, y, 1));

  // With a memoryless source the backward channel closes: corr(Y_t, X_{t-1})
  // vanishes because Y_t no longer remembers the instant X could copy.
  BiVdarParams memoryless = coupled_bivdar(0.5);
  memoryless.eq2.nu = 0.0;
  const auto [xm, ym] = simulate_vdar_bivariate(memoryless, 100000, 34);
  EXPECT_GT(lagged_cross_correlation(xm, ym, 1), 0.1);
  EXPECT_LT(std::abs(lagged_cross_correlation(ym, xm, 1)), 0.02);
}

TEST(SimulateBivariate, CopulaLagZeroCorrelationMatchesClosedForm) {
  // With nu = 0 both series are i.i.d. Bernoulli(1/2) pairs joined by a
  // Gaussian copula; thresholding standard normals at zero gives
  // corr = 2*arcsin(rho)/pi exactly.
  BiVdarParams params;
  params.eq1 = {0.0, 0.0, 0.5, {1.0}, {1.0}};
  params.eq2 = params.eq1;
  const double rho = 0.75;
  const auto [x, y] = simulate_vdar_bivariate(params, 200000, 55, rho);
  const double expected = 2.0 * std::asin(rho) / std::numbers::pi;
  EXPECT_NEAR(lagged_cross_correlation(x, y, 0), expected, 0.01);
}

TEST(SimulateBivariate, CopulaRequiresInteriorChi) {
  BiVdarParams params = coupled_bivdar(0.0);
  params.eq1.chi = 0.0;
  EXPECT_THROW(simulate_vdar_bivariate(params, 100, 1, 0.5), std::invalid_argument);
}

// Exact oracle for the N-variate order-1 model: the panel state s follows a
// 2^N-state Markov chain with
//   P(X^i_{t+1} = 1 | s) = nu_i * sum_j lambda_ij s_j + (1 - nu_i) chi_i
// and conditionally independent components.
class ExactChain {
 public:
  explicit ExactChain(const Vdar1Params& params) : params_(params), n_(params.n()) {}

  double transition(int from_state, int to_state) const {
    double prob = 1.0;
    for (int i = 0; i < n_; ++i) {
      double p1 = (1.0 - params_.nu[static_cast<std::size_t>(i)]) *
                  params_.chi[static_cast<std::size_t>(i)];
      for (int j = 0; j < n_; ++j) {
        if (from_state >> j & 1) p1 += params_.nu[static_cast<std::size_t>(i)] * params_.lambda(i, j);
      }
      prob *= (to_state >> i & 1) ? p1 : 1.0 - p1;
    }
    return prob;
  }

  std::vector<double> stationary() const {
    const int m = 1 << n_;
    std::vector<double> dist(static_cast<std::size_t>(m), 1.0 / m);
    for (int iter = 0; iter < 4000; ++iter) {
      std::vector<double> next(static_cast<std::size_t>(m), 0.0);
      for (int s = 0; s < m; ++s) {
        for (int t = 0; t < m; ++t) {
          next[static_cast<std::size_t>(t)] += dist[static_cast<std::size_t>(s)] * transition(s, t);
        }
      }
      dist.swap(next);
    }
    return dist;
  }

 private:
  Vdar1Params params_;
  int n_;
};

TEST(SimulateVdar1, MatchesExactMarkovChain) {
  Vdar1Params params;
  params.nu = {0.6, 0.4};
  params.chi = {0.3, 0.2};
  params.lambda = Eigen::MatrixXd(2, 2);
  params.lambda << 0.25, 0.75, 0.0, 1.0;

  const int t_len = 300000;
  const BinaryPanel panel = simulate_vdar1(params, t_len, 17);
  ASSERT_EQ(panel.width(), 2u);
  ASSERT_EQ(panel.length(), static_cast<std::size_t>(t_len));

  // Empirical state and transition frequencies.
  std::vector<double> state_freq(4, 0.0);
  std::vector<std::vector<double>> trans_count(4, std::vector<double>(4, 0.0));
  int prev = panel.series(0)[0] | panel.series(1)[0] << 1;
  state_freq[static_cast<std::size_t>(prev)] += 1.0;
  for (int t = 1; t < t_len; ++t) {
    const int cur = panel.series(0)[static_cast<std::size_t>(t)] |
                    panel.series(1)[static_cast<std::size_t>(t)] << 1;
    state_freq[static_cast<std::size_t>(cur)] += 1.0;
    trans_count[static_cast<std::size_t>(prev)][static_cast<std::size_t>(cur)] += 1.0;
    prev = cur;
  }

  const ExactChain chain(params);
  const std::vector<double> pi = chain.stationary();
  for (int s = 0; s < 4; ++s) {
    EXPECT_NEAR(state_freq[static_cast<std::size_t>(s)] / t_len, pi[static_cast<std::size_t>(s)],
                0.01)
        << "state " << s;
    double row_total = 0.0;
    for (int t = 0; t < 4; ++t) row_total += trans_count[static_cast<std::size_t>(s)][static_cast<std::size_t>(t)];
    ASSERT_GT(row_total, 1000.0);
    for (int t = 0; t < 4; ++t) {
      EXPECT_NEAR(trans_count[static_cast<std::size_t>(s)][static_cast<std::size_t>(t)] / row_total,
                  chain.transition(s, t), 0.02)
          << "transition " << s << "->" << t;
    }
  }
}

TEST(SimulateVdar1, ValidatesRowStochasticCoupling) {
  Vdar1Params params;
  params.nu = {0.5, 0.5};
  params.chi = {0.1, 0.1};
  params.lambda = Eigen::MatrixXd(2, 2);
  params.lambda << 0.5, 0.6, 0.0, 1.0;  // first row sums to 1.1
  EXPECT_THROW(simulate_vdar1(params, 100, 1), std::invalid_argument);
}

TEST(StarCoupling, OutStarStructure) {
  const Vdar1Params params = star_coupling(6, StarKind::kOut, 2, 0.1, 0.5);
  ASSERT_EQ(params.n(), 6);
  EXPECT_DOUBLE_EQ(params.lambda(0, 0), 1.0);
  for (int j = 1; j < 6; ++j) EXPECT_DOUBLE_EQ(params.lambda(0, j), 0.0);
  for (int i = 1; i < 6; ++i) {
    EXPECT_DOUBLE_EQ(params.lambda(i, 0), 0.5);
    EXPECT_DOUBLE_EQ(params.lambda(i, i), 0.5);
    for (int j = 1; j < 6; ++j) {
      if (j != i) EXPECT_DOUBLE_EQ(params.lambda(i, j), 0.0);
    }
    EXPECT_DOUBLE_EQ(params.nu[static_cast<std::size_t>(i)], 0.5);
    EXPECT_DOUBLE_EQ(params.chi[static_cast<std::size_t>(i)], 0.1);
  }
}

TEST(StarCoupling, MixedStarRowsAreConsistent) {
  const int n = 7;
  const Vdar1Params params = star_coupling(n, StarKind::kMixed, 11);
  // Every row is a probability vector.
  for (int i = 0; i < n; ++i) {
    double total = 0.0;
    for (int j = 0; j < n; ++j) {
      EXPECT_GE(params.lambda(i, j), 0.0);
      total += params.lambda(i, j);
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
  }
  // Leaves are either caused (center weight 1/2) or causing (self only), and
  // the center spreads uniformly over itself plus the causing set.
  int causing = 0;
  for (int i = 1; i < n; ++i) {
    if (params.lambda(i, i) == 1.0) {
      ++causing;
      EXPECT_DOUBLE_EQ(params.lambda(i, 0), 0.0);
    } else {
      EXPECT_DOUBLE_EQ(params.lambda(i, 0), 0.5);
      EXPECT_DOUBLE_EQ(params.lambda(i, i), 0.5);
    }
  }
  const double center_weight = 1.0 / (1.0 + causing);
  EXPECT_NEAR(params.lambda(0, 0), center_weight, 1e-12);
  for (int j = 1; j < n; ++j) {
    if (params.lambda(j, j) == 1.0) {
      EXPECT_NEAR(params.lambda(0, j), center_weight, 1e-12);
    } else {
      EXPECT_DOUBLE_EQ(params.lambda(0, j), 0.0);
    }
  }
  // Topology is a pure function of the seed.
  const Vdar1Params again = star_coupling(n, StarKind::kMixed, 11);
  EXPECT_TRUE((params.lambda.array() == again.lambda.array()).all());
}

TEST(SimulateGarch, DeterministicAndFinite) {
  const auto [x1, x2] = simulate_garch(GarchScenario::kNull, 2000, 8);
  const auto [y1, y2] = simulate_garch(GarchScenario::kNull, 2000, 8);
  EXPECT_EQ(x1.values(), y1.values());
  EXPECT_EQ(x2.values(), y2.values());
  EXPECT_EQ(x1.size(), 2000u);
}

TEST(SimulateGarch, NullScenarioSecondEquationVariance) {
  // Under the no-interaction scenario the second equation is a pure
  // AR(1)+GARCH(1,1) with unconditional innovation variance
  // 0.1 / (1 - 0.6 - 0.2) = 0.5 and Var(x2) = 0.5 / (1 - 0.25) = 2/3.
  const int t_len = 400000;
  const auto [x1, x2] = simulate_garch(GarchScenario::kNull, t_len, 31);
  double mean = 0.0;
  for (double v : x2.values()) mean += v;
  mean /= t_len;
  double var = 0.0, resid_var = 0.0;
  for (std::size_t t = 1; t < x2.size(); ++t) {
    var += (x2[t] - mean) * (x2[t] - mean);
    const double u = x2[t] - 0.5 * x2[t - 1];
    resid_var += u * u;
  }
  var /= static_cast<double>(t_len - 1);
  resid_var /= static_cast<double>(t_len - 1);
  EXPECT_NEAR(resid_var, 0.5, 0.05);
  EXPECT_NEAR(var, 2.0 / 3.0, 0.06);
}

TEST(SimulateGarch, Alter1AddsCausalityInMean) {
  // The mean-causality scenario feeds x2_{t-1} into x1_t with coefficient 2,
  // so the lagged dependence is strong; under the null it is absent.
  const auto [a1, a2] = simulate_garch(GarchScenario::kAlter1, 50000, 13);
  const auto [n1, n2] = simulate_garch(GarchScenario::kNull, 50000, 13);
  const auto corr1 = [](const RealSeries& x, const RealSeries& y) {
    double mx = 0, my = 0;
    const std::size_t t_len = x.size();
    for (std::size_t t = 1; t < t_len; ++t) {
      mx += x[t];
      my += y[t - 1];
    }
    mx /= static_cast<double>(t_len - 1);
    my /= static_cast<double>(t_len - 1);
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t t = 1; t < t_len; ++t) {
      sxy += (x[t] - mx) * (y[t - 1] - my);
      sxx += (x[t] - mx) * (x[t] - mx);
      syy += (y[t - 1] - my) * (y[t - 1] - my);
    }
    return sxy / std::sqrt(sxx * syy);
  };
  EXPECT_GT(corr1(a1, a2), 0.5);
  EXPECT_LT(std::abs(corr1(n1, n2)), 0.03);
}

}  // namespace
}  // namespace tailgc

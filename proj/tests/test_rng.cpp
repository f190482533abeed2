// Random-stream and special-function tests.

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "tailgc/rng.hpp"
#include "tailgc/special.hpp"

namespace tailgc {
namespace {

TEST(Rng, DeterministicForFixedSeed) {
  Rng a(12345), b(12345);
  for (int i = 0; i < 1000; ++i) {
    ASSERT_EQ(a.next_u64(), b.next_u64());
  }
}

TEST(Rng, DistinctSeedsDiverge) {
  Rng a(1), b(2);
  int differing = 0;
  for (int i = 0; i < 64; ++i) {
    if (a.next_u64() != b.next_u64()) ++differing;
  }
  EXPECT_GT(differing, 60);
}

TEST(Rng, NextDoubleStaysInOpenUnitInterval) {
  Rng rng(7);
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.next_double();
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(Rng, BernoulliMatchesProbability) {
  Rng rng(11);
  const double p = 0.3;
  const int n = 100000;
  int ones = 0;
  for (int i = 0; i < n; ++i) ones += rng.bernoulli(p) ? 1 : 0;
  const double rate = static_cast<double>(ones) / n;
  const double se = std::sqrt(p * (1 - p) / n);
  EXPECT_NEAR(rate, p, 4 * se);

  Rng degenerate(3);
  for (int i = 0; i < 100; ++i) {
    EXPECT_FALSE(degenerate.bernoulli(0.0));
    EXPECT_TRUE(degenerate.bernoulli(1.0));
  }
}

TEST(Rng, CategoricalMatchesWeights) {
  Rng rng(21);
  const std::vector<double> weights = {0.2, 0.5, 0.3};
  const int n = 100000;
  std::vector<int> counts(weights.size(), 0);
  for (int i = 0; i < n; ++i) {
    const int k = rng.categorical(weights);
    ASSERT_GE(k, 0);
    ASSERT_LT(k, static_cast<int>(weights.size()));
    ++counts[static_cast<std::size_t>(k)];
  }
  for (std::size_t k = 0; k < weights.size(); ++k) {
    const double rate = static_cast<double>(counts[k]) / n;
    const double se = std::sqrt(weights[k] * (1 - weights[k]) / n);
    EXPECT_NEAR(rate, weights[k], 4 * se) << "category " << k;
  }
}

TEST(Rng, NormalMomentsMatchStandardGaussian) {
  Rng rng(5);
  const int n = 200000;
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    sum += z;
    sum_sq += z * z;
  }
  const double mean = sum / n;
  const double var = sum_sq / n - mean * mean;
  EXPECT_NEAR(mean, 0.0, 4.0 / std::sqrt(static_cast<double>(n)));
  EXPECT_NEAR(var, 1.0, 0.02);
}

TEST(Rng, CorrelatedNormalPairHitsTargetCorrelation) {
  Rng rng(9);
  const double rho = 0.75;
  const int n = 200000;
  double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    const auto [x, y] = rng.correlated_normal_pair(rho);
    sx += x;
    sy += y;
    sxx += x * x;
    syy += y * y;
    sxy += x * y;
  }
  const double mx = sx / n, my = sy / n;
  const double corr =
      (sxy / n - mx * my) / std::sqrt((sxx / n - mx * mx) * (syy / n - my * my));
  EXPECT_NEAR(corr, rho, 0.01);
}

TEST(Rng, DerivedStreamsAreDistinctAndStable) {
  const std::uint64_t master = 42;
  const std::uint64_t a = derive_stream_seed(master, 0, 0);
  const std::uint64_t b = derive_stream_seed(master, 0, 1);
  const std::uint64_t c = derive_stream_seed(master, 1, 0);
  EXPECT_NE(a, b);
  EXPECT_NE(a, c);
  EXPECT_NE(b, c);
  EXPECT_EQ(a, derive_stream_seed(master, 0, 0));  // pure function of inputs
}

TEST(SpecialFunctions, InverseNormalCdfKnownQuantiles) {
  EXPECT_NEAR(inverse_normal_cdf(0.5), 0.0, 1e-12);
  EXPECT_NEAR(inverse_normal_cdf(0.975), 1.959963984540054, 1e-9);
  EXPECT_NEAR(inverse_normal_cdf(0.05), -1.6448536269514722, 1e-9);
  // Round trip against the upper-tail function.
  for (const double p : {0.01, 0.2, 0.5, 0.8, 0.99}) {
    EXPECT_NEAR(normal_upper_tail(inverse_normal_cdf(1.0 - p)), p, 1e-10);
  }
}

TEST(SpecialFunctions, NormalUpperTailMatchesErfc) {
  for (const double z : {-3.0, -1.0, 0.0, 0.5, 1.96, 4.0}) {
    EXPECT_NEAR(normal_upper_tail(z), 0.5 * std::erfc(z / std::sqrt(2.0)), 1e-14);
  }
}

TEST(SpecialFunctions, RegularizedGammaQClosedFormCases) {
  // Q(1, x) = exp(-x); Q(1/2, x) = erfc(sqrt(x)).
  for (const double x : {0.1, 0.5, 1.0, 2.5, 10.0}) {
    EXPECT_NEAR(regularized_gamma_q(1.0, x), std::exp(-x), 1e-12);
    EXPECT_NEAR(regularized_gamma_q(0.5, x), std::erfc(std::sqrt(x)), 1e-12);
  }
  EXPECT_NEAR(regularized_gamma_q(2.0, 0.0), 1.0, 1e-15);
}

TEST(SpecialFunctions, ChiSquaredUpperTailKnownValues) {
  // Classical 5% critical values.
  EXPECT_NEAR(chi_squared_upper_tail(3.841458820694124, 1), 0.05, 1e-9);
  EXPECT_NEAR(chi_squared_upper_tail(5.991464547107979, 2), 0.05, 1e-9);
  EXPECT_NEAR(chi_squared_upper_tail(7.814727903251179, 3), 0.05, 1e-9);
  EXPECT_DOUBLE_EQ(chi_squared_upper_tail(0.0, 1), 1.0);
  EXPECT_DOUBLE_EQ(chi_squared_upper_tail(-1e-12, 1), 1.0);  // clamped
}

}  // namespace
}  // namespace tailgc

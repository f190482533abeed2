// Causality-test suite: the likelihood-ratio test, the kernel
// cross-correlation test against a direct reference computation, the
// Benjamini–Hochberg step-up, and coupling decimation.

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "tailgc/dgp.hpp"
#include "tailgc/gc_tests.hpp"
#include "tailgc/rng.hpp"
#include "tailgc/series.hpp"
#include "tailgc/special.hpp"

namespace tailgc {
namespace {

BiVdarParams one_way_coupling(double lambda1) {
  BiVdarParams p;
  p.eq1 = {0.5, lambda1, 0.05, {1.0}, {1.0}};
  p.eq2 = {0.5, 0.0, 0.05, {1.0}, {1.0}};
  return p;
}

TEST(LrTest, DetectsCouplingAndItsDirection) {
  const auto [x, y] = simulate_vdar_bivariate(one_way_coupling(0.5), 5000, 42);
  const GcTestResult forward = lr_tail_test(x, y, 3);  // does y drive x?
  EXPECT_EQ(forward.source, y.label());
  EXPECT_EQ(forward.target, x.label());
  EXPECT_EQ(forward.method, GcMethod::kLr);
  EXPECT_LT(forward.p_value, 1e-6);
  EXPECT_GE(forward.selected_p, 1);
  EXPECT_EQ(forward.dof_or_bandwidth, forward.selected_p);

  const GcTestResult reverse = lr_tail_test(y, x, 3);
  EXPECT_GT(reverse.p_value, 0.01);
}

TEST(LrTest, StatisticIsNonNegativeOnNullData) {
  Rng rng(77);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<std::uint8_t> xv(300), yv(300);
    for (auto& b : xv) b = rng.bernoulli(0.15) ? 1 : 0;
    for (auto& b : yv) b = rng.bernoulli(0.15) ? 1 : 0;
    const GcTestResult r = lr_tail_test(BinarySeries(std::move(xv)), BinarySeries(std::move(yv)), 2);
    ASSERT_GE(r.statistic, 0.0);
    ASSERT_GE(r.p_value, 0.0);
    ASSERT_LE(r.p_value, 1.0);
  }
}

TEST(LrTest, DegenerateTargetIsFlaggedNotFatal) {
  const BinarySeries constant = BinarySeries::from_ints(std::vector<int>(100, 0), "C");
  Rng rng(5);
  std::vector<std::uint8_t> yv(100);
  for (auto& b : yv) b = rng.bernoulli(0.3) ? 1 : 0;
  const GcTestResult r = lr_tail_test(constant, BinarySeries(std::move(yv), "Y"), 3);
  EXPECT_TRUE(r.degenerate);
  EXPECT_DOUBLE_EQ(r.p_value, 1.0);
  EXPECT_DOUBLE_EQ(r.statistic, 0.0);
}

TEST(LrTest, ValidatesArguments) {
  const BinarySeries x = BinarySeries::from_ints({1, 0, 1, 0, 0, 1});
  const BinarySeries y_short = BinarySeries::from_ints({1, 0, 1});
  EXPECT_THROW(lr_tail_test(x, y_short, 1), std::invalid_argument);
  EXPECT_THROW(lr_tail_test(x, x, 0), std::invalid_argument);
  EXPECT_THROW(lr_tail_test(x, x, 5), std::invalid_argument);  // T < p_max + 2
}

TEST(LrTest, FixedOrderVariantUsesRequestedOrder) {
  const auto [x, y] = simulate_vdar_bivariate(one_way_coupling(0.5), 3000, 99);
  const GcTestResult r = lr_tail_test_fixed(x, y, 2);
  EXPECT_EQ(r.selected_p, 2);
  EXPECT_EQ(r.dof_or_bandwidth, 2);
  EXPECT_LT(r.p_value, 1e-4);
}

// ---- kernel test ---------------------------------------------------------------

TEST(DaniellKernel, KnownValues) {
  EXPECT_DOUBLE_EQ(daniell_weight(0.0), 1.0);
  EXPECT_NEAR(daniell_weight(0.5), 2.0 / std::numbers::pi, 1e-15);
  EXPECT_NEAR(daniell_weight(1.0), 0.0, 1e-15);
  EXPECT_NEAR(daniell_weight(2.5), std::sin(2.5 * std::numbers::pi) / (2.5 * std::numbers::pi),
              1e-15);
}

// Direct reference implementation of the standardized kernel statistic, all
// sums written as plain loops over the definition.
double naive_hong_statistic(const BinarySeries& x, const BinarySeries& y, int m_bandwidth) {
  const int t_len = static_cast<int>(x.size());
  double mean_x = 0.0, mean_y = 0.0;
  for (int t = 0; t < t_len; ++t) {
    mean_x += x[static_cast<std::size_t>(t)];
    mean_y += y[static_cast<std::size_t>(t)];
  }
  mean_x /= t_len;
  mean_y /= t_len;
  double var_x = 0.0, var_y = 0.0;
  for (int t = 0; t < t_len; ++t) {
    var_x += (x[static_cast<std::size_t>(t)] - mean_x) * (x[static_cast<std::size_t>(t)] - mean_x);
    var_y += (y[static_cast<std::size_t>(t)] - mean_y) * (y[static_cast<std::size_t>(t)] - mean_y);
  }
  var_x /= t_len;
  var_y /= t_len;

  double weighted_sum = 0.0;
  for (int j = 1; j < t_len; ++j) {
    double cov = 0.0;
    for (int t = j; t < t_len; ++t) {
      cov += (x[static_cast<std::size_t>(t)] - mean_x) * (y[static_cast<std::size_t>(t - j)] - mean_y);
    }
    cov /= t_len;
    const double rho = cov / std::sqrt(var_x * var_y);
    const double k = daniell_weight(static_cast<double>(j) / m_bandwidth);
    weighted_sum += k * k * rho * rho;
  }
  double c_t = 0.0;
  for (int j = 1; j < t_len; ++j) {
    const double k = daniell_weight(static_cast<double>(j) / m_bandwidth);
    c_t += (1.0 - static_cast<double>(j) / t_len) * k * k;
  }
  double d_t = 0.0;
  for (int j = 1; j <= t_len - 2; ++j) {
    const double k = daniell_weight(static_cast<double>(j) / m_bandwidth);
    d_t += (1.0 - static_cast<double>(j) / t_len) *
           (1.0 - static_cast<double>(j + 1) / t_len) * k * k * k * k;
  }
  return (t_len * weighted_sum - c_t) / std::sqrt(2.0 * d_t);
}

TEST(HongTest, MatchesDirectComputation) {
  Rng rng(1234);
  for (const int t_len : {50, 127, 256}) {
    std::vector<std::uint8_t> xv(static_cast<std::size_t>(t_len)), yv(static_cast<std::size_t>(t_len));
    for (auto& b : xv) b = rng.bernoulli(0.3) ? 1 : 0;
    for (auto& b : yv) b = rng.bernoulli(0.4) ? 1 : 0;
    const BinarySeries x(std::move(xv), "X");
    const BinarySeries y(std::move(yv), "Y");
    for (const int m_bandwidth : {1, 5, 20}) {
      const GcTestResult r = hong_test(x, y, m_bandwidth);
      const double reference = naive_hong_statistic(x, y, m_bandwidth);
      ASSERT_NEAR(r.statistic, reference, 1e-8) << "T=" << t_len << " M=" << m_bandwidth;
      ASSERT_NEAR(r.p_value, normal_upper_tail(r.statistic), 1e-12);
      EXPECT_EQ(r.dof_or_bandwidth, m_bandwidth);
      EXPECT_EQ(r.method, GcMethod::kHong);
    }
  }
}

TEST(HongTest, DetectsCoupling) {
  const auto [x, y] = simulate_vdar_bivariate(one_way_coupling(0.5), 5000, 7);
  EXPECT_LT(hong_test(x, y, 5).p_value, 1e-8);
}

TEST(HongTest, ValidatesInput) {
  const BinarySeries constant = BinarySeries::from_ints(std::vector<int>(50, 1));
  Rng rng(3);
  std::vector<std::uint8_t> yv(50);
  for (auto& b : yv) b = rng.bernoulli(0.5) ? 1 : 0;
  const BinarySeries y(std::move(yv));
  EXPECT_THROW(
      {
        try {
          hong_test(constant, y, 5);
        } catch (const std::runtime_error& e) {
          EXPECT_NE(std::string(e.what()).find("zero variance"), std::string::npos);
          throw;
        }
      },
      std::runtime_error);
  EXPECT_THROW(hong_test(y, y, 0), std::invalid_argument);
  EXPECT_THROW(hong_test(y, y, 50), std::invalid_argument);  // requires M < T
}

// ---- multiple testing ----------------------------------------------------------

TEST(BhFdr, HandExamples) {
  // No p-value below its threshold: nothing rejected.
  EXPECT_TRUE(bh_fdr(std::vector<double>(10, 1.0), 0.05).empty());

  // All tiny: everything rejected.
  const std::vector<std::size_t> all = bh_fdr(std::vector<double>(10, 0.001), 0.05);
  ASSERT_EQ(all.size(), 10u);
  for (std::size_t i = 0; i < 10; ++i) EXPECT_EQ(all[i], i);

  // Step-up walkthrough: thresholds k*0.05/4 = (.0125, .025, .0375, .05);
  // the largest k with p_(k) below its threshold is k = 2.
  const std::vector<std::size_t> some = bh_fdr({0.01, 0.02, 0.04, 0.2}, 0.05);
  EXPECT_EQ(some, (std::vector<std::size_t>{0, 1}));

  // Rejection set is order-independent (indices follow the input order).
  const std::vector<std::size_t> shuffled = bh_fdr({0.2, 0.02, 0.01, 0.04}, 0.05);
  EXPECT_EQ(shuffled, (std::vector<std::size_t>{1, 2}));
}

TEST(BhFdr, StepUpRescuesOrderedFamily) {
  // p_(3) = 0.03 <= 3*0.05/4 while p_(1), p_(2) miss their own thresholds;
  // the step-up still rejects all three.
  const std::vector<std::size_t> rejected = bh_fdr({0.02, 0.028, 0.03, 0.9}, 0.05);
  EXPECT_EQ(rejected, (std::vector<std::size_t>{0, 1, 2}));
}

TEST(BhFdr, ValidatesInput) {
  EXPECT_THROW(bh_fdr({0.5, 1.5}, 0.05), std::invalid_argument);
  EXPECT_THROW(bh_fdr({0.5, -0.1}, 0.05), std::invalid_argument);
  EXPECT_THROW(bh_fdr({0.5}, 0.0), std::invalid_argument);
  EXPECT_THROW(bh_fdr({0.5}, 1.0), std::invalid_argument);
  EXPECT_TRUE(bh_fdr({}, 0.05).empty());
}

// ---- decimation ----------------------------------------------------------------

TEST(Decimation, RecoversStarAndTiltedPathEndpointsVanish) {
  const Vdar1Params truth = star_coupling(4, StarKind::kOut, 3, 0.15, 0.5);
  const BinaryPanel panel = simulate_vdar1(truth, 20000, 2020);
  const DecimationResult result = decimate_vdar1(panel);

  ASSERT_FALSE(result.tilted_path.empty());
  EXPECT_DOUBLE_EQ(result.tilted_path.front().first, 0.0);
  EXPECT_NEAR(result.tilted_path.front().second, 0.0, 1e-6);
  EXPECT_DOUBLE_EQ(result.tilted_path.back().first, 1.0);
  EXPECT_NEAR(result.tilted_path.back().second, 0.0, 1e-6);

  // Path q values are strictly increasing and cover each pruning step.
  for (std::size_t i = 1; i < result.tilted_path.size(); ++i) {
    EXPECT_GT(result.tilted_path[i].first, result.tilted_path[i - 1].first);
  }

  // The selected q is the first maximizer of the tilted curve.
  double best = -1e300;
  double best_q = 0.0;
  for (const auto& [q, value] : result.tilted_path) {
    if (value > best) {
      best = value;
      best_q = q;
    }
  }
  EXPECT_DOUBLE_EQ(result.q_star, best_q);

  // Star edges survive; all other off-diagonal couplings are exactly zero.
  for (int i = 1; i < 4; ++i) {
    EXPECT_GT(result.lambda_validated(i, 0), 0.0) << "leaf " << i;
    for (int j = 1; j < 4; ++j) {
      if (j != i) EXPECT_DOUBLE_EQ(result.lambda_validated(i, j), 0.0);
    }
  }
  for (int j = 1; j < 4; ++j) EXPECT_DOUBLE_EQ(result.lambda_validated(0, j), 0.0);
}

TEST(Decimation, PathGridAndPrunedCountAreConsistent) {
  Rng rng(6);
  std::vector<BinarySeries> cols;
  for (int i = 0; i < 3; ++i) {
    std::vector<std::uint8_t> v(2000);
    for (auto& b : v) b = rng.bernoulli(0.2) ? 1 : 0;
    cols.push_back(BinarySeries(std::move(v), "S" + std::to_string(i)));
  }
  const BinaryPanel panel(std::move(cols));
  const DecimationResult result = decimate_vdar1(panel);

  // One path point per pruned off-diagonal coupling plus both endpoints; the
  // pruned fraction steps through k/N^2.
  ASSERT_EQ(result.tilted_path.size(), 8u);  // 0, 1/9 .. 6/9, 1
  for (int k = 0; k <= 6; ++k) {
    EXPECT_DOUBLE_EQ(result.tilted_path[static_cast<std::size_t>(k)].first, k / 9.0);
  }
  EXPECT_DOUBLE_EQ(result.tilted_path.back().first, 1.0);

  // Every pruned coupling is exactly zero in the validated matrix (refits may
  // zero further entries, so the count is a lower bound; the all-marginal
  // endpoint zeroes everything).
  int zero_offdiag = 0;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      if (i != j && result.lambda_validated(i, j) == 0.0) ++zero_offdiag;
    }
  }
  if (result.q_star == 1.0) {
    EXPECT_EQ(zero_offdiag, 6);
  } else {
    EXPECT_GE(zero_offdiag, static_cast<int>(std::lround(result.q_star * 9.0)));
  }
}

TEST(Decimation, ValidatesInput) {
  const BinarySeries a = BinarySeries::from_ints({1, 0, 1}, "A");
  EXPECT_THROW(decimate_vdar1(BinaryPanel({a})), std::invalid_argument);
  const BinarySeries b1 = BinarySeries::from_ints({1}, "A");
  const BinarySeries b2 = BinarySeries::from_ints({0}, "B");
  EXPECT_THROW(decimate_vdar1(BinaryPanel({b1, b2})), std::invalid_argument);
}

}  // namespace
}  // namespace tailgc

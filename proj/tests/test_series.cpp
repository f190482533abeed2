// Container and CSV round-trip tests for the series module.

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "tailgc/csv.hpp"
#include "tailgc/series.hpp"

namespace tailgc {
namespace {

TEST(BinarySeries, StoresValuesAndLabel) {
  const BinarySeries s = BinarySeries::from_ints({1, 0, 1, 1}, "SPX");
  EXPECT_EQ(s.size(), 4u);
  EXPECT_EQ(s.label(), "SPX");
  EXPECT_EQ(s[0], 1);
  EXPECT_EQ(s[1], 0);
  EXPECT_EQ(s[3], 1);
}

TEST(BinarySeries, RejectsNonBinaryValues) {
  EXPECT_THROW(BinarySeries::from_ints({0, 2, 1}), std::invalid_argument);
  EXPECT_THROW(BinarySeries::from_ints({-1}), std::invalid_argument);
  EXPECT_THROW(BinarySeries({std::vector<std::uint8_t>{0, 3}}), std::invalid_argument);
}

TEST(RealSeries, RejectsNonFiniteValues) {
  EXPECT_THROW(RealSeries({1.0, std::nan("")}), std::invalid_argument);
  EXPECT_THROW(RealSeries({std::numeric_limits<double>::infinity()}), std::invalid_argument);
}

TEST(BinaryPanel, EnforcesEqualLengthsAndDistinctLabels) {
  const BinarySeries a = BinarySeries::from_ints({0, 1, 0}, "A");
  const BinarySeries b = BinarySeries::from_ints({1, 1, 0}, "B");
  const BinaryPanel panel({a, b});
  EXPECT_EQ(panel.width(), 2u);
  EXPECT_EQ(panel.length(), 3u);
  EXPECT_EQ(panel.labels(), (std::vector<std::string>{"A", "B"}));

  const BinarySeries short_series = BinarySeries::from_ints({1}, "C");
  EXPECT_THROW(BinaryPanel({a, short_series}), std::invalid_argument);
  const BinarySeries duplicate = BinarySeries::from_ints({0, 0, 0}, "A");
  EXPECT_THROW(BinaryPanel({a, duplicate}), std::invalid_argument);
}

TEST(Moments, SampleMeanAndPopulationVariance) {
  EXPECT_DOUBLE_EQ(sample_mean(BinarySeries::from_ints({1, 0, 1, 1})), 0.75);
  EXPECT_DOUBLE_EQ(sample_mean(RealSeries({1.0, 2.0, 6.0})), 3.0);
  // Divide-by-n convention: values (1,2,3) have population variance 2/3.
  EXPECT_DOUBLE_EQ(population_variance({1.0, 2.0, 3.0}), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(population_variance({5.0, 5.0, 5.0}), 0.0);
}

double naive_lagged_correlation(const std::vector<int>& x, const std::vector<int>& y, int lag) {
  // Direct windowed Pearson correlation of (x_t, y_{t-lag}).
  std::vector<double> xs, ys;
  const int t_count = static_cast<int>(x.size());
  for (int t = 0; t < t_count; ++t) {
    const int s = t - lag;
    if (s < 0 || s >= t_count) continue;
    xs.push_back(x[static_cast<std::size_t>(t)]);
    ys.push_back(y[static_cast<std::size_t>(s)]);
  }
  const std::size_t n = xs.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

TEST(Moments, LaggedCrossCorrelationMatchesDirectComputation) {
  const std::vector<int> xv = {1, 0, 0, 1, 1, 0, 1, 0, 0, 0, 1, 1};
  const std::vector<int> yv = {0, 1, 0, 1, 0, 0, 1, 1, 0, 1, 0, 0};
  const BinarySeries x = BinarySeries::from_ints(xv);
  const BinarySeries y = BinarySeries::from_ints(yv);
  for (int lag = -3; lag <= 3; ++lag) {
    EXPECT_NEAR(lagged_cross_correlation(x, y, lag), naive_lagged_correlation(xv, yv, lag), 1e-12)
        << "lag " << lag;
  }
}

TEST(Moments, LaggedCrossCorrelationSymmetry) {
  const BinarySeries x = BinarySeries::from_ints({1, 0, 0, 1, 1, 0, 1, 0});
  const BinarySeries y = BinarySeries::from_ints({0, 1, 1, 1, 0, 0, 0, 1});
  for (int lag = 0; lag <= 3; ++lag) {
    EXPECT_DOUBLE_EQ(lagged_cross_correlation(x, y, lag), lagged_cross_correlation(y, x, -lag));
  }
}

TEST(Moments, LaggedCrossCorrelationErrors) {
  const BinarySeries x = BinarySeries::from_ints({1, 0, 1});
  const BinarySeries constant = BinarySeries::from_ints({1, 1, 1});
  EXPECT_THROW(lagged_cross_correlation(x, x, 3), std::invalid_argument);
  EXPECT_THROW(lagged_cross_correlation(x, constant, 0), std::invalid_argument);
}

TEST(Csv, PanelRoundTripIsExact) {
  const BinaryPanel panel({BinarySeries::from_ints({1, 0, 0, 1}, "AA"),
                           BinarySeries::from_ints({0, 0, 1, 1}, "BB")});
  std::stringstream buffer;
  write_panel_csv(buffer, panel);
  const BinaryPanel back = read_panel_csv(buffer);
  ASSERT_EQ(back.width(), panel.width());
  EXPECT_EQ(back.labels(), panel.labels());
  for (std::size_t i = 0; i < panel.width(); ++i) {
    EXPECT_EQ(back.series(i).values(), panel.series(i).values());
  }
}

TEST(Csv, PanelReaderRejectsMalformedInput) {
  {
    std::stringstream bad("A,B\n1,0\n1\n");  // ragged row
    EXPECT_THROW(read_panel_csv(bad), std::invalid_argument);
  }
  {
    std::stringstream bad("A,B\n1,2\n");  // non-binary cell
    EXPECT_THROW(read_panel_csv(bad), std::invalid_argument);
  }
  {
    std::stringstream bad("");  // no header
    EXPECT_THROW(read_panel_csv(bad), std::invalid_argument);
  }
}

TEST(Csv, RealSeriesRoundTripPreservesValues) {
  const RealSeries series({0.5, -1.25, 3.0e-4}, "r");
  std::stringstream buffer;
  write_real_series_csv(buffer, series);
  const RealSeries back = read_real_series_csv(buffer, "r");
  ASSERT_EQ(back.size(), series.size());
  for (std::size_t t = 0; t < series.size(); ++t) {
    EXPECT_DOUBLE_EQ(back[t], series[t]);
  }
}

}  // namespace
}  // namespace tailgc

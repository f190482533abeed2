#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace tailgc {

// =============================================================================
// Series containers
//
// BinarySeries holds a 0/1 extreme-event (hit) sequence, RealSeries a finite
// real-valued return/price sequence, and BinaryPanel a collection of
// equal-length binary series with distinct labels. All three are immutable
// after construction; every operation on them is a pure function.
// =============================================================================

class BinarySeries {
 public:
  // Values must be exactly 0 or 1; throws std::invalid_argument otherwise.
  explicit BinarySeries(std::vector<std::uint8_t> values, std::string label = "");

  // Convenience for integer literals in call sites and tests.
  static BinarySeries from_ints(const std::vector<int>& values, std::string label = "");

  const std::vector<std::uint8_t>& values() const { return values_; }
  const std::string& label() const { return label_; }
  std::size_t size() const { return values_.size(); }
  std::uint8_t operator[](std::size_t t) const { return values_[t]; }

 private:
  std::vector<std::uint8_t> values_;
  std::string label_;
};

class RealSeries {
 public:
  // All values must be finite; throws std::invalid_argument on NaN/±inf.
  // Timestamps are opaque strings kept only for output alignment; pass an
  // empty vector when there are none (otherwise one per value).
  explicit RealSeries(std::vector<double> values, std::string label = "",
                      std::vector<std::string> timestamps = {});

  const std::vector<double>& values() const { return values_; }
  const std::string& label() const { return label_; }
  const std::vector<std::string>& timestamps() const { return timestamps_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t t) const { return values_[t]; }

 private:
  std::vector<double> values_;
  std::string label_;
  std::vector<std::string> timestamps_;
};

class BinaryPanel {
 public:
  // All series must share one length T >= 1 and carry distinct labels.
  explicit BinaryPanel(std::vector<BinarySeries> series);

  std::size_t width() const { return series_.size(); }   // N
  std::size_t length() const { return series_.front().size(); }  // T
  const BinarySeries& series(std::size_t i) const { return series_[i]; }
  const std::vector<BinarySeries>& all() const { return series_; }
  std::vector<std::string> labels() const;

 private:
  std::vector<BinarySeries> series_;
};

// =============================================================================
// Sample moments
// =============================================================================

// Arithmetic mean of a binary series. Throws on empty input.
double sample_mean(const BinarySeries& s);

// Arithmetic mean of a real series. Throws on empty input.
double sample_mean(const RealSeries& s);

// Population (divide-by-n) variance, the convention used by every moment
// estimator in this library.
double population_variance(const std::vector<double>& values);

// Pearson correlation between X_t and Y_{t-lag} over the T-|lag| overlapping
// pairs, with means and standard deviations recomputed on that window.
// Satisfies lagged_cross_correlation(x, y, tau) ==
// lagged_cross_correlation(y, x, -tau). Throws "lag out of range" when
// |lag| >= T and "zero variance" when either window is constant.
double lagged_cross_correlation(const BinarySeries& x, const BinarySeries& y, int lag);

}  // namespace tailgc

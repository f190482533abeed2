#include "tailgc/series.hpp"

#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>
#include <utility>

namespace tailgc {

BinarySeries::BinarySeries(std::vector<std::uint8_t> values, std::string label)
    : values_(std::move(values)), label_(std::move(label)) {
  for (std::size_t t = 0; t < values_.size(); ++t) {
    if (values_[t] > 1) {
      throw std::invalid_argument("BinarySeries: non-binary value at index " + std::to_string(t));
    }
  }
}

BinarySeries BinarySeries::from_ints(const std::vector<int>& values, std::string label) {
  std::vector<std::uint8_t> bits;
  bits.reserve(values.size());
  for (std::size_t t = 0; t < values.size(); ++t) {
    if (values[t] != 0 && values[t] != 1) {
      throw std::invalid_argument("BinarySeries: non-binary value at index " + std::to_string(t));
    }
    bits.push_back(static_cast<std::uint8_t>(values[t]));
  }
  return BinarySeries(std::move(bits), std::move(label));
}

RealSeries::RealSeries(std::vector<double> values, std::string label,
                       std::vector<std::string> timestamps)
    : values_(std::move(values)), label_(std::move(label)), timestamps_(std::move(timestamps)) {
  for (std::size_t t = 0; t < values_.size(); ++t) {
    if (!std::isfinite(values_[t])) {
      throw std::invalid_argument("RealSeries: non-finite value at index " + std::to_string(t));
    }
  }
  if (!timestamps_.empty() && timestamps_.size() != values_.size()) {
    throw std::invalid_argument("RealSeries: timestamp count does not match value count");
  }
}

BinaryPanel::BinaryPanel(std::vector<BinarySeries> series) : series_(std::move(series)) {
  if (series_.empty()) throw std::invalid_argument("BinaryPanel: empty panel");
  const std::size_t T = series_.front().size();
  if (T == 0) throw std::invalid_argument("BinaryPanel: empty series");
  std::set<std::string> labels;
  for (const auto& s : series_) {
    if (s.size() != T) throw std::invalid_argument("BinaryPanel: unequal series lengths");
    if (!labels.insert(s.label()).second) {
      throw std::invalid_argument("BinaryPanel: duplicate label '" + s.label() + "'");
    }
  }
}

std::vector<std::string> BinaryPanel::labels() const {
  std::vector<std::string> out;
  out.reserve(series_.size());
  for (const auto& s : series_) out.push_back(s.label());
  return out;
}

double sample_mean(const BinarySeries& s) {
  if (s.size() == 0) throw std::invalid_argument("sample_mean: empty input");
  const auto& v = s.values();
  const double total = std::accumulate(v.begin(), v.end(), 0.0);
  return total / static_cast<double>(v.size());
}

double sample_mean(const RealSeries& s) {
  if (s.size() == 0) throw std::invalid_argument("sample_mean: empty input");
  const auto& v = s.values();
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double population_variance(const std::vector<double>& values) {
  if (values.empty()) throw std::invalid_argument("population_variance: empty input");
  const double n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return ss / n;
}

double lagged_cross_correlation(const BinarySeries& x, const BinarySeries& y, int lag) {
  if (x.size() != y.size()) throw std::invalid_argument("lagged_cross_correlation: unequal series lengths");
  const std::size_t T = x.size();
  const std::size_t abs_lag = static_cast<std::size_t>(lag < 0 ? -static_cast<long long>(lag) : lag);
  if (abs_lag >= T) throw std::invalid_argument("lagged_cross_correlation: lag out of range");

  // Overlapping window: pairs (x_t, y_{t-lag}). For lag >= 0 that is
  // t = lag..T-1; a negative lag swaps the roles symmetrically.
  const std::size_t n = T - abs_lag;
  const std::size_t x_start = lag >= 0 ? abs_lag : 0;
  const std::size_t y_start = lag >= 0 ? 0 : abs_lag;

  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    mx += x[x_start + k];
    my += y[y_start + k];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);

  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double dx = x[x_start + k] - mx;
    const double dy = y[y_start + k] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw std::invalid_argument("lagged_cross_correlation: zero variance on the overlap window");
  }
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace tailgc

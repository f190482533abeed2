#pragma once

#include <vector>

namespace tailgc::detail {

// Centered sample cross-covariances at all nonnegative lags:
//   c[j] = (1/T) * sum_{t=j}^{T-1} (a_t - mean_a) * (b_{t-j} - mean_b),  j = 0..T-1.
// Computed in O(T log T) via zero-padded FFTs.
std::vector<double> cross_covariances(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace tailgc::detail

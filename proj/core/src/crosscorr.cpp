#include "crosscorr.hpp"

#include <fftw3.h>

#include <cstddef>
#include <mutex>
#include <stdexcept>

namespace tailgc::detail {

namespace {

// FFTW plan creation is not thread-safe; executions of distinct plans are.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwBuffers {
  std::size_t length = 0;
  double* real_a = nullptr;
  double* real_b = nullptr;
  fftw_complex* freq_a = nullptr;
  fftw_complex* freq_b = nullptr;
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;

  explicit FftwBuffers(std::size_t n) : length(n) {
    real_a = fftw_alloc_real(n);
    real_b = fftw_alloc_real(n);
    freq_a = fftw_alloc_complex(n / 2 + 1);
    freq_b = fftw_alloc_complex(n / 2 + 1);
    if (!real_a || !real_b || !freq_a || !freq_b) {
      release();
      throw std::bad_alloc();
    }
    std::lock_guard<std::mutex> lock(planner_mutex());
    forward = fftw_plan_dft_r2c_1d(static_cast<int>(n), real_a, freq_a, FFTW_ESTIMATE);
    backward = fftw_plan_dft_c2r_1d(static_cast<int>(n), freq_a, real_a, FFTW_ESTIMATE);
    if (!forward || !backward) {
      release();
      throw std::runtime_error("FFTW plan creation failed");
    }
  }

  ~FftwBuffers() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    release();
  }

  FftwBuffers(const FftwBuffers&) = delete;
  FftwBuffers& operator=(const FftwBuffers&) = delete;

 private:
  void release() {
    if (forward) fftw_destroy_plan(forward);
    if (backward) fftw_destroy_plan(backward);
    fftw_free(real_a);
    fftw_free(real_b);
    fftw_free(freq_a);
    fftw_free(freq_b);
    forward = nullptr;
    backward = nullptr;
    real_a = nullptr;
    real_b = nullptr;
    freq_a = nullptr;
    freq_b = nullptr;
  }
};

}  // namespace

std::vector<double> cross_covariances(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("cross_covariances: unequal lengths");
  if (a.empty()) throw std::invalid_argument("cross_covariances: empty input");
  const std::size_t t_len = a.size();

  double mean_a = 0.0, mean_b = 0.0;
  for (std::size_t t = 0; t < t_len; ++t) {
    mean_a += a[t];
    mean_b += b[t];
  }
  mean_a /= static_cast<double>(t_len);
  mean_b /= static_cast<double>(t_len);

  std::size_t padded = 1;
  while (padded < 2 * t_len) padded <<= 1;

  FftwBuffers buf(padded);
  for (std::size_t t = 0; t < padded; ++t) {
    buf.real_a[t] = t < t_len ? a[t] - mean_a : 0.0;
    buf.real_b[t] = t < t_len ? b[t] - mean_b : 0.0;
  }
  fftw_execute_dft_r2c(buf.forward, buf.real_a, buf.freq_a);
  fftw_execute_dft_r2c(buf.forward, buf.real_b, buf.freq_b);

  // freq_a <- freq_a * conj(freq_b); the inverse transform then yields the
  // linear cross-correlation sum_t a~[t+j] b~[t] at index j.
  const std::size_t half = padded / 2 + 1;
  for (std::size_t k = 0; k < half; ++k) {
    const double ar = buf.freq_a[k][0], ai = buf.freq_a[k][1];
    const double br = buf.freq_b[k][0], bi = buf.freq_b[k][1];
    buf.freq_a[k][0] = ar * br + ai * bi;
    buf.freq_a[k][1] = ai * br - ar * bi;
  }
  fftw_execute_dft_c2r(buf.backward, buf.freq_a, buf.real_a);

  const double scale = 1.0 / (static_cast<double>(padded) * static_cast<double>(t_len));
  std::vector<double> out(t_len);
  for (std::size_t j = 0; j < t_len; ++j) out[j] = buf.real_a[j] * scale;
  return out;
}

}  // namespace tailgc::detail

#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace tailgc {

// =============================================================================
// Deterministic random number generation
//
// All simulators in this library draw from Xoshiro256PlusPlus seeded through
// SplitMix64, a fixed, portable 64-bit generator pair. Identical seeds produce
// identical streams on every platform, which is what makes the reproducibility
// guarantees of the simulation and experiment modules byte-for-byte claims
// rather than statistical ones.
// =============================================================================

// SplitMix64: used to expand a user seed into generator state and to derive
// independent stream seeds for replicate runs.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();

 private:
  std::uint64_t state_;
};

// xoshiro256++ by Blackman and Vigna: fast, 256-bit state, passes BigCrush.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();

  // Uniform on the open interval (0,1): midpoints of the 53-bit grid, so the
  // result is never exactly 0 or 1 and can be pushed through inverse CDFs.
  double next_double();

  // Bernoulli(p) draw; p outside [0,1] is clamped by comparison semantics.
  bool bernoulli(double p) { return next_double() < p; }

  // Index draw from a nonnegative weight vector summing to ~1 (a simplex).
  // Uses a single uniform and a cumulative scan; the last index absorbs any
  // rounding slack so the draw is always valid.
  int categorical(const std::vector<double>& weights);

  // Standard normal via the inverse-CDF method (see inverse_normal_cdf).
  double normal();

  // Pair of standard normals with correlation rho.
  std::pair<double, double> correlated_normal_pair(double rho);

 private:
  std::uint64_t s_[4];
};

// Quantile function of the standard normal distribution, computed with the
// Acklam rational approximation refined by one Halley step; absolute relative
// error below 1e-9 on (0,1). Used both for normal sampling and for the
// Gaussian-copula thresholds Phi^{-1}(chi).
double inverse_normal_cdf(double p);

// Deterministic per-replicate stream seed: chains SplitMix64 over the master
// seed and the two run indices. Documented so that experiment reruns match
// across machines and languages.
std::uint64_t derive_stream_seed(std::uint64_t master_seed,
                                 std::uint64_t sweep_index,
                                 std::uint64_t replicate_index);

}  // namespace tailgc

#pragma once

#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "tailgc/dgp.hpp"
#include "tailgc/gc_tests.hpp"

namespace tailgc {

//======================================================================
// Monte Carlo size/power harness and ROC builder. Every replicate's
// randomness comes from one stream derived deterministically from the
// master seed and the (sweep index, seed index) pair, so reports are
// bit-reproducible for a fixed master seed.
//======================================================================

enum class DgpKind { kVdarBivariate, kGarch };
enum class TestDirection { kForward, kReverse };
enum class SweepVariable { kNone, kLambda1, kNu2 };

// Bivariate VDAR(1) data-generating settings. Series 1 is the potential
// effect: lambda1 couples series 2's past into series 1 ("2 causes 1"), and
// the forward test direction is source = series 2, target = series 1.
struct VdarDgpSettings {
  double nu1 = 0.5;
  double nu2 = 0.5;
  double chi1 = 0.05;
  double chi2 = 0.05;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double copula_rho = 0.0;        // 0 disables cross-sectional innovation coupling
  bool randomize_nu = false;      // nu1, nu2 ~ U(0,1) per replicate
  bool randomize_lambda1 = false; // lambda1 ~ U(0,1) per replicate (alternative)
  double chi_low = 0.0;           // chi_high > 0 draws chi1 = chi2 ~ U(low, high)
  double chi_high = 0.0;          // per replicate
};

struct SizePowerConfig {
  DgpKind dgp = DgpKind::kVdarBivariate;
  GarchScenario scenario = GarchScenario::kNull;  // kGarch only
  GcMethod detector = GcMethod::kLr;
  TestDirection direction = TestDirection::kForward;
  SweepVariable sweep = SweepVariable::kNone;
  std::vector<double> sweep_values;  // one point at the base settings if empty
  VdarDgpSettings vdar;
  int t = 1000;
  int n_seeds = 100;
  double level = 0.05;
  int p_max = 3;       // lr detector
  int bandwidth = 5;   // hong detector
  std::uint64_t master_seed = 1;
};

// One sweep point: `rejection_rate` is the FPR when the point is a null
// configuration for the tested direction and the TPR otherwise;
// se = sqrt(r(1-r)/n). Failed replicates are excluded from the rate.
struct ExperimentPoint {
  double sweep_value = 0.0;
  int n = 0;
  int failures = 0;
  bool is_null = true;
  double rejection_rate = 0.0;
  double se = 0.0;
};

struct ExperimentReport {
  std::vector<ExperimentPoint> points;
  std::vector<std::pair<double, double>> roc;  // (FPR, TPR), sorted by FPR
  double auc = std::numeric_limits<double>::quiet_NaN();
};

// Simulate-detect-aggregate over every sweep point and seed.
ExperimentReport run_size_power(const SizePowerConfig& cfg);

// ROC from (p_value, truth) scores, truth = 1 under the alternative: sweeps
// the rejection threshold over all distinct p-values, emits (FPR, TPR) points
// bracketed by (0,0) and (1,1), and the trapezoidal AUC. Throws
// std::invalid_argument unless both classes are present.
ExperimentReport roc_curve(const std::vector<std::pair<double, int>>& scores);

// Paired ROC protocol: n_sims replicates alternating null (lambda1 = 0) and
// alternative (lambda1 ~ U(lambda_low, lambda_high)); both detectors score
// the same simulated pair in the forward direction.
struct RocProtocolConfig {
  int t = 10000;
  int n_sims = 1000;
  int p_max = 3;
  int bandwidth = 5;
  double nu1 = 0.5;
  double nu2 = 0.5;
  double chi1 = 0.05;
  double chi2 = 0.05;
  double lambda_low = 0.25;
  double lambda_high = 0.75;
  double copula_rho = 0.0;
  std::uint64_t master_seed = 1;
};

struct RocComparison {
  ExperimentReport lr;
  ExperimentReport hong;
  int failures = 0;
};

RocComparison run_roc_protocol(const RocProtocolConfig& cfg);

// Star recovery experiment: simulate a star-coupled VDAR(1) panel per seed,
// reconstruct the network by decimation and/or by the pairwise FDR network,
// and pool edge-level error rates over seeds against the star's true edges.
struct StarConfig {
  int n = 10;
  int t = 10000;
  int n_seeds = 100;
  StarKind kind = StarKind::kOut;
  double chi = 0.1;
  double nu = 0.5;
  double level = 0.05;
  int p_max = 1;  // pairwise lr order
  std::uint64_t master_seed = 1;
  bool run_pairwise = true;
  bool run_decimation = true;
  GcMethod pairwise_method = GcMethod::kLr;
};

struct EdgeRates {
  double fpr = 0.0;
  double tpr = 0.0;
  double fpr_se = 0.0;
  double tpr_se = 0.0;
  long false_positives = 0;
  long true_positives = 0;
  long negatives_total = 0;
  long positives_total = 0;
};

struct StarReport {
  EdgeRates decimation;
  EdgeRates pairwise;
  int n_seeds = 0;
  int failures = 0;
};

StarReport run_star_experiment(const StarConfig& cfg);

}  // namespace tailgc

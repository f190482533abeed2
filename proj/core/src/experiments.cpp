#include "tailgc/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <utility>

#include "tailgc/network.hpp"
#include "tailgc/preprocess.hpp"
#include "tailgc/rng.hpp"

namespace tailgc {

namespace {

double binomial_se(double rate, double n) {
  return n > 0.0 ? std::sqrt(rate * (1.0 - rate) / n) : 0.0;
}

// Applies the sweep variable, then any per-replicate randomization, in a
// fixed draw order (nu1, nu2, chi, lambda1) so reruns are reproducible.
VdarDgpSettings draw_settings(const SizePowerConfig& cfg, double sweep_value, Rng& param_rng) {
  VdarDgpSettings s = cfg.vdar;
  switch (cfg.sweep) {
    case SweepVariable::kNone:
      break;
    case SweepVariable::kLambda1:
      s.lambda1 = sweep_value;
      break;
    case SweepVariable::kNu2:
      s.nu2 = sweep_value;
      break;
  }
  if (s.randomize_nu) {
    s.nu1 = param_rng.next_double();
    s.nu2 = param_rng.next_double();
  }
  if (s.chi_high > s.chi_low && s.chi_high > 0.0) {
    const double chi = s.chi_low + (s.chi_high - s.chi_low) * param_rng.next_double();
    s.chi1 = chi;
    s.chi2 = chi;
  }
  if (s.randomize_lambda1) s.lambda1 = param_rng.next_double();
  return s;
}

BiVdarParams to_bivdar_params(const VdarDgpSettings& s) {
  BiVdarParams params;
  params.eq1.nu = s.nu1;
  params.eq1.lambda = s.lambda1;
  params.eq1.chi = s.chi1;
  params.eq1.gamma_self = {1.0};
  params.eq1.gamma_cross = {1.0};
  params.eq2.nu = s.nu2;
  params.eq2.lambda = s.lambda2;
  params.eq2.chi = s.chi2;
  params.eq2.gamma_self = {1.0};
  params.eq2.gamma_cross = {1.0};
  return params;
}

GcTestResult run_detector(const SizePowerConfig& cfg, const BinarySeries& target,
                          const BinarySeries& source) {
  if (cfg.detector == GcMethod::kLr) return lr_tail_test(target, source, cfg.p_max);
  return hong_test(target, source, cfg.bandwidth);
}

}  // namespace

ExperimentReport run_size_power(const SizePowerConfig& cfg) {
  if (cfg.n_seeds < 1) throw std::invalid_argument("run_size_power: n_seeds must be >= 1");
  if (!(cfg.level > 0.0 && cfg.level < 1.0)) {
    throw std::invalid_argument("run_size_power: level must lie in (0,1)");
  }
  std::vector<double> sweep_values = cfg.sweep_values;
  if (sweep_values.empty()) sweep_values.push_back(0.0);
  if (cfg.sweep == SweepVariable::kNone) sweep_values.resize(1);

  ExperimentReport report;
  for (std::size_t sweep_idx = 0; sweep_idx < sweep_values.size(); ++sweep_idx) {
    ExperimentPoint point;
    point.sweep_value = sweep_values[sweep_idx];
    int rejections = 0, successes = 0, failures = 0;
    bool point_is_null = true;

    for (int rep = 0; rep < cfg.n_seeds; ++rep) {
      const std::uint64_t base = derive_stream_seed(
          cfg.master_seed, static_cast<std::uint64_t>(sweep_idx), static_cast<std::uint64_t>(rep));
      const std::uint64_t param_seed = derive_stream_seed(base, 0, 0);
      const std::uint64_t sim_seed = derive_stream_seed(base, 1, 0);
      try {
        GcTestResult result;
        if (cfg.dgp == DgpKind::kVdarBivariate) {
          Rng param_rng(param_seed);
          const VdarDgpSettings s = draw_settings(cfg, sweep_values[sweep_idx], param_rng);
          point_is_null = cfg.direction == TestDirection::kForward
                              ? (s.lambda1 == 0.0 && !s.randomize_lambda1)
                              : s.lambda2 == 0.0;
          const std::optional<double> copula =
              s.copula_rho != 0.0 ? std::optional<double>(s.copula_rho) : std::nullopt;
          const auto [x1, x2] = simulate_vdar_bivariate(to_bivdar_params(s), cfg.t, sim_seed, copula);
          result = cfg.direction == TestDirection::kForward ? run_detector(cfg, x1, x2)
                                                            : run_detector(cfg, x2, x1);
        } else {
          point_is_null = cfg.direction == TestDirection::kReverse ||
                          cfg.scenario == GarchScenario::kNull;
          const auto [x1, x2] = simulate_garch(cfg.scenario, cfg.t, sim_seed);
          const BinarySeries hits1 = garch_var_filter(x1);
          const BinarySeries hits2 = garch_var_filter(x2);
          result = cfg.direction == TestDirection::kForward ? run_detector(cfg, hits1, hits2)
                                                            : run_detector(cfg, hits2, hits1);
        }
        ++successes;
        if (result.p_value <= cfg.level) ++rejections;
      } catch (const std::exception&) {
        ++failures;
      }
    }

    point.n = successes;
    point.failures = failures;
    point.is_null = point_is_null;
    point.rejection_rate =
        successes > 0 ? static_cast<double>(rejections) / static_cast<double>(successes) : 0.0;
    point.se = binomial_se(point.rejection_rate, static_cast<double>(successes));
    report.points.push_back(point);
  }
  return report;
}

ExperimentReport roc_curve(const std::vector<std::pair<double, int>>& scores) {
  long positives = 0, negatives = 0;
  for (const auto& [p, truth] : scores) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw std::invalid_argument("roc_curve: p-values must lie in [0,1]");
    }
    if (truth != 0) {
      ++positives;
    } else {
      ++negatives;
    }
  }
  if (positives == 0 || negatives == 0) {
    throw std::invalid_argument("roc_curve: both classes must be present");
  }

  std::vector<std::pair<double, int>> sorted = scores;
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  ExperimentReport report;
  report.roc.emplace_back(0.0, 0.0);
  long tp = 0, fp = 0;
  std::size_t i = 0;
  while (i < sorted.size()) {
    // Advance through every score tied at this threshold before emitting.
    const double threshold = sorted[i].first;
    while (i < sorted.size() && sorted[i].first == threshold) {
      if (sorted[i].second != 0) {
        ++tp;
      } else {
        ++fp;
      }
      ++i;
    }
    report.roc.emplace_back(static_cast<double>(fp) / static_cast<double>(negatives),
                            static_cast<double>(tp) / static_cast<double>(positives));
  }
  if (report.roc.back() != std::make_pair(1.0, 1.0)) report.roc.emplace_back(1.0, 1.0);

  double auc = 0.0;
  for (std::size_t k = 1; k < report.roc.size(); ++k) {
    const auto& [x0, y0] = report.roc[k - 1];
    const auto& [x1, y1] = report.roc[k];
    auc += (x1 - x0) * (y0 + y1) / 2.0;
  }
  report.auc = auc;
  return report;
}

RocComparison run_roc_protocol(const RocProtocolConfig& cfg) {
  if (cfg.n_sims < 2) throw std::invalid_argument("run_roc_protocol: need n_sims >= 2");

  std::vector<std::pair<double, int>> lr_scores, hong_scores;
  int failures = 0;
  for (int i = 0; i < cfg.n_sims; ++i) {
    const std::uint64_t base = derive_stream_seed(cfg.master_seed, 0, static_cast<std::uint64_t>(i));
    const std::uint64_t param_seed = derive_stream_seed(base, 0, 0);
    const std::uint64_t sim_seed = derive_stream_seed(base, 1, 0);
    const bool alternative = (i % 2) == 1;

    VdarDgpSettings s;
    s.nu1 = cfg.nu1;
    s.nu2 = cfg.nu2;
    s.chi1 = cfg.chi1;
    s.chi2 = cfg.chi2;
    s.lambda2 = 0.0;
    if (alternative) {
      Rng param_rng(param_seed);
      s.lambda1 = cfg.lambda_low + (cfg.lambda_high - cfg.lambda_low) * param_rng.next_double();
    } else {
      s.lambda1 = 0.0;
    }
    const std::optional<double> copula =
        cfg.copula_rho != 0.0 ? std::optional<double>(cfg.copula_rho) : std::nullopt;
    try {
      const auto [x1, x2] = simulate_vdar_bivariate(to_bivdar_params(s), cfg.t, sim_seed, copula);
      const GcTestResult lr = lr_tail_test(x1, x2, cfg.p_max);
      const GcTestResult hong = hong_test(x1, x2, cfg.bandwidth);
      lr_scores.emplace_back(lr.p_value, alternative ? 1 : 0);
      hong_scores.emplace_back(hong.p_value, alternative ? 1 : 0);
    } catch (const std::exception&) {
      ++failures;
    }
  }

  RocComparison out;
  out.lr = roc_curve(lr_scores);
  out.hong = roc_curve(hong_scores);
  out.failures = failures;
  return out;
}

StarReport run_star_experiment(const StarConfig& cfg) {
  if (cfg.n_seeds < 1) throw std::invalid_argument("run_star_experiment: n_seeds must be >= 1");

  StarReport report;
  report.n_seeds = cfg.n_seeds;
  long dec_fp = 0, dec_tp = 0, pair_fp = 0, pair_tp = 0;
  long dec_neg = 0, dec_pos = 0, pair_neg = 0, pair_pos = 0;

  for (int rep = 0; rep < cfg.n_seeds; ++rep) {
    const std::uint64_t base =
        derive_stream_seed(cfg.master_seed, 0, static_cast<std::uint64_t>(rep));
    const std::uint64_t topology_seed = derive_stream_seed(base, 0, 0);
    const std::uint64_t sim_seed = derive_stream_seed(base, 1, 0);
    try {
      const Vdar1Params coupling = star_coupling(cfg.n, cfg.kind, topology_seed, cfg.chi, cfg.nu);
      std::set<std::pair<int, int>> truth;
      for (int i = 0; i < cfg.n; ++i) {
        for (int j = 0; j < cfg.n; ++j) {
          if (i != j && coupling.lambda(i, j) != 0.0) truth.emplace(j, i);  // j causes i
        }
      }
      const long possible = static_cast<long>(cfg.n) * (cfg.n - 1);
      const BinaryPanel panel = simulate_vdar1(coupling, cfg.t, sim_seed);

      if (cfg.run_decimation) {
        const CausalityNetwork net = build_multivariate_network(panel);
        for (const auto& e : net.edges) {
          if (truth.count(e) > 0) {
            ++dec_tp;
          } else {
            ++dec_fp;
          }
        }
        dec_pos += static_cast<long>(truth.size());
        dec_neg += possible - static_cast<long>(truth.size());
      }
      if (cfg.run_pairwise) {
        const CausalityNetwork net =
            build_pairwise_network(panel, cfg.pairwise_method, cfg.level, cfg.p_max);
        for (const auto& e : net.edges) {
          if (truth.count(e) > 0) {
            ++pair_tp;
          } else {
            ++pair_fp;
          }
        }
        pair_pos += static_cast<long>(truth.size());
        pair_neg += possible - static_cast<long>(truth.size());
      }
    } catch (const std::exception&) {
      ++report.failures;
    }
  }

  const auto fill = [](EdgeRates& r, long fp, long tp, long neg, long pos) {
    r.false_positives = fp;
    r.true_positives = tp;
    r.negatives_total = neg;
    r.positives_total = pos;
    r.fpr = neg > 0 ? static_cast<double>(fp) / static_cast<double>(neg) : 0.0;
    r.tpr = pos > 0 ? static_cast<double>(tp) / static_cast<double>(pos) : 0.0;
    r.fpr_se = binomial_se(r.fpr, static_cast<double>(neg));
    r.tpr_se = binomial_se(r.tpr, static_cast<double>(pos));
  };
  fill(report.decimation, dec_fp, dec_tp, dec_neg, dec_pos);
  fill(report.pairwise, pair_fp, pair_tp, pair_neg, pair_pos);
  return report;
}

}  // namespace tailgc

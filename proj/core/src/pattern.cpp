#include "pattern.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

namespace tailgc::detail {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

}  // namespace

DarCounts build_dar_counts(const BinarySeries& x, int p) {
  const int T = static_cast<int>(x.size());
  if (p < 1) throw std::invalid_argument("build_dar_counts: order must be >= 1");
  if (T < p + 1) throw std::invalid_argument("build_dar_counts: insufficient length");

  DarCounts counts;
  counts.p = p;
  counts.terms = T - p;
  counts.count.assign(std::size_t{1} << (p + 1), 0.0);

  // Rolling lag register: bit k-1 holds X_{t-k}.
  std::uint32_t lags = 0;
  for (int k = 1; k <= p; ++k) lags |= static_cast<std::uint32_t>(x[p - k]) << (k - 1);
  const std::uint32_t lag_mask = (std::uint32_t{1} << p) - 1;
  for (int t = p; t < T; ++t) {
    counts.count[x[t] | (lags << 1)] += 1.0;
    lags = ((lags << 1) | x[t]) & lag_mask;
  }
  return counts;
}

BiVdarCounts build_bivdar_counts(const BinarySeries& x, const BinarySeries& y, int p) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("build_bivdar_counts: unequal series lengths");
  }
  const int T = static_cast<int>(x.size());
  if (p < 1) throw std::invalid_argument("build_bivdar_counts: order must be >= 1");
  if (T < p + 1) throw std::invalid_argument("build_bivdar_counts: insufficient length");

  BiVdarCounts counts;
  counts.p = p;
  counts.terms = T - p;
  counts.count.assign(std::size_t{1} << (2 * p + 1), 0.0);

  std::uint32_t xlags = 0, ylags = 0;
  for (int k = 1; k <= p; ++k) {
    xlags |= static_cast<std::uint32_t>(x[p - k]) << (k - 1);
    ylags |= static_cast<std::uint32_t>(y[p - k]) << (k - 1);
  }
  const std::uint32_t lag_mask = (std::uint32_t{1} << p) - 1;
  for (int t = p; t < T; ++t) {
    counts.count[x[t] | (xlags << 1) | (ylags << (p + 1))] += 1.0;
    xlags = ((xlags << 1) | x[t]) & lag_mask;
    ylags = ((ylags << 1) | y[t]) & lag_mask;
  }
  return counts;
}

std::vector<Vdar1RowCounts> build_vdar1_counts(const BinaryPanel& panel) {
  const int N = static_cast<int>(panel.width());
  const int T = static_cast<int>(panel.length());
  if (N > 64) throw std::invalid_argument("build_vdar1_counts: panel width above 64 unsupported");
  if (T < 2) throw std::invalid_argument("build_vdar1_counts: insufficient length");

  std::vector<std::uint64_t> state(static_cast<std::size_t>(T), 0);
  for (int i = 0; i < N; ++i) {
    const auto& v = panel.series(i).values();
    for (int t = 0; t < T; ++t) state[t] |= static_cast<std::uint64_t>(v[t]) << i;
  }

  std::vector<Vdar1RowCounts> rows(static_cast<std::size_t>(N));
  std::unordered_map<std::uint64_t, double> table;
  for (int i = 0; i < N; ++i) {
    table.clear();
    const auto& v = panel.series(i).values();
    for (int t = 1; t < T; ++t) table[(state[t - 1] << 1) | v[t]] += 1.0;

    std::vector<std::pair<std::uint64_t, double>> flat(table.begin(), table.end());
    std::sort(flat.begin(), flat.end());
    auto& row = rows[i];
    row.n = N;
    row.terms = T - 1;
    row.mask.reserve(flat.size());
    row.cur.reserve(flat.size());
    row.count.reserve(flat.size());
    for (const auto& [key, c] : flat) {
      row.mask.push_back(key >> 1);
      row.cur.push_back(static_cast<std::uint8_t>(key & 1));
      row.count.push_back(c);
    }
  }
  return rows;
}

double dar_loglik_from_counts(const DarCounts& counts, const DarParams& params,
                              DarParams* grad) {
  const int p = counts.p;
  if (params.p() != p) throw std::invalid_argument("dar_loglik_from_counts: order mismatch");
  if (grad) {
    grad->nu = grad->chi = 0.0;
    grad->gamma.assign(static_cast<std::size_t>(p), 0.0);
  }

  double loglik = 0.0;
  const std::uint32_t n_keys = std::uint32_t{1} << (p + 1);
  for (std::uint32_t key = 0; key < n_keys; ++key) {
    const double c = counts.count[key];
    if (c == 0.0) continue;
    const std::uint32_t cur = key & 1;
    double copy_match = 0.0;  // sum_k gamma_k * delta(X_t, X_{t-k})
    for (int k = 1; k <= p; ++k) {
      if (((key >> k) & 1) == cur) copy_match += params.gamma[k - 1];
    }
    const double marginal = cur ? params.chi : 1.0 - params.chi;
    const double term = params.nu * copy_match + (1.0 - params.nu) * marginal;
    if (!(term > 0.0)) return kNegInf;  // degenerate likelihood
    loglik += c * std::log(term);
    if (grad) {
      const double w = c / term;
      grad->nu += w * (copy_match - marginal);
      grad->chi += w * (1.0 - params.nu) * (cur ? 1.0 : -1.0);
      for (int k = 1; k <= p; ++k) {
        if (((key >> k) & 1) == cur) grad->gamma[k - 1] += w * params.nu;
      }
    }
  }
  return loglik;
}

double bivdar_loglik_from_counts(const BiVdarCounts& counts, const BiVdarEquation& eq,
                                 BiVdarEquation* grad) {
  const int p = counts.p;
  if (eq.p() != p) throw std::invalid_argument("bivdar_loglik_from_counts: order mismatch");
  if (grad) {
    grad->nu = grad->lambda = grad->chi = 0.0;
    grad->gamma_self.assign(static_cast<std::size_t>(p), 0.0);
    grad->gamma_cross.assign(static_cast<std::size_t>(p), 0.0);
  }

  double loglik = 0.0;
  const std::uint32_t n_keys = std::uint32_t{1} << (2 * p + 1);
  for (std::uint32_t key = 0; key < n_keys; ++key) {
    const double c = counts.count[key];
    if (c == 0.0) continue;
    const std::uint32_t cur = key & 1;
    double self_match = 0.0, cross_match = 0.0;
    for (int k = 1; k <= p; ++k) {
      if (((key >> k) & 1) == cur) self_match += eq.gamma_self[k - 1];
      if (((key >> (p + k)) & 1) == cur) cross_match += eq.gamma_cross[k - 1];
    }
    const double copy_mix = (1.0 - eq.lambda) * self_match + eq.lambda * cross_match;
    const double marginal = cur ? eq.chi : 1.0 - eq.chi;
    const double term = eq.nu * copy_mix + (1.0 - eq.nu) * marginal;
    if (!(term > 0.0)) return kNegInf;
    loglik += c * std::log(term);
    if (grad) {
      const double w = c / term;
      grad->nu += w * (copy_mix - marginal);
      grad->lambda += w * eq.nu * (cross_match - self_match);
      grad->chi += w * (1.0 - eq.nu) * (cur ? 1.0 : -1.0);
      for (int k = 1; k <= p; ++k) {
        if (((key >> k) & 1) == cur) {
          grad->gamma_self[k - 1] += w * eq.nu * (1.0 - eq.lambda);
        }
        if (((key >> (p + k)) & 1) == cur) {
          grad->gamma_cross[k - 1] += w * eq.nu * eq.lambda;
        }
      }
    }
  }
  return loglik;
}

double vdar1_row_loglik_from_counts(const Vdar1RowCounts& counts, double nu, double chi,
                                    const std::vector<double>& lambda_row, double* d_nu,
                                    double* d_chi, std::vector<double>* d_lambda) {
  const int N = counts.n;
  if (static_cast<int>(lambda_row.size()) != N) {
    throw std::invalid_argument("vdar1_row_loglik_from_counts: lambda row size mismatch");
  }
  if (d_nu) *d_nu = 0.0;
  if (d_chi) *d_chi = 0.0;
  if (d_lambda) d_lambda->assign(static_cast<std::size_t>(N), 0.0);

  const double lambda_total = std::accumulate(lambda_row.begin(), lambda_row.end(), 0.0);

  double loglik = 0.0;
  for (std::size_t u = 0; u < counts.mask.size(); ++u) {
    const double c = counts.count[u];
    const std::uint64_t mask = counts.mask[u];
    const int cur = counts.cur[u];
    double ones_sum = 0.0;  // sum of lambda_j over columns that were 1
    for (std::uint64_t m = mask; m != 0; m &= m - 1) {
      ones_sum += lambda_row[static_cast<std::size_t>(__builtin_ctzll(m))];
    }
    const double copy_match = cur ? ones_sum : lambda_total - ones_sum;
    const double marginal = cur ? chi : 1.0 - chi;
    const double term = nu * copy_match + (1.0 - nu) * marginal;
    if (!(term > 0.0)) return kNegInf;
    loglik += c * std::log(term);
    if (d_nu || d_chi || d_lambda) {
      const double w = c / term;
      if (d_nu) *d_nu += w * (copy_match - marginal);
      if (d_chi) *d_chi += w * (1.0 - nu) * (cur ? 1.0 : -1.0);
      if (d_lambda) {
        // delta(cur, X^j_{t-1}) = 1 exactly for the columns whose previous
        // bit equals cur.
        auto& dl = *d_lambda;
        if (cur) {
          for (std::uint64_t m = mask; m != 0; m &= m - 1) {
            dl[static_cast<std::size_t>(__builtin_ctzll(m))] += w * nu;
          }
        } else {
          for (int j = 0; j < N; ++j) {
            if (((mask >> j) & 1) == 0) dl[static_cast<std::size_t>(j)] += w * nu;
          }
        }
      }
    }
  }
  return loglik;
}

}  // namespace tailgc::detail

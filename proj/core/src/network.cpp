#include "tailgc/network.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "fit_internal.hpp"
#include "tailgc/special.hpp"

namespace tailgc {

namespace {

// One directed LR result out of an already-computed pair scan.
GcTestResult lr_result_from_scan(const detail::PairScan& scan, const BinarySeries& target,
                                 const BinarySeries& source, bool direction_xy) {
  constexpr double kLambdaClampTol = -1e-9;
  const auto& fits = direction_xy ? scan.eq_xy : scan.eq_yx;
  const detail::EquationFit& fit = fits[static_cast<std::size_t>(scan.p_star - 1)];

  GcTestResult result;
  result.source = source.label();
  result.target = target.label();
  result.method = GcMethod::kLr;
  if (detail::is_constant(target)) {
    result.degenerate = true;
    result.p_value = 1.0;
    return result;
  }
  double lambda = -2.0 * (fit.dar.loglik - fit.loglik);
  if (lambda < 0.0) {
    if (lambda < kLambdaClampTol) {
      throw std::runtime_error("lr test: nested optimization produced Lambda < -1e-9");
    }
    lambda = 0.0;
  }
  result.statistic = lambda;
  result.selected_p = scan.p_star;
  result.dof_or_bandwidth = scan.p_star;
  result.p_value = chi_squared_upper_tail(lambda, scan.p_star);
  return result;
}

}  // namespace

CausalityNetwork build_pairwise_network(const BinaryPanel& panel, GcMethod method, double level,
                                        int p_max_or_m, PairwiseDiagnostics* diag) {
  const int n = static_cast<int>(panel.width());
  if (n < 2) throw std::invalid_argument("build_pairwise_network: need at least two series");
  if (!(level > 0.0 && level < 1.0)) {
    throw std::invalid_argument("build_pairwise_network: level must lie in (0,1)");
  }

  CausalityNetwork g;
  g.method = to_string(method);
  for (int i = 0; i < n; ++i) g.nodes.push_back(panel.series(static_cast<std::size_t>(i)).label());

  struct PairOutcome {
    int source;
    int target;
    GcTestResult result;
  };
  std::vector<PairOutcome> outcomes;
  std::vector<std::string> failures;

  if (method == GcMethod::kLr) {
    // One BIC scan per unordered pair covers both directions.
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const BinarySeries& x = panel.series(static_cast<std::size_t>(i));
        const BinarySeries& y = panel.series(static_cast<std::size_t>(j));
        try {
          const detail::PairScan scan = detail::scan_pair(x, y, p_max_or_m);
          outcomes.push_back({j, i, lr_result_from_scan(scan, x, y, /*direction_xy=*/true)});
          outcomes.push_back({i, j, lr_result_from_scan(scan, y, x, /*direction_xy=*/false)});
        } catch (const std::exception& e) {
          std::ostringstream msg;
          msg << x.label() << "<->" << y.label() << ": " << e.what();
          failures.push_back(msg.str());
        }
      }
    }
  } else {
    for (int target = 0; target < n; ++target) {
      for (int source = 0; source < n; ++source) {
        if (source == target) continue;
        const BinarySeries& x = panel.series(static_cast<std::size_t>(target));
        const BinarySeries& y = panel.series(static_cast<std::size_t>(source));
        try {
          outcomes.push_back({source, target, hong_test(x, y, p_max_or_m)});
        } catch (const std::exception& e) {
          std::ostringstream msg;
          msg << y.label() << "->" << x.label() << ": " << e.what();
          failures.push_back(msg.str());
        }
      }
    }
  }

  std::vector<double> p_values;
  p_values.reserve(outcomes.size());
  for (const PairOutcome& o : outcomes) p_values.push_back(o.result.p_value);
  const std::vector<std::size_t> rejected = bh_fdr(p_values, level);
  for (std::size_t idx : rejected) {
    g.edges.emplace(outcomes[idx].source, outcomes[idx].target);
  }

  if (diag) {
    for (const PairOutcome& o : outcomes) diag->results.push_back(o.result);
    diag->failures = std::move(failures);
  }
  return g;
}

CausalityNetwork build_multivariate_network(const BinaryPanel& panel) {
  const int n = static_cast<int>(panel.width());
  if (n < 2) throw std::invalid_argument("build_multivariate_network: need at least two series");

  const DecimationResult dec = decimate_vdar1(panel);
  CausalityNetwork g;
  g.method = "decimation";
  for (int i = 0; i < n; ++i) g.nodes.push_back(panel.series(static_cast<std::size_t>(i)).label());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j && dec.lambda_validated(i, j) != 0.0) g.edges.emplace(j, i);
    }
  }
  return g;
}

double link_density(const CausalityNetwork& g) {
  const double n = static_cast<double>(g.nodes.size());
  if (n < 2.0) return 0.0;
  return static_cast<double>(g.edges.size()) / (n * (n - 1.0));
}

double reciprocity(const CausalityNetwork& g) {
  if (g.edges.empty()) return 0.0;
  std::size_t mutual = 0;
  for (const auto& e : g.edges) {
    if (g.edges.count({e.second, e.first}) > 0) ++mutual;
  }
  return static_cast<double>(mutual) / static_cast<double>(g.edges.size());
}

double triangle_density(const CausalityNetwork& g) {
  const int n = static_cast<int>(g.nodes.size());
  if (n < 3) return 0.0;
  std::set<std::pair<int, int>> skeleton;
  for (const auto& e : g.edges) {
    skeleton.emplace(std::min(e.first, e.second), std::max(e.first, e.second));
  }
  std::size_t closed = 0;
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      if (skeleton.count({a, b}) == 0) continue;
      for (int c = b + 1; c < n; ++c) {
        if (skeleton.count({a, c}) > 0 && skeleton.count({b, c}) > 0) ++closed;
      }
    }
  }
  const double triplets =
      static_cast<double>(n) * (n - 1.0) * (n - 2.0) / 6.0;
  return static_cast<double>(closed) / triplets;
}

double jaccard(const CausalityNetwork& g1, const CausalityNetwork& g2) {
  if (g1.nodes != g2.nodes) throw std::invalid_argument("jaccard: node sets differ");
  if (g1.edges.empty() && g2.edges.empty()) return 0.0;
  std::size_t intersection = 0;
  for (const auto& e : g1.edges) {
    if (g2.edges.count(e) > 0) ++intersection;
  }
  const std::size_t unions = g1.edges.size() + g2.edges.size() - intersection;
  return static_cast<double>(intersection) / static_cast<double>(unions);
}

}  // namespace tailgc

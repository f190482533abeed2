#include "tailgc/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "fit_internal.hpp"
#include "optimize.hpp"
#include "pattern.hpp"

namespace tailgc {

namespace {

using detail::BiVdarCounts;
using detail::DarCounts;
using detail::MaximizeOptions;
using detail::MaximizeResult;
using detail::RowFit;
using detail::RowStart;
using detail::Vdar1RowCounts;

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Probabilities closer to a boundary than this are snapped onto it after
// optimization; the snapped parameter set competes with the unsnapped one on
// exact likelihood, so snapping can only improve the reported fit.
constexpr double kSnapTol = 3e-8;

double snap_prob(double v) {
  if (v < kSnapTol) return 0.0;
  if (v > 1.0 - kSnapTol) return 1.0;
  return v;
}

void normalize_simplex(std::vector<double>& w) {
  double total = std::accumulate(w.begin(), w.end(), 0.0);
  if (total <= 0.0) {
    w.assign(w.size(), 1.0 / static_cast<double>(w.size()));
    return;
  }
  for (double& v : w) v /= total;
}

void snap_simplex(std::vector<double>& w) {
  for (double& v : w) {
    if (v < kSnapTol) v = 0.0;
  }
  normalize_simplex(w);
}

std::vector<double> uniform_simplex(int m) {
  return std::vector<double>(static_cast<std::size_t>(m), 1.0 / static_cast<double>(m));
}

// ---- DAR maximum likelihood --------------------------------------------------

Eigen::VectorXd pack_dar(const DarParams& q) {
  const int p = q.p();
  Eigen::VectorXd u(2 + p);
  u[0] = detail::from_unit(q.nu);
  u[1] = detail::from_unit(q.chi);
  Eigen::VectorXd w(p), uw(p);
  for (int k = 0; k < p; ++k) w[k] = q.gamma[static_cast<std::size_t>(k)];
  detail::from_simplex(w, uw);
  u.segment(2, p) = uw;
  return u;
}

DarParams unpack_dar(const Eigen::VectorXd& u, int p) {
  DarParams q;
  q.nu = detail::to_unit(u[0]);
  q.chi = detail::to_unit(u[1]);
  Eigen::VectorXd ug = u.segment(2, p), w;
  detail::to_simplex(ug, w);
  q.gamma.assign(w.data(), w.data() + p);
  return q;
}

struct DarCandidate {
  DarParams q;
  double loglik = kNegInf;
  bool converged = false;
  int iterations = 0;
};

DarCandidate run_dar_fit(const DarCounts& counts, const DarParams& start) {
  const int p = counts.p;
  auto objective = [&counts, p](const Eigen::VectorXd& u, Eigen::VectorXd& du) -> double {
    const DarParams q = unpack_dar(u, p);
    DarParams g;
    const double val = detail::dar_loglik_from_counts(counts, q, &g);
    du.setZero();
    if (!std::isfinite(val)) return val;
    du[0] = g.nu * detail::to_unit_dd(u[0]);
    du[1] = g.chi * detail::to_unit_dd(u[1]);
    Eigen::VectorXd ug = u.segment(2, p), dw(p), dug = Eigen::VectorXd::Zero(p);
    for (int k = 0; k < p; ++k) dw[k] = g.gamma[static_cast<std::size_t>(k)];
    detail::simplex_chain(ug, dw, dug);
    du.segment(2, p) = dug;
    return val;
  };
  const MaximizeResult res = detail::maximize_bfgs(objective, pack_dar(start));
  DarCandidate cand;
  cand.q = unpack_dar(res.x, p);
  normalize_simplex(cand.q.gamma);
  cand.loglik = detail::dar_loglik_from_counts(counts, cand.q, nullptr);
  cand.converged = res.converged;
  cand.iterations = res.iterations;
  return cand;
}

// Univariate Yule–Walker specialization used as the DAR warm start.
DarParams yw_dar_start(const BinarySeries& x, int p) {
  const int T = static_cast<int>(x.size());
  const double mean = sample_mean(x);
  std::vector<double> g(static_cast<std::size_t>(p) + 1, 0.0);
  for (int k = 0; k <= p; ++k) {
    double acc = 0.0;
    for (int t = k; t < T; ++t) acc += (x[t] - mean) * (x[t - k] - mean);
    g[static_cast<std::size_t>(k)] = acc / static_cast<double>(T);
  }
  Eigen::MatrixXd M(p, p);
  Eigen::VectorXd r(p);
  for (int l = 1; l <= p; ++l) {
    for (int k = 1; k <= p; ++k) M(l - 1, k - 1) = g[static_cast<std::size_t>(std::abs(k - l))];
    r[l - 1] = g[static_cast<std::size_t>(l)];
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
  if (!lu.isInvertible()) throw std::runtime_error("Yule–Walker system singular");
  const Eigen::VectorXd phi_raw = lu.solve(r);

  DarParams q;
  q.gamma.assign(static_cast<std::size_t>(p), 0.0);
  double total = 0.0;
  for (int k = 0; k < p; ++k) {
    const double v = std::max(phi_raw[k], 0.0);
    q.gamma[static_cast<std::size_t>(k)] = v;
    total += v;
  }
  q.nu = std::clamp(total, 0.0, 1.0);
  if (total > 0.0) {
    for (double& v : q.gamma) v /= total;
  } else {
    q.gamma = uniform_simplex(p);
  }
  q.chi = std::clamp(mean, 0.0, 1.0);
  return q;
}

// ---- bivariate equation maximum likelihood ------------------------------------

Eigen::VectorXd pack_equation(const BiVdarEquation& eq) {
  const int p = eq.p();
  Eigen::VectorXd u(3 + 2 * p);
  u[0] = detail::from_unit(eq.nu);
  u[1] = detail::from_unit(eq.lambda);
  u[2] = detail::from_unit(eq.chi);
  Eigen::VectorXd w(p), uw(p);
  for (int k = 0; k < p; ++k) w[k] = eq.gamma_self[static_cast<std::size_t>(k)];
  detail::from_simplex(w, uw);
  u.segment(3, p) = uw;
  for (int k = 0; k < p; ++k) w[k] = eq.gamma_cross[static_cast<std::size_t>(k)];
  detail::from_simplex(w, uw);
  u.segment(3 + p, p) = uw;
  return u;
}

BiVdarEquation unpack_equation(const Eigen::VectorXd& u, int p) {
  BiVdarEquation eq;
  eq.nu = detail::to_unit(u[0]);
  eq.lambda = detail::to_unit(u[1]);
  eq.chi = detail::to_unit(u[2]);
  Eigen::VectorXd ug = u.segment(3, p), w;
  detail::to_simplex(ug, w);
  eq.gamma_self.assign(w.data(), w.data() + p);
  ug = u.segment(3 + p, p);
  detail::to_simplex(ug, w);
  eq.gamma_cross.assign(w.data(), w.data() + p);
  return eq;
}

struct EquationCandidate {
  BiVdarEquation eq;
  double loglik = kNegInf;
  bool converged = false;
  int iterations = 0;
};

EquationCandidate run_equation_fit(const BiVdarCounts& counts, const BiVdarEquation& start) {
  const int p = counts.p;
  auto objective = [&counts, p](const Eigen::VectorXd& u, Eigen::VectorXd& du) -> double {
    const BiVdarEquation eq = unpack_equation(u, p);
    BiVdarEquation g;
    const double val = detail::bivdar_loglik_from_counts(counts, eq, &g);
    du.setZero();
    if (!std::isfinite(val)) return val;
    du[0] = g.nu * detail::to_unit_dd(u[0]);
    du[1] = g.lambda * detail::to_unit_dd(u[1]);
    du[2] = g.chi * detail::to_unit_dd(u[2]);
    Eigen::VectorXd ug = u.segment(3, p), dw(p), dug = Eigen::VectorXd::Zero(p);
    for (int k = 0; k < p; ++k) dw[k] = g.gamma_self[static_cast<std::size_t>(k)];
    detail::simplex_chain(ug, dw, dug);
    du.segment(3, p) = dug;
    ug = u.segment(3 + p, p);
    dug.setZero();
    for (int k = 0; k < p; ++k) dw[k] = g.gamma_cross[static_cast<std::size_t>(k)];
    detail::simplex_chain(ug, dw, dug);
    du.segment(3 + p, p) = dug;
    return val;
  };
  const MaximizeResult res = detail::maximize_bfgs(objective, pack_equation(start));
  EquationCandidate cand;
  cand.eq = unpack_equation(res.x, p);
  normalize_simplex(cand.eq.gamma_self);
  normalize_simplex(cand.eq.gamma_cross);
  cand.loglik = detail::bivdar_loglik_from_counts(counts, cand.eq, nullptr);
  cand.converged = res.converged;
  cand.iterations = res.iterations;
  return cand;
}

EquationCandidate snapped_equation(const BiVdarCounts& counts, const EquationCandidate& cand) {
  EquationCandidate s = cand;
  s.eq.nu = snap_prob(s.eq.nu);
  s.eq.lambda = snap_prob(s.eq.lambda);
  s.eq.chi = snap_prob(s.eq.chi);
  snap_simplex(s.eq.gamma_self);
  snap_simplex(s.eq.gamma_cross);
  s.loglik = detail::bivdar_loglik_from_counts(counts, s.eq, nullptr);
  return s;
}

}  // namespace

// ---- public likelihoods ------------------------------------------------------

double loglik_dar(const BinarySeries& x, const DarParams& params) {
  const DarCounts counts = detail::build_dar_counts(x, params.p());
  return detail::dar_loglik_from_counts(counts, params, nullptr);
}

double loglik_vdar_equation(const BinarySeries& x, const BinarySeries& y,
                            const BiVdarEquation& eq) {
  const BiVdarCounts counts = detail::build_bivdar_counts(x, y, eq.p());
  return detail::bivdar_loglik_from_counts(counts, eq, nullptr);
}

double loglik_vdar_bivariate(const BinarySeries& x, const BinarySeries& y,
                             const BiVdarParams& params) {
  return loglik_vdar_equation(x, y, params.eq1);
}

double loglik_vdar1(const BinaryPanel& panel, const Vdar1Params& params) {
  const int N = static_cast<int>(panel.width());
  if (params.n() != N) throw std::invalid_argument("loglik_vdar1: parameter dimension mismatch");
  const auto counts = detail::build_vdar1_counts(panel);
  std::vector<double> row(static_cast<std::size_t>(N));
  double total = 0.0;
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) row[static_cast<std::size_t>(j)] = params.lambda(i, j);
    const double li = detail::vdar1_row_loglik_from_counts(
        counts[static_cast<std::size_t>(i)], params.nu[static_cast<std::size_t>(i)],
        params.chi[static_cast<std::size_t>(i)], row, nullptr, nullptr, nullptr);
    if (!std::isfinite(li)) return kNegInf;
    total += li;
  }
  return total;
}

double loglik_dar_gradient(const BinarySeries& x, const DarParams& params, DarParams& grad) {
  const DarCounts counts = detail::build_dar_counts(x, params.p());
  return detail::dar_loglik_from_counts(counts, params, &grad);
}

double loglik_vdar_equation_gradient(const BinarySeries& x, const BinarySeries& y,
                                     const BiVdarEquation& eq, BiVdarEquation& grad) {
  const BiVdarCounts counts = detail::build_bivdar_counts(x, y, eq.p());
  return detail::bivdar_loglik_from_counts(counts, eq, &grad);
}

double loglik_vdar1_gradient(const BinaryPanel& panel, const Vdar1Params& params,
                             Vdar1Params& grad) {
  const int N = static_cast<int>(panel.width());
  if (params.n() != N) throw std::invalid_argument("loglik_vdar1: parameter dimension mismatch");
  const auto counts = detail::build_vdar1_counts(panel);
  grad.nu.assign(static_cast<std::size_t>(N), 0.0);
  grad.chi.assign(static_cast<std::size_t>(N), 0.0);
  grad.lambda = Eigen::MatrixXd::Zero(N, N);
  std::vector<double> row(static_cast<std::size_t>(N)), drow;
  double total = 0.0;
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) row[static_cast<std::size_t>(j)] = params.lambda(i, j);
    double dnu = 0.0, dchi = 0.0;
    const double li = detail::vdar1_row_loglik_from_counts(
        counts[static_cast<std::size_t>(i)], params.nu[static_cast<std::size_t>(i)],
        params.chi[static_cast<std::size_t>(i)], row, &dnu, &dchi, &drow);
    if (!std::isfinite(li)) return kNegInf;
    total += li;
    grad.nu[static_cast<std::size_t>(i)] = dnu;
    grad.chi[static_cast<std::size_t>(i)] = dchi;
    for (int j = 0; j < N; ++j) grad.lambda(i, j) = drow[static_cast<std::size_t>(j)];
  }
  return total;
}

// ---- Yule–Walker -------------------------------------------------------------

BiVdarParams bivdar_from_var_coefficients(const std::vector<Eigen::Matrix2d>& phi,
                                          const Eigen::Vector2d& phi0, YwDiagnostics* diag) {
  const int p = static_cast<int>(phi.size());
  if (p < 1) throw std::invalid_argument("bivdar_from_var_coefficients: empty coefficient list");

  BiVdarParams params;
  bool wild = false;
  for (int row = 0; row < 2; ++row) {
    BiVdarEquation& eq = row == 0 ? params.eq1 : params.eq2;
    const int self_col = row;
    const int cross_col = 1 - row;
    std::vector<double> self_w(static_cast<std::size_t>(p)), cross_w(static_cast<std::size_t>(p));
    double self_sum = 0.0, cross_sum = 0.0;
    for (int l = 0; l < p; ++l) {
      // Negative coefficients are clipped to zero before any normalization.
      const double a = std::max(phi[static_cast<std::size_t>(l)](row, self_col), 0.0);
      const double b = std::max(phi[static_cast<std::size_t>(l)](row, cross_col), 0.0);
      self_w[static_cast<std::size_t>(l)] = a;
      cross_w[static_cast<std::size_t>(l)] = b;
      self_sum += a;
      cross_sum += b;
    }
    const double nu_raw = self_sum + cross_sum;
    if (nu_raw > 1.5) wild = true;
    eq.nu = std::clamp(nu_raw, 0.0, 1.0);
    if (nu_raw > 0.0) {
      eq.lambda = std::clamp(cross_sum / nu_raw, 0.0, 1.0);
    } else {
      eq.lambda = 0.0;
      if (diag) diag->uniform_rows.push_back(row);
    }
    if (self_sum > 0.0) {
      eq.gamma_self = self_w;
      normalize_simplex(eq.gamma_self);
    } else {
      eq.gamma_self = uniform_simplex(p);
    }
    if (cross_sum > 0.0) {
      eq.gamma_cross = cross_w;
      normalize_simplex(eq.gamma_cross);
    } else {
      eq.gamma_cross = uniform_simplex(p);
    }
    const double denom = 1.0 - nu_raw;
    double chi_raw;
    if (std::fabs(denom) > 1e-10) {
      chi_raw = phi0[row] / denom;
    } else {
      chi_raw = 0.5;
      wild = true;
    }
    if (chi_raw < -0.5 || chi_raw > 1.5) wild = true;
    eq.chi = std::clamp(chi_raw, 0.0, 1.0);
  }
  if (diag) diag->wild_estimate = diag->wild_estimate || wild;
  return params;
}

Vdar1Params vdar1_from_var_coefficients(const Eigen::MatrixXd& phi1, const Eigen::VectorXd& phi0,
                                        YwDiagnostics* diag) {
  const int N = static_cast<int>(phi1.rows());
  if (phi1.cols() != N || phi0.size() != N) {
    throw std::invalid_argument("vdar1_from_var_coefficients: inconsistent dimensions");
  }

  Vdar1Params params;
  params.nu.assign(static_cast<std::size_t>(N), 0.0);
  params.chi.assign(static_cast<std::size_t>(N), 0.0);
  params.lambda = Eigen::MatrixXd::Zero(N, N);
  bool wild = false;
  for (int i = 0; i < N; ++i) {
    double row_sum = 0.0;
    for (int j = 0; j < N; ++j) {
      const double v = std::max(phi1(i, j), 0.0);
      params.lambda(i, j) = v;
      row_sum += v;
    }
    if (row_sum > 1.5) wild = true;
    params.nu[static_cast<std::size_t>(i)] = std::clamp(row_sum, 0.0, 1.0);
    if (row_sum > 0.0) {
      for (int j = 0; j < N; ++j) params.lambda(i, j) /= row_sum;
    } else {
      for (int j = 0; j < N; ++j) params.lambda(i, j) = 1.0 / static_cast<double>(N);
      if (diag) diag->uniform_rows.push_back(i);
    }
    const double denom = 1.0 - row_sum;
    double chi_raw;
    if (std::fabs(denom) > 1e-10) {
      chi_raw = phi0[i] / denom;
    } else {
      chi_raw = 0.5;
      wild = true;
    }
    if (chi_raw < -0.5 || chi_raw > 1.5) wild = true;
    params.chi[static_cast<std::size_t>(i)] = std::clamp(chi_raw, 0.0, 1.0);
  }
  if (diag) diag->wild_estimate = diag->wild_estimate || wild;
  return params;
}

BiVdarParams yule_walker_bivariate(const BinarySeries& x, const BinarySeries& y, int p,
                                   YwDiagnostics* diag) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("yule_walker_bivariate: unequal series lengths");
  }
  if (p < 1) throw std::invalid_argument("yule_walker_bivariate: order must be >= 1");
  const int T = static_cast<int>(x.size());
  if (T < p + 2) throw std::invalid_argument("yule_walker_bivariate: insufficient length");

  const double mx = sample_mean(x);
  const double my = sample_mean(y);
  // Sample autocovariance matrices Gamma(k), k = 0..p, 1/T normalization.
  std::vector<Eigen::Matrix2d> gamma(static_cast<std::size_t>(p) + 1, Eigen::Matrix2d::Zero());
  for (int k = 0; k <= p; ++k) {
    Eigen::Matrix2d acc = Eigen::Matrix2d::Zero();
    for (int t = k; t < T; ++t) {
      const Eigen::Vector2d zt(x[t] - mx, y[t] - my);
      const Eigen::Vector2d zl(x[t - k] - mx, y[t - k] - my);
      acc += zt * zl.transpose();
    }
    gamma[static_cast<std::size_t>(k)] = acc / static_cast<double>(T);
  }
  const auto gamma_at = [&](int k) -> Eigen::Matrix2d {
    return k >= 0 ? gamma[static_cast<std::size_t>(k)]
                  : Eigen::Matrix2d(gamma[static_cast<std::size_t>(-k)].transpose());
  };

  // Stacked system [Phi_1 .. Phi_p] * M = [Gamma(1) .. Gamma(p)] with
  // M block (l,k) = Gamma(k-l).
  Eigen::MatrixXd M(2 * p, 2 * p), G(2, 2 * p);
  for (int l = 1; l <= p; ++l) {
    for (int k = 1; k <= p; ++k) {
      M.block<2, 2>(2 * (l - 1), 2 * (k - 1)) = gamma_at(k - l);
    }
  }
  for (int k = 1; k <= p; ++k) G.block<2, 2>(0, 2 * (k - 1)) = gamma_at(k);

  Eigen::FullPivLU<Eigen::MatrixXd> lu(M.transpose());
  if (!lu.isInvertible()) throw std::runtime_error("Yule–Walker system singular");
  const Eigen::MatrixXd phi_stacked = lu.solve(G.transpose()).transpose();  // 2 x 2p

  std::vector<Eigen::Matrix2d> phi(static_cast<std::size_t>(p));
  Eigen::Matrix2d phi_total = Eigen::Matrix2d::Zero();
  for (int l = 0; l < p; ++l) {
    phi[static_cast<std::size_t>(l)] = phi_stacked.block<2, 2>(0, 2 * l);
    phi_total += phi[static_cast<std::size_t>(l)];
  }
  const Eigen::Vector2d mu(mx, my);
  const Eigen::Vector2d phi0 = (Eigen::Matrix2d::Identity() - phi_total) * mu;
  return bivdar_from_var_coefficients(phi, phi0, diag);
}

Vdar1Params yule_walker_vdar1(const BinaryPanel& panel, YwDiagnostics* diag) {
  const int N = static_cast<int>(panel.width());
  const int T = static_cast<int>(panel.length());
  if (T < 3) throw std::invalid_argument("yule_walker_vdar1: insufficient length");

  Eigen::VectorXd mu(N);
  for (int i = 0; i < N; ++i) mu[i] = sample_mean(panel.series(static_cast<std::size_t>(i)));

  Eigen::MatrixXd c0 = Eigen::MatrixXd::Zero(N, N), c1 = Eigen::MatrixXd::Zero(N, N);
  Eigen::VectorXd zt(N), zl(N);
  for (int t = 0; t < T; ++t) {
    for (int i = 0; i < N; ++i) zt[i] = panel.series(static_cast<std::size_t>(i))[t] - mu[i];
    c0.noalias() += zt * zt.transpose();
    if (t >= 1) {
      for (int i = 0; i < N; ++i) {
        zl[i] = panel.series(static_cast<std::size_t>(i))[t - 1] - mu[i];
      }
      c1.noalias() += zt * zl.transpose();
    }
  }
  c0 /= static_cast<double>(T);
  c1 /= static_cast<double>(T);

  Eigen::FullPivLU<Eigen::MatrixXd> lu(c0.transpose());
  if (!lu.isInvertible()) throw std::runtime_error("Yule–Walker system singular");
  const Eigen::MatrixXd phi1 = lu.solve(c1.transpose()).transpose();
  const Eigen::VectorXd phi0 = (Eigen::MatrixXd::Identity(N, N) - phi1) * mu;
  return vdar1_from_var_coefficients(phi1, phi0, diag);
}

// ---- maximum likelihood ------------------------------------------------------

namespace detail {

bool is_constant(const BinarySeries& x) {
  for (std::size_t t = 1; t < x.size(); ++t) {
    if (x[t] != x[0]) return false;
  }
  return true;
}

}  // namespace detail

DarFit mle_dar(const BinarySeries& x, int p) {
  if (p < 1) throw std::invalid_argument("mle_dar: order must be >= 1");
  const int T = static_cast<int>(x.size());
  if (T < p + 2) throw std::invalid_argument("mle_dar: insufficient length (need T >= p+2)");

  DarFit fit;
  fit.p = p;
  if (detail::is_constant(x)) {
    // Degenerate series: the boundary fit, flagged rather than thrown.
    fit.params.nu = 0.0;
    fit.params.chi = static_cast<double>(x[0]);
    fit.params.gamma = uniform_simplex(p);
    fit.loglik = 0.0;
    fit.converged = false;
    fit.iterations = 0;
    return fit;
  }

  const DarCounts counts = detail::build_dar_counts(x, p);

  std::vector<DarParams> starts;
  try {
    starts.push_back(yw_dar_start(x, p));
  } catch (const std::exception&) {
    // Singular warm-start system: fall through to the neutral start.
  }
  DarParams neutral;
  neutral.nu = 0.3;
  neutral.chi = sample_mean(x);
  neutral.gamma = uniform_simplex(p);
  starts.push_back(neutral);

  std::vector<DarCandidate> candidates;
  for (const DarParams& s : starts) {
    DarCandidate cand = run_dar_fit(counts, s);
    DarCandidate snapped = cand;
    snapped.q.nu = snap_prob(snapped.q.nu);
    snapped.q.chi = snap_prob(snapped.q.chi);
    snap_simplex(snapped.q.gamma);
    snapped.loglik = detail::dar_loglik_from_counts(counts, snapped.q, nullptr);
    candidates.push_back(std::move(cand));
    candidates.push_back(std::move(snapped));
  }

  const auto best = std::max_element(
      candidates.begin(), candidates.end(),
      [](const DarCandidate& a, const DarCandidate& b) { return a.loglik < b.loglik; });
  fit.params = best->q;
  fit.loglik = best->loglik;
  fit.converged = best->converged;
  fit.iterations = best->iterations;
  return fit;
}

namespace detail {

EquationFit fit_bivdar_equation(const BinarySeries& x, const BinarySeries& y, int p) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("fit_bivdar_equation: unequal series lengths");
  }
  EquationFit fit;
  fit.dar = mle_dar(x, p);

  if (is_constant(x)) {
    fit.eq.nu = 0.0;
    fit.eq.lambda = 0.0;
    fit.eq.chi = static_cast<double>(x[0]);
    fit.eq.gamma_self = uniform_simplex(p);
    fit.eq.gamma_cross = uniform_simplex(p);
    fit.loglik = 0.0;
    fit.converged = false;
    fit.iterations = 0;
    return fit;
  }

  const BiVdarCounts counts = build_bivdar_counts(x, y, p);

  std::vector<BiVdarEquation> starts;
  try {
    starts.push_back(yule_walker_bivariate(x, y, p).eq1);
  } catch (const std::exception&) {
  }
  BiVdarEquation neutral;
  neutral.nu = 0.3;
  neutral.lambda = 0.3;
  neutral.chi = sample_mean(x);
  neutral.gamma_self = uniform_simplex(p);
  neutral.gamma_cross = uniform_simplex(p);
  starts.push_back(neutral);
  // The restricted optimum with an epsilon of cross-coupling: ascending from
  // here keeps the full fit at least as good as the nested DAR fit.
  BiVdarEquation embedded;
  embedded.nu = fit.dar.params.nu;
  embedded.lambda = 2.0 * kEps;
  embedded.chi = fit.dar.params.chi;
  embedded.gamma_self = fit.dar.params.gamma;
  embedded.gamma_cross = uniform_simplex(p);
  starts.push_back(embedded);

  std::vector<EquationCandidate> candidates;
  for (const BiVdarEquation& s : starts) {
    EquationCandidate cand = run_equation_fit(counts, s);
    candidates.push_back(snapped_equation(counts, cand));
    candidates.push_back(std::move(cand));
  }
  // The exactly nested candidate: lambda = 0 at the restricted optimum. Its
  // likelihood IS the DAR maximum, assigned rather than re-evaluated so the
  // nesting inequality loglik >= dar.loglik holds exactly in doubles.
  EquationCandidate nested;
  nested.eq = embedded;
  nested.eq.lambda = 0.0;
  nested.loglik = fit.dar.loglik;
  nested.converged = fit.dar.converged;
  nested.iterations = fit.dar.iterations;
  candidates.push_back(std::move(nested));

  const auto best = std::max_element(
      candidates.begin(), candidates.end(),
      [](const EquationCandidate& a, const EquationCandidate& b) { return a.loglik < b.loglik; });
  fit.eq = best->eq;
  fit.loglik = best->loglik;
  fit.converged = best->converged;
  fit.iterations = best->iterations;
  return fit;
}

PairScan scan_pair(const BinarySeries& x, const BinarySeries& y, int p_max) {
  if (p_max < 1) throw std::invalid_argument("scan_pair: p_max must be >= 1");
  const int T = static_cast<int>(x.size());
  if (T < p_max + 2) throw std::invalid_argument("scan_pair: insufficient length");

  PairScan scan;
  const double log_t = std::log(static_cast<double>(T));
  for (int p = 1; p <= p_max; ++p) {
    scan.eq_xy.push_back(fit_bivdar_equation(x, y, p));
    scan.eq_yx.push_back(fit_bivdar_equation(y, x, p));
    const double joint = scan.eq_xy.back().loglik + scan.eq_yx.back().loglik;
    scan.bic.push_back(2.0 * (2.0 * p + 1.0) * log_t - 2.0 * joint);
  }
  scan.p_star = 1;
  for (int p = 2; p <= p_max; ++p) {
    if (scan.bic[static_cast<std::size_t>(p - 1)] <
        scan.bic[static_cast<std::size_t>(scan.p_star - 1)]) {
      scan.p_star = p;
    }
  }
  return scan;
}

}  // namespace detail

BiVdarFit mle_vdar_bivariate(const BinarySeries& x, const BinarySeries& y, int p) {
  const detail::EquationFit fx = detail::fit_bivdar_equation(x, y, p);
  const detail::EquationFit fy = detail::fit_bivdar_equation(y, x, p);
  BiVdarFit fit;
  fit.params.eq1 = fx.eq;
  fit.params.eq2 = fy.eq;
  fit.loglik_x = fx.loglik;
  fit.loglik_y = fy.loglik;
  fit.loglik = fx.loglik + fy.loglik;
  fit.p = p;
  fit.converged = fx.converged && fy.converged;
  fit.iterations = std::max(fx.iterations, fy.iterations);
  return fit;
}

int select_order_bic(const BinarySeries& x, const BinarySeries& y, int p_max) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("select_order_bic: unequal series lengths");
  }
  return detail::scan_pair(x, y, p_max).p_star;
}

// ---- VDAR(1) row fits and full MLE --------------------------------------------

namespace detail {

double bernoulli_row_loglik(const Vdar1RowCounts& counts) {
  double ones = 0.0, total = 0.0;
  for (std::size_t u = 0; u < counts.count.size(); ++u) {
    total += counts.count[u];
    if (counts.cur[u]) ones += counts.count[u];
  }
  if (total <= 0.0) return 0.0;
  const double chi = ones / total;
  double loglik = 0.0;
  if (ones > 0.0) loglik += ones * std::log(chi);
  if (total - ones > 0.0) loglik += (total - ones) * std::log(1.0 - chi);
  return loglik;
}

RowFit fit_vdar1_row(const Vdar1RowCounts& counts, const std::vector<char>& support,
                     const std::vector<RowStart>& starts, bool snap_lambda) {
  const int N = counts.n;
  if (static_cast<int>(support.size()) != N) {
    throw std::invalid_argument("fit_vdar1_row: support size mismatch");
  }
  std::vector<int> sidx;
  for (int j = 0; j < N; ++j) {
    if (support[static_cast<std::size_t>(j)]) sidx.push_back(j);
  }
  const int s = static_cast<int>(sidx.size());
  if (s == 0) throw std::invalid_argument("fit_vdar1_row: empty support");

  RowFit fit;
  fit.lambda.assign(static_cast<std::size_t>(N), 0.0);

  // Degenerate row: every conditional observation equal.
  bool constant = true;
  for (std::size_t u = 1; u < counts.cur.size(); ++u) {
    if (counts.cur[u] != counts.cur[0]) {
      constant = false;
      break;
    }
  }
  if (counts.cur.empty() || constant) {
    fit.nu = 0.0;
    fit.chi = counts.cur.empty() ? 0.0 : static_cast<double>(counts.cur[0]);
    for (int j : sidx) fit.lambda[static_cast<std::size_t>(j)] = 1.0 / static_cast<double>(s);
    fit.loglik = 0.0;
    fit.converged = false;
    fit.iterations = 0;
    return fit;
  }

  std::vector<double> lam(static_cast<std::size_t>(N), 0.0), dlam;
  auto objective = [&](const Eigen::VectorXd& u, Eigen::VectorXd& du) -> double {
    const double nu = to_unit(u[0]);
    const double chi = to_unit(u[1]);
    Eigen::VectorXd us = u.segment(2, s), w;
    to_simplex(us, w);
    for (int k = 0; k < s; ++k) lam[static_cast<std::size_t>(sidx[static_cast<std::size_t>(k)])] = w[k];
    double dnu = 0.0, dchi = 0.0;
    const double val =
        vdar1_row_loglik_from_counts(counts, nu, chi, lam, &dnu, &dchi, &dlam);
    du.setZero();
    if (!std::isfinite(val)) return val;
    du[0] = dnu * to_unit_dd(u[0]);
    du[1] = dchi * to_unit_dd(u[1]);
    Eigen::VectorXd dw(s), dus = Eigen::VectorXd::Zero(s);
    for (int k = 0; k < s; ++k) dw[k] = dlam[static_cast<std::size_t>(sidx[static_cast<std::size_t>(k)])];
    simplex_chain(us, dw, dus);
    du.segment(2, s) = dus;
    return val;
  };

  struct RowCandidate {
    RowFit fit;
    double loglik = -std::numeric_limits<double>::infinity();
  };
  std::vector<RowCandidate> candidates;

  const auto evaluate = [&](const RowFit& candidate) -> double {
    return vdar1_row_loglik_from_counts(counts, candidate.nu, candidate.chi, candidate.lambda,
                                        nullptr, nullptr, nullptr);
  };

  for (const RowStart& start : starts) {
    Eigen::VectorXd u0(2 + s);
    u0[0] = from_unit(start.nu);
    u0[1] = from_unit(start.chi);
    Eigen::VectorXd w0(s), uw(s);
    double mass = 0.0;
    for (int k = 0; k < s; ++k) {
      w0[k] = start.lambda.empty()
                  ? 0.0
                  : start.lambda[static_cast<std::size_t>(sidx[static_cast<std::size_t>(k)])];
      mass += w0[k];
    }
    if (mass > 0.0) {
      w0 /= mass;
    } else {
      w0.setConstant(1.0 / static_cast<double>(s));
    }
    from_simplex(w0, uw);
    u0.segment(2, s) = uw;

    const MaximizeResult res = maximize_bfgs(objective, u0);
    RowCandidate cand;
    cand.fit.nu = to_unit(res.x[0]);
    cand.fit.chi = to_unit(res.x[1]);
    Eigen::VectorXd us = res.x.segment(2, s), w;
    to_simplex(us, w);
    cand.fit.lambda.assign(static_cast<std::size_t>(N), 0.0);
    double total = 0.0;
    for (int k = 0; k < s; ++k) total += w[k];
    for (int k = 0; k < s; ++k) {
      cand.fit.lambda[static_cast<std::size_t>(sidx[static_cast<std::size_t>(k)])] = w[k] / total;
    }
    cand.fit.converged = res.converged;
    cand.fit.iterations = res.iterations;
    cand.loglik = evaluate(cand.fit);
    cand.fit.loglik = cand.loglik;

    if (snap_lambda) {
      RowCandidate snapped = cand;
      snapped.fit.nu = snap_prob(snapped.fit.nu);
      snapped.fit.chi = snap_prob(snapped.fit.chi);
      double kept = 0.0;
      for (double& v : snapped.fit.lambda) {
        if (v < kSnapTol) v = 0.0;
        kept += v;
      }
      if (kept > 0.0) {
        for (double& v : snapped.fit.lambda) v /= kept;
        snapped.loglik = evaluate(snapped.fit);
        snapped.fit.loglik = snapped.loglik;
        candidates.push_back(std::move(snapped));
      }
    }
    candidates.push_back(std::move(cand));
  }

  const auto best = std::max_element(
      candidates.begin(), candidates.end(),
      [](const RowCandidate& a, const RowCandidate& b) { return a.loglik < b.loglik; });
  return best->fit;
}

}  // namespace detail

Vdar1Fit mle_vdar1(const BinaryPanel& panel) {
  const int N = static_cast<int>(panel.width());
  const int T = static_cast<int>(panel.length());
  if (T < 3) throw std::invalid_argument("mle_vdar1: insufficient length (need T >= 3)");

  // Canonical column order (sorted by series content) makes the fit exactly
  // permutation-equivariant: any relabeling of the input reaches the same
  // canonical panel, so every float operation matches bit for bit.
  std::vector<int> order(static_cast<std::size_t>(N));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&panel](int a, int b) {
    return panel.series(static_cast<std::size_t>(a)).values() <
           panel.series(static_cast<std::size_t>(b)).values();
  });
  std::vector<BinarySeries> canon_series;
  canon_series.reserve(static_cast<std::size_t>(N));
  for (int c = 0; c < N; ++c) {
    canon_series.push_back(panel.series(static_cast<std::size_t>(order[static_cast<std::size_t>(c)])));
  }
  const BinaryPanel canon(std::move(canon_series));

  const auto counts = detail::build_vdar1_counts(canon);

  bool have_yw = true;
  Vdar1Params yw;
  try {
    yw = yule_walker_vdar1(canon);
  } catch (const std::exception&) {
    have_yw = false;
  }

  std::vector<detail::RowFit> row_fits;
  row_fits.reserve(static_cast<std::size_t>(N));
  const std::vector<char> full_support(static_cast<std::size_t>(N), 1);
  for (int i = 0; i < N; ++i) {
    const auto& rc = counts[static_cast<std::size_t>(i)];
    double ones = 0.0, total = 0.0;
    for (std::size_t u = 0; u < rc.count.size(); ++u) {
      total += rc.count[u];
      if (rc.cur[u]) ones += rc.count[u];
    }
    const double row_mean = total > 0.0 ? ones / total : 0.5;

    std::vector<detail::RowStart> starts;
    if (have_yw) {
      detail::RowStart s;
      s.nu = yw.nu[static_cast<std::size_t>(i)];
      s.chi = yw.chi[static_cast<std::size_t>(i)];
      s.lambda.resize(static_cast<std::size_t>(N));
      for (int j = 0; j < N; ++j) s.lambda[static_cast<std::size_t>(j)] = yw.lambda(i, j);
      starts.push_back(std::move(s));
    }
    detail::RowStart neutral;
    neutral.nu = 0.3;
    neutral.chi = row_mean;
    neutral.lambda.assign(static_cast<std::size_t>(N), 1.0 / static_cast<double>(N));
    starts.push_back(std::move(neutral));

    row_fits.push_back(detail::fit_vdar1_row(rc, full_support, starts, /*snap_lambda=*/true));
  }

  Vdar1Fit fit;
  fit.params.nu.assign(static_cast<std::size_t>(N), 0.0);
  fit.params.chi.assign(static_cast<std::size_t>(N), 0.0);
  fit.params.lambda = Eigen::MatrixXd::Zero(N, N);
  fit.loglik = 0.0;
  fit.converged = true;
  fit.iterations = 0;
  for (int r = 0; r < N; ++r) {
    const auto& rf = row_fits[static_cast<std::size_t>(r)];
    const int oi = order[static_cast<std::size_t>(r)];
    fit.params.nu[static_cast<std::size_t>(oi)] = rf.nu;
    fit.params.chi[static_cast<std::size_t>(oi)] = rf.chi;
    for (int c = 0; c < N; ++c) {
      fit.params.lambda(oi, order[static_cast<std::size_t>(c)]) =
          rf.lambda[static_cast<std::size_t>(c)];
    }
    fit.loglik += rf.loglik;
    fit.converged = fit.converged && rf.converged;
    fit.iterations = std::max(fit.iterations, rf.iterations);
  }
  return fit;
}

}  // namespace tailgc

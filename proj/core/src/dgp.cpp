#include "tailgc/dgp.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "tailgc/rng.hpp"

namespace tailgc {

namespace {

constexpr double kSimplexTol = 1e-12;
constexpr int kGarchBurnIn = 1000;

void check_prob(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw std::invalid_argument(std::string("invalid parameters: ") + name +
                                " outside [0,1]");
  }
}

void check_simplex(const std::vector<double>& w, const char* name) {
  if (w.empty()) {
    throw std::invalid_argument(std::string("invalid parameters: empty simplex ") + name);
  }
  double sum = 0.0;
  for (double v : w) {
    if (!(v >= 0.0)) {
      throw std::invalid_argument(std::string("invalid parameters: negative weight in ") + name);
    }
    sum += v;
  }
  if (std::fabs(sum - 1.0) > kSimplexTol) {
    throw std::invalid_argument(std::string("invalid parameters: ") + name +
                                " does not sum to 1");
  }
}

}  // namespace

void DarParams::validate() const {
  check_prob(nu, "nu");
  check_prob(chi, "chi");
  check_simplex(gamma, "gamma");
}

void BiVdarEquation::validate() const {
  check_prob(nu, "nu");
  check_prob(lambda, "lambda");
  check_prob(chi, "chi");
  check_simplex(gamma_self, "gamma_self");
  check_simplex(gamma_cross, "gamma_cross");
  if (gamma_self.size() != gamma_cross.size()) {
    throw std::invalid_argument("invalid parameters: gamma_self and gamma_cross orders differ");
  }
}

void BiVdarParams::validate() const {
  eq1.validate();
  eq2.validate();
  if (eq1.p() != eq2.p()) {
    throw std::invalid_argument("invalid parameters: the two equations have different orders");
  }
}

void Vdar1Params::validate() const {
  const int N = n();
  if (N < 1 || static_cast<int>(chi.size()) != N || lambda.rows() != N || lambda.cols() != N) {
    throw std::invalid_argument("invalid parameters: inconsistent VDAR(1) dimensions");
  }
  for (int i = 0; i < N; ++i) {
    check_prob(nu[i], "nu");
    check_prob(chi[i], "chi");
    double row_sum = 0.0;
    for (int j = 0; j < N; ++j) {
      if (!(lambda(i, j) >= 0.0)) {
        throw std::invalid_argument("invalid parameters: negative lambda entry");
      }
      row_sum += lambda(i, j);
    }
    if (std::fabs(row_sum - 1.0) > kSimplexTol) {
      throw std::invalid_argument("invalid parameters: lambda row " + std::to_string(i) +
                                  " does not sum to 1");
    }
  }
}

GarchCoefficients garch_coefficients(GarchScenario scenario) {
  double b = 0.0, c = 0.0;
  switch (scenario) {
    case GarchScenario::kNull:
      break;
    case GarchScenario::kAlter1:
      b = 2.0;
      break;
    case GarchScenario::kAlter2:
      c = 0.7;
      break;
  }
  // Equation 1: (beta11, beta12, g10, g11, g12, g13) = (0.5, b, 0.1, 0.6, 0.2, c)
  // Equation 2: (beta21, beta22, g20, g21, g22, g23) = (0, 0.5, 0.1, 0.6, 0, 0.2)
  return GarchCoefficients{0.5, b, 0.1, 0.6, 0.2, c, 0.0, 0.5, 0.1, 0.6, 0.0, 0.2};
}

BinarySeries simulate_dar(const DarParams& params, int T, std::uint64_t seed) {
  params.validate();
  const int p = params.p();
  if (T < p + 1) throw std::invalid_argument("simulate_dar: insufficient length");

  Rng rng(seed);
  std::vector<std::uint8_t> x(static_cast<std::size_t>(T));
  for (int t = 0; t < p; ++t) x[t] = rng.bernoulli(params.chi) ? 1 : 0;
  for (int t = p; t < T; ++t) {
    if (rng.bernoulli(params.nu)) {
      const int k = rng.categorical(params.gamma) + 1;
      x[t] = x[t - k];
    } else {
      x[t] = rng.bernoulli(params.chi) ? 1 : 0;
    }
  }
  return BinarySeries(std::move(x), "X");
}

std::pair<BinarySeries, BinarySeries> simulate_vdar_bivariate(
    const BiVdarParams& params, int T, std::uint64_t seed,
    std::optional<double> copula_rho) {
  params.validate();
  const int p = params.p();
  if (T < p + 1) throw std::invalid_argument("simulate_vdar_bivariate: insufficient length");

  const bool copula = copula_rho.has_value();
  double q1 = 0.0, q2 = 0.0, rho = 0.0;
  if (copula) {
    rho = *copula_rho;
    if (!(rho > -1.0 && rho < 1.0)) {
      throw std::invalid_argument("simulate_vdar_bivariate: copula correlation out of range");
    }
    if (!(params.eq1.chi > 0.0 && params.eq1.chi < 1.0 && params.eq2.chi > 0.0 &&
          params.eq2.chi < 1.0)) {
      throw std::invalid_argument(
          "simulate_vdar_bivariate: copula coupling requires chi strictly inside (0,1)");
    }
    q1 = inverse_normal_cdf(params.eq1.chi);
    q2 = inverse_normal_cdf(params.eq2.chi);
  }

  Rng rng(seed);
  // Innovation pair, drawn FIRST at every step (whether used or not) so the
  // stream layout is independent of the copy/innovate path taken.
  const auto draw_innovations = [&]() -> std::pair<std::uint8_t, std::uint8_t> {
    if (copula) {
      const auto [g1, g2] = rng.correlated_normal_pair(rho);
      return {g1 < q1 ? std::uint8_t{1} : std::uint8_t{0},
              g2 < q2 ? std::uint8_t{1} : std::uint8_t{0}};
    }
    const std::uint8_t z1 = rng.bernoulli(params.eq1.chi) ? 1 : 0;
    const std::uint8_t z2 = rng.bernoulli(params.eq2.chi) ? 1 : 0;
    return {z1, z2};
  };

  std::vector<std::uint8_t> x(static_cast<std::size_t>(T)), y(static_cast<std::size_t>(T));
  for (int t = 0; t < p; ++t) {
    const auto [z1, z2] = draw_innovations();
    x[t] = z1;
    y[t] = z2;
  }
  for (int t = p; t < T; ++t) {
    const auto [z1, z2] = draw_innovations();
    if (rng.bernoulli(params.eq1.nu)) {
      const bool cross = rng.bernoulli(params.eq1.lambda);
      const int k = rng.categorical(cross ? params.eq1.gamma_cross : params.eq1.gamma_self) + 1;
      x[t] = cross ? y[t - k] : x[t - k];
    } else {
      x[t] = z1;
    }
    if (rng.bernoulli(params.eq2.nu)) {
      const bool cross = rng.bernoulli(params.eq2.lambda);
      const int k = rng.categorical(cross ? params.eq2.gamma_cross : params.eq2.gamma_self) + 1;
      y[t] = cross ? x[t - k] : y[t - k];
    } else {
      y[t] = z2;
    }
  }
  return {BinarySeries(std::move(x), "X"), BinarySeries(std::move(y), "Y")};
}

BinaryPanel simulate_vdar1(const Vdar1Params& params, int T, std::uint64_t seed) {
  params.validate();
  if (T < 2) throw std::invalid_argument("simulate_vdar1: insufficient length");
  const int N = params.n();

  Rng rng(seed);
  std::vector<std::vector<std::uint8_t>> x(static_cast<std::size_t>(N));
  for (int i = 0; i < N; ++i) {
    x[i].resize(static_cast<std::size_t>(T));
    x[i][0] = rng.bernoulli(params.chi[i]) ? 1 : 0;
  }
  std::vector<double> row(static_cast<std::size_t>(N));
  for (int t = 1; t < T; ++t) {
    for (int i = 0; i < N; ++i) {
      if (rng.bernoulli(params.nu[i])) {
        for (int j = 0; j < N; ++j) row[j] = params.lambda(i, j);
        const int j = rng.categorical(row);
        x[i][t] = x[j][t - 1];
      } else {
        x[i][t] = rng.bernoulli(params.chi[i]) ? 1 : 0;
      }
    }
  }

  std::vector<BinarySeries> series;
  series.reserve(static_cast<std::size_t>(N));
  for (int i = 0; i < N; ++i) {
    series.emplace_back(std::move(x[i]), "X" + std::to_string(i + 1));
  }
  return BinaryPanel(std::move(series));
}

Vdar1Params star_coupling(int N, StarKind kind, std::uint64_t seed, double chi, double nu) {
  if (N < 3) throw std::invalid_argument("star_coupling: degenerate star (N < 3)");
  check_prob(chi, "chi");
  check_prob(nu, "nu");

  Vdar1Params params;
  params.nu.assign(static_cast<std::size_t>(N), nu);
  params.chi.assign(static_cast<std::size_t>(N), chi);
  params.lambda = Eigen::MatrixXd::Zero(N, N);

  if (kind == StarKind::kOut) {
    params.lambda(0, 0) = 1.0;
    for (int i = 1; i < N; ++i) {
      params.lambda(i, 0) = 0.5;
      params.lambda(i, i) = 0.5;
    }
    return params;
  }

  // Mixed star: fair coins from this operation's own seed split the leaves.
  Rng rng(seed);
  std::vector<bool> causing(static_cast<std::size_t>(N), false);
  int n_causing = 0;
  for (int i = 1; i < N; ++i) {
    causing[i] = rng.bernoulli(0.5);
    if (causing[i]) ++n_causing;
  }
  const double lambda_in = 1.0 / (1.0 + n_causing);
  params.lambda(0, 0) = lambda_in;
  for (int i = 1; i < N; ++i) {
    if (causing[i]) {
      params.lambda(0, i) = lambda_in;  // leaf i drives the center
      params.lambda(i, i) = 1.0;
    } else {
      params.lambda(i, 0) = 0.5;  // the center drives leaf i
      params.lambda(i, i) = 0.5;
    }
  }
  return params;
}

std::pair<RealSeries, RealSeries> simulate_garch(GarchScenario scenario, int T,
                                                 std::uint64_t seed) {
  if (T < 2) throw std::invalid_argument("simulate_garch: insufficient length");
  const GarchCoefficients cf = garch_coefficients(scenario);

  Rng rng(seed);
  const int total = T + kGarchBurnIn;
  std::vector<double> x1(static_cast<std::size_t>(total)), x2(static_cast<std::size_t>(total));

  // Unconditional variance of the no-spillover equation initializes both.
  double s1 = 0.5, s2 = 0.5;
  double u1 = std::sqrt(s1) * rng.normal();
  double u2 = std::sqrt(s2) * rng.normal();
  x1[0] = u1;
  x2[0] = u2;
  for (int t = 1; t < total; ++t) {
    s1 = cf.g10 + cf.g11 * s1 + cf.g12 * u1 * u1 + cf.g13 * u2 * u2;
    s2 = cf.g20 + cf.g21 * s2 + cf.g22 * u1 * u1 + cf.g23 * u2 * u2;
    const double e1 = rng.normal();
    const double e2 = rng.normal();
    const double new_u1 = std::sqrt(s1) * e1;
    const double new_u2 = std::sqrt(s2) * e2;
    x1[t] = cf.beta11 * x1[t - 1] + cf.beta12 * x2[t - 1] + new_u1;
    x2[t] = cf.beta21 * x1[t - 1] + cf.beta22 * x2[t - 1] + new_u2;
    u1 = new_u1;
    u2 = new_u2;
  }

  std::vector<double> out1(x1.begin() + kGarchBurnIn, x1.end());
  std::vector<double> out2(x2.begin() + kGarchBurnIn, x2.end());
  return {RealSeries(std::move(out1), "x1"), RealSeries(std::move(out2), "x2")};
}

}  // namespace tailgc

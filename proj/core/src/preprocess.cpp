#include "tailgc/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>

#include "optimize.hpp"
#include "tailgc/csv.hpp"

namespace tailgc {

namespace {

constexpr double kVarianceFloor = 1e-12;

// Population standard deviation of the absolute returns of one day.
double day_abs_std(const IntradayGrid& grid, int day) {
  const int s = grid.slots;
  double mean = 0.0;
  for (int t = 0; t < s; ++t) mean += std::fabs(grid.at(day, t));
  mean /= static_cast<double>(s);
  double var = 0.0;
  for (int t = 0; t < s; ++t) {
    const double d = std::fabs(grid.at(day, t)) - mean;
    var += d * d;
  }
  return std::sqrt(var / static_cast<double>(s));
}

void rescale_day(const IntradayGrid& in, IntradayGrid& out, int day,
                 const std::vector<double>& u, const std::string& tag,
                 std::vector<std::string>* warnings) {
  for (int t = 0; t < in.slots; ++t) {
    if (u[static_cast<std::size_t>(t)] > 0.0) {
      out.at(day, t) = in.at(day, t) / u[static_cast<std::size_t>(t)];
    } else {
      out.at(day, t) = in.at(day, t);
      if (warnings) {
        std::ostringstream msg;
        msg << tag << ": u=0 at slot " << t << "; passed through unrescaled";
        warnings->push_back(msg.str());
      }
    }
  }
}

}  // namespace

IntradayGrid intraday_rescale(const IntradayGrid& grid, bool causal,
                              std::vector<std::string>* warnings) {
  if (grid.days < 1 || grid.slots < 1) {
    throw std::invalid_argument("intraday_rescale: empty grid");
  }
  if (grid.returns.size() != static_cast<std::size_t>(grid.days) * grid.slots) {
    throw std::invalid_argument("intraday_rescale: ragged grid");
  }

  std::vector<double> s_d(static_cast<std::size_t>(grid.days));
  for (int d = 0; d < grid.days; ++d) {
    s_d[static_cast<std::size_t>(d)] = day_abs_std(grid, d);
    if (s_d[static_cast<std::size_t>(d)] == 0.0 && warnings) {
      std::ostringstream msg;
      msg << grid.symbol << ": day " << d << " has zero dispersion; excluded from the u average";
      warnings->push_back(msg.str());
    }
  }

  IntradayGrid out = grid;
  std::vector<double> u(static_cast<std::size_t>(grid.slots), 0.0);

  if (!causal) {
    int valid = 0;
    std::fill(u.begin(), u.end(), 0.0);
    for (int d = 0; d < grid.days; ++d) {
      if (s_d[static_cast<std::size_t>(d)] == 0.0) continue;
      ++valid;
      for (int t = 0; t < grid.slots; ++t) {
        u[static_cast<std::size_t>(t)] += std::fabs(grid.at(d, t)) / s_d[static_cast<std::size_t>(d)];
      }
    }
    if (valid > 0) {
      for (double& v : u) v /= static_cast<double>(valid);
    }
    for (int d = 0; d < grid.days; ++d) rescale_day(grid, out, d, u, grid.symbol, warnings);
    return out;
  }

  // Causal variant: day d's u comes from days before d; day 0 (or a day with
  // no usable history) falls back to its own day.
  for (int d = 0; d < grid.days; ++d) {
    int valid = 0;
    std::fill(u.begin(), u.end(), 0.0);
    for (int prior = 0; prior < d; ++prior) {
      if (s_d[static_cast<std::size_t>(prior)] == 0.0) continue;
      ++valid;
      for (int t = 0; t < grid.slots; ++t) {
        u[static_cast<std::size_t>(t)] +=
            std::fabs(grid.at(prior, t)) / s_d[static_cast<std::size_t>(prior)];
      }
    }
    if (valid == 0 && s_d[static_cast<std::size_t>(d)] > 0.0) {
      valid = 1;
      for (int t = 0; t < grid.slots; ++t) {
        u[static_cast<std::size_t>(t)] =
            std::fabs(grid.at(d, t)) / s_d[static_cast<std::size_t>(d)];
      }
      if (warnings && d == 0) {
        warnings->push_back(grid.symbol + ": causal rescale of day 0 uses its own day");
      }
    }
    if (valid > 0) {
      for (double& v : u) v /= static_cast<double>(valid);
    }
    rescale_day(grid, out, d, u, grid.symbol, warnings);
  }
  return out;
}

IntradayPanel intraday_rescale(const IntradayPanel& panel, bool causal,
                               std::vector<std::string>* warnings) {
  IntradayPanel out;
  out.symbols.reserve(panel.symbols.size());
  for (const IntradayGrid& grid : panel.symbols) {
    out.symbols.push_back(intraday_rescale(grid, causal, warnings));
  }
  return out;
}

RealSeries spot_volatility(const RealSeries& returns, const VolatilityConfig& cfg,
                           bool* pure_decay_flag) {
  const int t_len = static_cast<int>(returns.size());
  if (t_len < 3) throw std::invalid_argument("spot_volatility: need T >= 3");
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) {
    throw std::invalid_argument("spot_volatility: alpha must lie in (0,1)");
  }
  if (!(cfg.theta > 0.0)) throw std::invalid_argument("spot_volatility: theta must be positive");
  if (pure_decay_flag) *pure_decay_flag = false;

  const double inv_mu1_sq = 1.0 / (cfg.mu1 * cfg.mu1);

  double sigma2_0;
  if (cfg.sigma0 > 0.0) {
    sigma2_0 = cfg.sigma0 * cfg.sigma0;
  } else {
    const int warmup = std::min(30, t_len);
    double acc = 0.0;
    for (int t = 0; t + 1 < warmup; ++t) {
      acc += std::fabs(returns[t]) * std::fabs(returns[t + 1]);
    }
    sigma2_0 = inv_mu1_sq * acc / static_cast<double>(warmup - 1);
    sigma2_0 = std::max(sigma2_0, kVarianceFloor);
  }

  std::vector<double> sigma(static_cast<std::size_t>(t_len));
  double sigma2 = sigma2_0;
  sigma[0] = std::sqrt(sigma2);
  int last_nonjump = -1, second_nonjump = -1;
  for (int t = 1; t < t_len; ++t) {
    // Classify return t-1 against its own sigma, then advance the recursion.
    const double prev_sigma = std::sqrt(sigma2);
    if (std::fabs(returns[t - 1]) <= cfg.theta * prev_sigma) {
      second_nonjump = last_nonjump;
      last_nonjump = t - 1;
    }
    if (last_nonjump >= 0 && second_nonjump >= 0) {
      sigma2 = inv_mu1_sq * cfg.alpha * std::fabs(returns[second_nonjump]) *
                   std::fabs(returns[last_nonjump]) +
               (1.0 - cfg.alpha) * sigma2;
    } else {
      sigma2 = (1.0 - cfg.alpha) * sigma2;
      if (pure_decay_flag) *pure_decay_flag = true;
    }
    sigma[static_cast<std::size_t>(t)] = std::sqrt(sigma2);
  }
  return RealSeries(std::move(sigma), returns.label().empty() ? "sigma" : returns.label() + "_sigma");
}

BinarySeries extract_extremes(const RealSeries& returns, const RealSeries& sigma, double theta,
                              ExtremeSide side) {
  if (returns.size() != sigma.size()) {
    throw std::invalid_argument("extract_extremes: unequal series lengths");
  }
  if (!(theta > 0.0)) throw std::invalid_argument("extract_extremes: theta must be positive");
  std::vector<int> hits(returns.size());
  for (std::size_t t = 0; t < returns.size(); ++t) {
    if (!(sigma[t] > 0.0)) throw std::runtime_error("extract_extremes: nonpositive volatility");
    const double z = returns[t] / sigma[t];
    hits[t] = side == ExtremeSide::kLeft ? (z < -theta ? 1 : 0) : (z > theta ? 1 : 0);
  }
  return BinarySeries::from_ints(hits, returns.label());
}

// ---- AR(1)+GARCH(1,1) quasi-MLE ------------------------------------------------

namespace {

struct GarchCoords {
  double beta;
  double gamma0;
  double gamma1;
  double gamma2;
};

GarchCoords garch_from_packed(const Eigen::VectorXd& u) {
  GarchCoords c;
  c.beta = std::tanh(u[0]);
  c.gamma0 = std::exp(std::clamp(u[1], -60.0, 60.0));
  // (gamma1, gamma2) from a softmax with a unit slack term keeps
  // gamma1 + gamma2 < 1 strictly.
  const double mx = std::max({0.0, u[2], u[3]});
  const double e0 = std::exp(-mx);
  const double e1 = std::exp(u[2] - mx);
  const double e2 = std::exp(u[3] - mx);
  const double denom = e0 + e1 + e2;
  c.gamma1 = e1 / denom;
  c.gamma2 = e2 / denom;
  return c;
}

Eigen::VectorXd garch_pack(const GarchCoords& c) {
  Eigen::VectorXd u(4);
  u[0] = std::atanh(std::clamp(c.beta, -0.999999, 0.999999));
  u[1] = std::log(std::max(c.gamma0, 1e-300));
  // Invert the slack softmax: u2 = ln(g1/g0slack), u3 = ln(g2/g0slack).
  const double slack = std::max(1.0 - c.gamma1 - c.gamma2, 1e-12);
  u[2] = std::log(std::max(c.gamma1, 1e-12) / slack);
  u[3] = std::log(std::max(c.gamma2, 1e-12) / slack);
  return u;
}

// Gaussian conditional log-likelihood of the AR(1)+GARCH(1,1) model over
// t = 1..T-1, with sigma^2_0 = var0 and u^2_0 initialized at its expected
// value var0.
double garch_loglik(const std::vector<double>& x, const GarchCoords& c, double var0,
                    std::vector<double>* sigma2_out) {
  constexpr double kLog2Pi = 1.8378770664093453;
  const std::size_t t_len = x.size();
  double sigma2 = var0;
  double u_prev_sq = var0;
  double loglik = 0.0;
  if (sigma2_out) {
    sigma2_out->assign(t_len, var0);
  }
  for (std::size_t t = 1; t < t_len; ++t) {
    sigma2 = c.gamma0 + c.gamma1 * sigma2 + c.gamma2 * u_prev_sq;
    sigma2 = std::max(sigma2, kVarianceFloor);
    const double u_t = x[t] - c.beta * x[t - 1];
    loglik += -0.5 * (kLog2Pi + std::log(sigma2) + u_t * u_t / sigma2);
    u_prev_sq = u_t * u_t;
    if (sigma2_out) (*sigma2_out)[t] = sigma2;
  }
  return loglik;
}

}  // namespace

GarchQmleFit fit_ar_garch_qmle(const RealSeries& x) {
  const int t_len = static_cast<int>(x.size());
  if (t_len < 100) throw std::invalid_argument("fit_ar_garch_qmle: need T >= 100");

  const std::vector<double>& data = x.values();
  double mean = 0.0;
  for (double v : data) mean += v;
  mean /= static_cast<double>(t_len);
  double var0 = 0.0;
  for (double v : data) var0 += (v - mean) * (v - mean);
  var0 /= static_cast<double>(t_len);
  if (var0 <= 0.0) throw std::runtime_error("fit_ar_garch_qmle: zero variance");

  auto objective = [&data, var0](const Eigen::VectorXd& u, Eigen::VectorXd& du) -> double {
    const double val = garch_loglik(data, garch_from_packed(u), var0, nullptr);
    // Central finite differences: the recursion makes analytic gradients
    // disproportionately error-prone for four coordinates.
    for (int i = 0; i < 4; ++i) {
      const double h = 1e-5 * std::max(1.0, std::fabs(u[i]));
      Eigen::VectorXd up = u, dn = u;
      up[i] += h;
      dn[i] -= h;
      const double fp = garch_loglik(data, garch_from_packed(up), var0, nullptr);
      const double fm = garch_loglik(data, garch_from_packed(dn), var0, nullptr);
      du[i] = (fp - fm) / (2.0 * h);
    }
    return val;
  };

  const std::vector<GarchCoords> starts = {
      {0.2, 0.1 * var0, 0.6, 0.2},
      {0.0, 0.5 * var0, 0.3, 0.1},
  };
  bool have_best = false;
  detail::MaximizeResult best;
  double best_val = -std::numeric_limits<double>::infinity();
  for (const GarchCoords& s : starts) {
    const detail::MaximizeResult res = detail::maximize_bfgs(objective, garch_pack(s));
    if (!have_best || res.f > best_val) {
      best = res;
      best_val = res.f;
      have_best = true;
    }
  }
  if (!best.converged) {
    std::ostringstream msg;
    msg << "fit_ar_garch_qmle: quasi-MLE did not converge (iterations=" << best.iterations
        << ", loglik=" << best.f << ")";
    throw std::runtime_error(msg.str());
  }

  const GarchCoords c = garch_from_packed(best.x);
  GarchQmleFit fit;
  fit.beta = c.beta;
  fit.gamma0 = c.gamma0;
  fit.gamma1 = c.gamma1;
  fit.gamma2 = c.gamma2;
  fit.converged = best.converged;
  fit.iterations = best.iterations;
  std::vector<double> sigma2;
  fit.loglik = garch_loglik(data, c, var0, &sigma2);
  fit.sigma.resize(sigma2.size());
  for (std::size_t t = 0; t < sigma2.size(); ++t) fit.sigma[t] = std::sqrt(sigma2[t]);
  return fit;
}

BinarySeries garch_var_filter(const RealSeries& x) {
  const GarchQmleFit fit = fit_ar_garch_qmle(x);
  std::vector<int> hits(x.size(), 0);
  for (std::size_t t = 1; t < x.size(); ++t) {
    hits[t] = x[t] < -1.64 * fit.sigma[t] ? 1 : 0;
  }
  return BinarySeries::from_ints(hits, x.label());
}

// ---- intraday CSV ---------------------------------------------------------------

IntradayPanel read_intraday_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);

  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty input");
  const std::vector<std::string> header = split_csv_line(line);
  if (header.size() != 4 || header[0] != "day" || header[1] != "slot" || header[2] != "symbol" ||
      (header[3] != "price" && header[3] != "return")) {
    throw std::runtime_error("expected header day,slot,symbol,price or day,slot,symbol,return");
  }
  const bool price_mode = header[3] == "price";

  struct Cell {
    int day;
    int slot;
    double value;
  };
  std::map<std::string, std::vector<Cell>> by_symbol;
  std::vector<std::string> symbol_order;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_csv_line(line);
    if (fields.size() != 4) {
      throw std::runtime_error("ragged row " + std::to_string(row));
    }
    Cell cell{};
    try {
      cell.day = std::stoi(fields[0]);
      cell.slot = std::stoi(fields[1]);
      cell.value = std::stod(fields[3]);
    } catch (const std::exception&) {
      throw std::runtime_error("malformed row " + std::to_string(row));
    }
    if (by_symbol.find(fields[2]) == by_symbol.end()) symbol_order.push_back(fields[2]);
    by_symbol[fields[2]].push_back(cell);
  }
  if (symbol_order.empty()) throw std::runtime_error("empty input");

  IntradayPanel panel;
  int expected_slots = -1;
  for (const std::string& symbol : symbol_order) {
    auto& cells = by_symbol[symbol];
    std::map<int, std::map<int, double>> grid_map;
    for (const Cell& c : cells) {
      if (!grid_map[c.day].emplace(c.slot, c.value).second) {
        throw std::runtime_error("duplicate (day, slot) for symbol " + symbol);
      }
    }
    IntradayGrid grid;
    grid.symbol = symbol;
    grid.days = static_cast<int>(grid_map.size());
    int slots = -1;
    for (auto& [day, per_slot] : grid_map) {
      if (slots < 0) {
        slots = static_cast<int>(per_slot.size());
      } else if (static_cast<int>(per_slot.size()) != slots) {
        throw std::runtime_error("ragged intraday grid for symbol " + symbol);
      }
    }
    if (slots < (price_mode ? 2 : 1)) {
      throw std::runtime_error("too few slots for symbol " + symbol);
    }
    grid.slots = price_mode ? slots - 1 : slots;
    grid.returns.reserve(static_cast<std::size_t>(grid.days) * grid.slots);
    for (auto& [day, per_slot] : grid_map) {
      std::vector<double> values;
      values.reserve(per_slot.size());
      for (auto& [slot, value] : per_slot) values.push_back(value);
      if (price_mode) {
        for (std::size_t s = 0; s + 1 < values.size(); ++s) {
          if (!(values[s] > 0.0) || !(values[s + 1] > 0.0)) {
            throw std::runtime_error("nonpositive price for symbol " + symbol);
          }
          grid.returns.push_back(std::log(values[s + 1] / values[s]));
        }
      } else {
        for (double v : values) grid.returns.push_back(v);
      }
    }
    if (expected_slots < 0) {
      expected_slots = grid.slots;
    } else if (grid.slots != expected_slots) {
      throw std::runtime_error("slot count differs across symbols");
    }
    panel.symbols.push_back(std::move(grid));
  }
  return panel;
}

}  // namespace tailgc

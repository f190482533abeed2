#pragma once

#include <string>
#include <vector>

#include "tailgc/series.hpp"

namespace tailgc {

//======================================================================
// From raw returns to binary extreme-event series: intraday
// deseasonalization, jump-robust EWMA spot volatility, hit extraction,
// and the AR+GARCH quasi-MLE VaR filter used by the benchmark pipeline.
//======================================================================

// One symbol's rectangular grid of intraday log returns: `days` rows of
// `slots` one-minute returns, stored row-major (day-major).
struct IntradayGrid {
  std::string symbol;
  int days = 0;
  int slots = 0;
  std::vector<double> returns;

  double at(int day, int slot) const { return returns[static_cast<std::size_t>(day) * slots + slot]; }
  double& at(int day, int slot) { return returns[static_cast<std::size_t>(day) * slots + slot]; }
};

struct IntradayPanel {
  std::vector<IntradayGrid> symbols;
};

struct VolatilityConfig {
  double alpha = 2.0 / 61.0;           // EWMA weight
  double theta = 4.0;                  // jump / hit threshold
  double mu1 = 0.7978845608028654;     // sqrt(2/pi)
  double sigma0 = 0.0;                 // initial sigma; <= 0 selects automatic
                                       // initialization from the data
};

// Removes the intraday volatility pattern: u_t is the average over days of
// |r~_{d,t}| / s_d, with s_d the population standard deviation of day d's
// absolute returns, and every return in slot t is divided by u_t. Days with
// s_d = 0 are excluded from the average with a warning; slots with u_t = 0
// pass through unrescaled with a warning. With `causal` set, day d uses only
// days before d (day 0 falls back to its own day).
IntradayGrid intraday_rescale(const IntradayGrid& grid, bool causal = false,
                              std::vector<std::string>* warnings = nullptr);
IntradayPanel intraday_rescale(const IntradayPanel& panel, bool causal = false,
                               std::vector<std::string>* warnings = nullptr);

// Threshold-bipower EWMA spot volatility:
//
//   sigma^2_t = mu1^{-2} * alpha * |r_{t''}| * |r_{t'}| + (1 - alpha) * sigma^2_{t-1}
//
// where t'' < t' <= t-1 are the two most recent non-jump returns (|r_s| <=
// theta * sigma_s at their own time s). When fewer than two non-jump returns
// are available the decay term alone is used and `pure_decay_flag` (if given)
// is set. sigma^2_0 comes from cfg.sigma0 when positive, otherwise from the
// bipower mean mu1^{-2} * avg(|r_t| |r_{t+1}|) over the first min(30, T)
// returns (floored at 1e-12). Returns the sigma_t series. Requires T >= 3.
RealSeries spot_volatility(const RealSeries& returns, const VolatilityConfig& cfg,
                           bool* pure_decay_flag = nullptr);

enum class ExtremeSide { kLeft, kRight };

// Hit series: left side marks r_t / sigma_t < -theta, right side marks
// r_t / sigma_t > theta. Throws on length mismatch or nonpositive sigma_t.
BinarySeries extract_extremes(const RealSeries& returns, const RealSeries& sigma, double theta,
                              ExtremeSide side);

// Quasi-MLE fit of the single-series AR(1)+GARCH(1,1) model
//   x_t = beta x_{t-1} + u_t,  sigma^2_t = g0 + g1 sigma^2_{t-1} + g2 u^2_{t-1}
// by Gaussian likelihood (variance floored at 1e-12).
struct GarchQmleFit {
  double beta = 0.0;
  double gamma0 = 0.0;
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  double loglik = 0.0;
  bool converged = false;
  int iterations = 0;
  std::vector<double> sigma;  // filtered sigma_t path, length T
};

// Exposed for diagnostics and self-consistency checks; garch_var_filter is
// the intended entry point. Requires T >= 100; throws std::runtime_error with
// optimizer diagnostics on non-convergence.
GarchQmleFit fit_ar_garch_qmle(const RealSeries& x);

// VaR(5%) exceedance filter: fits the model above and marks
// X_t = 1 iff x_t < -1.64 * sigmahat_t (X_0 = 0: no conditional sigma exists
// for the first observation).
BinarySeries garch_var_filter(const RealSeries& x);

// Reads a `day,slot,symbol,price` or `day,slot,symbol,return` CSV (the header
// decides which). Prices become within-day log returns, so a day with S price
// rows yields S-1 return slots. Every symbol's grid must be rectangular and
// all symbols must share one slot count.
IntradayPanel read_intraday_csv(const std::string& path);

}  // namespace tailgc

// tailgc — command-line front end for the tail Granger-causality library.
//
// Subcommands: simulate, fit, gc-test, decimate, network, preprocess,
// mc-experiment, roc. Single results are emitted as one-line JSON on stdout;
// tabular and matrix outputs go to declared file paths (CSV/TSV). Exit codes:
// 0 success, 1 usage error, 2 data or convergence error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "tailgc/csv.hpp"
#include "tailgc/dgp.hpp"
#include "tailgc/estimation.hpp"
#include "tailgc/experiments.hpp"
#include "tailgc/gc_tests.hpp"
#include "tailgc/network.hpp"
#include "tailgc/preprocess.hpp"
#include "tailgc/series.hpp"

namespace {

using nlohmann::json;

// Errors of invocation (bad flag values, malformed config) exit 1; data and
// convergence errors exit 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<double> parse_double_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw UsageError("cannot parse " + what + ": '" + item + "'");
    }
  }
  if (out.empty()) throw UsageError(what + " is empty");
  return out;
}

std::vector<std::string> parse_label_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

tailgc::BinaryPanel read_panel(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return tailgc::read_panel_csv(in);
}

const tailgc::BinarySeries& panel_column(const tailgc::BinaryPanel& panel,
                                         const std::string& label) {
  for (std::size_t i = 0; i < panel.width(); ++i) {
    if (panel.series(i).label() == label) return panel.series(i);
  }
  throw std::runtime_error("unknown column '" + label + "'");
}

void write_panel_to(const std::string& path, const tailgc::BinaryPanel& panel) {
  if (path.empty()) {
    tailgc::write_panel_csv(std::cout, panel);
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  tailgc::write_panel_csv(out, panel);
}

json gc_result_to_json(const tailgc::GcTestResult& r) {
  return json{{"source", r.source},
              {"target", r.target},
              {"method", tailgc::to_string(r.method)},
              {"statistic", r.statistic},
              {"dof_or_bandwidth", r.dof_or_bandwidth},
              {"p_value", r.p_value},
              {"selected_p", r.selected_p},
              {"degenerate", r.degenerate}};
}

// ---- simulate -------------------------------------------------------------------

struct SimulateArgs {
  std::string model;
  int t = 1000;
  std::uint64_t seed = 0;
  std::string out;
  // dar
  double nu = 0.5, chi = 0.05;
  std::string gamma = "1";
  // vdar2
  double nu1 = 0.5, nu2 = 0.5, chi1 = 0.05, chi2 = 0.05;
  double lambda1 = 0.0, lambda2 = 0.0, copula_rho = 0.0;
  int p = 1;
  // vdar1 / star
  std::string coupling;
  std::string nu_list, chi_list;
  int star_n = 10;
  std::string star_kind = "out";
  // garch
  std::string scenario = "null";
};

int run_simulate(const SimulateArgs& a) {
  if (a.model == "dar") {
    tailgc::DarParams params;
    params.nu = a.nu;
    params.chi = a.chi;
    params.gamma = parse_double_list(a.gamma, "--gamma");
    const tailgc::BinarySeries x = tailgc::simulate_dar(params, a.t, a.seed);
    write_panel_to(a.out, tailgc::BinaryPanel({x.label().empty()
                                                   ? tailgc::BinarySeries(x.values(), "X1")
                                                   : x}));
    return 0;
  }
  if (a.model == "vdar2") {
    tailgc::BiVdarParams params;
    params.eq1.nu = a.nu1;
    params.eq1.lambda = a.lambda1;
    params.eq1.chi = a.chi1;
    params.eq1.gamma_self.assign(static_cast<std::size_t>(a.p), 1.0 / a.p);
    params.eq1.gamma_cross.assign(static_cast<std::size_t>(a.p), 1.0 / a.p);
    params.eq2.nu = a.nu2;
    params.eq2.lambda = a.lambda2;
    params.eq2.chi = a.chi2;
    params.eq2.gamma_self.assign(static_cast<std::size_t>(a.p), 1.0 / a.p);
    params.eq2.gamma_cross.assign(static_cast<std::size_t>(a.p), 1.0 / a.p);
    const std::optional<double> rho =
        a.copula_rho != 0.0 ? std::optional<double>(a.copula_rho) : std::nullopt;
    const auto [x, y] = tailgc::simulate_vdar_bivariate(params, a.t, a.seed, rho);
    write_panel_to(a.out, tailgc::BinaryPanel({x, y}));
    return 0;
  }
  if (a.model == "vdar1") {
    if (a.coupling.empty()) throw UsageError("--coupling is required for --model vdar1");
    std::ifstream in(a.coupling);
    if (!in) throw std::runtime_error("cannot open " + a.coupling);
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      rows.push_back(parse_double_list(line, "coupling row"));
    }
    const int n = static_cast<int>(rows.size());
    tailgc::Vdar1Params params;
    params.lambda = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      if (static_cast<int>(rows[static_cast<std::size_t>(i)].size()) != n) {
        throw std::runtime_error("coupling matrix is not square");
      }
      for (int j = 0; j < n; ++j) {
        params.lambda(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      }
    }
    const std::vector<double> nus =
        a.nu_list.empty() ? std::vector<double>(static_cast<std::size_t>(n), a.nu)
                          : parse_double_list(a.nu_list, "--nu-list");
    const std::vector<double> chis =
        a.chi_list.empty() ? std::vector<double>(static_cast<std::size_t>(n), a.chi)
                           : parse_double_list(a.chi_list, "--chi-list");
    params.nu = nus;
    params.chi = chis;
    write_panel_to(a.out, tailgc::simulate_vdar1(params, a.t, a.seed));
    return 0;
  }
  if (a.model == "star") {
    tailgc::StarKind kind;
    if (a.star_kind == "out") {
      kind = tailgc::StarKind::kOut;
    } else if (a.star_kind == "mixed") {
      kind = tailgc::StarKind::kMixed;
    } else {
      throw UsageError("--star-kind must be out or mixed");
    }
    const tailgc::Vdar1Params params =
        tailgc::star_coupling(a.star_n, kind, a.seed, a.chi, a.nu);
    write_panel_to(a.out, tailgc::simulate_vdar1(params, a.t, a.seed + 1));
    return 0;
  }
  if (a.model == "garch") {
    tailgc::GarchScenario scenario;
    if (a.scenario == "null") {
      scenario = tailgc::GarchScenario::kNull;
    } else if (a.scenario == "alter1") {
      scenario = tailgc::GarchScenario::kAlter1;
    } else if (a.scenario == "alter2") {
      scenario = tailgc::GarchScenario::kAlter2;
    } else {
      throw UsageError("--scenario must be null, alter1, or alter2");
    }
    const auto [x1, x2] = tailgc::simulate_garch(scenario, a.t, a.seed);
    if (a.out.empty()) {
      tailgc::write_real_panel_csv(std::cout, {x1, x2});
    } else {
      std::ofstream out(a.out);
      if (!out) throw std::runtime_error("cannot open " + a.out + " for writing");
      tailgc::write_real_panel_csv(out, {x1, x2});
    }
    return 0;
  }
  throw UsageError("unknown --model '" + a.model + "'");
}

// ---- fit ------------------------------------------------------------------------

int run_fit(const std::string& model, const std::string& in_path, const std::string& cols,
            int p) {
  const tailgc::BinaryPanel panel = read_panel(in_path);
  json out;
  if (model == "dar") {
    const std::vector<std::string> labels = parse_label_list(cols);
    if (labels.size() != 1) throw UsageError("--model dar needs exactly one column");
    const tailgc::DarFit fit = tailgc::mle_dar(panel_column(panel, labels[0]), p);
    out = json{{"model", "dar"},
               {"params",
                json{{"nu", fit.params.nu}, {"chi", fit.params.chi}, {"gamma", fit.params.gamma}}},
               {"loglik", fit.loglik},
               {"p", fit.p},
               {"converged", fit.converged},
               {"iterations", fit.iterations}};
  } else if (model == "vdar2") {
    const std::vector<std::string> labels = parse_label_list(cols);
    if (labels.size() != 2) throw UsageError("--model vdar2 needs exactly two columns");
    const tailgc::BiVdarFit fit =
        tailgc::mle_vdar_bivariate(panel_column(panel, labels[0]), panel_column(panel, labels[1]), p);
    const auto eq_json = [](const tailgc::BiVdarEquation& eq) {
      return json{{"nu", eq.nu},
                  {"lambda", eq.lambda},
                  {"chi", eq.chi},
                  {"gamma_self", eq.gamma_self},
                  {"gamma_cross", eq.gamma_cross}};
    };
    out = json{{"model", "vdar2"},
               {"params", json{{"eq1", eq_json(fit.params.eq1)}, {"eq2", eq_json(fit.params.eq2)}}},
               {"loglik", fit.loglik},
               {"loglik_x", fit.loglik_x},
               {"loglik_y", fit.loglik_y},
               {"p", fit.p},
               {"converged", fit.converged},
               {"iterations", fit.iterations}};
  } else if (model == "vdar1") {
    tailgc::BinaryPanel subset = panel;
    if (!cols.empty()) {
      std::vector<tailgc::BinarySeries> picked;
      for (const std::string& label : parse_label_list(cols)) {
        picked.push_back(panel_column(panel, label));
      }
      subset = tailgc::BinaryPanel(std::move(picked));
    }
    const tailgc::Vdar1Fit fit = tailgc::mle_vdar1(subset);
    const int n = fit.params.n();
    std::vector<std::vector<double>> lambda(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) lambda[static_cast<std::size_t>(i)].push_back(fit.params.lambda(i, j));
    }
    out = json{{"model", "vdar1"},
               {"labels", subset.labels()},
               {"params", json{{"nu", fit.params.nu}, {"chi", fit.params.chi}, {"lambda", lambda}}},
               {"loglik", fit.loglik},
               {"p", 1},
               {"converged", fit.converged},
               {"iterations", fit.iterations}};
  } else {
    throw UsageError("unknown --model '" + model + "'");
  }
  std::cout << out.dump() << "\n";
  return 0;
}

// ---- mc-experiment config --------------------------------------------------------

std::map<std::string, std::string> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    // Trim.
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    line = line.substr(first, last - first + 1);
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw UsageError("config line " + std::to_string(line_no) + ": expected key=value");
    }
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return kv;
}

class ConfigReader {
 public:
  explicit ConfigReader(std::map<std::string, std::string> kv) : kv_(std::move(kv)) {}

  std::string str(const std::string& key, const std::string& fallback) {
    used_.insert(key);
    const auto it = kv_.find(key);
    return it == kv_.end() ? fallback : it->second;
  }
  double real(const std::string& key, double fallback) {
    used_.insert(key);
    const auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    try {
      return std::stod(it->second);
    } catch (const std::exception&) {
      throw UsageError("config key '" + key + "': cannot parse '" + it->second + "'");
    }
  }
  int integer(const std::string& key, int fallback) {
    used_.insert(key);
    const auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    try {
      return std::stoi(it->second);
    } catch (const std::exception&) {
      throw UsageError("config key '" + key + "': cannot parse '" + it->second + "'");
    }
  }
  bool flag(const std::string& key, bool fallback) {
    used_.insert(key);
    const auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    if (it->second == "1" || it->second == "true") return true;
    if (it->second == "0" || it->second == "false") return false;
    throw UsageError("config key '" + key + "': expected 0/1/true/false");
  }
  std::vector<double> reals(const std::string& key) {
    used_.insert(key);
    const auto it = kv_.find(key);
    if (it == kv_.end()) return {};
    return parse_double_list(it->second, "config key '" + key + "'");
  }
  void reject_unknown() const {
    for (const auto& [key, value] : kv_) {
      if (used_.find(key) == used_.end()) throw UsageError("unknown config key '" + key + "'");
    }
  }

 private:
  std::map<std::string, std::string> kv_;
  std::set<std::string> used_;
};

int run_mc_experiment(const std::string& config_path, std::uint64_t seed,
                      const std::string& out_path) {
  ConfigReader cfg(read_config(config_path));
  const std::string dgp = cfg.str("dgp", "vdar");

  std::ofstream file;
  std::ostream* out = &std::cout;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) throw std::runtime_error("cannot open " + out_path + " for writing");
    out = &file;
  }

  if (dgp == "star") {
    tailgc::StarConfig sc;
    sc.n = cfg.integer("n", sc.n);
    sc.t = cfg.integer("t", sc.t);
    sc.n_seeds = cfg.integer("n_seeds", sc.n_seeds);
    const std::string kind = cfg.str("kind", "out");
    if (kind == "out") {
      sc.kind = tailgc::StarKind::kOut;
    } else if (kind == "mixed") {
      sc.kind = tailgc::StarKind::kMixed;
    } else {
      throw UsageError("config key 'kind': expected out or mixed");
    }
    sc.chi = cfg.real("chi", sc.chi);
    sc.nu = cfg.real("nu", sc.nu);
    sc.level = cfg.real("level", sc.level);
    sc.p_max = cfg.integer("p_max", sc.p_max);
    sc.run_pairwise = cfg.flag("pairwise", sc.run_pairwise);
    sc.run_decimation = cfg.flag("decimation", sc.run_decimation);
    sc.master_seed = seed;
    cfg.reject_unknown();

    const tailgc::StarReport report = tailgc::run_star_experiment(sc);
    *out << "method,fpr,tpr,fpr_se,tpr_se,n_seeds,failures\n";
    if (sc.run_decimation) {
      *out << "decimation," << report.decimation.fpr << "," << report.decimation.tpr << ","
           << report.decimation.fpr_se << "," << report.decimation.tpr_se << ","
           << report.n_seeds << "," << report.failures << "\n";
    }
    if (sc.run_pairwise) {
      *out << "pairwise," << report.pairwise.fpr << "," << report.pairwise.tpr << ","
           << report.pairwise.fpr_se << "," << report.pairwise.tpr_se << "," << report.n_seeds
           << "," << report.failures << "\n";
    }
    return 0;
  }

  tailgc::SizePowerConfig sp;
  if (dgp == "vdar") {
    sp.dgp = tailgc::DgpKind::kVdarBivariate;
  } else if (dgp == "garch") {
    sp.dgp = tailgc::DgpKind::kGarch;
  } else {
    throw UsageError("config key 'dgp': expected vdar, garch, or star");
  }
  const std::string scenario = cfg.str("scenario", "null");
  if (scenario == "null") {
    sp.scenario = tailgc::GarchScenario::kNull;
  } else if (scenario == "alter1") {
    sp.scenario = tailgc::GarchScenario::kAlter1;
  } else if (scenario == "alter2") {
    sp.scenario = tailgc::GarchScenario::kAlter2;
  } else {
    throw UsageError("config key 'scenario': expected null, alter1, or alter2");
  }
  const std::string detector = cfg.str("detector", "lr");
  if (detector == "lr") {
    sp.detector = tailgc::GcMethod::kLr;
  } else if (detector == "hong") {
    sp.detector = tailgc::GcMethod::kHong;
  } else {
    throw UsageError("config key 'detector': expected lr or hong");
  }
  const std::string direction = cfg.str("direction", "forward");
  if (direction == "forward") {
    sp.direction = tailgc::TestDirection::kForward;
  } else if (direction == "reverse") {
    sp.direction = tailgc::TestDirection::kReverse;
  } else {
    throw UsageError("config key 'direction': expected forward or reverse");
  }
  const std::string sweep = cfg.str("sweep", "none");
  if (sweep == "none") {
    sp.sweep = tailgc::SweepVariable::kNone;
  } else if (sweep == "lambda1") {
    sp.sweep = tailgc::SweepVariable::kLambda1;
  } else if (sweep == "nu2") {
    sp.sweep = tailgc::SweepVariable::kNu2;
  } else {
    throw UsageError("config key 'sweep': expected none, lambda1, or nu2");
  }
  sp.sweep_values = cfg.reals("sweep_values");
  sp.t = cfg.integer("t", sp.t);
  sp.n_seeds = cfg.integer("n_seeds", sp.n_seeds);
  sp.level = cfg.real("level", sp.level);
  sp.p_max = cfg.integer("p_max", sp.p_max);
  sp.bandwidth = cfg.integer("bandwidth", sp.bandwidth);
  sp.vdar.nu1 = cfg.real("nu1", sp.vdar.nu1);
  sp.vdar.nu2 = cfg.real("nu2", sp.vdar.nu2);
  sp.vdar.chi1 = cfg.real("chi1", sp.vdar.chi1);
  sp.vdar.chi2 = cfg.real("chi2", sp.vdar.chi2);
  sp.vdar.lambda1 = cfg.real("lambda1", sp.vdar.lambda1);
  sp.vdar.lambda2 = cfg.real("lambda2", sp.vdar.lambda2);
  sp.vdar.copula_rho = cfg.real("copula_rho", sp.vdar.copula_rho);
  sp.vdar.randomize_nu = cfg.flag("randomize_nu", sp.vdar.randomize_nu);
  sp.vdar.randomize_lambda1 = cfg.flag("randomize_lambda1", sp.vdar.randomize_lambda1);
  sp.vdar.chi_low = cfg.real("chi_low", sp.vdar.chi_low);
  sp.vdar.chi_high = cfg.real("chi_high", sp.vdar.chi_high);
  sp.master_seed = seed;
  cfg.reject_unknown();

  const tailgc::ExperimentReport report = tailgc::run_size_power(sp);
  *out << "sweep_value,n,fpr,tpr,se\n";
  for (const tailgc::ExperimentPoint& pt : report.points) {
    *out << pt.sweep_value << "," << pt.n << ",";
    if (pt.is_null) {
      *out << pt.rejection_rate << ",,";
    } else {
      *out << "," << pt.rejection_rate << ",";
    }
    *out << pt.se << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Granger causality in tail: simulation, estimation, testing, and networks"};
  app.require_subcommand(1);

  // ---- simulate ----
  SimulateArgs sim;
  CLI::App* simulate = app.add_subcommand("simulate", "Simulate a DGP and write its panel CSV");
  simulate->add_option("--model", sim.model, "dar | vdar2 | vdar1 | star | garch")->required();
  simulate->add_option("--t", sim.t, "series length")->required();
  simulate->add_option("--seed", sim.seed, "master seed (required: stochastic)")->required();
  simulate->add_option("--out", sim.out, "output CSV path (default: stdout)");
  simulate->add_option("--nu", sim.nu, "copy probability (dar/vdar1/star; default 0.5)");
  simulate->add_option("--chi", sim.chi, "marginal hit probability (default 0.05)");
  simulate->add_option("--gamma", sim.gamma, "dar lag weights, comma separated (default '1')");
  simulate->add_option("--nu1", sim.nu1, "vdar2: eq1 nu (default 0.5)");
  simulate->add_option("--nu2", sim.nu2, "vdar2: eq2 nu (default 0.5)");
  simulate->add_option("--chi1", sim.chi1, "vdar2: eq1 chi (default 0.05)");
  simulate->add_option("--chi2", sim.chi2, "vdar2: eq2 chi (default 0.05)");
  simulate->add_option("--lambda1", sim.lambda1, "vdar2: cross weight into series 1 (default 0)");
  simulate->add_option("--lambda2", sim.lambda2, "vdar2: cross weight into series 2 (default 0)");
  simulate->add_option("--copula-rho", sim.copula_rho,
                       "vdar2: Gaussian-copula innovation correlation (default 0 = off)");
  simulate->add_option("--p", sim.p, "vdar2: order, uniform lag weights (default 1)");
  simulate->add_option("--coupling", sim.coupling, "vdar1: CSV file with the lambda matrix");
  simulate->add_option("--nu-list", sim.nu_list, "vdar1: per-series nu, comma separated");
  simulate->add_option("--chi-list", sim.chi_list, "vdar1: per-series chi, comma separated");
  simulate->add_option("--n", sim.star_n, "star: number of nodes (default 10)");
  simulate->add_option("--star-kind", sim.star_kind, "star: out | mixed (default out)");
  simulate->add_option("--scenario", sim.scenario, "garch: null | alter1 | alter2 (default null)");

  // ---- fit ----
  std::string fit_model, fit_in, fit_cols;
  int fit_p = 1;
  CLI::App* fit = app.add_subcommand("fit", "Maximum-likelihood fit; one-line JSON on stdout");
  fit->add_option("--model", fit_model, "dar | vdar2 | vdar1")->required();
  fit->add_option("--in", fit_in, "panel CSV path")->required();
  fit->add_option("--cols", fit_cols,
                  "column labels, comma separated (dar: 1; vdar2: 2; vdar1: default all)");
  fit->add_option("--p", fit_p, "model order (dar/vdar2; default 1)");

  // ---- gc-test ----
  std::string gt_in, gt_cols, gt_method;
  int gt_pmax = 3, gt_bandwidth = 5;
  CLI::App* gctest = app.add_subcommand(
      "gc-test", "Directed causality test source->target; one-line JSON on stdout");
  gctest->add_option("--in", gt_in, "panel CSV path")->required();
  gctest->add_option("--cols", gt_cols, "SOURCE,TARGET column labels")->required();
  gctest->add_option("--method", gt_method, "lr | hong")->required();
  gctest->add_option("--p-max", gt_pmax, "lr: maximum BIC-scanned order (default 3)");
  gctest->add_option("--bandwidth", gt_bandwidth, "hong: bandwidth M (default 5)");

  // ---- decimate ----
  std::string dec_in, dec_matrix;
  CLI::App* decimate = app.add_subcommand(
      "decimate", "Prune VDAR(1) couplings; tilted-path JSON on stdout, matrix CSV to file");
  decimate->add_option("--in", dec_in, "panel CSV path")->required();
  decimate->add_option("--out-matrix", dec_matrix, "validated coupling matrix CSV path")
      ->required();

  // ---- network ----
  std::string net_in, net_method = "lr", net_edges;
  double net_level = 0.05;
  int net_pmax = 3, net_bandwidth = 5;
  CLI::App* network = app.add_subcommand(
      "network", "Build a causality network; metrics JSON on stdout, edge TSV to file");
  network->add_option("--in", net_in, "panel CSV path")->required();
  network->add_option("--method", net_method, "lr | hong | decimation (default lr)");
  network->add_option("--level", net_level, "FDR level for pairwise methods (default 0.05)");
  network->add_option("--p-max", net_pmax, "lr: maximum BIC-scanned order (default 3)");
  network->add_option("--bandwidth", net_bandwidth, "hong: bandwidth M (default 5)");
  network->add_option("--out-edges", net_edges, "edge list TSV path (source<TAB>target)")
      ->required();

  // ---- preprocess ----
  std::string pre_in, pre_out, pre_side = "left";
  double pre_theta = 4.0, pre_alpha = 2.0 / 61.0;
  bool pre_causal = false;
  int pre_warmup = 30;
  CLI::App* preprocess = app.add_subcommand(
      "preprocess",
      "Intraday returns -> binary hit panel; summary JSON on stdout, panel CSV to file");
  preprocess->add_option("--in", pre_in, "CSV day,slot,symbol,price or day,slot,symbol,return")
      ->required();
  preprocess->add_option("--out", pre_out, "binary panel CSV path")->required();
  preprocess->add_option("--theta", pre_theta, "hit/jump threshold (default 4)");
  preprocess->add_option("--alpha", pre_alpha, "EWMA weight (default 2/61)");
  preprocess->add_option("--side", pre_side, "left | right tail (default left)");
  preprocess->add_flag("--causal-rescale", pre_causal,
                       "use only past days for the intraday pattern");
  preprocess->add_option("--warmup", pre_warmup,
                         "initial hits zeroed while sigma warms up (default 30)");

  // ---- mc-experiment ----
  std::string mc_config, mc_out;
  std::uint64_t mc_seed = 0;
  CLI::App* mc = app.add_subcommand("mc-experiment",
                                    "Monte Carlo size/power study from a key=value config");
  mc->add_option("--config", mc_config, "key=value config file")->required();
  mc->add_option("--seed", mc_seed, "master seed (required: stochastic)")->required();
  mc->add_option("--out", mc_out, "report CSV path (default: stdout)");

  // ---- roc ----
  tailgc::RocProtocolConfig roc_cfg;
  std::string roc_out;
  std::uint64_t roc_seed = 0;
  CLI::App* roc = app.add_subcommand(
      "roc", "Paired LR/Hong ROC protocol; AUC JSON on stdout, points CSV to file");
  roc->add_option("--t", roc_cfg.t, "series length (default 10000)");
  roc->add_option("--n-sims", roc_cfg.n_sims, "number of simulations (default 1000)");
  roc->add_option("--p-max", roc_cfg.p_max, "lr: maximum BIC-scanned order (default 3)");
  roc->add_option("--bandwidth", roc_cfg.bandwidth, "hong: bandwidth M (default 5)");
  roc->add_option("--copula-rho", roc_cfg.copula_rho,
                  "Gaussian-copula innovation correlation (default 0 = off)");
  roc->add_option("--seed", roc_seed, "master seed (required: stochastic)")->required();
  roc->add_option("--out", roc_out, "points CSV path (detector,fpr,tpr)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (simulate->parsed()) return run_simulate(sim);

    if (fit->parsed()) return run_fit(fit_model, fit_in, fit_cols, fit_p);

    if (gctest->parsed()) {
      const std::vector<std::string> labels = parse_label_list(gt_cols);
      if (labels.size() != 2) throw UsageError("--cols must name exactly two columns");
      const tailgc::BinaryPanel panel = read_panel(gt_in);
      const tailgc::BinarySeries& source = panel_column(panel, labels[0]);
      const tailgc::BinarySeries& target = panel_column(panel, labels[1]);
      tailgc::GcTestResult result;
      if (gt_method == "lr") {
        result = tailgc::lr_tail_test(target, source, gt_pmax);
      } else if (gt_method == "hong") {
        result = tailgc::hong_test(target, source, gt_bandwidth);
      } else {
        throw UsageError("--method must be lr or hong");
      }
      std::cout << gc_result_to_json(result).dump() << "\n";
      return 0;
    }

    if (decimate->parsed()) {
      const tailgc::BinaryPanel panel = read_panel(dec_in);
      const tailgc::DecimationResult result = tailgc::decimate_vdar1(panel);
      std::ofstream out(dec_matrix);
      if (!out) throw std::runtime_error("cannot open " + dec_matrix + " for writing");
      const std::vector<std::string> labels = panel.labels();
      for (std::size_t j = 0; j < labels.size(); ++j) {
        out << (j ? "," : "") << labels[j];
      }
      out << "\n";
      out.precision(17);
      for (int i = 0; i < result.params_validated.n(); ++i) {
        for (int j = 0; j < result.params_validated.n(); ++j) {
          out << (j ? "," : "") << result.lambda_validated(i, j);
        }
        out << "\n";
      }
      json path_json = json::array();
      for (const auto& [q, tilted] : result.tilted_path) {
        path_json.push_back(json::array({q, tilted}));
      }
      std::cout << json{{"q_star", result.q_star}, {"tilted_path", path_json}}.dump() << "\n";
      return 0;
    }

    if (network->parsed()) {
      const tailgc::BinaryPanel panel = read_panel(net_in);
      tailgc::CausalityNetwork g;
      tailgc::PairwiseDiagnostics diag;
      if (net_method == "lr") {
        g = tailgc::build_pairwise_network(panel, tailgc::GcMethod::kLr, net_level, net_pmax,
                                           &diag);
      } else if (net_method == "hong") {
        g = tailgc::build_pairwise_network(panel, tailgc::GcMethod::kHong, net_level,
                                           net_bandwidth, &diag);
      } else if (net_method == "decimation") {
        g = tailgc::build_multivariate_network(panel);
      } else {
        throw UsageError("--method must be lr, hong, or decimation");
      }
      std::ofstream out(net_edges);
      if (!out) throw std::runtime_error("cannot open " + net_edges + " for writing");
      for (const auto& [source, target] : g.edges) {
        out << g.nodes[static_cast<std::size_t>(source)] << "\t"
            << g.nodes[static_cast<std::size_t>(target)] << "\n";
      }
      json metrics{{"method", g.method},
                   {"n_nodes", g.nodes.size()},
                   {"n_edges", g.edges.size()},
                   {"density", tailgc::link_density(g)},
                   {"reciprocity", tailgc::reciprocity(g)},
                   {"triangle_density", tailgc::triangle_density(g)}};
      if (!diag.failures.empty()) metrics["failures"] = diag.failures;
      std::cout << metrics.dump() << "\n";
      return 0;
    }

    if (preprocess->parsed()) {
      tailgc::ExtremeSide side;
      if (pre_side == "left") {
        side = tailgc::ExtremeSide::kLeft;
      } else if (pre_side == "right") {
        side = tailgc::ExtremeSide::kRight;
      } else {
        throw UsageError("--side must be left or right");
      }
      tailgc::VolatilityConfig vcfg;
      vcfg.alpha = pre_alpha;
      vcfg.theta = pre_theta;

      const tailgc::IntradayPanel raw = tailgc::read_intraday_csv(pre_in);
      std::vector<std::string> warnings;
      const tailgc::IntradayPanel rescaled = tailgc::intraday_rescale(raw, pre_causal, &warnings);

      std::vector<tailgc::BinarySeries> hit_columns;
      json symbol_summaries = json::array();
      double chi_min = 1.0, chi_max = 0.0;
      for (const tailgc::IntradayGrid& grid : rescaled.symbols) {
        tailgc::RealSeries flat(grid.returns, grid.symbol);
        const tailgc::RealSeries sigma = tailgc::spot_volatility(flat, vcfg);
        const tailgc::BinarySeries raw_hits =
            tailgc::extract_extremes(flat, sigma, vcfg.theta, side);
        std::vector<int> adjusted(raw_hits.size());
        for (std::size_t t = 0; t < raw_hits.size(); ++t) {
          adjusted[t] = t < static_cast<std::size_t>(pre_warmup) ? 0 : raw_hits[t];
        }
        const tailgc::BinarySeries hits = tailgc::BinarySeries::from_ints(adjusted, grid.symbol);
        const double freq = tailgc::sample_mean(hits);
        chi_min = std::min(chi_min, freq);
        chi_max = std::max(chi_max, freq);
        symbol_summaries.push_back(json{{"symbol", grid.symbol},
                                        {"t", hits.size()},
                                        {"hit_frequency", freq}});
        hit_columns.push_back(hits);
      }
      const tailgc::BinaryPanel panel(std::move(hit_columns));
      std::ofstream out(pre_out);
      if (!out) throw std::runtime_error("cannot open " + pre_out + " for writing");
      tailgc::write_panel_csv(out, panel);

      json summary{{"symbols", symbol_summaries},
                   {"chi_min", chi_min},
                   {"chi_max", chi_max},
                   {"warmup", pre_warmup}};
      if (!warnings.empty()) summary["warnings"] = warnings;
      std::cout << summary.dump() << "\n";
      return 0;
    }

    if (mc->parsed()) return run_mc_experiment(mc_config, mc_seed, mc_out);

    if (roc->parsed()) {
      roc_cfg.master_seed = roc_seed;
      const tailgc::RocComparison cmp = tailgc::run_roc_protocol(roc_cfg);
      std::ofstream out(roc_out);
      if (!out) throw std::runtime_error("cannot open " + roc_out + " for writing");
      out << "detector,fpr,tpr\n";
      for (const auto& [fpr, tpr] : cmp.lr.roc) out << "lr," << fpr << "," << tpr << "\n";
      for (const auto& [fpr, tpr] : cmp.hong.roc) out << "hong," << fpr << "," << tpr << "\n";
      std::cout << json{{"auc_lr", cmp.lr.auc},
                        {"auc_hong", cmp.hong.auc},
                        {"failures", cmp.failures}}
                       .dump()
                << "\n";
      return 0;
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

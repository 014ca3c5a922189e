// fsim: functional single index regression with Bayesian bandwidth selection.
//
// Subcommands: simulate (synthetic-data error study), fit (estimate a model
// from curve + response files), predict (point forecasts and nonparametric
// prediction intervals for new curves), diagnose (chain diagnostics for a
// dumped sampler run).
//
// Exit codes: 0 success, 1 runtime failure or completed-with-warnings,
// 2 usage or malformed-data errors.

#include <CLI11.hpp>

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <numeric>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fsim/curves.hpp"
#include "fsim/errors.hpp"
#include "fsim/error_model.hpp"
#include "fsim/forecast.hpp"
#include "fsim/io.hpp"
#include "fsim/mcmc.hpp"
#include "fsim/model.hpp"
#include "fsim/rng.hpp"
#include "fsim/simulation.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace fsim;

namespace {

constexpr std::uint64_t kDefaultSeed = 42;

PriorSpec prior_from_name(const std::string& name) {
  if (name == "ig1") return PriorSpec::ig(1.0, 0.05);
  if (name == "ig2") return PriorSpec::ig(2.0, 0.1);
  if (name == "cauchy") return PriorSpec::cauchy(1.0);
  throw std::invalid_argument("unknown prior: " + name);
}

// seed resolution order: flag/config value, then FSIM_SEED, then the default
std::uint64_t resolve_seed(const CLI::Option* opt, std::uint64_t parsed) {
  if (opt->count() > 0) return parsed;
  if (const char* env = std::getenv("FSIM_SEED")) {
    errno = 0;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (errno != 0 || end == env || *end != '\0')
      throw std::invalid_argument(std::string("FSIM_SEED is not an integer: ") + env);
    return static_cast<std::uint64_t>(v);
  }
  return kDefaultSeed;
}

void ensure_out_dir(const std::string& out) {
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw io_error(out + ": cannot create output directory: " + ec.message());
}

std::string path_join(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

std::string chain_table(const ChainSummary& chain) {
  std::string out;
  char line[256];
  std::snprintf(line, sizeof(line), "%-6s %10s %10s %10s %9s %9s %7s %8s %7s %10s\n",
                "param", "mean", "q2.5", "q97.5", "se", "batch_se", "sif",
                "geweke", "accept", "tau");
  out += line;
  out += "------ ---------- ---------- ---------- --------- --------- "
         "------- -------- ------- ----------\n";
  for (const ParamSummary& p : chain.params) {
    std::snprintf(line, sizeof(line),
                  "%-6s %10.5f %10.5f %10.5f %9.5f %9.5f %7.2f %8.3f %7.3f %10.6f\n",
                  p.name.c_str(), p.mean, p.lower, p.upper, p.se, p.batch_se,
                  p.sif, p.geweke_z, p.accept_rate, p.final_tau);
    out += line;
  }
  return out;
}

json chain_json(const ChainSummary& chain) {
  json params = json::array();
  for (const ParamSummary& p : chain.params) {
    params.push_back({{"name", p.name},
                      {"mean", p.mean},
                      {"lower", p.lower},
                      {"upper", p.upper},
                      {"se", p.se},
                      {"batch_se", p.batch_se},
                      {"sif", p.sif},
                      {"geweke_z", p.geweke_z},
                      {"accept_rate", p.accept_rate},
                      {"final_tau", p.final_tau}});
  }
  return params;
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  int n = 60;
  int n_test = -1;
  std::string curves = "smooth";
  std::string errors = "iid";
  double xi = 0.1;
  double rho = 0.8;
  int reps = 20;
  std::uint64_t seed = kDefaultSeed;
  int threads = 0;
  int burn_in = 1000;
  int keep = 10000;
  double tau0 = 0.1;
  std::string prior = "ig1";
  int index_k = 0;
  double var_threshold = 0.99;
  int k_cap = 10;
  bool nfr_mise = false;
  bool dump_reps = false;
  std::string out = ".";
};

std::string simulate_config_dump(const DgpConfig& c, const SimulateArgs& a) {
  std::string s = "command = simulate\n";
  s += "n = " + std::to_string(c.n) + "\n";
  s += "n_test = " + std::to_string(c.resolved_n_test()) + "\n";
  s += std::string("curves = ") + to_string(c.curves) + "\n";
  s += std::string("errors = ") + to_string(c.errors) + "\n";
  s += "xi = " + format_double(c.xi) + "\n";
  s += "rho = " + format_double(c.rho) + "\n";
  s += "reps = " + std::to_string(c.reps) + "\n";
  s += "seed = " + std::to_string(c.seed) + "\n";
  s += "threads = " + std::to_string(c.threads) + "\n";
  s += "burn_in = " + std::to_string(c.mcmc.burn_in) + "\n";
  s += "keep = " + std::to_string(c.mcmc.keep) + "\n";
  s += "tau0 = " + format_double(c.mcmc.tau0) + "\n";
  s += "prior = " + a.prior + "\n";
  s += "index_k = " + std::to_string(c.index_k) + "\n";
  s += "var_threshold = " + format_double(c.var_threshold) + "\n";
  s += "k_cap = " + std::to_string(c.k_cap) + "\n";
  s += std::string("nfr_mise = ") + (c.nfr_mise ? "true" : "false") + "\n";
  s += std::string("dump_reps = ") + (a.dump_reps ? "true" : "false") + "\n";
  s += "out = " + a.out + "\n";
  return s;
}

void write_reps_csv(const std::string& path, const ExperimentReport& report) {
  std::string out = "rep,ok,fsim_amse,fsim_amise,fsim_amspe,fsim_cover95";
  for (const char* v : kNfrVariants)
    out += std::string(",") + v + "_amse," + v + "_amspe";
  out += "\n";
  for (const RepResult& r : report.reps) {
    out += std::to_string(r.rep) + "," + (r.ok ? "1" : "0");
    const auto cell = [&](double v) {
      out += ",";
      if (r.ok && !std::isnan(v)) out += format_double(v);
    };
    cell(r.fsim.mse);
    cell(r.fsim.mise);
    cell(r.fsim.mspe);
    cell(r.fsim.coverage);
    for (const RepMetrics& m : r.nfr) {
      cell(m.mse);
      cell(m.mspe);
    }
    out += "\n";
  }
  write_text_file(path, out);
}

int run_simulate(const SimulateArgs& args) {
  DgpConfig cfg;
  cfg.n = args.n;
  cfg.n_test = args.n_test;
  cfg.curves = curve_kind_from_string(args.curves);
  cfg.errors = error_structure_from_string(args.errors);
  cfg.xi = args.xi;
  cfg.rho = args.rho;
  cfg.reps = args.reps;
  cfg.seed = args.seed;
  cfg.threads = args.threads;
  cfg.mcmc.burn_in = args.burn_in;
  cfg.mcmc.keep = args.keep;
  cfg.mcmc.tau0 = args.tau0;
  cfg.prior = prior_from_name(args.prior);
  cfg.index_k = args.index_k;
  cfg.var_threshold = args.var_threshold;
  cfg.k_cap = args.k_cap;
  cfg.nfr_mise = args.nfr_mise;
  cfg.validate();

  ensure_out_dir(args.out);
  write_text_file(path_join(args.out, "simulate_resolved_config.txt"),
                  simulate_config_dump(cfg, args));

  const ExperimentReport report = run_experiment(cfg);

  const std::string text = report_text(report);
  write_text_file(path_join(args.out, "report.txt"), text);
  write_text_file(path_join(args.out, "report.json"), report_json(report));
  if (args.dump_reps)
    write_reps_csv(path_join(args.out, "replications.csv"), report);
  std::cout << text;

  if (report.failures * 5 > cfg.reps) {  // more than 20% failed
    std::cerr << "error: " << report.failures << " of " << cfg.reps
              << " replications failed\n";
    return 1;
  }
  return 0;
}

// --------------------------------------------------------------------- fit

struct FitArgs {
  std::string curves_path;
  std::string response_path;
  std::string out = ".";
  std::string k = "auto";
  double var_threshold = 0.99;
  int k_cap = 10;
  std::string ar_order = "auto";
  std::string prior = "ig1";
  int burn_in = 1000;
  int keep = 10000;
  double tau0 = 0.1;
  std::uint64_t seed = kDefaultSeed;
  double train_frac = -1.0;
  std::string train_index_path;
  bool dump_chain = false;
};

std::string fit_config_dump(const FitArgs& a) {
  std::string s = "command = fit\n";
  s += "curves = " + a.curves_path + "\n";
  s += "response = " + a.response_path + "\n";
  s += "out = " + a.out + "\n";
  s += "k = " + a.k + "\n";
  s += "var_threshold = " + format_double(a.var_threshold) + "\n";
  s += "k_cap = " + std::to_string(a.k_cap) + "\n";
  s += "ar_order = " + a.ar_order + "\n";
  s += "prior = " + a.prior + "\n";
  s += "burn_in = " + std::to_string(a.burn_in) + "\n";
  s += "keep = " + std::to_string(a.keep) + "\n";
  s += "tau0 = " + format_double(a.tau0) + "\n";
  s += "seed = " + std::to_string(a.seed) + "\n";
  s += "train_frac = " + format_double(a.train_frac) + "\n";
  s += "train_index = " + a.train_index_path + "\n";
  s += std::string("dump_chain = ") + (a.dump_chain ? "true" : "false") + "\n";
  return s;
}

std::vector<int> read_index_file(const std::string& path, int n) {
  const std::string text = read_text_file(path);
  std::vector<int> idx;
  std::size_t start = 0;
  int line_no = 0;
  while (start <= text.size()) {
    const std::size_t end = text.find('\n', start);
    std::string line = text.substr(
        start, end == std::string::npos ? std::string::npos : end - start);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    bool blank = line.find_first_not_of(" \t") == std::string::npos;
    if (!blank) {
      errno = 0;
      char* endp = nullptr;
      const long v = std::strtol(line.c_str(), &endp, 10);
      if (errno != 0 || endp == line.c_str() || *endp != '\0')
        throw io_error(path + ": line " + std::to_string(line_no) +
                       ": not an integer: \"" + line + "\"");
      if (v < 0 || v >= n)
        throw io_error(path + ": line " + std::to_string(line_no) +
                       ": index " + std::to_string(v) + " out of range [0, " +
                       std::to_string(n) + ")");
      idx.push_back(static_cast<int>(v));
    }
    if (end == std::string::npos) break;
    start = end + 1;
  }
  if (idx.empty()) throw io_error(path + ": no indices found");
  std::vector<bool> seen(n, false);
  for (int v : idx) {
    if (seen[v]) throw io_error(path + ": duplicate index " + std::to_string(v));
    seen[v] = true;
  }
  return idx;
}

int run_fit(const FitArgs& args) {
  CurveSet curves = read_curves_csv(args.curves_path);
  const Eigen::VectorXd y = read_response_csv(args.response_path);
  if (y.size() != curves.n())
    throw io_error(args.response_path + ": " + std::to_string(y.size()) +
                   " responses for " + std::to_string(curves.n()) + " curves");
  const bool was_sparse = curves.sparse();
  if (was_sparse) curves = impute_sparse(curves);

  // train/test split
  std::vector<int> train_idx(curves.n());
  std::iota(train_idx.begin(), train_idx.end(), 0);
  std::vector<int> test_idx;
  if (args.train_frac > 0.0 && !args.train_index_path.empty())
    throw std::invalid_argument("--train-frac and --train-index are mutually exclusive");
  if (args.train_frac > 0.0) {
    if (args.train_frac >= 1.0)
      throw std::invalid_argument("--train-frac must lie in (0, 1)");
    const int n_train = std::max(4, static_cast<int>(std::lround(
                                        args.train_frac * curves.n())));
    if (n_train >= curves.n())
      throw std::invalid_argument("--train-frac leaves no test curves");
    Rng rng(derive_seed(args.seed, 1000003));  // split stream, fixed tag
    std::vector<int> shuffled = train_idx;
    for (int i = static_cast<int>(shuffled.size()) - 1; i > 0; --i)
      std::swap(shuffled[i], shuffled[rng.bounded(i + 1)]);
    train_idx.assign(shuffled.begin(), shuffled.begin() + n_train);
    test_idx.assign(shuffled.begin() + n_train, shuffled.end());
    std::sort(train_idx.begin(), train_idx.end());
    std::sort(test_idx.begin(), test_idx.end());
  } else if (!args.train_index_path.empty()) {
    train_idx = read_index_file(args.train_index_path, curves.n());
    std::vector<bool> in_train(curves.n(), false);
    for (int v : train_idx) in_train[v] = true;
    for (int i = 0; i < curves.n(); ++i)
      if (!in_train[i]) test_idx.push_back(i);
  }

  FitOptions fo;
  if (args.k != "auto") fo.K = std::stoi(args.k);
  fo.var_threshold = args.var_threshold;
  fo.k_cap = args.k_cap;
  fo.ar_order = args.ar_order == "auto" ? -1 : std::stoi(args.ar_order);
  fo.prior = prior_from_name(args.prior);
  fo.mcmc.burn_in = args.burn_in;
  fo.mcmc.keep = args.keep;
  fo.mcmc.tau0 = args.tau0;
  fo.mcmc.seed = args.seed;

  const CurveSet train = subset(curves, train_idx);
  Eigen::VectorXd y_train(train_idx.size());
  for (std::size_t i = 0; i < train_idx.size(); ++i)
    y_train[static_cast<int>(i)] = y[train_idx[i]];

  ensure_out_dir(args.out);
  write_text_file(path_join(args.out, "fit_resolved_config.txt"),
                  fit_config_dump(args));

  const FsimModel model = fit_fsim(train, y_train, fo);

  const double mse = model.residuals.squaredNorm() / model.residuals.size();
  double mspe = std::numeric_limits<double>::quiet_NaN();
  double coverage = std::numeric_limits<double>::quiet_NaN();
  if (!test_idx.empty()) {
    Eigen::VectorXd y_test(test_idx.size());
    Eigen::VectorXd pred(test_idx.size());
    std::vector<Interval> ivs;
    ivs.reserve(test_idx.size());
    for (std::size_t i = 0; i < test_idx.size(); ++i) {
      const Eigen::VectorXd curve = curves.values.row(test_idx[i]).transpose();
      y_test[static_cast<int>(i)] = y[test_idx[i]];
      pred[static_cast<int>(i)] = model.predict_point(curve);
      ivs.push_back(model.predict_interval(curve, 0.95));
    }
    mspe = (y_test - pred).squaredNorm() / pred.size();
    coverage = empirical_coverage(ivs, y_test);
  }

  std::vector<std::string> warnings;
  for (const ParamSummary& p : model.chain.params)
    if (std::isfinite(p.geweke_z) && std::abs(p.geweke_z) > 3.0)
      warnings.push_back("chain for " + p.name +
                         " may not have converged (|geweke z| = " +
                         format_double(std::abs(p.geweke_z)) + " > 3)");

  write_text_file(path_join(args.out, "model.json"), model_to_json(model));
  if (args.dump_chain)
    write_chain_csv(path_join(args.out, "chain.csv"), model.chain);

  json rep;
  rep["n"] = curves.n();
  rep["n_train"] = static_cast<int>(train_idx.size());
  rep["n_test"] = static_cast<int>(test_idx.size());
  rep["imputed_sparse"] = was_sparse;
  rep["K"] = static_cast<int>(model.fit.beta_coeffs.size());
  rep["ar_order"] = static_cast<int>(model.rho.size());
  rep["h"] = model.h;
  rep["b"] = model.b;
  json rho = json::array();
  for (int i = 0; i < model.rho.size(); ++i) rho.push_back(model.rho[i]);
  rep["rho"] = rho;
  rep["mse"] = mse;
  rep["mspe"] = mspe;
  rep["cover95"] = coverage;
  rep["fallback_count"] = model.fallback_count;
  rep["chain"] = chain_json(model.chain);
  rep["warnings"] = warnings;
  write_text_file(path_join(args.out, "fit_report.json"), rep.dump(2) + "\n");

  std::string text;
  char line[256];
  std::snprintf(line, sizeof(line),
                "fit: n_train=%d n_test=%d K=%d ar_order=%d\n",
                static_cast<int>(train_idx.size()),
                static_cast<int>(test_idx.size()),
                static_cast<int>(model.fit.beta_coeffs.size()),
                static_cast<int>(model.rho.size()));
  text += line;
  std::snprintf(line, sizeof(line), "h = %.6f  b = %.6f", model.h, model.b);
  text += line;
  for (int i = 0; i < model.rho.size(); ++i) {
    std::snprintf(line, sizeof(line), "  rho%d = %.6f", i + 1, model.rho[i]);
    text += line;
  }
  text += "\n";
  std::snprintf(line, sizeof(line), "in-sample loo mse = %.6f\n", mse);
  text += line;
  if (!test_idx.empty()) {
    std::snprintf(line, sizeof(line), "held-out mspe = %.6f  cover95 = %.3f\n",
                  mspe, coverage);
    text += line;
  }
  text += "\n" + chain_table(model.chain);
  for (const std::string& w : warnings) text += "warning: " + w + "\n";
  write_text_file(path_join(args.out, "fit_report.txt"), text);
  std::cout << text;

  if (!warnings.empty()) {
    for (const std::string& w : warnings) std::cerr << "warning: " << w << "\n";
    return 1;
  }
  return 0;
}

// ----------------------------------------------------------------- predict

struct PredictArgs {
  std::string model_path;
  std::string curves_path;
  std::string truth_path;
  double level = 0.95;
  std::string cdf_grid = "adaptive";
  std::string out = ".";
};

std::string predict_config_dump(const PredictArgs& a) {
  std::string s = "command = predict\n";
  s += "model = " + a.model_path + "\n";
  s += "curves = " + a.curves_path + "\n";
  s += "truth = " + a.truth_path + "\n";
  s += "level = " + format_double(a.level) + "\n";
  s += "cdf_grid = " + a.cdf_grid + "\n";
  s += "out = " + a.out + "\n";
  return s;
}

int run_predict(const PredictArgs& args) {
  if (!(args.level > 0.0 && args.level < 1.0))
    throw std::invalid_argument("--level must lie in (0, 1)");
  if (args.cdf_grid != "adaptive" && args.cdf_grid != "fixed")
    throw std::invalid_argument("--cdf-grid must be adaptive or fixed");
  const bool fixed_grid = args.cdf_grid == "fixed";

  const FsimModel model = model_from_json(read_text_file(args.model_path));
  CurveSet curves = read_curves_csv(args.curves_path);
  const Eigen::VectorXd& mg = model.fit.basis.grid;
  if (curves.grid.size() != mg.size())
    throw io_error(args.curves_path + ": grid has " +
                   std::to_string(curves.grid.size()) + " points but the model has " +
                   std::to_string(mg.size()));
  for (int j = 0; j < mg.size(); ++j)
    if (std::abs(curves.grid[j] - mg[j]) > 1e-12)
      throw io_error(args.curves_path + ": grid point " + std::to_string(j + 1) +
                     " differs from the model grid");
  if (curves.sparse()) curves = impute_sparse(curves);

  Eigen::VectorXd y_true;
  if (!args.truth_path.empty()) {
    y_true = read_response_csv(args.truth_path);
    if (y_true.size() != curves.n())
      throw io_error(args.truth_path + ": " + std::to_string(y_true.size()) +
                     " values for " + std::to_string(curves.n()) + " curves");
  }

  std::vector<Interval> intervals;
  intervals.reserve(curves.n());
  for (int i = 0; i < curves.n(); ++i)
    intervals.push_back(model.predict_interval(curves.values.row(i).transpose(),
                                               args.level, fixed_grid));

  ensure_out_dir(args.out);
  write_text_file(path_join(args.out, "predict_resolved_config.txt"),
                  predict_config_dump(args));
  write_intervals_csv(path_join(args.out, "intervals.csv"), intervals, y_true);
  write_plot_tsv(path_join(args.out, "plot_data.tsv"), intervals, y_true);

  double mean_width = 0.0;
  for (const Interval& iv : intervals) mean_width += iv.hi - iv.lo;
  mean_width /= intervals.size();

  json summary;
  summary["n"] = curves.n();
  summary["level"] = args.level;
  summary["cdf_grid"] = args.cdf_grid;
  summary["mean_width"] = mean_width;
  if (y_true.size() > 0) {
    summary["coverage"] = empirical_coverage(intervals, y_true);
    summary["mspe"] = [&] {
      double s = 0.0;
      for (int i = 0; i < y_true.size(); ++i) {
        const double d = y_true[i] - intervals[i].point;
        s += d * d;
      }
      return s / y_true.size();
    }();
  }
  write_text_file(path_join(args.out, "predict_summary.json"),
                  summary.dump(2) + "\n");

  std::cout << "predicted " << curves.n() << " curves at level " << args.level
            << " (mean interval width " << format_double(mean_width) << ")";
  if (y_true.size() > 0)
    std::cout << ", coverage " << format_double(summary["coverage"].get<double>());
  std::cout << "\n";
  return 0;
}

// ---------------------------------------------------------------- diagnose

struct DiagnoseArgs {
  std::string chain_path;
  int max_lag = 50;
  std::string out = ".";
};

int run_diagnose(const DiagnoseArgs& args) {
  std::vector<std::string> names;
  const Eigen::MatrixXd draws = read_chain_csv(args.chain_path, &names);
  if (draws.rows() < 100)
    throw io_error(args.chain_path + ": needs >= 100 draws, found " +
                   std::to_string(draws.rows()));
  if (args.max_lag < 1 || args.max_lag >= draws.rows())
    throw std::invalid_argument("--max-lag must lie in [1, draws)");

  const std::vector<ParamSummary> diags = chain_diagnostics(draws);

  ensure_out_dir(args.out);
  std::string cfg = "command = diagnose\n";
  cfg += "chain = " + args.chain_path + "\n";
  cfg += "max_lag = " + std::to_string(args.max_lag) + "\n";
  cfg += "out = " + args.out + "\n";
  write_text_file(path_join(args.out, "diagnose_resolved_config.txt"), cfg);

  std::string text;
  char line[256];
  std::snprintf(line, sizeof(line), "%-6s %12s %12s %12s %8s %9s\n", "param",
                "mean", "se", "batch_se", "sif", "geweke_z");
  text += line;
  text += "------ ------------ ------------ ------------ -------- ---------\n";
  json jparams = json::array();
  for (std::size_t c = 0; c < diags.size(); ++c) {
    const ParamSummary& p = diags[c];
    const double mean = draws.col(static_cast<int>(c)).mean();
    std::snprintf(line, sizeof(line), "%-6s %12.6f %12.6f %12.6f %8.3f %9.3f\n",
                  names[c].c_str(), mean, p.se, p.batch_se, p.sif, p.geweke_z);
    text += line;
    jparams.push_back({{"name", names[c]},
                       {"mean", mean},
                       {"se", p.se},
                       {"batch_se", p.batch_se},
                       {"sif", p.sif},
                       {"geweke_z", p.geweke_z}});
  }
  write_text_file(path_join(args.out, "diagnostics.tsv"), text);
  json jout;
  jout["draws"] = static_cast<int>(draws.rows());
  jout["params"] = jparams;
  write_text_file(path_join(args.out, "diagnostics.json"), jout.dump(2) + "\n");

  std::string acf_text = "# lag";
  for (const std::string& n : names) acf_text += "\t" + n;
  acf_text += "\n";
  std::vector<Eigen::VectorXd> acfs;
  for (int c = 0; c < draws.cols(); ++c)
    acfs.push_back(acf(draws.col(c), args.max_lag));
  for (int lag = 0; lag <= args.max_lag; ++lag) {
    acf_text += std::to_string(lag);
    for (const Eigen::VectorXd& a : acfs) acf_text += "\t" + format_double(a[lag]);
    acf_text += "\n";
  }
  write_text_file(path_join(args.out, "acf.tsv"), acf_text);

  std::cout << text;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"functional single index regression with Bayesian bandwidths"};
  app.require_subcommand(1);

  SimulateArgs sim;
  CLI::App* simulate = app.add_subcommand(
      "simulate", "synthetic-data error study (regression, density, prediction)");
  simulate->set_config("--config", "", "read options from a key=value file");
  simulate->add_option("--n", sim.n, "training curves per replication");
  simulate->add_option("--n-test", sim.n_test, "test curves (-1 = n/2)");
  simulate->add_option("--curves", sim.curves, "curve design")
      ->check(CLI::IsMember({"smooth", "rough", "sparse-smooth", "sparse-rough"}));
  simulate->add_option("--errors", sim.errors, "error structure")
      ->check(CLI::IsMember({"iid", "ar1"}));
  simulate->add_option("--xi", sim.xi, "noise-to-signal variance ratio");
  simulate->add_option("--rho", sim.rho, "AR(1) coefficient (ar1 errors)");
  simulate->add_option("--reps", sim.reps, "replications");
  CLI::Option* sim_seed = simulate->add_option("--seed", sim.seed, "master seed");
  simulate->add_option("--threads", sim.threads, "worker threads (0 = hardware)");
  simulate->add_option("--burn-in", sim.burn_in, "discarded sampler iterations");
  simulate->add_option("--keep", sim.keep, "kept sampler iterations");
  simulate->add_option("--tau0", sim.tau0, "initial proposal scale");
  simulate->add_option("--prior", sim.prior,
                       "squared-bandwidth prior: ig1=IG(1,0.05), ig2=IG(2,0.1), cauchy=Cauchy(0,1)")
      ->check(CLI::IsMember({"ig1", "ig2", "cauchy"}));
  simulate->add_option("--index-k", sim.index_k, "index components (0 = auto)");
  simulate->add_option("--var-threshold", sim.var_threshold,
                       "variance fraction for the automatic K rule");
  simulate->add_option("--k-cap", sim.k_cap, "cap for the automatic K rule");
  simulate->add_flag("--nfr-mise", sim.nfr_mise,
                     "also estimate error-density MISE for the semimetric fits");
  simulate->add_flag("--dump-reps", sim.dump_reps, "write per-replication CSV");
  simulate->add_option("--out", sim.out, "output directory");

  FitArgs fit;
  CLI::App* fit_cmd =
      app.add_subcommand("fit", "fit the single index model to curve/response files");
  fit_cmd->set_config("--config", "", "read options from a key=value file");
  fit_cmd->add_option("--curves", fit.curves_path, "curve CSV (first row = grid)")
      ->required();
  fit_cmd->add_option("--response", fit.response_path, "response CSV (one value per line)")
      ->required();
  fit_cmd->add_option("--out", fit.out, "output directory");
  fit_cmd->add_option("--k", fit.k, "index components: auto or a positive integer");
  fit_cmd->add_option("--var-threshold", fit.var_threshold,
                      "variance fraction for the automatic K rule");
  fit_cmd->add_option("--k-cap", fit.k_cap, "cap for the automatic K rule");
  fit_cmd->add_option("--ar-order", fit.ar_order, "error AR order: auto or 0..3");
  fit_cmd->add_option("--prior", fit.prior,
                      "squared-bandwidth prior: ig1, ig2, cauchy")
      ->check(CLI::IsMember({"ig1", "ig2", "cauchy"}));
  fit_cmd->add_option("--burn-in", fit.burn_in, "discarded sampler iterations");
  fit_cmd->add_option("--keep", fit.keep, "kept sampler iterations");
  fit_cmd->add_option("--tau0", fit.tau0, "initial proposal scale");
  CLI::Option* fit_seed = fit_cmd->add_option("--seed", fit.seed, "sampler seed");
  fit_cmd->add_option("--train-frac", fit.train_frac,
                      "train on a seeded random fraction, hold the rest out");
  fit_cmd->add_option("--train-index", fit.train_index_path,
                      "file of 0-based training row indices (one per line)");
  fit_cmd->add_flag("--dump-chain", fit.dump_chain, "write kept draws to chain.csv");

  PredictArgs pred;
  CLI::App* predict =
      app.add_subcommand("predict", "forecast new curves with prediction intervals");
  predict->set_config("--config", "", "read options from a key=value file");
  predict->add_option("--model", pred.model_path, "model.json from fit")->required();
  predict->add_option("--curves", pred.curves_path, "curve CSV on the model grid")
      ->required();
  predict->add_option("--truth", pred.truth_path, "optional true responses CSV");
  predict->add_option("--level", pred.level, "interval level in (0, 1)");
  predict->add_option("--cdf-grid", pred.cdf_grid,
                      "error CDF grid: adaptive (centre +- 5 spread) or fixed [-5, 5]")
      ->check(CLI::IsMember({"adaptive", "fixed"}));
  predict->add_option("--out", pred.out, "output directory");

  DiagnoseArgs diag;
  CLI::App* diagnose =
      app.add_subcommand("diagnose", "convergence diagnostics for a dumped chain");
  diagnose->set_config("--config", "", "read options from a key=value file");
  diagnose->add_option("--chain", diag.chain_path, "chain.csv from fit --dump-chain")
      ->required();
  diagnose->add_option("--max-lag", diag.max_lag, "autocorrelation lags");
  diagnose->add_option("--out", diag.out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (simulate->parsed()) {
      sim.seed = resolve_seed(sim_seed, sim.seed);
      return run_simulate(sim);
    }
    if (fit_cmd->parsed()) {
      fit.seed = resolve_seed(fit_seed, fit.seed);
      return run_fit(fit);
    }
    if (predict->parsed()) return run_predict(pred);
    if (diagnose->parsed()) return run_diagnose(diag);
  } catch (const io_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

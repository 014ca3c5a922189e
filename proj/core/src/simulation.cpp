#include "fsim/simulation.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <memory>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

#include "fsim/error_model.hpp"
#include "fsim/forecast.hpp"
#include "fsim/model.hpp"
#include "fsim/quadrature.hpp"
#include "fsim/semimetric.hpp"

namespace fsim {

using nlohmann::json;

namespace {
constexpr int kGridSize = 100;
constexpr int kSparseObserved = 30;
constexpr double kCoverageLevel = 0.95;
const double kNaN = std::numeric_limits<double>::quiet_NaN();
}  // namespace

const char* to_string(CurveKind k) {
  switch (k) {
    case CurveKind::smooth: return "smooth";
    case CurveKind::rough: return "rough";
    case CurveKind::sparse_smooth: return "sparse-smooth";
    case CurveKind::sparse_rough: return "sparse-rough";
  }
  return "?";
}

const char* to_string(ErrorStructure e) {
  return e == ErrorStructure::iid ? "iid" : "ar1";
}

CurveKind curve_kind_from_string(const std::string& s) {
  if (s == "smooth") return CurveKind::smooth;
  if (s == "rough") return CurveKind::rough;
  if (s == "sparse-smooth") return CurveKind::sparse_smooth;
  if (s == "sparse-rough") return CurveKind::sparse_rough;
  throw std::invalid_argument("unknown curve kind: " + s);
}

ErrorStructure error_structure_from_string(const std::string& s) {
  if (s == "iid") return ErrorStructure::iid;
  if (s == "ar1") return ErrorStructure::ar1;
  throw std::invalid_argument("unknown error structure: " + s);
}

void DgpConfig::validate() const {
  if (n < 10) throw std::invalid_argument("DgpConfig: n must be >= 10");
  if (resolved_n_test() < 1) throw std::invalid_argument("DgpConfig: n_test must be >= 1");
  if (!(xi > 0.0)) throw std::invalid_argument("DgpConfig: xi must be > 0");
  if (!(std::abs(rho) < 1.0)) throw std::invalid_argument("DgpConfig: |rho| must be < 1");
  if (reps < 1) throw std::invalid_argument("DgpConfig: reps must be >= 1");
  if (threads < 0) throw std::invalid_argument("DgpConfig: threads must be >= 0");
  if (index_k < 0) throw std::invalid_argument("DgpConfig: index_k must be >= 0");
  if (!(var_threshold > 0.0 && var_threshold <= 1.0))
    throw std::invalid_argument("DgpConfig: var_threshold must lie in (0, 1]");
  if (k_cap < 1) throw std::invalid_argument("DgpConfig: k_cap must be >= 1");
  mcmc.validate();
}

CurveSet gen_curves(int n, CurveKind kind, Rng& rng) {
  if (n < 1) throw std::invalid_argument("gen_curves: n must be >= 1");
  const bool rough = kind == CurveKind::rough || kind == CurveKind::sparse_rough;
  const bool sparse =
      kind == CurveKind::sparse_smooth || kind == CurveKind::sparse_rough;

  CurveSet out;
  out.grid = uniform_grid(0.0, 1.0, kGridSize);
  out.values.resize(n, kGridSize);
  if (sparse) out.mask.setConstant(n, kGridSize, false);

  std::vector<int> idx(kGridSize);
  for (int i = 0; i < n; ++i) {
    const double a = rng.uniform();
    const double b = rng.uniform();
    const double c = rng.uniform();
    for (int j = 0; j < kGridSize; ++j) {
      const double t = out.grid[j];
      double v = a * std::cos(2.0 * M_PI * t) + b * std::sin(4.0 * M_PI * t) +
                 2.0 * c * (t - 0.25) * (t - 0.5);
      if (rough) v += rng.uniform(-0.1, 0.1);
      out.values(i, j) = v;
    }
    if (sparse) {
      // partial Fisher-Yates: first kSparseObserved entries form the sample
      for (int j = 0; j < kGridSize; ++j) idx[j] = j;
      for (int k = 0; k < kSparseObserved; ++k) {
        const int pick = k + static_cast<int>(rng.bounded(kGridSize - k));
        std::swap(idx[k], idx[pick]);
        out.mask(i, idx[k]) = true;
      }
    }
  }
  return out;
}

Eigen::VectorXd true_beta(const Eigen::VectorXd& grid) {
  Eigen::VectorXd beta(grid.size());
  for (int j = 0; j < grid.size(); ++j) beta[j] = std::sin(M_PI * grid[j]);
  return beta;
}

Eigen::VectorXd true_index(const CurveSet& curves) {
  const Eigen::VectorXd beta = true_beta(curves.grid);
  const Eigen::VectorXd w = trapezoid_weights(curves.grid);
  return curves.values * (w.array() * beta.array()).matrix();
}

double true_link(double x) {
  const double u = x - 0.15;
  return 100.0 * u * u * u;
}

Eigen::VectorXd true_link(const Eigen::VectorXd& index) {
  Eigen::VectorXd m(index.size());
  for (int i = 0; i < index.size(); ++i) m[i] = true_link(index[i]);
  return m;
}

Eigen::VectorXd gen_ar1_path(int n, double sigma2_marginal, double rho, Rng& rng) {
  if (n < 1) throw std::invalid_argument("gen_ar1_path: n must be >= 1");
  if (!(std::abs(rho) < 1.0))
    throw std::invalid_argument("gen_ar1_path: |rho| must be < 1");
  if (!(sigma2_marginal >= 0.0))
    throw std::invalid_argument("gen_ar1_path: variance must be >= 0");
  const double sd_marginal = std::sqrt(sigma2_marginal);
  const double sd_innov = std::sqrt(sigma2_marginal * (1.0 - rho * rho));
  Eigen::VectorXd x(n);
  x[0] = rng.normal(0.0, sd_marginal);  // stationary start
  for (int t = 1; t < n; ++t) x[t] = rho * x[t - 1] + rng.normal(0.0, sd_innov);
  return x;
}

ResponseSample gen_response(const CurveSet& curves, ErrorStructure errors,
                            double xi, double rho, Rng& rng,
                            double sigma2_override) {
  if (!(xi >= 0.0)) throw std::invalid_argument("gen_response: xi must be >= 0");
  ResponseSample out;
  // the truth is evaluated on the underlying dense values, masks notwithstanding
  out.m = true_link(true_index(curves));
  const int n = static_cast<int>(out.m.size());

  if (sigma2_override >= 0.0) {
    out.sigma2 = sigma2_override;
  } else {
    if (n < 2) throw std::invalid_argument("gen_response: needs n >= 2 to scale noise");
    const double mean = out.m.mean();
    out.sigma2 = xi * (out.m.array() - mean).square().sum() / (n - 1.0);
  }

  if (errors == ErrorStructure::iid) {
    const double sd = std::sqrt(out.sigma2);
    out.eps.resize(n);
    for (int i = 0; i < n; ++i) out.eps[i] = rng.normal(0.0, sd);
  } else {
    out.eps = gen_ar1_path(n, out.sigma2, rho, rng);
  }
  out.y = out.m + out.eps;
  return out;
}

double mise_grid(const std::function<double(double)>& f,
                 const std::function<double(double)>& g, double lo, double hi) {
  if (!(hi > lo)) throw std::invalid_argument("mise_grid: hi must exceed lo");
  const double step = (hi - lo) / 1000.0;
  double acc = 0.0;
  for (int i = 0; i <= 1000; ++i) {
    const double x = lo + step * i;
    const double d = f(x) - g(x);
    acc += d * d;
  }
  return acc * step;
}

RepResult run_replication(const DgpConfig& cfg, int rep_index) {
  RepResult rep;
  rep.rep = rep_index;
  Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(rep_index)));

  // data (train, then test with the training noise variance)
  const CurveSet train_raw = gen_curves(cfg.n, cfg.curves, rng);
  const ResponseSample resp = gen_response(train_raw, cfg.errors, cfg.xi, cfg.rho, rng);
  const CurveSet test_raw = gen_curves(cfg.resolved_n_test(), cfg.curves, rng);
  const ResponseSample resp_test = gen_response(test_raw, cfg.errors, cfg.xi,
                                                cfg.rho, rng, resp.sigma2);
  const CurveSet train = impute_sparse(train_raw);
  const CurveSet test = impute_sparse(test_raw);
  const int n_test = test.n();

  // single index model with Bayesian bandwidths
  FitOptions fo;
  fo.K = cfg.index_k;
  fo.var_threshold = cfg.var_threshold;
  fo.k_cap = cfg.k_cap;
  fo.ar_order = cfg.errors == ErrorStructure::ar1 ? 1 : 0;
  fo.prior = cfg.prior;
  fo.mcmc = cfg.mcmc;
  fo.mcmc.seed = rng.child_seed();
  const FsimModel model = fit_fsim(train, resp.y, fo);

  const Eigen::VectorXd fsim_loo = resp.y - model.residuals;
  rep.fsim.mse = (resp.m - fsim_loo).squaredNorm() / cfg.n;

  // error-density discrepancy vs the true N(0, sigma2) marginal
  const double sigma = std::sqrt(resp.sigma2);
  const auto truth_pdf = [sigma](double x) {
    const double u = x / sigma;
    return std::exp(-0.5 * u * u) / (sigma * std::sqrt(2.0 * M_PI));
  };
  const KernelErrorDensity dens = model.density();
  const double scale = ar_marginal_sd_ratio(model.rho);
  const auto est_pdf = [&dens, scale](double x) {
    return error_density_pdf(dens, x / scale) / scale;
  };
  rep.fsim.mise = mise_grid(truth_pdf, est_pdf);

  std::vector<Interval> intervals;
  intervals.reserve(n_test);
  Eigen::VectorXd fsim_pred(n_test);
  for (int i = 0; i < n_test; ++i) {
    const Eigen::VectorXd curve = test.values.row(i).transpose();
    fsim_pred[i] = model.predict_point(curve);
    intervals.push_back(model.predict_interval(curve, kCoverageLevel));
  }
  rep.fsim.mspe = (resp_test.m - fsim_pred).squaredNorm() / n_test;
  rep.fsim.coverage = empirical_coverage(intervals, resp_test.y);

  // kernel regressions on semimetric distances (iid error form)
  for (std::size_t v = 0; v < kNfrVariants.size(); ++v) {
    Eigen::MatrixXd dist;
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> new_dist;
    if (v == 0 || v == 1) {
      const int order = static_cast<int>(v) + 1;
      auto sm = std::make_shared<DerivSemimetric>(make_deriv_semimetric(train, order));
      dist = sm->train_distances();
      new_dist = [sm](const Eigen::VectorXd& c) { return sm->distances_to(c); };
    } else {
      const int k = static_cast<int>(v) - 1;  // pca1, pca2, pca3
      auto sm = std::make_shared<PcaSemimetric>(make_pca_semimetric(train, k));
      dist = sm->train_distances();
      new_dist = [sm](const Eigen::VectorXd& c) { return sm->distances_to(c); };
    }

    const ResidualModel data = make_distance_model(dist, resp.y);
    McmcConfig mc = cfg.mcmc;
    mc.seed = rng.child_seed();
    const ChainSummary chain = run_chain(data, 0, cfg.prior, mc);
    const double h = chain.mean_h();

    RepMetrics& met = rep.nfr[v];
    const Eigen::VectorXd eps = data.residuals(h);
    met.mse = (resp.m - (resp.y - eps)).squaredNorm() / cfg.n;

    Eigen::VectorXd pred(n_test);
    for (int i = 0; i < n_test; ++i) {
      const Eigen::VectorXd d_new = new_dist(test.values.row(i).transpose());
      pred[i] = nw_estimate(NwModel{d_new, resp.y, h}, 0.0).value;
    }
    met.mspe = (resp_test.m - pred).squaredNorm() / n_test;

    if (cfg.nfr_mise) {
      const KernelErrorDensity nd{eps, chain.mean_b()};
      const auto nfr_pdf = [&nd](double x) { return error_density_pdf(nd, x); };
      met.mise = mise_grid(truth_pdf, nfr_pdf);
    } else {
      met.mise = kNaN;
    }
    met.coverage = kNaN;
  }

  rep.ok = true;
  return rep;
}

namespace {

MetricAgg aggregate_metric(const std::vector<RepResult>& reps,
                           const std::function<double(const RepResult&)>& pick) {
  MetricAgg agg;
  double sum = 0.0;
  for (const RepResult& r : reps) {
    if (!r.ok) continue;
    const double v = pick(r);
    if (std::isnan(v)) continue;
    sum += v;
    ++agg.count;
  }
  if (agg.count == 0) {
    agg.mean = agg.sd = kNaN;
    return agg;
  }
  agg.mean = sum / agg.count;
  double ss = 0.0;
  for (const RepResult& r : reps) {
    if (!r.ok) continue;
    const double v = pick(r);
    if (std::isnan(v)) continue;
    ss += (v - agg.mean) * (v - agg.mean);
  }
  agg.sd = agg.count > 1 ? std::sqrt(ss / (agg.count - 1)) : 0.0;
  return agg;
}

void aggregate(ExperimentReport& report) {
  const auto method_report = [&](const std::string& name,
                                 const std::function<const RepMetrics&(const RepResult&)>& pick) {
    MethodReport mr;
    mr.name = name;
    mr.mse = aggregate_metric(report.reps, [&](const RepResult& r) { return pick(r).mse; });
    mr.mspe = aggregate_metric(report.reps, [&](const RepResult& r) { return pick(r).mspe; });
    mr.mise = aggregate_metric(report.reps, [&](const RepResult& r) { return pick(r).mise; });
    mr.coverage =
        aggregate_metric(report.reps, [&](const RepResult& r) { return pick(r).coverage; });
    return mr;
  };
  report.methods.clear();
  report.methods.push_back(method_report(
      "fsim", [](const RepResult& r) -> const RepMetrics& { return r.fsim; }));
  for (std::size_t v = 0; v < kNfrVariants.size(); ++v)
    report.methods.push_back(method_report(
        kNfrVariants[v],
        [v](const RepResult& r) -> const RepMetrics& { return r.nfr[v]; }));
  report.failures = 0;
  report.failure_messages.clear();
  for (const RepResult& r : report.reps) {
    if (r.ok) continue;
    ++report.failures;
    report.failure_messages.push_back("rep " + std::to_string(r.rep) + ": " + r.error);
  }
}

}  // namespace

ExperimentReport run_experiment(const DgpConfig& cfg) {
  cfg.validate();
  ExperimentReport report;
  report.cfg = cfg;
  report.reps.assign(cfg.reps, RepResult{});

  int threads = cfg.threads > 0
                    ? cfg.threads
                    : static_cast<int>(std::thread::hardware_concurrency());
  if (threads < 1) threads = 1;
  threads = std::min(threads, cfg.reps);

  std::atomic<int> next{0};
  const auto worker = [&]() {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= cfg.reps) return;
      try {
        report.reps[i] = run_replication(cfg, i);
      } catch (const std::exception& e) {
        report.reps[i].rep = i;
        report.reps[i].ok = false;
        report.reps[i].error = e.what();
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  aggregate(report);
  report.notes.push_back(
      "amse/amspe are mean squared errors against the true regression function "
      "(leave-one-out in sample, plug-in out of sample).");
  report.notes.push_back(
      "amise compares the fitted error density with the true N(0, sigma2) marginal "
      "on the fixed [-5, 5] grid of 1001 points; under ar1 errors the innovation "
      "density is rescaled to the marginal by the stationary sd ratio.");
  report.notes.push_back(
      "cover95 is the empirical coverage of 95% prediction intervals on the test set.");
  return report;
}

namespace {

std::string fmt(double v, int width = 10) {
  char buf[64];
  if (std::isnan(v)) {
    std::snprintf(buf, sizeof(buf), "%*s", width, "-");
  } else {
    std::snprintf(buf, sizeof(buf), "%*.*f", width, 6, v);
  }
  return buf;
}

}  // namespace

std::string report_text(const ExperimentReport& report) {
  const DgpConfig& c = report.cfg;
  std::string out;
  char line[256];
  out += "simulation report\n";
  std::snprintf(line, sizeof(line),
                "n=%d n_test=%d curves=%s errors=%s xi=%g reps=%d seed=%llu",
                c.n, c.resolved_n_test(), to_string(c.curves), to_string(c.errors),
                c.xi, c.reps, static_cast<unsigned long long>(c.seed));
  out += line;
  if (c.errors == ErrorStructure::ar1) {
    std::snprintf(line, sizeof(line), " rho=%g", c.rho);
    out += line;
  }
  out += "\n\n";
  std::snprintf(line, sizeof(line), "%-8s %-8s %10s %10s %5s\n", "method",
                "metric", "mean", "sd", "reps");
  out += line;
  out += "-------- -------- ---------- ---------- -----\n";
  const auto row = [&](const std::string& name, const std::string& metric,
                       const MetricAgg& agg) {
    if (agg.count == 0 && std::isnan(agg.mean)) return;  // metric not computed
    std::snprintf(line, sizeof(line), "%-8s %-8s %s %s %5d\n", name.c_str(),
                  metric.c_str(), fmt(agg.mean).c_str(), fmt(agg.sd).c_str(),
                  agg.count);
    out += line;
  };
  for (const MethodReport& m : report.methods) {
    row(m.name, "amse", m.mse);
    row(m.name, "amise", m.mise);
    row(m.name, "amspe", m.mspe);
    row(m.name, "cover95", m.coverage);
  }
  std::snprintf(line, sizeof(line), "\nfailures: %d of %d\n", report.failures,
                c.reps);
  out += line;
  for (const std::string& msg : report.failure_messages) out += "  " + msg + "\n";
  out += "notes:\n";
  for (const std::string& note : report.notes) out += "  - " + note + "\n";
  return out;
}

std::string report_json(const ExperimentReport& report) {
  const DgpConfig& c = report.cfg;
  json j;
  j["config"] = {
      {"n", c.n},
      {"n_test", c.resolved_n_test()},
      {"curves", to_string(c.curves)},
      {"errors", to_string(c.errors)},
      {"xi", c.xi},
      {"rho", c.errors == ErrorStructure::ar1 ? json(c.rho) : json()},
      {"reps", c.reps},
      {"seed", c.seed},
      {"burn_in", c.mcmc.burn_in},
      {"keep", c.mcmc.keep},
      {"index_k", c.index_k},
      {"var_threshold", c.var_threshold},
      {"k_cap", c.k_cap},
  };
  json methods = json::array();
  const auto agg_json = [](const MetricAgg& a) {
    json e;
    e["mean"] = a.mean;
    e["sd"] = a.sd;
    e["count"] = a.count;
    return e;
  };
  for (const MethodReport& m : report.methods) {
    json e;
    e["name"] = m.name;
    e["amse"] = agg_json(m.mse);
    e["amise"] = agg_json(m.mise);
    e["amspe"] = agg_json(m.mspe);
    e["cover95"] = agg_json(m.coverage);
    methods.push_back(e);
  }
  j["methods"] = methods;
  j["failures"] = report.failures;
  j["failure_messages"] = report.failure_messages;
  j["notes"] = report.notes;
  json reps = json::array();
  for (const RepResult& r : report.reps) {
    json e;
    e["rep"] = r.rep;
    e["ok"] = r.ok;
    if (!r.ok) {
      e["error"] = r.error;
    } else {
      e["fsim"] = {{"amse", r.fsim.mse},
                   {"amise", r.fsim.mise},
                   {"amspe", r.fsim.mspe},
                   {"cover95", r.fsim.coverage}};
      for (std::size_t v = 0; v < kNfrVariants.size(); ++v) {
        json nf;
        nf["amse"] = r.nfr[v].mse;
        nf["amspe"] = r.nfr[v].mspe;
        if (!std::isnan(r.nfr[v].mise)) nf["amise"] = r.nfr[v].mise;
        e[kNfrVariants[v]] = nf;
      }
    }
    reps.push_back(e);
  }
  j["replications"] = reps;
  return j.dump(2) + "\n";
}

}  // namespace fsim

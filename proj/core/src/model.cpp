#include "fsim/model.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "fsim/errors.hpp"
#include "fsim/error_model.hpp"
#include "fsim/nadaraya_watson.hpp"

namespace fsim {

using nlohmann::json;

void FitOptions::validate() const {
  if (K < 0) throw std::invalid_argument("FitOptions: K must be >= 0 (0 = auto)");
  if (!(var_threshold > 0.0 && var_threshold <= 1.0))
    throw std::invalid_argument("FitOptions: var_threshold must lie in (0, 1]");
  if (k_cap < 1) throw std::invalid_argument("FitOptions: k_cap must be >= 1");
  if (ar_order < -1 || ar_order > 3)
    throw std::invalid_argument("FitOptions: ar_order must be -1 (auto) or 0..3");
  mcmc.validate();
}

NwModel FsimModel::smoother() const { return NwModel{fit.z(), y, h}; }

KernelErrorDensity FsimModel::density() const {
  return KernelErrorDensity{innovations, b};
}

double FsimModel::predict_point(const Eigen::VectorXd& curve) const {
  return point_forecast(fit, smoother(), curve);
}

Interval FsimModel::predict_interval(const Eigen::VectorXd& curve, double level,
                                     bool fixed_grid) const {
  return prediction_interval(predict_point(curve), density(), level, fixed_grid,
                             ar_marginal_sd_ratio(rho));
}

int select_ar_order_aicc(const Eigen::VectorXd& eps, int max_order) {
  if (max_order < 0) throw std::invalid_argument("select_ar_order_aicc: max_order < 0");
  const int m = static_cast<int>(eps.size());
  // shrink the candidate range until the common estimation sample is usable
  int pmax = max_order;
  while (pmax > 0 && (m - pmax) < pmax + 8) --pmax;
  if (pmax == 0) return 0;
  const int me = m - pmax;  // common sample size across candidate orders

  int best_p = 0;
  double best_aicc = std::numeric_limits<double>::infinity();
  for (int p = 0; p <= pmax; ++p) {
    double sigma2;
    if (p == 0) {
      sigma2 = eps.tail(me).squaredNorm() / me;
    } else {
      Eigen::MatrixXd x(me, p);
      Eigen::VectorXd b(me);
      for (int t = 0; t < me; ++t) {
        b[t] = eps[pmax + t];
        for (int j = 1; j <= p; ++j) x(t, j - 1) = eps[pmax + t - j];
      }
      const Eigen::VectorXd coef =
          x.colPivHouseholderQr().solve(b);
      sigma2 = (b - x * coef).squaredNorm() / me;
    }
    if (!(sigma2 > 0.0)) return 0;  // degenerate (e.g. all-zero residuals)
    const int k = p + 1;
    if (me - k - 1 <= 0) continue;
    const double aicc =
        me * std::log(sigma2) + 2.0 * k * me / static_cast<double>(me - k - 1);
    if (aicc < best_aicc) {
      best_aicc = aicc;
      best_p = p;
    }
  }
  return best_p;
}

FsimModel fit_fsim(const CurveSet& curves, const Eigen::VectorXd& y,
                   const FitOptions& opts) {
  opts.validate();
  curves.validate();
  if (curves.sparse())
    throw std::invalid_argument("fit_fsim: curves must be dense (impute_sparse first)");
  const int n = curves.n();
  if (y.size() != n) throw std::invalid_argument("fit_fsim: y size != n");

  const int k_basis = std::min(n - 1, curves.t());
  const FpcaBasis basis = fpca(curves, k_basis);
  int K = opts.K;
  if (K == 0)
    K = choose_k(basis.eigenvalues, basis.total_variance, opts.var_threshold,
                 opts.k_cap);
  if (K > k_basis) throw std::invalid_argument("fit_fsim: K exceeds min(n-1, T)");

  FsimModel model;
  model.fit = estimate_index(basis, curves, y, K);
  model.y = y;
  const Eigen::VectorXd z = model.fit.z();

  int p = opts.ar_order;
  if (p < 0) {
    // pilot residuals at a rule-of-thumb bandwidth on the standardised index
    const double h0 = 1.06 * std::pow(static_cast<double>(n), -0.2);
    p = select_ar_order_aicc(nw_loo_residuals(z, y, h0), 3);
  }
  if (n - p < 4) throw std::invalid_argument("fit_fsim: too few observations for AR order");

  const ResidualModel data = make_index_model(z, y);
  model.chain = run_chain(data, p, opts.prior, opts.mcmc);
  model.h = model.chain.mean_h();
  model.b = model.chain.mean_b();
  model.rho = model.chain.mean_rho();
  if (p > 0 && !ar_stationary(model.rho)) {
    // posterior mean fell outside the stationary region (possible for p >= 3,
    // whose region is non-convex): use the kept draw closest to the mean
    int best = 0;
    double best_gap = std::numeric_limits<double>::infinity();
    for (int i = 0; i < model.chain.draws.rows(); ++i) {
      const double gap =
          (model.chain.draws.row(i).tail(p).transpose() - model.rho).squaredNorm();
      if (gap < best_gap) {
        best_gap = gap;
        best = i;
      }
    }
    model.rho = model.chain.draws.row(best).tail(p).transpose();
  }
  model.fit.h = model.h;
  model.residuals = data.residuals(model.h, &model.fallback_count);
  model.innovations = ar_filter(model.residuals, model.rho);
  return model;
}

namespace {

json vec_to_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Eigen::VectorXd vec_from_json(const json& a) {
  Eigen::VectorXd v(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    v[static_cast<int>(i)] = a[i].is_null()
                                 ? std::numeric_limits<double>::quiet_NaN()
                                 : a[i].get<double>();
  return v;
}

json mat_to_json(const Eigen::MatrixXd& m) {
  json a = json::array();
  for (int i = 0; i < m.rows(); ++i) a.push_back(vec_to_json(m.row(i).transpose()));
  return a;
}

Eigen::MatrixXd mat_from_json(const json& a, int cols_hint) {
  if (a.empty()) return Eigen::MatrixXd(0, cols_hint);
  const int rows = static_cast<int>(a.size());
  const int cols = static_cast<int>(a[0].size());
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i) m.row(i) = vec_from_json(a[i]).transpose();
  return m;
}

double num_or_nan(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

}  // namespace

std::string model_to_json(const FsimModel& model) {
  json j;
  j["format"] = "fsim-model";
  j["version"] = 1;
  j["grid"] = vec_to_json(model.fit.basis.grid);
  j["mean_curve"] = vec_to_json(model.fit.basis.mean);
  j["eigenfunctions"] = mat_to_json(model.fit.basis.eigenfunctions);
  j["eigenvalues"] = vec_to_json(model.fit.basis.eigenvalues);
  j["total_variance"] = model.fit.basis.total_variance;
  j["beta_coeffs"] = vec_to_json(model.fit.beta_coeffs);
  j["beta_curve"] = vec_to_json(model.fit.beta_curve);
  j["index"] = vec_to_json(model.fit.index);
  j["index_mean"] = model.fit.index_mean;
  j["index_sd"] = model.fit.index_sd;
  j["y"] = vec_to_json(model.y);
  j["h"] = model.h;
  j["b"] = model.b;
  j["rho"] = vec_to_json(model.rho);
  j["residuals"] = vec_to_json(model.residuals);
  j["innovations"] = vec_to_json(model.innovations);
  j["fallback_count"] = model.fallback_count;

  json chain;
  chain["names"] = model.chain.names;
  json params = json::array();
  for (const ParamSummary& p : model.chain.params) {
    json e;
    e["name"] = p.name;
    e["mean"] = p.mean;
    e["lower"] = p.lower;
    e["upper"] = p.upper;
    e["se"] = p.se;
    e["batch_se"] = p.batch_se;
    e["sif"] = p.sif;
    e["geweke_z"] = p.geweke_z;
    e["accept_rate"] = p.accept_rate;
    e["final_tau"] = p.final_tau;
    params.push_back(e);
  }
  chain["params"] = params;
  j["chain"] = chain;
  return j.dump(2) + "\n";
}

FsimModel model_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw io_error(std::string("model JSON parse error: ") + e.what());
  }
  try {
    if (j.value("format", std::string()) != "fsim-model")
      throw io_error("model JSON: missing or wrong \"format\" marker");
    FsimModel m;
    m.fit.basis.grid = vec_from_json(j.at("grid"));
    m.fit.basis.mean = vec_from_json(j.at("mean_curve"));
    m.fit.basis.eigenfunctions =
        mat_from_json(j.at("eigenfunctions"), static_cast<int>(m.fit.basis.grid.size()));
    m.fit.basis.eigenvalues = vec_from_json(j.at("eigenvalues"));
    m.fit.basis.total_variance = j.at("total_variance").get<double>();
    m.fit.beta_coeffs = vec_from_json(j.at("beta_coeffs"));
    m.fit.beta_curve = vec_from_json(j.at("beta_curve"));
    m.fit.index = vec_from_json(j.at("index"));
    m.fit.index_mean = j.at("index_mean").get<double>();
    m.fit.index_sd = j.at("index_sd").get<double>();
    m.y = vec_from_json(j.at("y"));
    m.h = j.at("h").get<double>();
    m.b = j.at("b").get<double>();
    m.fit.h = m.h;
    m.rho = vec_from_json(j.at("rho"));
    m.residuals = vec_from_json(j.at("residuals"));
    m.innovations = vec_from_json(j.at("innovations"));
    m.fallback_count = j.at("fallback_count").get<int>();
    const json& chain = j.at("chain");
    m.chain.names = chain.at("names").get<std::vector<std::string>>();
    for (const json& e : chain.at("params")) {
      ParamSummary p;
      p.name = e.at("name").get<std::string>();
      p.mean = num_or_nan(e.at("mean"));
      p.lower = num_or_nan(e.at("lower"));
      p.upper = num_or_nan(e.at("upper"));
      p.se = num_or_nan(e.at("se"));
      p.batch_se = num_or_nan(e.at("batch_se"));
      p.sif = num_or_nan(e.at("sif"));
      p.geweke_z = num_or_nan(e.at("geweke_z"));
      p.accept_rate = num_or_nan(e.at("accept_rate"));
      p.final_tau = num_or_nan(e.at("final_tau"));
      m.chain.params.push_back(p);
    }
    return m;
  } catch (const json::exception& e) {
    throw io_error(std::string("model JSON: ") + e.what());
  }
}

}  // namespace fsim

#include <benchmark/benchmark.h>

#include "fsim/error_model.hpp"
#include "fsim/fpca.hpp"
#include "fsim/mcmc.hpp"
#include "fsim/nadaraya_watson.hpp"
#include "fsim/rng.hpp"
#include "fsim/simulation.hpp"
#include "fsim/single_index.hpp"

namespace {

using namespace fsim;

// shared fixtures at the simulation-study scale (n curves on 100 grid points)
CurveSet bench_curves(int n) {
  Rng rng(1);
  return gen_curves(n, CurveKind::smooth, rng);
}

Eigen::VectorXd bench_response(const CurveSet& curves) {
  Rng rng(2);
  return gen_response(curves, ErrorStructure::iid, 0.1, 0.0, rng).y;
}

void bm_kernel_likelihood(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  Rng rng(3);
  Eigen::VectorXd eps(m);
  for (int i = 0; i < m; ++i) eps[i] = rng.normal();
  Eigen::VectorXd rho(1);
  rho << 0.4;
  for (auto _ : state)
    benchmark::DoNotOptimize(log_kernel_likelihood(eps, 0.5, rho));
}
BENCHMARK(bm_kernel_likelihood)->Arg(60)->Arg(200);

void bm_loo_residuals(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(4);
  Eigen::VectorXd z(n), y(n);
  for (int i = 0; i < n; ++i) {
    z[i] = rng.normal();
    y[i] = std::sin(z[i]) + 0.1 * rng.normal();
  }
  const ResidualModel data = make_index_model(z, y);
  for (auto _ : state) benchmark::DoNotOptimize(data.residuals(0.4));
}
BENCHMARK(bm_loo_residuals)->Arg(60)->Arg(200);

void bm_nw_fit(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(5);
  Eigen::VectorXd x(n), y(n), x0(n);
  for (int i = 0; i < n; ++i) {
    x[i] = rng.normal();
    y[i] = std::cos(x[i]);
    x0[i] = rng.normal();
  }
  const NwModel model{x, y, 0.3};
  for (auto _ : state) benchmark::DoNotOptimize(nw_fit(model, x0));
}
BENCHMARK(bm_nw_fit)->Arg(60)->Arg(500);

void bm_fpca(benchmark::State& state) {
  const CurveSet curves = bench_curves(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(fpca(curves, 5));
}
BENCHMARK(bm_fpca)->Arg(60)->Arg(200);

void bm_chain_sweep(benchmark::State& state) {
  const CurveSet curves = bench_curves(60);
  const Eigen::VectorXd y = bench_response(curves);
  const SindexFit fit = estimate_index(curves, y, 3);
  const ResidualModel data = make_index_model(fit.z(), y);
  McmcConfig cfg;
  cfg.burn_in = 10;
  cfg.keep = static_cast<int>(state.range(0));
  cfg.seed = 6;
  const PriorSpec prior = PriorSpec::ig(1.0, 0.05);
  for (auto _ : state)
    benchmark::DoNotOptimize(run_chain(data, 1, prior, cfg));
  state.SetItemsProcessed(state.iterations() * (cfg.burn_in + cfg.keep));
}
BENCHMARK(bm_chain_sweep)->Arg(100)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

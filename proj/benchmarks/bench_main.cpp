// Microbenchmarks for the hot paths: one Gibbs sweep (constant-parameter and
// drifting-coefficient), the simulation smoother, factor extraction, forecast
// moment recursion, and the rank-correlation metric.

#include <benchmark/benchmark.h>

#include <Eigen/Dense>
#include <numeric>
#include <vector>

#include "rtbvar/factors.hpp"
#include "rtbvar/ffbs.hpp"
#include "rtbvar/forecast.hpp"
#include "rtbvar/panel.hpp"
#include "rtbvar/rng.hpp"
#include "rtbvar/sampler.hpp"
#include "rtbvar/scores.hpp"

namespace {

using namespace rtbvar;

Panel make_panel(int t_len, int m, std::uint64_t seed) {
  Rng rng(seed);
  Panel panel;
  panel.start = Month{1995, 1};
  for (int j = 0; j < m; ++j) panel.codes.push_back("S" + std::to_string(j + 1));
  panel.values.resize(t_len, m);
  panel.mask.setConstant(t_len, m, true);
  Eigen::VectorXd prev = Eigen::VectorXd::Zero(m);
  for (int t = 0; t < t_len; ++t) {
    prev = 0.5 * prev + rng.normal_vector(m);
    panel.values.row(t) = prev.transpose();
  }
  return panel;
}

void bm_gibbs_sweep(benchmark::State& state) {
  const int t_len = static_cast<int>(state.range(0));
  const int m = static_cast<int>(state.range(1));
  const bool tvp = state.range(2) != 0;
  Panel panel = make_panel(t_len, m, 42);
  SamplerConfig cfg;
  cfg.lags = 2;
  cfg.tvp = tvp;
  ChainState st = init_chain(panel, cfg, 7);
  for (auto _ : state) {
    gibbs_sweep(st, panel, cfg);
    benchmark::DoNotOptimize(st.sweep_index);
  }
}
BENCHMARK(bm_gibbs_sweep)
    ->Args({150, 3, 0})
    ->Args({150, 3, 1})
    ->Args({300, 7, 0})
    ->Args({300, 7, 1})
    ->Unit(benchmark::kMillisecond);

void bm_ffbs_random_walk(benchmark::State& state) {
  const int t_len = static_cast<int>(state.range(0));
  const int k = static_cast<int>(state.range(1));
  Rng rng(11);
  Eigen::VectorXd y = rng.normal_vector(t_len);
  Eigen::MatrixXd loadings(t_len, k);
  for (int t = 0; t < t_len; ++t) loadings.row(t) = rng.normal_vector(k).transpose();
  Eigen::VectorXd obs_var = Eigen::VectorXd::Constant(t_len, 0.5);
  for (auto _ : state) {
    Eigen::MatrixXd path = ffbs_random_walk(y, loadings, obs_var, rng);
    benchmark::DoNotOptimize(path.data());
  }
}
BENCHMARK(bm_ffbs_random_walk)->Args({300, 7})->Args({300, 15})->Unit(benchmark::kMicrosecond);

void bm_extract_pcs(benchmark::State& state) {
  const int t_len = static_cast<int>(state.range(0));
  const int n = static_cast<int>(state.range(1));
  Panel panel = make_panel(t_len, n, 99);
  standardize(panel);
  for (auto _ : state) {
    FactorSet fs = extract_pcs(panel, 5);
    benchmark::DoNotOptimize(fs.scores.data());
  }
}
BENCHMARK(bm_extract_pcs)->Args({300, 20})->Args({600, 120})->Unit(benchmark::kMicrosecond);

void bm_forecast_moments(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  Rng rng(5);
  Eigen::MatrixXd a1 = 0.4 * Eigen::MatrixXd::Identity(m, m);
  Eigen::MatrixXd a2 = 0.1 * Eigen::MatrixXd::Identity(m, m);
  Companion comp = build_companion({a1, a2}, Eigen::VectorXd::Zero(m));
  Eigen::MatrixXd b(m, m);
  for (int i = 0; i < m; ++i) b.row(i) = rng.normal_vector(m).transpose();
  Eigen::MatrixXd omega = b * b.transpose() + Eigen::MatrixXd::Identity(m, m);
  Eigen::VectorXd s0 = rng.normal_vector(2 * m);
  for (auto _ : state) {
    ForecastMoments fm = forecast_moments(comp, omega, s0, 12);
    benchmark::DoNotOptimize(fm.cov.data());
  }
}
BENCHMARK(bm_forecast_moments)->Arg(3)->Arg(7)->Arg(22)->Unit(benchmark::kMicrosecond);

void bm_kendall_tau(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(21);
  std::vector<double> a(static_cast<size_t>(n)), b(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    a[static_cast<size_t>(i)] = rng.normal();
    b[static_cast<size_t>(i)] = rng.normal();
  }
  for (auto _ : state) benchmark::DoNotOptimize(kendall_tau(a, b));
}
BENCHMARK(bm_kendall_tau)->Arg(12)->Arg(100)->Unit(benchmark::kNanosecond);

}  // namespace

BENCHMARK_MAIN();

// Acceptance gate: ten end-to-end checks of the library against independent
// oracles (Monte-Carlo conditioning, brute-force Gaussian algebra, exact
// enumeration) and full-pipeline properties (degenerate-design identities,
// directional noise effects, bitwise determinism, real-data smoke).
//
// Usage: rtbvar_acceptance --criterion N   (N in 1..10)
// Prints exactly one "CRITERION N: PASS/FAIL - detail" line and exits 0/1.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <map>
#include <nlohmann/json.hpp>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "rtbvar/csv.hpp"
#include "rtbvar/experiment.hpp"
#include "rtbvar/ffbs.hpp"
#include "rtbvar/forecast.hpp"
#include "rtbvar/horseshoe.hpp"
#include "rtbvar/nowcast.hpp"
#include "rtbvar/sampler.hpp"
#include "rtbvar/scores.hpp"
#include "rtbvar/special.hpp"
#include "rtbvar/synthetic.hpp"

namespace fs = std::filesystem;
using namespace rtbvar;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

fs::path scratch_dir(const std::string& leaf) {
  fs::path dir = fs::current_path() / "acceptance_scratch" / leaf;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

int worker_count() {
  unsigned hw = std::thread::hardware_concurrency();
  return static_cast<int>(std::min(4u, hw ? hw : 1u));
}

// Gaussian log density with a precomputed Cholesky factor (fast path for the
// importance-sampling oracle, which evaluates millions of densities).
struct CholDensity {
  Eigen::MatrixXd l;
  Eigen::VectorXd mean;
  double log_norm = 0.0;

  explicit CholDensity(const Eigen::VectorXd& mu, const Eigen::MatrixXd& cov)
      : l(robust_cholesky(cov, "oracle density")), mean(mu) {
    double log_det = 0.0;
    for (Eigen::Index i = 0; i < l.rows(); ++i) log_det += std::log(l(i, i));
    log_norm = -0.5 * static_cast<double>(l.rows()) * std::log(2.0 * M_PI) - log_det;
  }
  double operator()(const Eigen::VectorXd& x) const {
    Eigen::VectorXd z = l.triangularView<Eigen::Lower>().solve(x - mean);
    return log_norm - 0.5 * z.squaredNorm();
  }
  Eigen::VectorXd sample(Rng& rng) const { return mean + l * rng.normal_vector(l.rows()); }
};

// ---------------------------------------------------------------------------
// Criterion 1: partition_moments vs a self-normalized importance-sampling
// conditioning oracle. The oracle never partitions anything: it only evaluates
// JOINT densities, proposing from the missing block's marginal, so agreement
// cross-checks the conditioning algebra end to end.

Outcome criterion_1() {
  const int n_instances = 100;
  const int n_draws = 200000;
  Rng design(907);
  double worst_mean_sigmas = 0.0, worst_cov_rel = 0.0;

  for (int inst = 0; inst < n_instances; ++inst) {
    const int m = 2 + static_cast<int>(design.uniform() * 4.0);  // 2..5
    Eigen::VectorXd mu = design.normal_vector(m);
    Eigen::MatrixXd b(m, m);
    for (int i = 0; i < m; ++i) b.row(i) = design.normal_vector(m).transpose();
    Eigen::MatrixXd sigma = b * b.transpose() + 0.5 * m * Eigen::MatrixXd::Identity(m, m);

    std::vector<Eigen::Index> missing;
    for (int i = 0; i < m; ++i)
      if (design.uniform() < 0.5) missing.push_back(i);
    if (missing.empty()) missing.push_back(static_cast<Eigen::Index>(design.uniform() * m));
    const int q = static_cast<int>(missing.size());
    std::vector<Eigen::Index> observed;
    for (int i = 0; i < m; ++i)
      if (!std::count(missing.begin(), missing.end(), i)) observed.push_back(i);

    // Realized values: one draw from the joint law.
    CholDensity joint(mu, sigma);
    Eigen::VectorXd x_full = joint.sample(design);
    Eigen::VectorXd realized(m - q);
    for (int j = 0; j < m - q; ++j) realized[j] = x_full[observed[static_cast<size_t>(j)]];

    ConditionalMoments cm = partition_moments(mu, sigma, missing, realized);

    // Proposal: the missing block's own marginal (covariance dominates the
    // conditional one, so weights stay bounded).
    Eigen::VectorXd mu1(q);
    Eigen::MatrixXd s11(q, q);
    for (int i = 0; i < q; ++i) {
      mu1[i] = mu[missing[static_cast<size_t>(i)]];
      for (int j = 0; j < q; ++j)
        s11(i, j) = sigma(missing[static_cast<size_t>(i)], missing[static_cast<size_t>(j)]);
    }
    CholDensity prop(mu1, s11);

    Rng mc(mix_seed(914, "inst", inst));
    Eigen::MatrixXd xs(n_draws, q);
    Eigen::VectorXd logw(n_draws);
    Eigen::VectorXd full(m);
    for (int j = 0; j < m - q; ++j) full[observed[static_cast<size_t>(j)]] = realized[j];
    for (int d = 0; d < n_draws; ++d) {
      Eigen::VectorXd x1 = prop.sample(mc);
      for (int i = 0; i < q; ++i) full[missing[static_cast<size_t>(i)]] = x1[i];
      xs.row(d) = x1.transpose();
      logw[d] = joint(full) - prop(x1);
    }
    logw.array() -= logw.maxCoeff();
    Eigen::VectorXd w = logw.array().exp();
    const double wsum = w.sum();

    Eigen::VectorXd mean_mc = xs.transpose() * w / wsum;
    Eigen::MatrixXd centered = xs.rowwise() - mean_mc.transpose();
    Eigen::MatrixXd cov_mc =
        centered.transpose() * w.asDiagonal() * centered / wsum;

    // Linearized self-normalized-IS standard error per mean component.
    for (int i = 0; i < q; ++i) {
      double se2 = (w.array().square() * centered.col(i).array().square()).sum() / (wsum * wsum);
      double se = std::sqrt(se2);
      double sigmas = std::abs(mean_mc[i] - cm.mean[i]) / std::max(se, 1e-12);
      worst_mean_sigmas = std::max(worst_mean_sigmas, sigmas);
    }
    double rel = (cov_mc - cm.cov).norm() / std::max(cm.cov.norm(), 1e-12);
    worst_cov_rel = std::max(worst_cov_rel, rel);
  }

  Outcome out;
  out.pass = worst_mean_sigmas <= 3.0 && worst_cov_rel < 0.02;
  std::ostringstream os;
  os << n_instances << " random conditioning instances, " << n_draws
     << " weighted draws each: worst mean deviation " << worst_mean_sigmas
     << " MC se (limit 3), worst covariance Frobenius error " << worst_cov_rel * 100.0
     << "% (limit 2%)";
  out.detail = os.str();
  return out;
}

// ---------------------------------------------------------------------------
// Criterion 2: ffbs_random_walk vs brute-force joint-Gaussian conditioning on
// scalar-state problems with three observations.

Outcome criterion_2() {
  struct Instance {
    Eigen::Vector3d c, v, y;
  };
  std::vector<Instance> instances = {
      {{1.0, 1.0, 1.0}, {1.0, 1.0, 1.0}, {0.5, -0.2, 0.9}},
      {{0.8, -1.1, 0.5}, {0.5, 1.5, 0.7}, {1.0, -0.4, 0.3}},
      {{2.0, 0.1, -0.7}, {2.0, 0.4, 1.0}, {-1.2, 0.8, 0.0}},
  };
  const int n_draws = 100000;
  double worst = 0.0;
  Rng rng(777);

  for (const auto& in : instances) {
    // Prior of (x1,x2,x3) under a random walk pinned at x0 = 0: cov min(t,s).
    Eigen::Matrix3d p0;
    for (int t = 0; t < 3; ++t)
      for (int s = 0; s < 3; ++s) p0(t, s) = static_cast<double>(std::min(t, s) + 1);
    Eigen::Matrix3d cmat = in.c.asDiagonal();
    Eigen::Matrix3d rinv = in.v.cwiseInverse().asDiagonal();
    Eigen::Matrix3d post_cov = (p0.inverse() + cmat.transpose() * rinv * cmat).inverse();
    Eigen::Vector3d post_mean = post_cov * cmat.transpose() * rinv * in.y;

    Eigen::MatrixXd loadings(3, 1);
    loadings << in.c[0], in.c[1], in.c[2];
    Eigen::Vector3d s = Eigen::Vector3d::Zero();
    Eigen::Matrix3d s2 = Eigen::Matrix3d::Zero();
    for (int d = 0; d < n_draws; ++d) {
      Eigen::MatrixXd path = ffbs_random_walk(in.y, loadings, in.v, rng);
      Eigen::Vector3d x(path(1, 0), path(2, 0), path(3, 0));
      s += x;
      s2 += x * x.transpose();
    }
    Eigen::Vector3d mean = s / n_draws;
    Eigen::Matrix3d cov = s2 / n_draws - mean * mean.transpose();
    worst = std::max(worst, (mean - post_mean).cwiseAbs().maxCoeff());
    worst = std::max(worst, (cov - post_cov).cwiseAbs().maxCoeff());
  }

  Outcome out;
  out.pass = worst < 1e-2;
  std::ostringstream os;
  os << instances.size() << " scalar-state smoothing problems, " << n_draws
     << " draws each: worst mean/covariance deviation from brute-force conditioning " << worst
     << " (limit 0.01)";
  out.detail = os.str();
  return out;
}

// ---------------------------------------------------------------------------
// Criterion 3: the four shrinkage conditionals against their inverse-Gamma
// laws by Kolmogorov-Smirnov at n = 1e5, alpha = 0.01.

Outcome criterion_3() {
  const int n = 100000;
  const double crit = 1.628 / std::sqrt(static_cast<double>(n));  // alpha = 0.01

  struct Case {
    const char* name;
    double shape, scale;
    std::function<double(Rng&)> draw;
  };
  double b = 2.0, lambda = 4.0, zeta = 0.5, psi = 1.7, varphi = 3.0;
  Eigen::VectorXd bv(3), psv(3);
  bv << 1.0, -2.0, 0.5;
  psv << 0.5, 2.0, 1.0;
  std::vector<Case> cases = {
      {"psi", 1.0, 1.0 / zeta + b * b / (2.0 * lambda),
       [&](Rng& r) { return hs_draw_psi(b, lambda, zeta, r); }},
      {"lambda", 2.0, 1.0 / varphi + 0.5 * (bv.array().square() / psv.array()).sum(),
       [&](Rng& r) { return hs_draw_lambda(bv, psv, varphi, r); }},
      {"zeta", 1.0, 1.0 + 1.0 / psi, [&](Rng& r) { return hs_draw_zeta(psi, r); }},
      {"varphi", 1.0, 1.0 + 1.0 / lambda, [&](Rng& r) { return hs_draw_varphi(lambda, r); }},
  };

  std::ostringstream os;
  bool pass = true;
  Rng rng(333);
  for (auto& c : cases) {
    std::vector<double> samples(n);
    for (int i = 0; i < n; ++i) samples[i] = c.draw(rng);
    double d = ks_statistic(std::move(samples),
                            [&](double x) { return inv_gamma_cdf(c.shape, c.scale, x); });
    pass = pass && d < crit;
    os << c.name << " KS=" << d << " ";
  }
  os << "(critical value " << crit << " at n=" << n << ", alpha=0.01)";
  return {pass, os.str()};
}

// ---------------------------------------------------------------------------
// Criterion 4: constant-parameter recovery on a simulated M=3, P=2, T=400 VAR
// with mild stochastic volatility, full-length chain.

Outcome criterion_4() {
  // Damped-cycle dynamics (complex roots, modulus 0.85-0.95, ~60 degree
  // rotation): large regressor variance with low lag-1/lag-2 collinearity,
  // so every coefficient is sharply identified from T=400 observations.
  const int m = 3, p = 2, t_len = 400;
  Eigen::MatrixXd a1(m, m), a2(m, m);
  a1 << 0.95, 0.00, 0.00, 0.00, 0.90, 0.00, 0.00, 0.00, 0.85;
  a2 << -0.9025, 0.0, 0.0, 0.0, -0.81, 0.0, 0.0, 0.0, -0.7225;
  Eigen::VectorXd icept(m);
  icept << 0.2, -0.1, 0.1;
  Eigen::MatrixXd h_inv = Eigen::MatrixXd::Identity(m, m);
  h_inv(1, 0) = 0.3;
  h_inv(2, 0) = -0.2;
  h_inv(2, 1) = 0.25;
  Eigen::MatrixXd h = h_inv.inverse();

  // Mild SV: log variances around log(0.3^2), slow-moving, small innovations.
  Eigen::Vector3d sv_mu = Eigen::Vector3d::Constant(std::log(0.09));
  const double sv_phi = 0.95, sv_sig = 0.05;

  Rng sim(20260401);
  Eigen::MatrixXd y(t_len, m);
  Eigen::VectorXd w = sv_mu;
  Eigen::VectorXd lag1 = Eigen::VectorXd::Zero(m), lag2 = Eigen::VectorXd::Zero(m);
  for (int t = -100; t < t_len; ++t) {  // burn-in from the origin
    Eigen::VectorXd eps(m);
    for (int i = 0; i < m; ++i) {
      w[i] = sv_mu[i] + sv_phi * (w[i] - sv_mu[i]) + sv_sig * sim.normal();
      eps[i] = std::exp(w[i] / 2.0) * sim.normal();
    }
    Eigen::VectorXd yt = icept + a1 * lag1 + a2 * lag2 + h * eps;
    lag2 = lag1;
    lag1 = yt;
    if (t >= 0) y.row(t) = yt.transpose();
  }

  Panel panel;
  panel.start = Month{1980, 1};
  panel.codes = {"Y1", "Y2", "Y3"};
  panel.values = y;
  panel.mask.setConstant(t_len, m, true);

  SamplerConfig cfg;
  cfg.lags = p;
  cfg.tvp = false;
  cfg.draws = 6000;
  cfg.burn = 2000;
  cfg.thin = 2;
  DrawStore store = run_chain(panel, cfg, 20260402);
  const int n_draws = store.n_draws();

  // Truth in the store's layout: lag-1 block, lag-2 block, intercept.
  Eigen::MatrixXd truth(m, m * p + 1);
  truth << a1, a2, icept;

  int covered = 0, n_coef = m * (m * p + 1);
  double worst_mean_err = 0.0;
  std::vector<double> draws(static_cast<size_t>(n_draws));
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m * p + 1; ++j) {
      for (int s = 0; s < n_draws; ++s) draws[static_cast<size_t>(s)] = store.coeff[s](i, j);
      double mean = std::accumulate(draws.begin(), draws.end(), 0.0) / n_draws;
      worst_mean_err = std::max(worst_mean_err, std::abs(mean - truth(i, j)));
      std::sort(draws.begin(), draws.end());
      double lo = draws[static_cast<size_t>(0.05 * n_draws)];
      double hi = draws[static_cast<size_t>(0.95 * n_draws) - 1];
      if (truth(i, j) >= lo && truth(i, j) <= hi) ++covered;
    }
  }

  Outcome out;
  double cover_frac = static_cast<double>(covered) / n_coef;
  out.pass = worst_mean_err <= 0.1 && cover_frac >= 0.8;
  std::ostringstream os;
  os << n_coef << " coefficients, " << n_draws << " retained draws: worst |posterior mean - truth| "
     << worst_mean_err << " (limit 0.1), 90% interval coverage " << covered << "/" << n_coef
     << " (limit 80%)";
  out.detail = os.str();
  return out;
}

// ---------------------------------------------------------------------------
// Criterion 5: forecast_moments vs one million simulated forecast paths for a
// fixed coefficient draw, plus the exact two-step AR(1) variance.

Outcome criterion_5() {
  // Exact part: AR(1), a = 0.5, unit shock variance, two steps ahead.
  Eigen::MatrixXd a(1, 1);
  a << 0.5;
  Companion ar1 = build_companion({a}, Eigen::VectorXd::Zero(1));
  Eigen::MatrixXd unit(1, 1);
  unit << 1.0;
  Eigen::VectorXd s0(1);
  s0 << 2.0;
  ForecastMoments two = forecast_moments(ar1, unit, s0, 2);
  bool exact_ok = std::abs(two.cov(0, 0) - 1.25) < 1e-12 && std::abs(two.mean[0] - 0.5) < 1e-12;

  // MC part: a fixed M=2, P=2 draw with correlated shocks, horizon 4.
  const int m = 2, h = 4, n_paths = 1000000;
  Eigen::MatrixXd a1(m, m), a2(m, m);
  a1 << 0.5, 0.1, 0.1, 0.4;
  a2 << 0.15, 0.0, -0.05, 0.1;
  Eigen::VectorXd c(m);
  c << 0.2, -0.1;
  Companion comp = build_companion({a1, a2}, c);
  Eigen::MatrixXd omega(m, m);
  omega << 1.0, 0.3, 0.3, 0.8;
  Eigen::VectorXd state(4);
  state << 1.0, -0.5, 0.4, 0.2;
  ForecastMoments fm = forecast_moments(comp, omega, state, h);

  Eigen::MatrixXd l = robust_cholesky(omega, "criterion 5");
  Rng rng(555);
  Eigen::Vector2d sum = Eigen::Vector2d::Zero();
  Eigen::Matrix2d sum2 = Eigen::Matrix2d::Zero();
  for (int d = 0; d < n_paths; ++d) {
    Eigen::Vector2d y1(state[0], state[1]), y2(state[2], state[3]);
    for (int step = 0; step < h; ++step) {
      Eigen::Vector2d yn = c + a1 * y1 + a2 * y2 + l * Eigen::Vector2d(rng.normal(), rng.normal());
      y2 = y1;
      y1 = yn;
    }
    sum += y1;
    sum2 += y1 * y1.transpose();
  }
  Eigen::Vector2d mean = sum / n_paths;
  Eigen::Matrix2d cov = sum2 / n_paths - mean * mean.transpose();

  double worst_sigmas = 0.0;
  for (int i = 0; i < m; ++i) {
    double se = std::sqrt(fm.cov(i, i) / n_paths);
    worst_sigmas = std::max(worst_sigmas, std::abs(mean[i] - fm.mean[i]) / se);
  }
  double cov_rel = (cov - fm.cov).norm() / fm.cov.norm();

  Outcome out;
  out.pass = exact_ok && worst_sigmas <= 3.0 && cov_rel < 0.01;
  std::ostringstream os;
  os << "two-step ar(1) variance 1.25 " << (exact_ok ? "exact" : "WRONG") << "; " << n_paths
     << " simulated paths at h=" << h << ": worst mean deviation " << worst_sigmas
     << " MC se (limit 3), covariance Frobenius error " << cov_rel * 100.0 << "% (limit 1%)";
  out.detail = os.str();
  return out;
}

// ---------------------------------------------------------------------------
// Criterion 6: exact metric identities — rank correlation by enumeration over
// every permutation up to n=6, joint-vs-marginal log scores, RMSE identity.

Outcome criterion_6() {
  // Rank correlation against direct pairwise enumeration.
  long checked = 0;
  bool tau_ok = true;
  for (int n = 2; n <= 6 && tau_ok; ++n) {
    std::vector<double> a(static_cast<size_t>(n)), b(static_cast<size_t>(n));
    std::iota(a.begin(), a.end(), 1.0);
    b = a;
    do {
      int concordant = 0, discordant = 0;
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
          double prod = (a[static_cast<size_t>(i)] - a[static_cast<size_t>(j)]) *
                        (b[static_cast<size_t>(i)] - b[static_cast<size_t>(j)]);
          if (prod > 0) ++concordant;
          if (prod < 0) ++discordant;
        }
      double n0 = 0.5 * n * (n - 1);
      double expect = (concordant - discordant) / n0;
      if (kendall_tau(a, b) != expect) tau_ok = false;
      ++checked;
    } while (std::next_permutation(b.begin(), b.end()) && tau_ok);
  }

  // Joint log score vs sum of marginals under diagonal covariance: holds per
  // Gaussian component, so it must hold for one component and for any number
  // of identical components.
  Eigen::VectorXd realized(3), shift(3), scale(3), mu(3);
  realized << 1.2, -0.7, 0.3;
  shift << 0.5, 1.0, -2.0;
  scale << 2.0, 0.5, 1.5;
  mu << 0.3, -0.2, 0.9;
  Eigen::MatrixXd sig = Eigen::MatrixXd::Zero(3, 3);
  sig(0, 0) = 1.1;
  sig(1, 1) = 0.6;
  sig(2, 2) = 2.3;
  double marg = 0.0;
  for (int i = 0; i < 3; ++i)
    marg += marginal_lpl(realized[i], {{mu[i], sig(i, i)}}, shift[i], scale[i]);
  double max_gap = std::abs(joint_lpl(realized, {{mu, sig}}, shift, scale) - marg);
  max_gap = std::max(max_gap,
                     std::abs(joint_lpl(realized, {{mu, sig}, {mu, sig}, {mu, sig}}, shift, scale) -
                              marg));
  bool joint_ok = max_gap < 1e-10;

  // RMSE identity rmse^2 * T_H == sum of squared errors, exact in binary
  // arithmetic for representable cases.
  bool rmse_ok = true;
  {
    std::vector<std::vector<double>> cases = {
        {1.0, 2.0, 2.0, 4.0},      // mean square 6.25, rmse 2.5
        {2.0, 2.0, 2.0, 2.0},      // mean square 4, rmse 2
        {1.0, 1.0, 7.0, 7.0},      // mean square 25, rmse 5
        {0.5, 0.5, 0.5, 0.5},      // mean square 0.25, rmse 0.5
    };
    for (const auto& fe : cases) {
      double ss = 0.0;
      for (double e : fe) ss += e * e;
      double r = rmse(fe);
      if (r * r * static_cast<double>(fe.size()) != ss) rmse_ok = false;
    }
  }

  Outcome out;
  out.pass = tau_ok && joint_ok && rmse_ok;
  std::ostringstream os;
  os << "rank correlation exact on " << checked << " permutations (n<=6): "
     << (tau_ok ? "yes" : "NO") << "; joint-vs-marginal gap " << max_gap
     << " (limit 1e-10); rmse identity exact: " << (rmse_ok ? "yes" : "NO");
  out.detail = os.str();
  return out;
}

// ---------------------------------------------------------------------------
// Criteria 7-9 share the experiment harness.

ExperimentConfig harness_config(const fs::path& data, Month holdout_start, Month holdout_end,
                                int draws, int burn) {
  ExperimentConfig cfg;
  cfg.dataset = "synthetic";
  cfg.data_dir = data.string();
  cfg.manifest_path = (data / "manifest.csv").string();
  cfg.sample_start = Month{1995, 1};
  cfg.holdout_start = holdout_start;
  cfg.holdout_end = holdout_end;
  cfg.specs = {ModelSpec::parse("small-cp"), ModelSpec::parse("small-tvp"),
               ModelSpec::parse("small-pca-cp")};
  cfg.pca_k = 2;
  cfg.sampler.lags = 2;
  cfg.sampler.draws = draws;
  cfg.sampler.burn = burn;
  cfg.sampler.thin = 2;
  cfg.horizons = {1};
  cfg.jobs = worker_count();
  return cfg;  // seed stays at the library default
}

Outcome criterion_7() {
  fs::path root = scratch_dir("crit7");
  fs::path data = root / "data";
  SyntheticSpec spec;  // zero revision noise, uniform one-month lags
  spec.n_series = 8;
  spec.start = Month{1995, 1};
  spec.warmup = 60;
  spec.n_vintages = 6;
  spec.post_months = 6;
  generate_synthetic_vintages(spec, data.string(), 20260101);

  Month first = spec.start + spec.warmup;
  ExperimentConfig cfg = harness_config(data, first, first + 5, 200, 100);
  cfg.horizons = {1, 3};
  fs::path out = root / "out";
  std::vector<std::string> failures = run_experiment(cfg, out.string());
  if (!failures.empty()) return {false, "cells failed: " + failures.front()};
  evaluate_experiment(cfg, out.string());

  std::string rt = read_text_file((out / "scores" / "summary_realtime.csv").string());
  std::string ps = read_text_file((out / "scores" / "summary_pseudo.csv").string());
  bool identical = rt == ps;

  auto tau_rows = read_csv((out / "scores" / "tau.csv").string());
  int defined = 0;
  bool tau_one = true;
  for (size_t r = 1; r < tau_rows.size(); ++r) {
    if (tau_rows[r][4].empty()) continue;  // all models tied: undefined
    ++defined;
    if (parse_double_field(tau_rows[r][4]) != 1.0) tau_one = false;
  }

  Outcome out_res;
  out_res.pass = identical && tau_one && defined > 0;
  std::ostringstream os;
  os << "zero-noise matched-lag archive: summary tables byte-identical: "
     << (identical ? "yes" : "NO") << "; rank correlation 1 at all " << defined
     << " defined origins: " << (tau_one ? "yes" : "NO");
  out_res.detail = os.str();
  return out_res;
}

// The noisy-vintage experiment behind criteria 8 and 9. Returns the average
// h=1 joint log predictive scores per (information set, model) and the bytes
// of the final summary table.
struct NoiseResult {
  std::map<std::string, std::map<std::string, double>> avg_joint_lps;  // mode -> model
  std::string summary_bytes;
};

NoiseResult run_noise_experiment(const fs::path& root) {
  fs::path data = root / "data";
  SyntheticSpec spec;
  spec.n_series = 8;
  spec.start = Month{1995, 1};
  spec.warmup = 120;
  spec.n_vintages = 24;
  spec.post_months = 12;
  spec.revision_noise_sd = 0.5;  // half of each series' own dispersion
  spec.noise_relative = true;
  generate_synthetic_vintages(spec, data.string(), 20260101);

  Month first = spec.start + spec.warmup;
  ExperimentConfig cfg = harness_config(data, first, first + 23, 6000, 2000);
  fs::path out = root / "out";
  std::vector<std::string> failures = run_experiment(cfg, out.string());
  if (!failures.empty())
    throw std::runtime_error("noise experiment cell failed: " + failures.front());
  evaluate_experiment(cfg, out.string());

  NoiseResult res;
  for (const char* mode : {"realtime", "pseudo"}) {
    auto rows = read_csv((out / "scores" / ("summary_" + std::string(mode) + ".csv")).string());
    // header: model,variable,avg_lps_h1,rank_lps_h1,rmse_h1,rank_rmse_h1
    for (size_t r = 1; r < rows.size(); ++r)
      if (rows[r][1] == "joint") res.avg_joint_lps[mode][rows[r][0]] = parse_double_field(rows[r][2]);
  }
  res.summary_bytes = read_text_file((out / "scores" / "summary_table.csv").string());
  return res;
}

Outcome criterion_8() {
  NoiseResult res = run_noise_experiment(scratch_dir("crit8"));
  int better = 0, total = 0;
  std::ostringstream os;
  os << "average h=1 joint log score (pseudo vs real-time): ";
  for (const auto& [model, ps] : res.avg_joint_lps["pseudo"]) {
    double rt = res.avg_joint_lps["realtime"].at(model);
    ++total;
    if (ps > rt) ++better;
    os << model << " " << ps << " vs " << rt << "; ";
  }
  os << "pseudo better for " << better << "/" << total << " specs (needs >= 2/3)";
  return {better >= 2 && total == 3, os.str()};
}

Outcome criterion_9() {
  NoiseResult a = run_noise_experiment(scratch_dir("crit9a"));
  NoiseResult b = run_noise_experiment(scratch_dir("crit9b"));
  std::uint64_t da = fnv1a(a.summary_bytes), db = fnv1a(b.summary_bytes);
  Outcome out;
  out.pass = a.summary_bytes == b.summary_bytes;
  out.detail = "summary table digests " + hex64(da) + " and " + hex64(db) +
               (out.pass ? " identical across two full runs" : " DIFFER");
  return out;
}

// ---------------------------------------------------------------------------
// Criterion 10: real-data smoke. With RTBVAR_FRED_CSV set, runs the small
// constant-parameter model pseudo-out-of-sample on that monthly-vintage file;
// otherwise falls back to a bundled-shape synthetic stand-in. Only the shape
// of the deliverable table is asserted.

Outcome criterion_10() {
  fs::path root = scratch_dir("crit10");
  ExperimentConfig cfg;
  cfg.modes = {"pseudo"};
  cfg.specs = {ModelSpec::parse("small-cp")};
  cfg.sampler.lags = 2;
  cfg.sampler.draws = 600;
  cfg.sampler.burn = 200;
  cfg.sampler.thin = 2;
  cfg.horizons = {1, 3, 12};
  cfg.jobs = worker_count();

  std::string source;
  const char* fred = std::getenv("RTBVAR_FRED_CSV");
  if (fred && *fred) {
    cfg.dataset = "us_fredmd";
    cfg.data_dir = root.string();  // unused in pseudo mode
    cfg.final_vintage = fred;
#ifdef RTBVAR_SOURCE_DIR
    cfg.manifest_path = std::string(RTBVAR_SOURCE_DIR) + "/data/manifests/us_fredmd.csv";
#else
    cfg.manifest_path = "data/manifests/us_fredmd.csv";
#endif
    cfg.sample_start = Month{1960, 1};
    Vintage fin = parse_vintage(cfg.final_vintage);
    Month last = fin.month_at(fin.n_months() - 1);
    cfg.holdout_end = last - 11;  // keep every 12-step target inside the data
    cfg.holdout_start = cfg.holdout_end - 11;
    source = std::string("FRED-MD file ") + fred;
  } else {
    fs::path data = root / "data";
    SyntheticSpec spec;  // stand-in with a real-archive shape: many series, mixed lags
    spec.n_series = 15;
    spec.start = Month{1995, 1};
    spec.warmup = 100;
    spec.n_vintages = 12;
    spec.post_months = 12;
    spec.lag_months = {1, 1, 1, 2, 1, 3, 1, 2, 1, 1, 3, 1, 2, 1, 1};
    generate_synthetic_vintages(spec, data.string(), 20260101);
    cfg.dataset = "synthetic";
    cfg.data_dir = data.string();
    cfg.manifest_path = (data / "manifest.csv").string();
    cfg.sample_start = spec.start;
    cfg.holdout_start = spec.start + spec.warmup;
    cfg.holdout_end = cfg.holdout_start + 11;
    source = "synthetic stand-in (set RTBVAR_FRED_CSV for the real file)";
  }

  fs::path out = root / "out";
  std::vector<std::string> failures = run_experiment(cfg, out.string());
  if (!failures.empty()) return {false, "cells failed: " + failures.front()};
  evaluate_experiment(cfg, out.string());
  report_experiment(out.string());

  auto rows = read_csv((out / "report" / "summary_table.csv").string());
  // Header plus (1 model) x (3 focus variables + joint) x 2 rows.
  bool shape_ok = rows.size() == 9;
  size_t expect_fields = 3 + 4 * cfg.horizons.size();
  int level_rows = 0, relative_rows = 0;
  bool fields_ok = true, level_filled = true;
  for (size_t r = 1; r < rows.size() && shape_ok; ++r) {
    if (rows[r].size() != expect_fields) fields_ok = false;
    if (rows[r][2] == "level") {
      ++level_rows;
      if (rows[r][3].empty()) level_filled = false;  // h=1 log score present
    } else if (rows[r][2] == "relative") {
      ++relative_rows;
    }
  }
  shape_ok = shape_ok && fields_ok && level_rows == 4 && relative_rows == 4 && level_filled;

  Outcome res;
  res.pass = shape_ok;
  std::ostringstream os;
  os << "12-month pseudo-out-of-sample run on " << source << ": summary table "
     << (rows.empty() ? 0 : rows.size() - 1) << " rows (expect 8: 1 model x 4 variables x 2), "
     << "shape " << (shape_ok ? "ok" : "WRONG");
  res.detail = os.str();
  return res;
}

}  // namespace

int main(int argc, char** argv) {
  int criterion = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      criterion = std::atoi(argv[i + 1]);
      ++i;
    }
  }
  if (criterion < 1 || criterion > 10) {
    std::fprintf(stderr, "usage: rtbvar_acceptance --criterion N   (N in 1..10)\n");
    return 2;
  }

  using Fn = Outcome (*)();
  static const Fn table[10] = {criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
                               criterion_6, criterion_7, criterion_8, criterion_9, criterion_10};

  auto start = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = table[criterion - 1]();
  } catch (const std::exception& e) {
    out.pass = false;
    out.detail = std::string("exception: ") + e.what();
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  std::printf("CRITERION %d: %s - %s [%.1fs]\n", criterion, out.pass ? "PASS" : "FAIL",
              out.detail.c_str(), secs);
  return out.pass ? 0 : 1;
}

#include "rtbvar/sv.hpp"

#include <cmath>
#include <algorithm>
#include <stdexcept>
#include <vector>

#include "rtbvar/special.hpp"

namespace rtbvar {

namespace {

// 10-component Gaussian mixture approximation to the log chi^2_1 distribution
// (Omori, Chib, Shephard & Nakajima 2007, Table 1): weights, means, variances.
constexpr int kMix = 10;
constexpr double kMixP[kMix] = {0.00609, 0.04775, 0.13057, 0.20674, 0.22715,
                                0.18842, 0.12047, 0.05591, 0.01575, 0.00115};
constexpr double kMixM[kMix] = {1.92677,  1.34744,  0.73504,  0.02266,  -0.85173,
                                -1.97278, -3.46788, -5.55246, -8.68384, -14.65000};
constexpr double kMixV[kMix] = {0.11265, 0.17788, 0.26768, 0.40611, 0.62699,
                                0.98583, 1.57469, 2.54498, 4.16591, 7.33342};

double log_phi_prior(double phi, const SvPrior& prior) {
  if (std::fabs(phi) >= 1.0) return -std::numeric_limits<double>::infinity();
  if (prior.phi_uniform) return 0.0;
  // (phi+1)/2 ~ Beta(a, b); constants cancel in MH ratios.
  double u = 0.5 * (phi + 1.0);
  return (prior.phi_a - 1.0) * std::log(u) + (prior.phi_b - 1.0) * std::log1p(-u);
}

// log density of the stationary initial state: x ~ N(center, s2/(1-phi^2)).
double log_init(double x, double center, double s2, double phi) {
  double v = s2 / (1.0 - phi * phi);
  return log_normal_pdf(x, center, v);
}

// Metropolis-Hastings draw of phi given a centered path x_0..x_T (already
// de-meaned) with innovation variance s2. Because the proposal is the Gaussian
// regression conditional, the likelihood term of the transitions cancels in
// the ratio, leaving the prior and the stationary-init density of x_0.
double draw_phi_mh(const Eigen::VectorXd& x, double s2, double phi_cur, const SvPrior& prior,
                   Rng& rng) {
  const Eigen::Index T = x.size() - 1;
  double sxx = 0.0, sxy = 0.0;
  for (Eigen::Index t = 1; t <= T; ++t) {
    sxx += x[t - 1] * x[t - 1];
    sxy += x[t - 1] * x[t];
  }
  if (sxx < 1e-12) return phi_cur;  // flat path carries no information
  double bhat = sxy / sxx;
  double prop_sd = std::sqrt(s2 / sxx);
  double phi_new = bhat + prop_sd * rng.normal();
  if (std::fabs(phi_new) >= 1.0) return phi_cur;
  double log_ratio = log_phi_prior(phi_new, prior) - log_phi_prior(phi_cur, prior) +
                     log_init(x[0], 0.0, s2, phi_new) - log_init(x[0], 0.0, s2, phi_cur);
  if (std::log(rng.uniform()) < log_ratio) return phi_new;
  return phi_cur;
}

}  // namespace

SvState sv_prior_draw(const SvPrior& prior, Eigen::Index t_obs, Rng& rng) {
  SvState s;
  s.mu = rng.normal(0.0, std::sqrt(prior.mu_var));
  s.phi = prior.phi_uniform ? 2.0 * rng.uniform() - 1.0
                            : 2.0 * rng.beta(prior.phi_a, prior.phi_b) - 1.0;
  s.sigma_eta = std::fabs(rng.normal(0.0, std::sqrt(prior.sigma_var)));
  s.log_vol.resize(t_obs);
  double w = s.mu + s.sigma_eta / std::sqrt(1.0 - s.phi * s.phi) * rng.normal();
  for (Eigen::Index t = 0; t < t_obs; ++t) {
    w = s.mu + s.phi * (w - s.mu) + s.sigma_eta * rng.normal();
    s.log_vol[t] = w;
  }
  return s;
}

void draw_sv(const Eigen::VectorXd& residuals, SvState& sv, const SvPrior& prior, Rng& rng) {
  const Eigen::Index T = residuals.size();
  if (sv.log_vol.size() != T) throw std::runtime_error("draw_sv: path length mismatch");
  if (T == 0) return;

  Eigen::VectorXd ystar(T);
  for (Eigen::Index t = 0; t < T; ++t)
    ystar[t] = std::log(residuals[t] * residuals[t] + 1e-10);

  double mu = sv.mu, phi = sv.phi, se = sv.sigma_eta;
  double s2 = se * se;

  // --- mixture indicators given the current path ---
  std::vector<int> r(static_cast<size_t>(T));
  double wt[kMix];
  for (Eigen::Index t = 0; t < T; ++t) {
    double mx = -std::numeric_limits<double>::infinity();
    double lw[kMix];
    for (int j = 0; j < kMix; ++j) {
      double d = ystar[t] - sv.log_vol[t] - kMixM[j];
      lw[j] = std::log(kMixP[j]) - 0.5 * std::log(kMixV[j]) - 0.5 * d * d / kMixV[j];
      mx = std::max(mx, lw[j]);
    }
    for (int j = 0; j < kMix; ++j) wt[j] = std::exp(lw[j] - mx);
    r[static_cast<size_t>(t)] = rng.categorical(wt, kMix);
  }

  // --- scalar FFBS for w_0..w_T (w_0 has no observation) ---
  Eigen::VectorXd a(T + 1), rr(T + 1);  // filtered mean / variance
  a[0] = mu;
  rr[0] = s2 / (1.0 - phi * phi);
  for (Eigen::Index t = 1; t <= T; ++t) {
    double ap = mu + phi * (a[t - 1] - mu);
    double rp = phi * phi * rr[t - 1] + s2;
    int j = r[static_cast<size_t>(t - 1)];
    double f = rp + kMixV[j];
    double k = rp / f;
    a[t] = ap + k * (ystar[t - 1] - kMixM[j] - ap);
    rr[t] = std::max(rp * (1.0 - k), 1e-12);
  }
  Eigen::VectorXd w(T + 1);
  w[T] = a[T] + std::sqrt(rr[T]) * rng.normal();
  for (Eigen::Index t = T - 1; t >= 0; --t) {
    double denom = phi * phi * rr[t] + s2;
    double g = phi * rr[t] / denom;
    double mean = a[t] + g * (w[t + 1] - mu - phi * (a[t] - mu));
    double var = std::max(rr[t] * s2 / denom, 1e-12);
    w[t] = mean + std::sqrt(var) * rng.normal();
  }

  // --- centered draws: mu (conjugate), phi (MH) ---
  {
    double prec = 1.0 / prior.mu_var + (1.0 - phi * phi) / s2;
    double mean_num = w[0] * (1.0 - phi * phi) / s2;
    double c1 = (1.0 - phi) / s2;
    for (Eigen::Index t = 1; t <= T; ++t) mean_num += c1 * (w[t] - phi * w[t - 1]);
    prec += static_cast<double>(T) * (1.0 - phi) * (1.0 - phi) / s2;
    double var = 1.0 / prec;
    mu = var * mean_num + std::sqrt(var) * rng.normal();
  }
  phi = draw_phi_mh(w.array() - mu, s2, phi, prior, rng);

  // --- noncentered interweaving: (mu, sigma_eta) jointly, then phi again ---
  Eigen::VectorXd wt_nc = (w.array() - mu) / se;  // w~_0..T under current params
  {
    Eigen::Matrix2d prec2 = Eigen::Matrix2d::Zero();
    Eigen::Vector2d b = Eigen::Vector2d::Zero();
    prec2(0, 0) = 1.0 / prior.mu_var;
    prec2(1, 1) = 1.0 / prior.sigma_var;
    for (Eigen::Index t = 1; t <= T; ++t) {
      int j = r[static_cast<size_t>(t - 1)];
      double iv = 1.0 / kMixV[j];
      double x1 = wt_nc[t];
      double yt = ystar[t - 1] - kMixM[j];
      prec2(0, 0) += iv;
      prec2(0, 1) += iv * x1;
      prec2(1, 1) += iv * x1 * x1;
      b[0] += iv * yt;
      b[1] += iv * yt * x1;
    }
    prec2(1, 0) = prec2(0, 1);
    Eigen::LLT<Eigen::Matrix2d> llt(prec2);
    if (llt.info() != Eigen::Success) throw std::runtime_error("draw_sv: interweaving precision not PD");
    Eigen::Vector2d mean = llt.solve(b);
    // draw = mean + L^{-T} z
    Eigen::Vector2d z(rng.normal(), rng.normal());
    Eigen::Vector2d draw = mean + llt.matrixU().solve(z);
    mu = draw[0];
    double coef = draw[1];
    if (coef < 0.0) {  // sign flip leaves mu + coef*w~ invariant
      coef = -coef;
      wt_nc = -wt_nc;
    }
    se = std::max(coef, 1e-12);
    s2 = se * se;
  }
  phi = draw_phi_mh(wt_nc, 1.0, phi, prior, rng);

  // --- back-transform and store ---
  sv.mu = mu;
  sv.phi = phi;
  sv.sigma_eta = se;
  for (Eigen::Index t = 1; t <= T; ++t) {
    double val = mu + se * wt_nc[t];
    sv.log_vol[t - 1] = std::clamp(val, -100.0, 100.0);
  }
}

}  // namespace rtbvar

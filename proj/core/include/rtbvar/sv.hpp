#pragma once

#include <Eigen/Dense>

#include "rtbvar/rng.hpp"

namespace rtbvar {

// Priors for the log-variance AR(1):
//   w_t = mu + phi (w_{t-1} - mu) + sigma_eta xi_t,  xi ~ N(0,1)
//   mu ~ N(0, mu_var); (phi+1)/2 ~ Beta(phi_a, phi_b);
//   +-sigma_eta ~ N(0, sigma_var)  (so sigma_eta^2 / sigma_var ~ chi^2_1);
//   w_0 ~ N(mu, sigma_eta^2 / (1 - phi^2))  (stationary initial state).
struct SvPrior {
  double mu_var = 100.0;
  double phi_a = 25.0;
  double phi_b = 5.0;
  double sigma_var = 1.0;
  // Test hook: replace the Beta prior on (phi+1)/2 by uniform on (-1,1).
  bool phi_uniform = false;
};

// Per-equation stochastic volatility state. log_vol[t] is the log *variance*
// of the structural error at observation t (length T'), so exp(log_vol[t]) is
// the observation variance used in the regression and FFBS steps.
struct SvState {
  double mu = 0.0;
  double phi = 0.9;
  double sigma_eta = 0.2;
  Eigen::VectorXd log_vol;

  static SvState initial(Eigen::Index t_obs) {
    SvState s;
    s.log_vol = Eigen::VectorXd::Zero(t_obs);
    return s;
  }
};

// A draw from the prior (used by tests and simulations; the Gibbs chain itself
// starts from the fixed neutral state).
SvState sv_prior_draw(const SvPrior& prior, Eigen::Index t_obs, Rng& rng);

// One sweep of the SV block given the equation's structural residuals:
// 1. y*_t = log(residual_t^2 + 1e-10) (offset guards exact zeros);
// 2. mixture indicators for the 10-component Gaussian approximation of
//    log chi^2_1 given the current path;
// 3. joint path draw (w_0..w_T) by scalar forward filtering / backward
//    sampling under the AR(1) transition and stationary initial state;
// 4. centered parameter draws: mu from its conjugate Gaussian conditional,
//    phi by a Metropolis-Hastings step with a Gaussian regression proposal
//    (the acceptance ratio reduces to prior x stationary-init terms);
// 5. interweaving: re-draw (mu, sigma_eta) jointly from the conjugate
//    bivariate regression of y* - m_r on (1, w~) in the noncentered
//    parameterization w~ = (w - mu)/sigma_eta, where N(0, sigma_var) on the
//    signed coefficient is exactly the prior on +-sigma_eta; a negative
//    coefficient flips the latent path's sign (likelihood-invariant);
//    phi gets a second MH step in the noncentered form;
// 6. back-transform and store w_1..T.
// Updates `sv` in place. T' = residuals.size() must match sv.log_vol.
void draw_sv(const Eigen::VectorXd& residuals, SvState& sv, const SvPrior& prior, Rng& rng);

}  // namespace rtbvar

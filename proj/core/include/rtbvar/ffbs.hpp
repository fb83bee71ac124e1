#pragma once

#include <Eigen/Dense>

#include "rtbvar/rng.hpp"

namespace rtbvar {

// Joint posterior draw of a random-walk state path with scalar observations:
//
//   y_t   = c_t' x_t + e_t,     e_t ~ N(0, v_t),   t = 1..T
//   x_t   = x_{t-1} + u_t,      u_t ~ N(0, I_K)
//   x_0   = 0 exactly.
//
// Forward Kalman filter, then backward simulation. Returns a (T+1) x K matrix
// whose row t is x_t; row 0 is exactly zero. `loadings` row t-1 gives c_t,
// `obs_var` element t-1 gives v_t. With all-zero loadings the data carry no
// information and the draw is exactly a pinned random-walk prior path.
// Throws on covariance Cholesky failure after one jitter retry.
Eigen::MatrixXd ffbs_random_walk(const Eigen::VectorXd& y, const Eigen::MatrixXd& loadings,
                                 const Eigen::VectorXd& obs_var, Rng& rng);

// One draw from the Bayesian linear regression posterior
//   y = X b + e,  e_t ~ N(0, obs_var_t),  b ~ N(0, diag(prior_var)),
// i.e. N(A⁻¹ X'W y, A⁻¹) with A = X'WX + diag(1/prior_var), W = diag(1/obs_var).
// T = 0 (no data) draws from the prior. Throws if the posterior precision is
// not positive definite after one jitter retry.
Eigen::VectorXd draw_regression(const Eigen::VectorXd& y, const Eigen::MatrixXd& X,
                                const Eigen::VectorXd& obs_var, const Eigen::VectorXd& prior_var,
                                Rng& rng);

}  // namespace rtbvar

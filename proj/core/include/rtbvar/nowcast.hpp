#pragma once

#include <Eigen/Dense>
#include <vector>

#include "rtbvar/panel.hpp"
#include "rtbvar/rng.hpp"
#include "rtbvar/sampler.hpp"

namespace rtbvar {

// Moments of the missing block given the observed block of one period.
struct ConditionalMoments {
  Eigen::VectorXd mean;              // q-vector
  Eigen::MatrixXd cov;               // q x q, symmetric PSD
  std::vector<Eigen::Index> missing_idx;
};

// Gaussian conditioning: given the period's joint N(mu, sigma), the indices of
// the q missing series and the M-q realized values of the observed ones
// (ordered by ascending series index), returns the conditional moments of the
// missing block. q = M returns (mu, sigma) unchanged; the covariance never
// depends on the realized values. Throws if the observed-block covariance is
// singular beyond one jitter retry, or on an invalid index pattern.
ConditionalMoments partition_moments(const Eigen::VectorXd& mu, const Eigen::MatrixXd& sigma,
                                     const std::vector<Eigen::Index>& missing_idx,
                                     const Eigen::VectorXd& realized);

// One Gaussian draw from the conditional moments. Uses a PSD square root
// (eigenvalue clamp), so a zero covariance returns the mean exactly.
Eigen::VectorXd draw_missing(const ConditionalMoments& cm, Rng& rng);

// Gibbs step 5: refreshes every masked cell of `state.filled`, walking the
// panel forward one period at a time so imputed values feed the lag vectors of
// later periods. Rows after the last fully observed period (the ragged edge)
// first have their TVP states advanced by one random-walk innovation and their
// log-volatilities by one AR(1) innovation — simulated forward from the laws
// of motion and written back to the chain state; interior rows use the states
// the sweep already drew. Cells inside the first P (lag) rows have no
// regressor history and stay at their initialization.
void impute_ragged_edge(ChainState& state, const Panel& panel, const SamplerConfig& cfg);

}  // namespace rtbvar

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "rtbvar/month.hpp"
#include "rtbvar/panel.hpp"
#include "rtbvar/rng.hpp"
#include "rtbvar/sampler.hpp"

namespace rtbvar {

// VAR(P) stacked to first order: s_t = c + A s_{t-1} + e_t with
// s_t = (y_t', y_{t-1}', ..., y_{t-P+1}')'.
struct Companion {
  Eigen::MatrixXd a;  // MP x MP
  Eigen::VectorXd c;  // MP (zeros below the first M entries)
  int m = 0;
  int p = 0;
};

// a_blocks[l] is the M x M coefficient matrix on lag l+1; intercept is M.
Companion build_companion(const std::vector<Eigen::MatrixXd>& a_blocks,
                          const Eigen::VectorXd& intercept);

struct ForecastMoments {
  Eigen::VectorXd mean;  // M
  Eigen::MatrixXd cov;   // M x M
  int horizon = 0;
};

// Moments of y_{T+h} given the state stack at T, with shock covariance omega
// held fixed over the horizon: mean iterates mu <- c + A mu, covariance
// S <- A S A' + Omega~ (omega in the top-left block), then both are cut down
// to the first M coordinates. Throws on non-finite results (explosive systems
// at long horizons).
ForecastMoments forecast_moments(const Companion& comp, const Eigen::MatrixXd& omega,
                                 const Eigen::VectorXd& state, int horizon);

// Same recursion, capturing every horizon in `horizons` (ascending) in one pass.
std::vector<ForecastMoments> forecast_moments_multi(const Companion& comp,
                                                    const Eigen::MatrixXd& omega,
                                                    const Eigen::VectorXd& state,
                                                    const std::vector<int>& horizons);

// Predictive output of a posterior draw store: per retained draw, the forecast
// moments at each requested horizon (on the standardized scale, kept for
// density scoring) and one simulated path value (de-standardized).
struct PredictiveDraws {
  std::vector<int> horizons;
  Month origin;                      // month of the last observation
  std::vector<std::string> codes;
  StandardizationInfo std_info;
  std::vector<Eigen::MatrixXd> values;             // per draw: H x M, original units
  std::vector<Eigen::MatrixXd> means;              // per draw: H x M, standardized
  std::vector<std::vector<Eigen::MatrixXd>> covs;  // per draw, per horizon: M x M, standardized

  int n_draws() const { return static_cast<int>(values.size()); }
  std::uint64_t digest() const;
};

// Builds the companion form of each retained draw, freezes its (A, Omega) at
// the origin, and produces moments plus one Gaussian draw per horizon. The
// draw uses a PSD square root (eigenvalue clamp), so a zero covariance yields
// the de-standardized mean exactly.
PredictiveDraws draw_forecasts(const DrawStore& store, const std::vector<int>& horizons,
                               Rng& rng);

}  // namespace rtbvar

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "rtbvar/horseshoe.hpp"
#include "rtbvar/panel.hpp"
#include "rtbvar/rng.hpp"
#include "rtbvar/sv.hpp"

namespace rtbvar {

// Sampler configuration: lag order, parameter mode, chain length, SV priors.
struct SamplerConfig {
  int lags = 2;  // P
  bool tvp = true;
  int draws = 6000;
  int burn = 2000;
  int thin = 2;
  SvPrior sv_prior;

  int retained() const { return draws > burn ? (draws - burn) / thin : 0; }
};

// Per-equation state of the triangular system, equation i (0-based):
//   y_it = beta_it' z_it + eta_it,
//   z_it = (x_t', -eps_1t, ..., -eps_{i-1,t}, 1)',   K_i = P*M + i + 1,
//   beta_it = beta0 + sqrt_v ⊙ tilde_t   (noncentered decomposition).
// tilde_path has T'+1 rows; row 0 is the exact-zero initial state and row
// t+1 belongs to observation t. Constant-parameter mode keeps sqrt_v and
// tilde_path identically zero.
struct EquationState {
  Eigen::VectorXd beta0;
  Eigen::VectorXd sqrt_v;
  Eigen::MatrixXd tilde_path;
};

// Full Gibbs state for one chain. `filled` is the panel value matrix with
// every masked cell holding its current imputation; observed cells are never
// modified.
struct ChainState {
  std::vector<EquationState> equations;
  std::vector<HorseshoeState> shrinkage;
  std::vector<SvState> vols;
  Eigen::MatrixXd filled;
  Rng rng;
  int sweep_index = 0;

  explicit ChainState(std::uint64_t seed) : rng(seed) {}
};

ChainState init_chain(const Panel& panel, const SamplerConfig& cfg, std::uint64_t seed);

// The regression view of equation i given current draws of earlier equations.
struct EquationData {
  Eigen::VectorXd y;      // T'
  Eigen::MatrixXd z;      // T' x K_i
  Eigen::MatrixXd aug_z;  // T' x 2K_i: (z', (tilde_t ⊙ z)') rows
};

// Builds y_i, Z_i and the augmented regressor block for equation i. Residuals
// eps_jt for j < i are computed from the newest draws of those equations
// (recursively through the triangular system). Throws on non-finite residuals.
EquationData compose_equation(Eigen::Index i, const Eigen::MatrixXd& filled,
                              const ChainState& state, const SamplerConfig& cfg);

// Joint draw of the constant block b = (beta0', sqrt_v')' from its Gaussian
// conditional (heteroskedastic regression with horseshoe prior variances).
// Constant-parameter mode draws only beta0 (prior dimension K_i).
void draw_constant_block(const EquationData& data, const HorseshoeState& hs, const SvState& sv,
                         bool tvp, EquationState& eq, Rng& rng);

// FFBS draw of the noncentered TVP path: observation y - Z beta0 regressed on
// loadings sqrt_v ⊙ z_t with unit random-walk state innovations and exact zero
// initial state. Returns the (T'+1) x K_i path.
Eigen::MatrixXd ffbs_states(const Eigen::VectorXd& y, const Eigen::MatrixXd& z,
                            const Eigen::VectorXd& beta0, const Eigen::VectorXd& sqrt_v,
                            const SvState& sv, Rng& rng);

// One full Gibbs sweep: per equation (in order) constant block, TVP path
// (TVP mode), horseshoe scales, SV block; then imputation of masked cells.
void gibbs_sweep(ChainState& state, const Panel& panel, const SamplerConfig& cfg);

// Retained posterior draws, reduced to what forecasting needs: time-T
// coefficients, the triangular factor, the variances, SV parameters and the
// last P rows of the (imputation-completed) panel.
struct DrawStore {
  int m = 0;
  int p = 0;
  bool tvp = false;
  std::uint64_t seed = 0;
  Month origin;  // last panel month
  std::vector<std::string> codes;
  StandardizationInfo std_info;

  std::vector<Eigen::MatrixXd> coeff;   // per draw: M x (M*P+1), lag blocks then intercept
  std::vector<Eigen::MatrixXd> h_inv;   // per draw: M x M unit lower triangular (H^-1)
  std::vector<Eigen::VectorXd> sigma;   // per draw: M structural variances at time T
  std::vector<Eigen::MatrixXd> y_tail;  // per draw: P x M, chronological (last row = time T)
  Eigen::MatrixXd sv_mu, sv_phi, sv_sigma;  // S x M

  int n_draws() const { return static_cast<int>(coeff.size()); }
  // Reduced-form covariance Omega_T = H Sigma H' for retained draw s.
  Eigen::MatrixXd omega(int s) const;
  // Order- and content-sensitive hash of all stored numbers (determinism tests).
  std::uint64_t digest() const;
};

// Runs a full chain on the (typically standardized) panel. Draw `draws`
// sweeps, discard `burn`, keep every `thin`-th of the remainder. A non-finite
// state aborts with the sweep index in the message.
DrawStore run_chain(const Panel& panel, const SamplerConfig& cfg, std::uint64_t seed);

/// Directory persistence: one CSV matrix per quantity plus manifest.json.
void save_draw_store(const DrawStore& store, const std::string& dir);
DrawStore load_draw_store(const std::string& dir);

}  // namespace rtbvar

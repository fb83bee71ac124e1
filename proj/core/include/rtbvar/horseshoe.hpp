#pragma once

#include <Eigen/Dense>

#include "rtbvar/rng.hpp"

namespace rtbvar {

// Horseshoe prior state for one equation's constant block b (local scales psi
// and auxiliaries zeta have b's dimension; lambda/varphi are global). The
// prior variance of b_j is psi_j * lambda.
struct HorseshoeState {
  Eigen::VectorXd psi;
  Eigen::VectorXd zeta;
  double lambda = 1.0;
  double varphi = 1.0;

  static HorseshoeState unit(Eigen::Index n) {
    HorseshoeState hs;
    hs.psi = Eigen::VectorXd::Ones(n);
    hs.zeta = Eigen::VectorXd::Ones(n);
    return hs;
  }
  Eigen::VectorXd prior_var() const { return psi * lambda; }
};

// The four conditional posteriors of the inverse-Gamma auxiliary
// representation, exposed individually so their laws can be tested at fixed
// conditioning values. Shapes/scales (IG(shape, scale), mean scale/(shape-1)):
double hs_draw_psi(double b, double lambda, double zeta, Rng& rng);  // IG(1, 1/ζ + b²/(2λ))
double hs_draw_lambda(const Eigen::VectorXd& b, const Eigen::VectorXd& psi, double varphi,
                      Rng& rng);                 // IG((n+1)/2, 1/φ + ½ Σ b²/ψ)
double hs_draw_zeta(double psi, Rng& rng);       // IG(1, 1 + 1/ψ)
double hs_draw_varphi(double lambda, Rng& rng);  // IG(1, 1 + 1/λ)

// One full update in the order psi, lambda, zeta, varphi. The lambda shape
// (n+1)/2 comes from b's dimension, so the constant-parameter case (b of
// length K instead of 2K) is handled by the same code.
void draw_horseshoe(const Eigen::VectorXd& b, HorseshoeState& hs, Rng& rng);

}  // namespace rtbvar

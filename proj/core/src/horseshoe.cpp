#include "rtbvar/horseshoe.hpp"

#include <stdexcept>

namespace rtbvar {

double hs_draw_psi(double b, double lambda, double zeta, Rng& rng) {
  return rng.inv_gamma(1.0, 1.0 / zeta + b * b / (2.0 * lambda));
}

double hs_draw_lambda(const Eigen::VectorXd& b, const Eigen::VectorXd& psi, double varphi,
                      Rng& rng) {
  const Eigen::Index n = b.size();
  double scale = 1.0 / varphi;
  for (Eigen::Index j = 0; j < n; ++j) scale += 0.5 * b[j] * b[j] / psi[j];
  return rng.inv_gamma((static_cast<double>(n) + 1.0) / 2.0, scale);
}

double hs_draw_zeta(double psi, Rng& rng) { return rng.inv_gamma(1.0, 1.0 + 1.0 / psi); }

double hs_draw_varphi(double lambda, Rng& rng) {
  return rng.inv_gamma(1.0, 1.0 + 1.0 / lambda);
}

void draw_horseshoe(const Eigen::VectorXd& b, HorseshoeState& hs, Rng& rng) {
  const Eigen::Index n = b.size();
  if (hs.psi.size() != n || hs.zeta.size() != n)
    throw std::runtime_error("draw_horseshoe: state dimension mismatch");
  for (Eigen::Index j = 0; j < n; ++j) hs.psi[j] = hs_draw_psi(b[j], hs.lambda, hs.zeta[j], rng);
  hs.lambda = hs_draw_lambda(b, hs.psi, hs.varphi, rng);
  for (Eigen::Index j = 0; j < n; ++j) hs.zeta[j] = hs_draw_zeta(hs.psi[j], rng);
  hs.varphi = hs_draw_varphi(hs.lambda, rng);
}

}  // namespace rtbvar

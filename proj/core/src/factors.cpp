#include "rtbvar/factors.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace rtbvar {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

FactorSet extract_pcs(const Panel& wide, int k) {
  const Eigen::Index T = wide.n_months(), N = wide.n_series();
  if (!wide.standardized) throw std::runtime_error("extract_pcs: panel must be standardized");
  if (k < 1 || k > N)
    throw std::runtime_error("extract_pcs: k = " + std::to_string(k) + " outside [1, " +
                             std::to_string(N) + "]");
  if (T < 2) throw std::runtime_error("extract_pcs: need at least 2 months");

  Eigen::MatrixXd x = wide.values;
  for (Eigen::Index t = 0; t < T; ++t)
    for (Eigen::Index j = 0; j < N; ++j)
      if (!wide.mask(t, j)) x(t, j) = 0.0;

  Eigen::MatrixXd cov = (x.transpose() * x) / static_cast<double>(T - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  if (eig.info() != Eigen::Success)
    throw std::runtime_error("extract_pcs: eigendecomposition failed");

  FactorSet f;
  f.start = wide.start;
  f.loadings.resize(N, k);
  f.explained_variance.resize(k);
  // Eigen returns ascending eigenvalues; take the top k in descending order.
  for (int c = 0; c < k; ++c) {
    Eigen::Index src = N - 1 - c;
    Eigen::VectorXd v = eig.eigenvectors().col(src);
    Eigen::Index imax = 0;
    v.cwiseAbs().maxCoeff(&imax);
    if (v[imax] < 0.0) v = -v;
    f.loadings.col(c) = v;
    f.explained_variance[c] = eig.eigenvalues()[src];
  }

  Eigen::MatrixXd raw = x * f.loadings;  // T x k
  f.month_observed.assign(static_cast<size_t>(T), 0);
  Eigen::Index n_obs_months = 0;
  for (Eigen::Index t = 0; t < T; ++t) {
    for (Eigen::Index j = 0; j < N; ++j)
      if (wide.mask(t, j)) {
        f.month_observed[static_cast<size_t>(t)] = 1;
        break;
      }
    if (f.month_observed[static_cast<size_t>(t)]) ++n_obs_months;
  }
  if (n_obs_months < 2) throw std::runtime_error("extract_pcs: fewer than 2 informative months");

  // Re-standardize each score over informative months (unit sample sd).
  f.scores = Eigen::MatrixXd::Constant(T, k, kNaN);
  for (int c = 0; c < k; ++c) {
    double sum = 0.0;
    for (Eigen::Index t = 0; t < T; ++t)
      if (f.month_observed[static_cast<size_t>(t)]) sum += raw(t, c);
    double mean = sum / static_cast<double>(n_obs_months);
    double ss = 0.0;
    for (Eigen::Index t = 0; t < T; ++t)
      if (f.month_observed[static_cast<size_t>(t)]) {
        double d = raw(t, c) - mean;
        ss += d * d;
      }
    double sd = std::sqrt(ss / static_cast<double>(n_obs_months - 1));
    if (sd < 1e-12)
      throw std::runtime_error("extract_pcs: component " + std::to_string(c + 1) +
                               " has zero variance");
    for (Eigen::Index t = 0; t < T; ++t)
      if (f.month_observed[static_cast<size_t>(t)]) f.scores(t, c) = (raw(t, c) - mean) / sd;
  }
  return f;
}

Panel augment_panel(const Panel& base, const FactorSet& factors) {
  const Eigen::Index T = base.n_months();
  if (factors.start != base.start || factors.scores.rows() != T)
    throw std::runtime_error("augment_panel: factor grid does not match panel grid");
  if (!base.standardized) throw std::runtime_error("augment_panel: panel must be standardized");

  const Eigen::Index M = base.n_series(), k = factors.scores.cols();
  Panel p = base;
  p.values.conservativeResize(T, M + k);
  p.mask.conservativeResize(T, M + k);
  p.std_info.mean.conservativeResize(M + k);
  p.std_info.sd.conservativeResize(M + k);
  for (Eigen::Index c = 0; c < k; ++c) {
    p.codes.push_back("PC" + std::to_string(c + 1));
    p.std_info.mean[M + c] = 0.0;
    p.std_info.sd[M + c] = 1.0;
    for (Eigen::Index t = 0; t < T; ++t) {
      bool obs = factors.month_observed[static_cast<size_t>(t)] != 0;
      p.mask(t, M + c) = obs;
      p.values(t, M + c) = obs ? factors.scores(t, c) : kNaN;
    }
  }
  return p;
}

}  // namespace rtbvar

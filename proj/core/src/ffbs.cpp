#include "rtbvar/ffbs.hpp"

#include <stdexcept>
#include <vector>

#include "rtbvar/special.hpp"

namespace rtbvar {

Eigen::MatrixXd ffbs_random_walk(const Eigen::VectorXd& y, const Eigen::MatrixXd& loadings,
                                 const Eigen::VectorXd& obs_var, Rng& rng) {
  const Eigen::Index T = y.size();
  const Eigen::Index K = loadings.cols();
  if (loadings.rows() != T || obs_var.size() != T)
    throw std::runtime_error("ffbs_random_walk: dimension mismatch");

  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(K, K);

  // Filtered moments m_t, P_t for t = 0..T (x_0 = 0 with zero covariance).
  std::vector<Eigen::VectorXd> m(static_cast<size_t>(T) + 1, Eigen::VectorXd::Zero(K));
  std::vector<Eigen::MatrixXd> p(static_cast<size_t>(T) + 1, Eigen::MatrixXd::Zero(K, K));
  for (Eigen::Index t = 1; t <= T; ++t) {
    Eigen::MatrixXd pp = p[t - 1] + eye;  // predict: random walk, Q = I
    Eigen::VectorXd c = loadings.row(t - 1).transpose();
    double s = obs_var[t - 1];
    Eigen::VectorXd pc = pp * c;
    double f = c.dot(pc) + s;
    if (f < 1e-12) f = 1e-12;  // floor prediction variance
    double resid = y[t - 1] - c.dot(m[t - 1]);
    m[t] = m[t - 1] + pc * (resid / f);
    p[t] = pp - (pc * pc.transpose()) / f;
    p[t] = 0.5 * (p[t] + p[t].transpose());
  }

  Eigen::MatrixXd path(T + 1, K);
  path.row(0).setZero();
  if (T == 0) return path;

  // x_T ~ N(m_T, P_T)
  {
    Eigen::MatrixXd l = robust_cholesky(p[T], "ffbs_random_walk terminal state");
    path.row(T) = (m[T] + l * rng.normal_vector(K)).transpose();
  }
  // Backward: x_t | x_{t+1} ~ N(m_t + G (x_{t+1} - m_t), P_t - G P_t),
  // with G = P_t (P_t + I)^{-1} from the random-walk transition.
  for (Eigen::Index t = T - 1; t >= 1; --t) {
    Eigen::LDLT<Eigen::MatrixXd> ldlt(p[t] + eye);
    Eigen::MatrixXd g = ldlt.solve(p[t]).transpose();  // P (P+I)^{-1}, symmetric solve
    Eigen::VectorXd mean = m[t] + g * (path.row(t + 1).transpose() - m[t]);
    Eigen::MatrixXd v = p[t] - g * p[t];
    v = 0.5 * (v + v.transpose());
    Eigen::MatrixXd l = robust_cholesky(v, "ffbs_random_walk backward step");
    path.row(t) = (mean + l * rng.normal_vector(K)).transpose();
  }
  return path;
}

Eigen::VectorXd draw_regression(const Eigen::VectorXd& y, const Eigen::MatrixXd& X,
                                const Eigen::VectorXd& obs_var, const Eigen::VectorXd& prior_var,
                                Rng& rng) {
  const Eigen::Index T = y.size(), K = X.cols();
  if (X.rows() != T || obs_var.size() != T)
    throw std::runtime_error("draw_regression: dimension mismatch");
  if (prior_var.size() != K)
    throw std::runtime_error("draw_regression: prior dimension mismatch");

  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(K, K);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(K);
  for (Eigen::Index k = 0; k < K; ++k) {
    double pv = prior_var[k];
    if (!(pv > 0.0)) throw std::runtime_error("draw_regression: nonpositive prior variance");
    a(k, k) = 1.0 / std::max(pv, 1e-100);  // keep precision finite under extreme shrinkage
  }
  for (Eigen::Index t = 0; t < T; ++t) {
    double w = 1.0 / obs_var[t];
    a.noalias() += w * (X.row(t).transpose() * X.row(t));
    b.noalias() += (w * y[t]) * X.row(t).transpose();
  }
  a = 0.5 * (a + a.transpose());
  Eigen::MatrixXd l = robust_cholesky(a, "draw_regression posterior precision");
  // mean = A^{-1} b via the factor, draw = mean + L^{-T} z.
  Eigen::VectorXd mean = l.triangularView<Eigen::Lower>().solve(b);
  mean = l.transpose().triangularView<Eigen::Upper>().solve(mean);
  Eigen::VectorXd z = rng.normal_vector(K);
  return mean + l.transpose().triangularView<Eigen::Upper>().solve(z);
}

}  // namespace rtbvar

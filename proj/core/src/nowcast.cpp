#include "rtbvar/nowcast.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace rtbvar {

ConditionalMoments partition_moments(const Eigen::VectorXd& mu, const Eigen::MatrixXd& sigma,
                                     const std::vector<Eigen::Index>& missing_idx,
                                     const Eigen::VectorXd& realized) {
  const Eigen::Index m = mu.size();
  if (sigma.rows() != m || sigma.cols() != m)
    throw std::runtime_error("partition_moments: covariance dimension mismatch");
  const Eigen::Index q = static_cast<Eigen::Index>(missing_idx.size());
  if (q < 1 || q > m) throw std::runtime_error("partition_moments: need 1..M missing indices");
  std::vector<char> is_missing(static_cast<size_t>(m), 0);
  for (Eigen::Index idx : missing_idx) {
    if (idx < 0 || idx >= m) throw std::runtime_error("partition_moments: index out of range");
    if (is_missing[static_cast<size_t>(idx)])
      throw std::runtime_error("partition_moments: duplicate missing index");
    is_missing[static_cast<size_t>(idx)] = 1;
  }
  if (realized.size() != m - q)
    throw std::runtime_error("partition_moments: realized block has wrong length");

  ConditionalMoments cm;
  cm.missing_idx = missing_idx;
  if (q == m) {
    cm.mean = mu;
    cm.cov = sigma;
    return cm;
  }

  std::vector<Eigen::Index> obs_idx;
  for (Eigen::Index j = 0; j < m; ++j)
    if (!is_missing[static_cast<size_t>(j)]) obs_idx.push_back(j);
  const Eigen::Index r = m - q;

  Eigen::VectorXd mu1(q), mu2(r);
  Eigen::MatrixXd s11(q, q), s12(q, r), s22(r, r);
  for (Eigen::Index a = 0; a < q; ++a) {
    mu1[a] = mu[missing_idx[static_cast<size_t>(a)]];
    for (Eigen::Index b = 0; b < q; ++b)
      s11(a, b) = sigma(missing_idx[static_cast<size_t>(a)], missing_idx[static_cast<size_t>(b)]);
    for (Eigen::Index b = 0; b < r; ++b)
      s12(a, b) = sigma(missing_idx[static_cast<size_t>(a)], obs_idx[static_cast<size_t>(b)]);
  }
  for (Eigen::Index a = 0; a < r; ++a) {
    mu2[a] = mu[obs_idx[static_cast<size_t>(a)]];
    for (Eigen::Index b = 0; b < r; ++b)
      s22(a, b) = sigma(obs_idx[static_cast<size_t>(a)], obs_idx[static_cast<size_t>(b)]);
  }

  // Solve S22 * X = S21 via LDLT; retry once with a jitter if the observed
  // block is numerically singular.
  Eigen::MatrixXd gain;  // q x r = S12 * S22^{-1}
  Eigen::LDLT<Eigen::MatrixXd> ldlt(s22);
  bool ok = (ldlt.info() == Eigen::Success);
  if (ok) {
    gain = ldlt.solve(s12.transpose()).transpose();
    ok = gain.allFinite();
  }
  if (!ok) {
    double scale = std::max(1.0, s22.diagonal().cwiseAbs().maxCoeff());
    Eigen::LDLT<Eigen::MatrixXd> retry(s22 + 1e-8 * scale *
                                                 Eigen::MatrixXd::Identity(r, r));
    if (retry.info() != Eigen::Success)
      throw std::runtime_error("partition_moments: observed-block covariance is singular");
    gain = retry.solve(s12.transpose()).transpose();
    if (!gain.allFinite())
      throw std::runtime_error("partition_moments: observed-block covariance is singular");
  }

  cm.mean = mu1 + gain * (realized - mu2);
  Eigen::MatrixXd cov = s11 - gain * s12.transpose();
  cm.cov = 0.5 * (cov + cov.transpose());
  return cm;
}

Eigen::VectorXd draw_missing(const ConditionalMoments& cm, Rng& rng) {
  const Eigen::Index q = cm.mean.size();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cm.cov);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("draw_missing: eigendecomposition failed");
  Eigen::VectorXd root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  Eigen::VectorXd z = rng.normal_vector(q);
  return cm.mean + es.eigenvectors() * (root.asDiagonal() * z);
}

void impute_ragged_edge(ChainState& state, const Panel& panel, const SamplerConfig& cfg) {
  const Eigen::Index t_all = panel.n_months(), m = panel.n_series();
  const int p = cfg.lags;
  const Eigen::Index pm = static_cast<Eigen::Index>(p) * m;

  Eigen::Index last_full = -1;
  for (Eigen::Index g = 0; g < t_all; ++g)
    if (panel.mask.row(g).all()) last_full = g;

  for (Eigen::Index g = p; g < t_all; ++g) {
    std::vector<Eigen::Index> missing;
    for (Eigen::Index j = 0; j < m; ++j)
      if (!panel.mask(g, j)) missing.push_back(j);
    const Eigen::Index t = g - p;  // observation index

    if (g > last_full) {
      // Ragged edge: simulate the state laws of motion one period forward and
      // keep the simulated states so repeated calls see a consistent path.
      for (Eigen::Index i = 0; i < m; ++i) {
        SvState& sv = state.vols[static_cast<size_t>(i)];
        if (t == 0) {
          double denom = std::max(1.0 - sv.phi * sv.phi, 1e-10);
          sv.log_vol[t] = sv.mu + sv.sigma_eta / std::sqrt(denom) * state.rng.normal();
        } else {
          sv.log_vol[t] =
              sv.mu + sv.phi * (sv.log_vol[t - 1] - sv.mu) + sv.sigma_eta * state.rng.normal();
        }
        if (cfg.tvp) {
          EquationState& eq = state.equations[static_cast<size_t>(i)];
          eq.tilde_path.row(t + 1) =
              eq.tilde_path.row(t) +
              state.rng.normal_vector(eq.tilde_path.cols()).transpose();
        }
      }
    }
    if (missing.empty()) continue;

    // Reduced-form moments at this period: y_t = A x_t + c + H eps_t.
    Eigen::VectorXd x(pm);
    for (int l = 1; l <= p; ++l) x.segment((l - 1) * m, m) = state.filled.row(g - l);

    Eigen::VectorXd mu(m);
    Eigen::MatrixXd hinv = Eigen::MatrixXd::Identity(m, m);
    Eigen::VectorXd sig(m);
    for (Eigen::Index i = 0; i < m; ++i) {
      const EquationState& eq = state.equations[static_cast<size_t>(i)];
      Eigen::VectorXd beta = eq.beta0;
      if (cfg.tvp)
        beta += (eq.sqrt_v.array() * eq.tilde_path.row(t + 1).transpose().array()).matrix();
      mu[i] = beta.head(pm).dot(x) + beta[pm + i];
      for (Eigen::Index l = 0; l < i; ++l) hinv(i, l) = beta[pm + l];
      sig[i] = std::exp(state.vols[static_cast<size_t>(i)].log_vol[t]);
    }
    // mu already is the reduced-form mean: the shock terms in each equation
    // (its own and the preceding ones entering through the triangular block)
    // all have zero expectation.
    Eigen::MatrixXd h = hinv.triangularView<Eigen::Lower>().solve(Eigen::MatrixXd::Identity(m, m));
    Eigen::MatrixXd omega = h * sig.asDiagonal() * h.transpose();
    omega = 0.5 * (omega + omega.transpose());

    Eigen::VectorXd draw;
    if (static_cast<Eigen::Index>(missing.size()) == m) {
      ConditionalMoments cm{mu, omega, missing};
      draw = draw_missing(cm, state.rng);
    } else {
      Eigen::VectorXd realized(m - static_cast<Eigen::Index>(missing.size()));
      Eigen::Index r = 0;
      for (Eigen::Index j = 0; j < m; ++j)
        if (panel.mask(g, j)) realized[r++] = state.filled(g, j);
      ConditionalMoments cm = partition_moments(mu, omega, missing, realized);
      draw = draw_missing(cm, state.rng);
    }
    for (size_t a = 0; a < missing.size(); ++a) state.filled(g, missing[a]) = draw[static_cast<Eigen::Index>(a)];
  }
}

}  // namespace rtbvar

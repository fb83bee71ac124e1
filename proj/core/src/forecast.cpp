#include "rtbvar/forecast.hpp"

#include <algorithm>
#include <cstring>
#include <stdexcept>

namespace rtbvar {

Companion build_companion(const std::vector<Eigen::MatrixXd>& a_blocks,
                          const Eigen::VectorXd& intercept) {
  if (a_blocks.empty()) throw std::runtime_error("build_companion: need at least one lag block");
  const Eigen::Index m = intercept.size();
  const int p = static_cast<int>(a_blocks.size());
  for (const auto& b : a_blocks)
    if (b.rows() != m || b.cols() != m)
      throw std::runtime_error("build_companion: lag block dimension mismatch");

  Companion comp;
  comp.m = static_cast<int>(m);
  comp.p = p;
  comp.a = Eigen::MatrixXd::Zero(m * p, m * p);
  for (int l = 0; l < p; ++l) comp.a.block(0, l * m, m, m) = a_blocks[static_cast<size_t>(l)];
  if (p > 1)
    comp.a.block(m, 0, m * (p - 1), m * (p - 1)) =
        Eigen::MatrixXd::Identity(m * (p - 1), m * (p - 1));
  comp.c = Eigen::VectorXd::Zero(m * p);
  comp.c.head(m) = intercept;
  return comp;
}

std::vector<ForecastMoments> forecast_moments_multi(const Companion& comp,
                                                    const Eigen::MatrixXd& omega,
                                                    const Eigen::VectorXd& state,
                                                    const std::vector<int>& horizons) {
  const Eigen::Index m = comp.m, mp = comp.a.rows();
  if (state.size() != mp) throw std::runtime_error("forecast: state stack has wrong length");
  if (omega.rows() != m || omega.cols() != m)
    throw std::runtime_error("forecast: shock covariance has wrong shape");
  if (horizons.empty()) return {};
  if (!std::is_sorted(horizons.begin(), horizons.end()) || horizons.front() < 1)
    throw std::runtime_error("forecast: horizons must be ascending and >= 1");

  Eigen::MatrixXd omega_full = Eigen::MatrixXd::Zero(mp, mp);
  omega_full.topLeftCorner(m, m) = omega;

  std::vector<ForecastMoments> out;
  Eigen::VectorXd mu = state;
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(mp, mp);
  size_t next = 0;
  for (int h = 1; h <= horizons.back(); ++h) {
    mu = comp.c + comp.a * mu;
    cov = comp.a * cov * comp.a.transpose() + omega_full;
    if (next < horizons.size() && horizons[next] == h) {
      ForecastMoments fm;
      fm.mean = mu.head(m);
      fm.cov = 0.5 * (cov.topLeftCorner(m, m) + cov.topLeftCorner(m, m).transpose());
      fm.horizon = h;
      if (!fm.mean.allFinite() || !fm.cov.allFinite())
        throw std::runtime_error("forecast: non-finite moments at horizon " + std::to_string(h));
      out.push_back(std::move(fm));
      ++next;
    }
  }
  return out;
}

ForecastMoments forecast_moments(const Companion& comp, const Eigen::MatrixXd& omega,
                                 const Eigen::VectorXd& state, int horizon) {
  return forecast_moments_multi(comp, omega, state, {horizon}).front();
}

std::uint64_t PredictiveDraws::digest() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](const Eigen::MatrixXd& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j) {
        double v = m(i, j);
        unsigned char buf[sizeof(double)];
        std::memcpy(buf, &v, sizeof(double));
        for (unsigned char b : buf) {
          h ^= b;
          h *= 0x100000001b3ULL;
        }
      }
  };
  for (const auto& m : values) mix(m);
  for (const auto& m : means) mix(m);
  for (const auto& per_draw : covs)
    for (const auto& m : per_draw) mix(m);
  return h;
}

PredictiveDraws draw_forecasts(const DrawStore& store, const std::vector<int>& horizons,
                               Rng& rng) {
  const Eigen::Index m = store.m;
  const int p = store.p;
  const Eigen::Index pm = static_cast<Eigen::Index>(p) * m;
  if (store.n_draws() == 0) throw std::runtime_error("draw_forecasts: empty draw store");

  PredictiveDraws pd;
  pd.horizons = horizons;
  pd.origin = store.origin;
  pd.codes = store.codes;
  pd.std_info = store.std_info;
  const Eigen::Index nh = static_cast<Eigen::Index>(horizons.size());

  for (int s = 0; s < store.n_draws(); ++s) {
    const Eigen::MatrixXd& coeff = store.coeff[static_cast<size_t>(s)];
    std::vector<Eigen::MatrixXd> blocks;
    for (int l = 0; l < p; ++l) blocks.push_back(coeff.middleCols(static_cast<Eigen::Index>(l) * m, m));
    Companion comp = build_companion(blocks, coeff.col(pm));
    Eigen::MatrixXd omega = store.omega(s);

    // y_tail rows are chronological; the state stack wants newest first.
    const Eigen::MatrixXd& tail = store.y_tail[static_cast<size_t>(s)];
    Eigen::VectorXd state(pm);
    for (int l = 0; l < p; ++l) state.segment(static_cast<Eigen::Index>(l) * m, m) = tail.row(p - 1 - l);

    std::vector<ForecastMoments> fms = forecast_moments_multi(comp, omega, state, horizons);

    Eigen::MatrixXd vals(nh, m), means(nh, m);
    std::vector<Eigen::MatrixXd> covs;
    covs.reserve(static_cast<size_t>(nh));
    for (Eigen::Index a = 0; a < nh; ++a) {
      const ForecastMoments& fm = fms[static_cast<size_t>(a)];
      means.row(a) = fm.mean;
      covs.push_back(fm.cov);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(fm.cov);
      if (es.info() != Eigen::Success)
        throw std::runtime_error("draw_forecasts: eigendecomposition failed");
      Eigen::VectorXd root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
      Eigen::VectorXd z = rng.normal_vector(m);
      Eigen::VectorXd y_std = fm.mean + es.eigenvectors() * (root.asDiagonal() * z);
      vals.row(a) = (pd.std_info.mean.array() + pd.std_info.sd.array() * y_std.array()).matrix();
    }
    pd.values.push_back(std::move(vals));
    pd.means.push_back(std::move(means));
    pd.covs.push_back(std::move(covs));
  }
  return pd;
}

}  // namespace rtbvar

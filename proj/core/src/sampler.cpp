#include "rtbvar/sampler.hpp"

#include <cmath>
#include <stdexcept>

#include "rtbvar/ffbs.hpp"
#include "rtbvar/nowcast.hpp"

namespace rtbvar {

namespace {

// Coefficient vector of equation i at observation t (0-based): the noncentered
// decomposition beta0 + sqrt_v ⊙ tilde_t, where tilde_path row t+1 holds the
// state of observation t.
Eigen::VectorXd beta_at(const EquationState& eq, Eigen::Index t_obs, bool tvp) {
  if (!tvp) return eq.beta0;
  return eq.beta0 +
         (eq.sqrt_v.array() * eq.tilde_path.row(t_obs + 1).transpose().array()).matrix();
}

Eigen::MatrixXd lag_matrix(const Eigen::MatrixXd& filled, int p) {
  const Eigen::Index t_all = filled.rows(), m = filled.cols();
  const Eigen::Index tp = t_all - p;
  Eigen::MatrixXd x(tp, static_cast<Eigen::Index>(p) * m);
  for (Eigen::Index t = 0; t < tp; ++t)
    for (int l = 1; l <= p; ++l) x.row(t).segment((l - 1) * m, m) = filled.row(p + t - l);
  return x;
}

}  // namespace

ChainState init_chain(const Panel& panel, const SamplerConfig& cfg, std::uint64_t seed) {
  const Eigen::Index t_all = panel.n_months(), m = panel.n_series();
  const int p = cfg.lags;
  if (p < 1) throw std::runtime_error("init_chain: lags must be >= 1");
  if (t_all <= p) throw std::runtime_error("init_chain: panel shorter than lags + 1 months");
  const Eigen::Index tp = t_all - p;

  ChainState st(seed);
  st.filled = panel.values;
  for (Eigen::Index t = 0; t < t_all; ++t)
    for (Eigen::Index j = 0; j < m; ++j)
      if (!panel.mask(t, j)) st.filled(t, j) = 0.0;

  for (Eigen::Index i = 0; i < m; ++i) {
    const Eigen::Index k = static_cast<Eigen::Index>(p) * m + i + 1;
    EquationState eq;
    eq.beta0 = Eigen::VectorXd::Zero(k);
    eq.sqrt_v = cfg.tvp ? Eigen::VectorXd::Constant(k, 0.01) : Eigen::VectorXd::Zero(k);
    eq.tilde_path = Eigen::MatrixXd::Zero(tp + 1, k);
    st.equations.push_back(std::move(eq));
    st.shrinkage.push_back(HorseshoeState::unit(cfg.tvp ? 2 * k : k));
    st.vols.push_back(SvState::initial(tp));
  }
  return st;
}

EquationData compose_equation(Eigen::Index i, const Eigen::MatrixXd& filled,
                              const ChainState& state, const SamplerConfig& cfg) {
  const Eigen::Index m = filled.cols();
  const int p = cfg.lags;
  const Eigen::Index tp = filled.rows() - p;
  if (i < 0 || i >= m) throw std::runtime_error("compose_equation: equation index out of range");
  const Eigen::Index pm = static_cast<Eigen::Index>(p) * m;
  const Eigen::Index k = pm + i + 1;

  Eigen::MatrixXd xlag = lag_matrix(filled, p);

  // Reduced-form residuals of earlier equations, built recursively through the
  // triangular system with the newest draws.
  Eigen::MatrixXd eps(tp, i);
  for (Eigen::Index j = 0; j < i; ++j) {
    const EquationState& eqj = state.equations[static_cast<size_t>(j)];
    for (Eigen::Index t = 0; t < tp; ++t) {
      Eigen::VectorXd beta = beta_at(eqj, t, cfg.tvp);
      double fit = beta.head(pm).dot(xlag.row(t));
      for (Eigen::Index l = 0; l < j; ++l) fit -= beta[pm + l] * eps(t, l);
      fit += beta[pm + j];  // intercept (last entry of the K_j block)
      eps(t, j) = filled(p + t, j) - fit;
    }
  }
  if (i > 0 && !eps.allFinite())
    throw std::runtime_error("compose_equation: non-finite residuals for equation " +
                             std::to_string(i + 1));

  EquationData d;
  d.y = filled.col(i).segment(p, tp);
  d.z.resize(tp, k);
  d.z.leftCols(pm) = xlag;
  for (Eigen::Index l = 0; l < i; ++l) d.z.col(pm + l) = -eps.col(l);
  d.z.col(k - 1).setOnes();

  const EquationState& eqi = state.equations[static_cast<size_t>(i)];
  d.aug_z.resize(tp, 2 * k);
  d.aug_z.leftCols(k) = d.z;
  for (Eigen::Index t = 0; t < tp; ++t)
    d.aug_z.row(t).tail(k) =
        d.z.row(t).cwiseProduct(eqi.tilde_path.row(t + 1));
  return d;
}

void draw_constant_block(const EquationData& data, const HorseshoeState& hs, const SvState& sv,
                         bool tvp, EquationState& eq, Rng& rng) {
  const Eigen::Index k = data.z.cols();
  Eigen::VectorXd obs_var = sv.log_vol.array().exp();
  if (tvp) {
    if (hs.psi.size() != 2 * k)
      throw std::runtime_error("draw_constant_block: horseshoe dimension mismatch");
    Eigen::VectorXd b = draw_regression(data.y, data.aug_z, obs_var, hs.prior_var(), rng);
    eq.beta0 = b.head(k);
    eq.sqrt_v = b.tail(k);
  } else {
    if (hs.psi.size() != k)
      throw std::runtime_error("draw_constant_block: horseshoe dimension mismatch");
    eq.beta0 = draw_regression(data.y, data.z, obs_var, hs.prior_var(), rng);
  }
}

Eigen::MatrixXd ffbs_states(const Eigen::VectorXd& y, const Eigen::MatrixXd& z,
                            const Eigen::VectorXd& beta0, const Eigen::VectorXd& sqrt_v,
                            const SvState& sv, Rng& rng) {
  Eigen::VectorXd resid = y - z * beta0;
  Eigen::MatrixXd loadings = z.array().rowwise() * sqrt_v.transpose().array();
  Eigen::VectorXd obs_var = sv.log_vol.array().exp();
  return ffbs_random_walk(resid, loadings, obs_var, rng);
}

void gibbs_sweep(ChainState& state, const Panel& panel, const SamplerConfig& cfg) {
  const Eigen::Index m = panel.n_series();
  const Eigen::Index tp = panel.n_months() - cfg.lags;

  for (Eigen::Index i = 0; i < m; ++i) {
    EquationState& eq = state.equations[static_cast<size_t>(i)];
    HorseshoeState& hs = state.shrinkage[static_cast<size_t>(i)];
    SvState& sv = state.vols[static_cast<size_t>(i)];

    EquationData data = compose_equation(i, state.filled, state, cfg);
    draw_constant_block(data, hs, sv, cfg.tvp, eq, state.rng);
    if (cfg.tvp)
      eq.tilde_path = ffbs_states(data.y, data.z, eq.beta0, eq.sqrt_v, sv, state.rng);

    if (cfg.tvp) {
      Eigen::VectorXd b(2 * eq.beta0.size());
      b << eq.beta0, eq.sqrt_v;
      draw_horseshoe(b, hs, state.rng);
    } else {
      draw_horseshoe(eq.beta0, hs, state.rng);
    }

    // Structural residuals under the newest coefficient and state draws.
    Eigen::VectorXd eta = data.y - data.z * eq.beta0;
    if (cfg.tvp)
      for (Eigen::Index t = 0; t < tp; ++t)
        eta[t] -= data.z.row(t).cwiseProduct(eq.tilde_path.row(t + 1)).dot(eq.sqrt_v);
    draw_sv(eta, sv, cfg.sv_prior, state.rng);
  }
  ++state.sweep_index;

  if (!panel.mask.all()) impute_ragged_edge(state, panel, cfg);
}

DrawStore run_chain(const Panel& panel, const SamplerConfig& cfg, std::uint64_t seed) {
  const Eigen::Index m = panel.n_series();
  const int p = cfg.lags;
  const Eigen::Index tp = panel.n_months() - p;
  const Eigen::Index pm = static_cast<Eigen::Index>(p) * m;
  if (cfg.draws < 1 || cfg.burn < 0 || cfg.thin < 1)
    throw std::runtime_error("run_chain: invalid draws/burn/thin");

  ChainState st = init_chain(panel, cfg, seed);

  DrawStore store;
  store.m = static_cast<int>(m);
  store.p = p;
  store.tvp = cfg.tvp;
  store.seed = seed;
  store.origin = panel.last_month();
  store.codes = panel.codes;
  if (panel.standardized) {
    store.std_info = panel.std_info;
  } else {
    store.std_info.mean = Eigen::VectorXd::Zero(m);
    store.std_info.sd = Eigen::VectorXd::Ones(m);
  }
  const int s_total = cfg.retained();
  store.sv_mu.resize(s_total, m);
  store.sv_phi.resize(s_total, m);
  store.sv_sigma.resize(s_total, m);

  int kept = 0;
  for (int sweep = 0; sweep < cfg.draws; ++sweep) {
    gibbs_sweep(st, panel, cfg);

    for (Eigen::Index i = 0; i < m; ++i) {
      const EquationState& eq = st.equations[static_cast<size_t>(i)];
      if (!eq.beta0.allFinite() || !eq.sqrt_v.allFinite() ||
          !st.vols[static_cast<size_t>(i)].log_vol.allFinite())
        throw std::runtime_error("run_chain: non-finite state at sweep " + std::to_string(sweep));
    }

    int j = sweep - cfg.burn;
    if (j < 0 || j % cfg.thin != cfg.thin - 1) continue;

    Eigen::MatrixXd coeff(m, pm + 1);
    Eigen::MatrixXd hinv = Eigen::MatrixXd::Identity(m, m);
    Eigen::VectorXd sigma(m);
    for (Eigen::Index i = 0; i < m; ++i) {
      const EquationState& eq = st.equations[static_cast<size_t>(i)];
      Eigen::VectorXd beta_t = eq.beta0;
      if (cfg.tvp)
        beta_t += (eq.sqrt_v.array() * eq.tilde_path.row(tp).transpose().array()).matrix();
      coeff.row(i).head(pm) = beta_t.head(pm);
      coeff(i, pm) = beta_t[pm + i];  // intercept
      for (Eigen::Index l = 0; l < i; ++l) hinv(i, l) = beta_t[pm + l];
      const SvState& sv = st.vols[static_cast<size_t>(i)];
      sigma[i] = std::exp(sv.log_vol[tp - 1]);
      store.sv_mu(kept, i) = sv.mu;
      store.sv_phi(kept, i) = sv.phi;
      store.sv_sigma(kept, i) = sv.sigma_eta;
    }
    store.coeff.push_back(std::move(coeff));
    store.h_inv.push_back(std::move(hinv));
    store.sigma.push_back(std::move(sigma));
    store.y_tail.push_back(st.filled.bottomRows(p));
    ++kept;
  }
  return store;
}

Eigen::MatrixXd DrawStore::omega(int s) const {
  const auto& hi = h_inv[static_cast<size_t>(s)];
  Eigen::MatrixXd h =
      hi.triangularView<Eigen::Lower>().solve(Eigen::MatrixXd::Identity(m, m));
  Eigen::MatrixXd om = h * sigma[static_cast<size_t>(s)].asDiagonal() * h.transpose();
  return 0.5 * (om + om.transpose());
}

}  // namespace rtbvar

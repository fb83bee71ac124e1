#include <doctest.h>

#include <cmath>

#include "rtbvar/forecast.hpp"

using namespace rtbvar;

namespace {

// Independent cross-check: cov(y_{T+h}) = sum_{i<h} A^i Omega~ (A^i)' and
// mean = A^h s + sum_{i<h} A^i c, computed with explicit matrix powers.
ForecastMoments moments_by_powers(const Companion& comp, const Eigen::MatrixXd& omega,
                                  const Eigen::VectorXd& state, int h) {
  const Eigen::Index n = comp.a.rows();
  Eigen::MatrixXd omega_full = Eigen::MatrixXd::Zero(n, n);
  omega_full.topLeftCorner(comp.m, comp.m) = omega;
  Eigen::MatrixXd apow = Eigen::MatrixXd::Identity(n, n);
  Eigen::VectorXd mean = state;
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < h; ++i) {
    cov += apow * omega_full * apow.transpose();
    apow = comp.a * apow;
  }
  mean = apow * state;
  Eigen::MatrixXd cpow = Eigen::MatrixXd::Identity(n, n);
  for (int i = 0; i < h; ++i) {
    mean += cpow * comp.c;
    cpow = comp.a * cpow;
  }
  ForecastMoments out;
  out.mean = mean.head(comp.m);
  out.cov = cov.topLeftCorner(comp.m, comp.m);
  out.horizon = h;
  return out;
}

}  // namespace

TEST_SUITE("forecast") {

TEST_CASE("companion stacking for a two-lag system") {
  Eigen::MatrixXd a1(2, 2), a2(2, 2);
  a1 << 0.5, 0.1, 0.0, 0.4;
  a2 << 0.2, 0.0, -0.1, 0.1;
  Eigen::VectorXd c(2);
  c << 1.0, -1.0;
  Companion comp = build_companion({a1, a2}, c);
  REQUIRE(comp.a.rows() == 4);
  CHECK(comp.m == 2);
  CHECK(comp.p == 2);
  CHECK(comp.a(0, 0) == 0.5);
  CHECK(comp.a(0, 2) == 0.2);
  CHECK(comp.a(1, 2) == -0.1);
  // Identity shift in the lower-left block, zeros lower-right.
  CHECK(comp.a(2, 0) == 1.0);
  CHECK(comp.a(3, 1) == 1.0);
  CHECK(comp.a(2, 2) == 0.0);
  CHECK(comp.c[0] == 1.0);
  CHECK(comp.c[2] == 0.0);
}

TEST_CASE("ar(1) forecast variance accumulates to 1.25 at two steps") {
  // y_{t+1} = 0.5 y_t + e, var(e) = 1, y_T = 2:
  //   h=1: mean 1,   var 1
  //   h=2: mean 0.5, var 1 + 0.25 = 1.25.
  Eigen::MatrixXd a1(1, 1);
  a1 << 0.5;
  Companion comp = build_companion({a1}, Eigen::VectorXd::Zero(1));
  Eigen::MatrixXd omega(1, 1);
  omega << 1.0;
  Eigen::VectorXd state(1);
  state << 2.0;

  ForecastMoments h1 = forecast_moments(comp, omega, state, 1);
  CHECK(h1.mean[0] == doctest::Approx(1.0));
  CHECK(h1.cov(0, 0) == doctest::Approx(1.0));
  ForecastMoments h2 = forecast_moments(comp, omega, state, 2);
  CHECK(h2.mean[0] == doctest::Approx(0.5));
  CHECK(h2.cov(0, 0) == doctest::Approx(1.25));

  // With an intercept the mean gains c(1 + a) at h=2.
  Eigen::VectorXd c(1);
  c << 0.3;
  Companion compc = build_companion({a1}, c);
  ForecastMoments h2c = forecast_moments(compc, omega, state, 2);
  CHECK(h2c.mean[0] == doctest::Approx(0.5 + 0.3 * 1.5));

  // A random walk's forecast variance is h.
  Eigen::MatrixXd one(1, 1);
  one << 1.0;
  Companion rw = build_companion({one}, Eigen::VectorXd::Zero(1));
  ForecastMoments h7 = forecast_moments(rw, omega, state, 7);
  CHECK(h7.cov(0, 0) == doctest::Approx(7.0));
  CHECK(h7.mean[0] == doctest::Approx(2.0));
}

TEST_CASE("recursion agrees with explicit matrix powers on a var(2)") {
  Eigen::MatrixXd a1(2, 2), a2(2, 2);
  a1 << 0.5, 0.1, 0.1, 0.4;
  a2 << 0.15, 0.0, -0.05, 0.1;
  Eigen::VectorXd c(2);
  c << 0.2, -0.1;
  Companion comp = build_companion({a1, a2}, c);
  Eigen::MatrixXd omega(2, 2);
  omega << 1.0, 0.3, 0.3, 0.8;
  Eigen::VectorXd state(4);
  state << 1.0, -0.5, 0.4, 0.2;

  for (int h : {1, 2, 5, 12}) {
    ForecastMoments got = forecast_moments(comp, omega, state, h);
    ForecastMoments want = moments_by_powers(comp, omega, state, h);
    CHECK((got.mean - want.mean).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((got.cov - want.cov).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((got.cov - got.cov.transpose()).cwiseAbs().maxCoeff() < 1e-12);
  }

  // The multi-horizon pass reproduces the single calls.
  auto multi = forecast_moments_multi(comp, omega, state, {1, 2, 5, 12});
  REQUIRE(multi.size() == 4);
  CHECK(multi[2].horizon == 5);
  ForecastMoments single = forecast_moments(comp, omega, state, 5);
  CHECK((multi[2].mean - single.mean).cwiseAbs().maxCoeff() == 0.0);
  CHECK((multi[2].cov - single.cov).cwiseAbs().maxCoeff() == 0.0);

  CHECK_THROWS(forecast_moments_multi(comp, omega, state, {2, 1}));  // not ascending
  CHECK_THROWS(forecast_moments(comp, omega, state, 0));
}

TEST_CASE("predictive draws destandardize through the stored constants") {
  // A handmade single-draw store with zero shock variance: the simulated
  // path must equal the de-standardized mean path exactly.
  DrawStore st;
  st.m = 1;
  st.p = 1;
  st.tvp = false;
  st.origin = Month{2010, 12};
  st.codes = {"A"};
  st.std_info.mean = Eigen::VectorXd::Constant(1, 10.0);
  st.std_info.sd = Eigen::VectorXd::Constant(1, 2.0);
  Eigen::MatrixXd coeff(1, 2);
  coeff << 0.5, 0.0;  // slope, intercept
  st.coeff = {coeff};
  st.h_inv = {Eigen::MatrixXd::Identity(1, 1)};
  st.sigma = {Eigen::VectorXd::Zero(1)};
  Eigen::MatrixXd tail(1, 1);
  tail << 2.0;  // standardized last observation
  st.y_tail = {tail};
  st.sv_mu = st.sv_phi = st.sv_sigma = Eigen::MatrixXd::Zero(1, 1);

  Rng rng(3);
  PredictiveDraws pd = draw_forecasts(st, {1, 2}, rng);
  REQUIRE(pd.n_draws() == 1);
  REQUIRE(pd.horizons.size() == 2);
  CHECK(pd.origin == st.origin);
  // Standardized means 1.0 and 0.5; in original units 10 + 2*mean.
  CHECK(pd.means[0](0, 0) == doctest::Approx(1.0));
  CHECK(pd.means[0](1, 0) == doctest::Approx(0.5));
  CHECK(pd.values[0](0, 0) == doctest::Approx(12.0));
  CHECK(pd.values[0](1, 0) == doctest::Approx(11.0));
  CHECK(pd.covs[0][1](0, 0) == doctest::Approx(0.0));
}

TEST_CASE("the state stack reads the tail newest-first") {
  // Two lags, slope only on lag 2: y_{T+1} depends on y_{T-1} alone, which
  // pins down how y_tail rows map into the companion state.
  DrawStore st;
  st.m = 1;
  st.p = 2;
  st.tvp = false;
  st.origin = Month{2011, 6};
  st.codes = {"A"};
  st.std_info.mean = Eigen::VectorXd::Zero(1);
  st.std_info.sd = Eigen::VectorXd::Ones(1);
  Eigen::MatrixXd coeff(1, 3);
  coeff << 0.0, 0.7, 0.0;  // lag1, lag2, intercept
  st.coeff = {coeff};
  st.h_inv = {Eigen::MatrixXd::Identity(1, 1)};
  st.sigma = {Eigen::VectorXd::Zero(1)};
  Eigen::MatrixXd tail(2, 1);
  tail << 5.0, 1.0;  // chronological: y_{T-1} = 5, y_T = 1
  st.y_tail = {tail};
  st.sv_mu = st.sv_phi = st.sv_sigma = Eigen::MatrixXd::Zero(1, 1);

  Rng rng(4);
  PredictiveDraws pd = draw_forecasts(st, {1}, rng);
  CHECK(pd.values[0](0, 0) == doctest::Approx(0.7 * 5.0));
}

TEST_CASE("predictive draws are deterministic given the seed") {
  // A richer store exercised twice with the same generator seed.
  DrawStore st;
  st.m = 2;
  st.p = 1;
  st.tvp = false;
  st.origin = Month{2012, 3};
  st.codes = {"A", "B"};
  st.std_info.mean = Eigen::VectorXd::Zero(2);
  st.std_info.sd = Eigen::VectorXd::Ones(2);
  Eigen::MatrixXd coeff(2, 3);
  coeff << 0.5, 0.1, 0.05, 0.0, 0.3, -0.02;
  Eigen::MatrixXd hinv = Eigen::MatrixXd::Identity(2, 2);
  hinv(1, 0) = -0.4;
  Eigen::VectorXd sigma(2);
  sigma << 0.5, 0.25;
  Eigen::MatrixXd tail(1, 2);
  tail << 0.3, -0.6;
  for (int s = 0; s < 3; ++s) {
    st.coeff.push_back(coeff);
    st.h_inv.push_back(hinv);
    st.sigma.push_back(sigma);
    st.y_tail.push_back(tail);
  }
  st.sv_mu = st.sv_phi = st.sv_sigma = Eigen::MatrixXd::Zero(3, 2);

  Rng a(9), b(9), c(10);
  std::uint64_t d1 = draw_forecasts(st, {1, 3}, a).digest();
  std::uint64_t d2 = draw_forecasts(st, {1, 3}, b).digest();
  std::uint64_t d3 = draw_forecasts(st, {1, 3}, c).digest();
  CHECK(d1 == d2);
  CHECK(d1 != d3);
}

}  // TEST_SUITE

#include <doctest.h>

#include <cmath>
#include <vector>

#include "rtbvar/special.hpp"

using namespace rtbvar;

TEST_SUITE("special") {

TEST_CASE("incomplete gamma against closed forms") {
  // P(1, x) = 1 - exp(-x).
  for (double x : {0.1, 0.5, 1.0, 2.5, 10.0}) {
    CHECK(gamma_p(1.0, x) == doctest::Approx(1.0 - std::exp(-x)).epsilon(1e-12));
  }
  // P(1/2, x) = erf(sqrt(x)).
  for (double x : {0.2, 1.0, 4.0}) {
    CHECK(gamma_p(0.5, x) == doctest::Approx(std::erf(std::sqrt(x))).epsilon(1e-12));
  }
  // P + Q = 1, both sides of the series/continued-fraction split.
  for (double a : {0.7, 3.0, 12.0}) {
    for (double x : {0.5, a, 3.0 * a}) {
      CHECK(gamma_p(a, x) + gamma_q(a, x) == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
  CHECK(gamma_p(2.0, 0.0) == 0.0);
}

TEST_CASE("inverse gamma cdf") {
  // InvGamma(1, b) has F(x) = exp(-b/x); median = b / log 2.
  double b = 2.5;
  double med = b / std::log(2.0);
  CHECK(inv_gamma_cdf(1.0, b, med) == doctest::Approx(0.5).epsilon(1e-12));
  for (double x : {0.3, 1.0, 4.0}) {
    CHECK(inv_gamma_cdf(1.0, b, x) == doctest::Approx(std::exp(-b / x)).epsilon(1e-12));
  }
  // Monotone increasing in x.
  CHECK(inv_gamma_cdf(3.0, 2.0, 0.5) < inv_gamma_cdf(3.0, 2.0, 1.0));
}

TEST_CASE("normal cdf and log density") {
  CHECK(normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(normal_cdf(1.959963984540054) == doctest::Approx(0.975).epsilon(1e-9));
  CHECK(normal_cdf(-8.0) < 1e-14);

  // N(1, 4) at x = 2: log pdf = -0.5 log(2 pi 4) - (1/8).
  double expect = -0.5 * std::log(2.0 * M_PI * 4.0) - 1.0 / 8.0;
  CHECK(log_normal_pdf(2.0, 1.0, 4.0) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("log_sum_exp") {
  std::vector<double> v{std::log(2.0), std::log(3.0)};
  CHECK(log_sum_exp(v) == doctest::Approx(std::log(5.0)).epsilon(1e-12));
  // Huge common offsets must not overflow.
  std::vector<double> big{1000.0, 1000.0};
  CHECK(log_sum_exp(big) == doctest::Approx(1000.0 + std::log(2.0)).epsilon(1e-12));
  CHECK(std::isinf(log_sum_exp({})));
}

TEST_CASE("ks statistic of an evenly spread sample is 1/(2n)") {
  // Samples at (i+0.5)/n against the U(0,1) CDF: every step straddles the
  // diagonal symmetrically, so D = 1/(2n) exactly.
  const int n = 100;
  std::vector<double> s(n);
  for (int i = 0; i < n; ++i) s[i] = (i + 0.5) / n;
  auto unif = [](double x) { return x; };
  CHECK(ks_statistic(s, unif) == doctest::Approx(0.5 / n).epsilon(1e-12));
  // A grossly shifted sample has a large statistic.
  for (auto& x : s) x = 0.5 + x / 2;
  CHECK(ks_statistic(s, unif) > 0.4);
}

TEST_CASE("multivariate normal log density reduces to marginals when diagonal") {
  Eigen::VectorXd x(2), m(2);
  x << 0.3, -1.2;
  m << 0.1, 0.4;
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(2, 2);
  cov(0, 0) = 2.0;
  cov(1, 1) = 0.5;
  double expect = log_normal_pdf(x[0], m[0], 2.0) + log_normal_pdf(x[1], m[1], 0.5);
  CHECK(log_mvn_pdf(x, m, cov) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("robust cholesky accepts semidefinite input and rejects indefinite") {
  Eigen::MatrixXd psd(2, 2);
  psd << 1.0, 1.0, 1.0, 1.0;  // rank one
  Eigen::MatrixXd l = robust_cholesky(psd, "test");
  CHECK(((l * l.transpose()) - psd).cwiseAbs().maxCoeff() < 1e-6);

  Eigen::MatrixXd indef(2, 2);
  indef << 1.0, 2.0, 2.0, 1.0;  // eigenvalues 3, -1
  CHECK_THROWS(robust_cholesky(indef, "test"));
}

}  // TEST_SUITE

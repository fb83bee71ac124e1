#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

namespace rtbvar {

// Regularized incomplete gamma functions P(a,x) (lower) and Q(a,x) = 1 - P(a,x)
// (upper), by the usual series / continued-fraction split at x = a + 1.
// Needed for inverse-gamma CDFs; the standard library has no incomplete gamma.
double gamma_p(double a, double x);
double gamma_q(double a, double x);

// CDF of InvGamma(shape a, scale b) (density ∝ x^{-a-1} e^{-b/x}):
// F(x) = Q(a, b/x).
double inv_gamma_cdf(double a, double b, double x);

double normal_cdf(double x);
double log_normal_pdf(double x, double mean, double var);

// log(sum_i exp(v_i)) without overflow; -inf for an empty input.
double log_sum_exp(const std::vector<double>& v);

// Two-sided Kolmogorov-Smirnov statistic of `samples` against a CDF given as a
// callable; samples are copied and sorted internally.
double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf);

// Log density of N(mean, cov) at x via Cholesky; throws if cov is not SPD
// (after one jitter retry, matching the library-wide policy).
double log_mvn_pdf(const Eigen::VectorXd& x, const Eigen::VectorXd& mean,
                   const Eigen::MatrixXd& cov);

// Cholesky factor with the library-wide jitter policy: try plain LLT; on
// failure add 1e-8 * mean-diagonal to the diagonal and retry once; then throw.
Eigen::MatrixXd robust_cholesky(const Eigen::MatrixXd& a, const char* what);

}  // namespace rtbvar

#include "rtbvar/special.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rtbvar {

namespace {

// Series expansion of P(a,x), converges quickly for x < a + 1.
double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int n = 0; n < 500; ++n) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * 1e-15)
      return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
  }
  throw std::runtime_error("gamma_p: series failed to converge");
}

// Modified Lentz continued fraction for Q(a,x), converges for x >= a + 1.
double gamma_q_cf(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 500; ++i) {
    double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-15)
      return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
  }
  throw std::runtime_error("gamma_q: continued fraction failed to converge");
}

}  // namespace

double gamma_p(double a, double x) {
  if (!(a > 0.0)) throw std::runtime_error("gamma_p: shape must be positive");
  if (x < 0.0) throw std::runtime_error("gamma_p: x must be nonnegative");
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) return gamma_p_series(a, x);
  return 1.0 - gamma_q_cf(a, x);
}

double gamma_q(double a, double x) {
  if (!(a > 0.0)) throw std::runtime_error("gamma_q: shape must be positive");
  if (x < 0.0) throw std::runtime_error("gamma_q: x must be nonnegative");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_cf(a, x);
}

double inv_gamma_cdf(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  return gamma_q(a, b / x);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x * 0.7071067811865475244); }

double log_normal_pdf(double x, double mean, double var) {
  if (!(var > 0.0)) throw std::runtime_error("log_normal_pdf: variance must be positive");
  double d = x - mean;
  return -0.5 * (std::log(2.0 * M_PI * var) + d * d / var);
}

double log_sum_exp(const std::vector<double>& v) {
  if (v.empty()) return -std::numeric_limits<double>::infinity();
  double mx = *std::max_element(v.begin(), v.end());
  if (!std::isfinite(mx)) return mx;
  double s = 0.0;
  for (double x : v) s += std::exp(x - mx);
  return mx + std::log(s);
}

double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw std::runtime_error("ks_statistic: empty sample");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (size_t i = 0; i < samples.size(); ++i) {
    double f = cdf(samples[i]);
    d = std::max(d, std::fabs(f - static_cast<double>(i) / n));
    d = std::max(d, std::fabs(static_cast<double>(i + 1) / n - f));
  }
  return d;
}

Eigen::MatrixXd robust_cholesky(const Eigen::MatrixXd& a, const char* what) {
  Eigen::LLT<Eigen::MatrixXd> llt(a);
  if (llt.info() == Eigen::Success) return llt.matrixL();
  // One jitter retry, then give up: silently "fixing" a badly indefinite
  // matrix would corrupt draws without a trace.
  double scale = std::max(1.0, a.diagonal().cwiseAbs().mean());
  Eigen::MatrixXd aj = a + 1e-8 * scale * Eigen::MatrixXd::Identity(a.rows(), a.cols());
  Eigen::LLT<Eigen::MatrixXd> llt2(aj);
  if (llt2.info() == Eigen::Success) return llt2.matrixL();
  throw std::runtime_error(std::string("Cholesky failed after jitter retry in ") + what);
}

double log_mvn_pdf(const Eigen::VectorXd& x, const Eigen::VectorXd& mean,
                   const Eigen::MatrixXd& cov) {
  const Eigen::Index n = x.size();
  Eigen::MatrixXd l = robust_cholesky(cov, "log_mvn_pdf");
  Eigen::VectorXd z = l.triangularView<Eigen::Lower>().solve(x - mean);
  double log_det = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) log_det += std::log(l(i, i));
  return -0.5 * n * std::log(2.0 * M_PI) - log_det - 0.5 * z.squaredNorm();
}

}  // namespace rtbvar

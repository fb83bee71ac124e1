#include "rtbvar/scores.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "rtbvar/special.hpp"

namespace rtbvar {

double abs_fe(double realized, double point_forecast) {
  return std::abs(realized - point_forecast);
}

double rmse(const std::vector<double>& errors) {
  if (errors.empty()) throw std::runtime_error("rmse: empty error vector");
  double ss = 0.0;
  for (double e : errors) ss += e * e;
  return std::sqrt(ss / static_cast<double>(errors.size()));
}

double marginal_lpl(double realized, const std::vector<std::pair<double, double>>& moments,
                    double mean_shift, double scale) {
  if (moments.empty()) throw std::runtime_error("marginal_lpl: no mixture components");
  std::vector<double> logp;
  logp.reserve(moments.size());
  for (const auto& [mu, var] : moments) {
    double m = mean_shift + scale * mu;
    double v = scale * scale * var;
    logp.push_back(log_normal_pdf(realized, m, v));
  }
  return log_sum_exp(logp) - std::log(static_cast<double>(moments.size()));
}

double joint_lpl(const Eigen::VectorXd& realized,
                 const std::vector<std::pair<Eigen::VectorXd, Eigen::MatrixXd>>& moments,
                 const Eigen::VectorXd& mean_shift, const Eigen::VectorXd& scale) {
  if (moments.empty()) throw std::runtime_error("joint_lpl: no mixture components");
  const Eigen::Index f = realized.size();
  if (mean_shift.size() != f || scale.size() != f)
    throw std::runtime_error("joint_lpl: standardization vectors have wrong length");
  std::vector<double> logp;
  logp.reserve(moments.size());
  for (const auto& [mu, sig] : moments) {
    if (mu.size() != f || sig.rows() != f || sig.cols() != f)
      throw std::runtime_error("joint_lpl: component dimension mismatch");
    Eigen::VectorXd m = mean_shift + scale.cwiseProduct(mu);
    Eigen::MatrixXd s = scale.asDiagonal() * sig * scale.asDiagonal();
    logp.push_back(log_mvn_pdf(realized, m, s));
  }
  return log_sum_exp(logp) - std::log(static_cast<double>(moments.size()));
}

std::vector<double> cumulate(const std::vector<double>& v) {
  std::vector<double> out(v.size());
  double acc = 0.0;
  for (size_t i = 0; i < v.size(); ++i) {
    acc += v[i];
    out[i] = acc;
  }
  return out;
}

std::vector<double> rank_models(const std::vector<double>& scores, RankDirection dir) {
  const size_t n = scores.size();
  for (double s : scores)
    if (!std::isfinite(s)) throw std::runtime_error("rank_models: non-finite score");
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), size_t{0});
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return dir == RankDirection::higher_better ? scores[a] > scores[b] : scores[a] < scores[b];
  });
  std::vector<double> ranks(n, 0.0);
  size_t i = 0;
  while (i < n) {
    size_t j = i;
    while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
    double avg = 0.5 * static_cast<double>(i + j) + 1.0;  // average of ranks i+1..j+1
    for (size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
    i = j + 1;
  }
  return ranks;
}

double kendall_tau(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw std::runtime_error("kendall_tau: length mismatch");
  const size_t n = a.size();
  if (n < 2) return std::numeric_limits<double>::quiet_NaN();
  long long concordant = 0, discordant = 0, ties_a = 0, ties_b = 0;
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j) {
      double da = a[i] - a[j], db = b[i] - b[j];
      if (da == 0.0) ++ties_a;
      if (db == 0.0) ++ties_b;
      if (da == 0.0 || db == 0.0) continue;
      if ((da > 0.0) == (db > 0.0))
        ++concordant;
      else
        ++discordant;
    }
  const double n0 = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
  double denom = std::sqrt((n0 - static_cast<double>(ties_a)) * (n0 - static_cast<double>(ties_b)));
  if (denom <= 0.0) return std::numeric_limits<double>::quiet_NaN();
  return static_cast<double>(concordant - discordant) / denom;
}

std::vector<double> relative_series(const std::vector<double>& realtime,
                                    const std::vector<double>& pseudo, RelativeKind kind) {
  if (realtime.size() != pseudo.size())
    throw std::runtime_error("relative_series: length mismatch");
  std::vector<double> out(realtime.size());
  for (size_t i = 0; i < realtime.size(); ++i) {
    if (kind == RelativeKind::density_diff) {
      out[i] = pseudo[i] - realtime[i];
    } else {
      out[i] = pseudo[i] == 0.0 ? std::numeric_limits<double>::quiet_NaN()
                                : realtime[i] / pseudo[i];
    }
  }
  return out;
}

}  // namespace rtbvar

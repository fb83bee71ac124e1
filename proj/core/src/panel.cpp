#include "rtbvar/panel.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace rtbvar {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

Panel build_panel(const Vintage& vintage, const std::vector<ManifestEntry>& series,
                  Month sample_start) {
  if (series.empty()) throw std::runtime_error("build_panel: empty series set");

  struct Transformed {
    Month start;
    Eigen::VectorXd values;
  };
  std::vector<Transformed> cols;
  cols.reserve(series.size());
  Month last = sample_start - 1;
  for (const auto& s : series) {
    Eigen::Index j = vintage.col(s.code);  // throws naming the code
    auto [tstart, tvals] = apply_transform(vintage.start, vintage.values.col(j), s.tcode);
    // Last observed month of this transformed series.
    Month series_last = tstart - 1;
    for (Eigen::Index t = 0; t < tvals.size(); ++t)
      if (!std::isnan(tvals[t])) series_last = tstart + static_cast<int>(t);
    if (series_last < sample_start)
      throw std::runtime_error("build_panel: series '" + s.code +
                               "' has no observations at or after " + sample_start.str());
    last = std::max(last, series_last);
    cols.push_back({tstart, std::move(tvals)});
  }

  Panel p;
  p.start = sample_start;
  const Eigen::Index T = last - sample_start + 1;
  const Eigen::Index M = static_cast<Eigen::Index>(series.size());
  p.values = Eigen::MatrixXd::Constant(T, M, kNaN);
  p.mask = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>::Constant(T, M, false);
  for (Eigen::Index j = 0; j < M; ++j) {
    p.codes.push_back(series[static_cast<size_t>(j)].code);
    const auto& c = cols[static_cast<size_t>(j)];
    for (Eigen::Index t = 0; t < T; ++t) {
      int src = (sample_start + static_cast<int>(t)) - c.start;
      if (src < 0 || src >= c.values.size()) continue;
      double v = c.values[src];
      if (!std::isnan(v)) {
        p.values(t, j) = v;
        p.mask(t, j) = true;
      }
    }
  }
  return p;
}

StandardizationInfo standardize(Panel& panel) {
  if (panel.standardized) throw std::runtime_error("standardize: panel already standardized");
  const Eigen::Index T = panel.n_months(), M = panel.n_series();
  StandardizationInfo info;
  info.mean.resize(M);
  info.sd.resize(M);
  for (Eigen::Index j = 0; j < M; ++j) {
    double sum = 0.0;
    Eigen::Index n = 0;
    for (Eigen::Index t = 0; t < T; ++t)
      if (panel.mask(t, j)) {
        sum += panel.values(t, j);
        ++n;
      }
    if (n < 2)
      throw std::runtime_error("standardize: series '" + panel.codes[j] +
                               "' has fewer than 2 observations");
    double mean = sum / static_cast<double>(n);
    double ss = 0.0;
    for (Eigen::Index t = 0; t < T; ++t)
      if (panel.mask(t, j)) {
        double d = panel.values(t, j) - mean;
        ss += d * d;
      }
    double sd = std::sqrt(ss / static_cast<double>(n - 1));
    if (sd < 1e-10 * std::max(1.0, std::fabs(mean)))
      throw std::runtime_error("standardize: series '" + panel.codes[j] + "' has zero variance");
    info.mean[j] = mean;
    info.sd[j] = sd;
    for (Eigen::Index t = 0; t < T; ++t)
      if (panel.mask(t, j)) panel.values(t, j) = (panel.values(t, j) - mean) / sd;
  }
  panel.std_info = info;
  panel.standardized = true;
  return info;
}

Eigen::VectorXd destandardize(const Eigen::VectorXd& std_values, const StandardizationInfo& info) {
  if (std_values.size() != info.mean.size())
    throw std::runtime_error("destandardize: dimension mismatch");
  return (std_values.array() * info.sd.array() + info.mean.array()).matrix();
}

}  // namespace rtbvar

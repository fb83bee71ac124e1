#include "rtbvar/synthetic.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <stdexcept>
#include <string>

#include "rtbvar/csv.hpp"
#include "rtbvar/rng.hpp"

namespace rtbvar {

namespace {

struct Resolved {
  Eigen::MatrixXd a1;
  Eigen::VectorXd intercept, shock_sd;
  std::vector<int> lag_months;
  int total_months = 0;
};

Resolved resolve(const SyntheticSpec& spec) {
  const int n = spec.n_series;
  if (n < 1) throw std::runtime_error("synthetic: need at least one series");
  if (spec.warmup < 1 || spec.n_vintages < 1 || spec.post_months < 0)
    throw std::runtime_error("synthetic: invalid month counts");
  Resolved r;
  r.a1 = spec.a1.size() ? spec.a1 : Eigen::MatrixXd(0.5 * Eigen::MatrixXd::Identity(n, n));
  r.intercept = spec.intercept.size() ? spec.intercept : Eigen::VectorXd::Zero(n);
  r.shock_sd = spec.shock_sd.size() ? spec.shock_sd : Eigen::VectorXd::Ones(n);
  if (r.a1.rows() != n || r.a1.cols() != n || r.intercept.size() != n || r.shock_sd.size() != n)
    throw std::runtime_error("synthetic: design dimensions do not match n_series");
  r.lag_months = spec.lag_months.empty() ? std::vector<int>(static_cast<size_t>(n), 1)
                                         : spec.lag_months;
  if (static_cast<int>(r.lag_months.size()) != n)
    throw std::runtime_error("synthetic: lag_months length mismatch");
  for (int l : r.lag_months)
    if (l < 0 || l > spec.warmup) throw std::runtime_error("synthetic: lag out of range");

  double radius = r.a1.eigenvalues().cwiseAbs().maxCoeff();
  if (!(radius < 1.0))
    throw std::runtime_error("synthetic: unstable transition matrix (spectral radius " +
                             std::to_string(radius) + ")");
  r.total_months = spec.warmup + spec.n_vintages + spec.post_months;
  return r;
}

Eigen::MatrixXd simulate_truth(const SyntheticSpec& spec, const Resolved& r, std::uint64_t seed) {
  const int n = spec.n_series, burn = 100;
  Rng rng(mix_seed(seed, "truth"));
  Eigen::MatrixXd truth(r.total_months, n);
  Eigen::VectorXd y = Eigen::VectorXd::Zero(n);
  for (int t = 0; t < burn + r.total_months; ++t) {
    y = r.intercept + r.a1 * y + r.shock_sd.cwiseProduct(rng.normal_vector(n));
    if (t >= burn) truth.row(t - burn) = y;
  }
  return truth;
}

std::string series_code(int s) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "SYN%02d", s + 1);
  return buf;
}

void write_vintage_file(const std::string& path, Month start, const Eigen::MatrixXd& values,
                        const std::vector<int>& last_row, int n) {
  int max_row = 0;
  for (int s = 0; s < n; ++s) max_row = std::max(max_row, last_row[static_cast<size_t>(s)]);
  std::string text = "date";
  for (int s = 0; s < n; ++s) text += "," + series_code(s);
  text += "\n";
  for (int t = 0; t <= max_row; ++t) {
    text += (start + t).str();
    for (int s = 0; s < n; ++s) {
      text += ",";
      if (t <= last_row[static_cast<size_t>(s)]) text += format_double(values(t, s));
    }
    text += "\n";
  }
  write_text_file(path, text);
}

}  // namespace

Eigen::MatrixXd synthetic_truth(const SyntheticSpec& spec, std::uint64_t seed) {
  Resolved r = resolve(spec);
  return simulate_truth(spec, r, seed);
}

void generate_synthetic_vintages(const SyntheticSpec& spec, const std::string& out_dir,
                                 std::uint64_t seed) {
  Resolved r = resolve(spec);
  const int n = spec.n_series;
  Eigen::MatrixXd truth = simulate_truth(spec, r, seed);
  std::filesystem::create_directories(out_dir);

  Eigen::VectorXd noise_scale(n);
  for (int s = 0; s < n; ++s) {
    double sd = 1.0;
    if (spec.noise_relative) {
      Eigen::VectorXd col = truth.col(s);
      double mean = col.mean();
      sd = std::sqrt((col.array() - mean).square().sum() /
                     static_cast<double>(col.size() - 1));
    }
    noise_scale[s] = spec.revision_noise_sd * sd;
  }

  for (int k = 0; k < spec.n_vintages; ++k) {
    Month release = spec.start + (spec.warmup + k);
    Eigen::MatrixXd vals = truth;
    std::vector<int> last_row(static_cast<size_t>(n));
    for (int s = 0; s < n; ++s) {
      int idx = spec.warmup + k - r.lag_months[static_cast<size_t>(s)];
      last_row[static_cast<size_t>(s)] = idx;
      if (noise_scale[s] > 0.0) {
        // Noise decays linearly with age: the newest available month gets the
        // full scale, observations older than the window are final.
        Rng rng(mix_seed(seed, "vint:" + release.str() + ":" + series_code(s)));
        for (int age = 0; age < spec.revision_window; ++age) {
          int row = idx - age;
          if (row < 0) break;
          double w = static_cast<double>(spec.revision_window - age) /
                     static_cast<double>(spec.revision_window);
          vals(row, s) += noise_scale[s] * w * rng.normal();
        }
      }
    }
    write_vintage_file(out_dir + "/" + release.str() + ".csv", spec.start, vals, last_row, n);
  }

  // Final vintage: the full noiseless truth, released after the last target.
  Month final_release = spec.start + (r.total_months - 1);
  std::vector<int> full(static_cast<size_t>(n), r.total_months - 1);
  write_vintage_file(out_dir + "/" + final_release.str() + ".csv", spec.start, truth, full, n);

  std::string manifest = "code,tcode,lag_months,group\n";
  for (int s = 0; s < n; ++s) {
    std::string group = s < 3 ? "small" : s < 6 ? "medium" : s < 11 ? "large" : "extra";
    manifest += series_code(s) + ",1," + std::to_string(r.lag_months[static_cast<size_t>(s)]) +
                "," + group + "\n";
  }
  write_text_file(out_dir + "/manifest.csv", manifest);
}

}  // namespace rtbvar

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "rtbvar/month.hpp"

namespace rtbvar {

// Data-generating design for a synthetic vintage archive: a stationary VAR(1)
// truth panel plus noisy early releases of the most recent observations.
struct SyntheticSpec {
  int n_series = 8;
  Month start{1995, 1};
  int warmup = 120;       // truth months before the first release
  int n_vintages = 24;    // monthly releases
  int post_months = 12;   // truth months past the last release (forecast targets)
  Eigen::MatrixXd a1;     // n x n transition; empty -> diag(0.5)
  Eigen::VectorXd intercept;   // empty -> zeros
  Eigen::VectorXd shock_sd;    // empty -> ones
  double revision_noise_sd = 0.0;
  bool noise_relative = false;  // scale revision noise by each series' truth sd
  int revision_window = 12;     // months subject to revision, newest weighted most
  std::vector<int> lag_months;  // per-series publication lag; empty -> all 1
};

// Writes one vintage CSV per release month (named "YYYY-MM.csv"), a final
// vintage containing the full noiseless truth (named by its last month), and
// "manifest.csv" describing the series. Identical (spec, seed) inputs write a
// byte-identical directory. Throws if the transition matrix is unstable
// (spectral radius >= 1).
void generate_synthetic_vintages(const SyntheticSpec& spec, const std::string& out_dir,
                                 std::uint64_t seed);

// The truth panel alone (warmup + n_vintages + post_months rows), for tests
// that need the target values without reading files back.
Eigen::MatrixXd synthetic_truth(const SyntheticSpec& spec, std::uint64_t seed);

}  // namespace rtbvar

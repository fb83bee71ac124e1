#include <doctest.h>

#include <cmath>

#include "rtbvar/factors.hpp"
#include "rtbvar/rng.hpp"

using namespace rtbvar;

namespace {

// A complete (no missing cells) standardized panel driven by two latent
// factors plus noise, T x N.
Panel factor_panel(int t_obs = 80, int n = 6, std::uint64_t seed = 91) {
  Rng rng(seed);
  Eigen::MatrixXd x(t_obs, n);
  for (int t = 0; t < t_obs; ++t) {
    double f1 = rng.normal(), f2 = rng.normal();
    for (int j = 0; j < n; ++j) {
      double load1 = std::cos(0.7 * j), load2 = std::sin(0.4 * j + 0.3);
      x(t, j) = load1 * f1 + load2 * f2 + 0.3 * rng.normal();
    }
  }
  Panel p;
  p.start = Month{1990, 1};
  p.values = x;
  p.mask.setConstant(t_obs, n, true);
  for (int j = 0; j < n; ++j) p.codes.push_back("W" + std::to_string(j));
  standardize(p);
  return p;
}

}  // namespace

TEST_SUITE("factors") {

TEST_CASE("principal components match an SVD oracle on complete data") {
  Panel p = factor_panel();
  const int k = 3;
  FactorSet f = extract_pcs(p, k);
  REQUIRE(f.scores.rows() == p.n_months());
  REQUIRE(f.scores.cols() == k);
  REQUIRE(f.loadings.rows() == p.n_series());

  // Oracle: thin SVD of the data matrix. X = U S V'; the principal scores are
  // X V = U S and the eigenvalues of X'X/(T-1) are S^2/(T-1).
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(p.values, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double tn = static_cast<double>(p.n_months());
  for (int c = 0; c < k; ++c) {
    double eig = svd.singularValues()[c] * svd.singularValues()[c] / (tn - 1.0);
    CHECK(f.explained_variance[c] == doctest::Approx(eig).epsilon(1e-8));

    // Loadings equal the right singular vector up to sign; resolve the sign by
    // the same convention (largest-magnitude loading positive).
    Eigen::VectorXd v = svd.matrixV().col(c);
    int arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v[arg] < 0) v = -v;
    CHECK((f.loadings.col(c) - v).cwiseAbs().maxCoeff() < 1e-8);

    // Scores equal the projection re-standardized to unit sample sd.
    Eigen::VectorXd proj = p.values * v;
    double sd = std::sqrt(proj.squaredNorm() / (tn - 1.0) -
                          proj.mean() * proj.mean() * tn / (tn - 1.0));
    Eigen::VectorXd score = proj / sd;
    CHECK((f.scores.col(c) - score).cwiseAbs().maxCoeff() < 1e-8);
  }

  // Descending eigenvalues, orthonormal loadings, unit-sd scores.
  for (int c = 1; c < k; ++c) CHECK(f.explained_variance[c] <= f.explained_variance[c - 1]);
  Eigen::MatrixXd gram = f.loadings.transpose() * f.loadings;
  CHECK((gram - Eigen::MatrixXd::Identity(k, k)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("a fully missing month is flagged and excluded") {
  Panel p = factor_panel(40, 5, 17);
  p.values.row(10).setConstant(std::nan(""));
  p.mask.row(10).setConstant(false);
  FactorSet f = extract_pcs(p, 2);
  CHECK_FALSE(f.month_observed[10]);
  CHECK(std::isnan(f.scores(10, 0)));
  CHECK(f.month_observed[9]);
  CHECK(std::isfinite(f.scores(9, 1)));
}

TEST_CASE("extract_pcs validates its inputs") {
  Panel p = factor_panel(30, 4);
  CHECK_THROWS(extract_pcs(p, 0));
  CHECK_THROWS(extract_pcs(p, 5));  // k > N
  Panel raw = factor_panel(30, 4);
  raw.standardized = false;
  CHECK_THROWS(extract_pcs(raw, 2));
}

TEST_CASE("augment_panel appends score columns with unit constants") {
  Panel wide = factor_panel(40, 5, 29);
  wide.values.row(3).setConstant(std::nan(""));
  wide.mask.row(3).setConstant(false);
  FactorSet f = extract_pcs(wide, 2);

  // A small model panel on the same grid.
  Panel base = factor_panel(40, 2, 31);
  Panel aug = augment_panel(base, f);
  REQUIRE(aug.n_series() == 4);
  CHECK(aug.codes[2] == "PC1");
  CHECK(aug.codes[3] == "PC2");
  CHECK(aug.standardized);
  CHECK(aug.std_info.mean[2] == 0.0);
  CHECK(aug.std_info.sd[3] == 1.0);
  CHECK(aug.values(5, 2) == f.scores(5, 0));
  CHECK(aug.mask(5, 3));
  CHECK_FALSE(aug.mask(3, 2));  // the all-missing wide month
  CHECK(std::isnan(aug.values(3, 3)));
  // Base columns untouched.
  CHECK(aug.values(7, 0) == base.values(7, 0));

  // Grid mismatch is an error.
  Panel off = factor_panel(39, 2, 31);
  CHECK_THROWS(augment_panel(off, f));
}

}  // TEST_SUITE

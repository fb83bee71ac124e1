#pragma once

#include <Eigen/Dense>
#include <vector>

#include "rtbvar/panel.hpp"

namespace rtbvar {

// Principal components of a wide standardized panel.
struct FactorSet {
  Eigen::MatrixXd scores;              // T x k, NaN at months with no information
  Eigen::MatrixXd loadings;            // N x k, orthonormal columns
  Eigen::VectorXd explained_variance;  // k eigenvalues, descending
  std::vector<char> month_observed;    // T; a month counts if any series is observed
  Month start;
};

// Extracts the top-k principal components: missing cells are zero-filled
// (zero = the column mean after standardization), the sample covariance is
// eigendecomposed, and scores are the data projected on the top-k
// eigenvectors. Each component's sign is fixed so its largest-magnitude
// loading is positive, and scores are re-standardized to unit sample sd so
// they enter downstream regressions on the same scale as the standardized
// panel columns. Requires a standardized panel, 2 <= T, and 1 <= k <= N.
FactorSet extract_pcs(const Panel& wide, int k);

// Appends factor scores to a model panel as pseudo-series "PC1".."PCk" with
// unit standardization constants. Factor cells are observed wherever the wide
// panel had any observation that month. The two grids must match exactly.
Panel augment_panel(const Panel& base, const FactorSet& factors);

}  // namespace rtbvar

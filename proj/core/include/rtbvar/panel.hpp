#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "rtbvar/month.hpp"
#include "rtbvar/vintage.hpp"

namespace rtbvar {

// Per-column standardization constants: x_std = (x - mean) / sd.
struct StandardizationInfo {
  Eigen::VectorXd mean;
  Eigen::VectorXd sd;
};

// An estimation-ready monthly panel. `values` holds NaN exactly where `mask`
// is false; the sampler works on a filled copy and never mutates the panel.
struct Panel {
  Month start;
  std::vector<std::string> codes;
  Eigen::MatrixXd values;  // T x M, NaN at unobserved cells
  Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> mask;  // true = observed
  bool standardized = false;
  StandardizationInfo std_info;  // valid once standardized

  Eigen::Index n_months() const { return values.rows(); }
  Eigen::Index n_series() const { return values.cols(); }
  Month month_at(Eigen::Index row) const { return start + static_cast<int>(row); }
  Month last_month() const { return start + static_cast<int>(values.rows()) - 1; }
};

// Builds a panel from a vintage: applies each series' transform code, aligns
// everything on the grid [sample_start, last month any requested series is
// observed]. Cells a vintage does not cover are masked. Errors: a requested
// code missing from the vintage, or a series with no observations on the grid
// (empty date-range intersection), both naming the series.
Panel build_panel(const Vintage& vintage, const std::vector<ManifestEntry>& series,
                  Month sample_start);

// In-place column standardization over observed cells only (mean 0, sample sd
// 1 with the n-1 divisor). Errors name the series: fewer than 2 observations,
// or zero variance. Returns the constants and stores them on the panel.
StandardizationInfo standardize(Panel& panel);

// Maps standardized values back to the original units: x*sd + mean.
Eigen::VectorXd destandardize(const Eigen::VectorXd& std_values, const StandardizationInfo& info);

}  // namespace rtbvar

#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

namespace rtbvar {

// Forecast evaluation primitives. Density scores work on predictive mixtures:
// each posterior draw contributes one Gaussian component, and the predictive
// log score is the log of the equally weighted mixture density.

double abs_fe(double realized, double point_forecast);

// Root mean squared error of a vector of (signed or absolute) errors.
double rmse(const std::vector<double>& errors);

// Marginal predictive log score of `realized` under the mixture with
// standardized per-draw moments (mean, variance) mapped through y = m + s*x.
double marginal_lpl(double realized, const std::vector<std::pair<double, double>>& moments,
                    double mean_shift, double scale);

// Joint predictive log score over a small block of series: per-draw
// standardized moments (mu, Sigma) mapped through y = m + diag(s) x, so each
// component is N(m + s .* mu, diag(s) Sigma diag(s)).
double joint_lpl(const Eigen::VectorXd& realized,
                 const std::vector<std::pair<Eigen::VectorXd, Eigen::MatrixXd>>& moments,
                 const Eigen::VectorXd& mean_shift, const Eigen::VectorXd& scale);

// Prefix sums: out[k] = sum of v[0..k].
std::vector<double> cumulate(const std::vector<double>& v);

enum class RankDirection { higher_better, lower_better };

// Competition ranks with average ties: best score gets rank 1. Throws on
// non-finite scores.
std::vector<double> rank_models(const std::vector<double>& scores, RankDirection dir);

// Kendall rank correlation with tie correction (tau-b). Returns NaN when
// either input is constant (the denominator vanishes).
double kendall_tau(const std::vector<double>& a, const std::vector<double>& b);

enum class RelativeKind { density_diff, point_ratio };

// Pairs two per-origin score series from different information sets:
// density_diff returns pseudo - realtime (log-score gaps), point_ratio returns
// realtime / pseudo (error ratios; division by zero yields NaN).
std::vector<double> relative_series(const std::vector<double>& realtime,
                                    const std::vector<double>& pseudo, RelativeKind kind);

}  // namespace rtbvar

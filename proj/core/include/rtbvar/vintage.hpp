#pragma once

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

#include "rtbvar/month.hpp"

namespace rtbvar {

// One data vintage: the snapshot of every series as published in a given
// release month. Values sit on a contiguous monthly grid; NaN marks a cell the
// vintage does not contain (never released, not yet released, or a gap).
struct Vintage {
  Month release;
  Month start;                     // month of values row 0
  std::vector<std::string> codes;  // column order as in the file
  Eigen::MatrixXd values;          // months x codes, NaN = missing

  Eigen::Index n_months() const { return values.rows(); }
  Eigen::Index n_series() const { return values.cols(); }
  Month month_at(Eigen::Index row) const { return start + static_cast<int>(row); }
  // Column index of `code`; throws naming the code if absent.
  Eigen::Index col(const std::string& code) const;
};

// Reads a vintage CSV: header "date,CODE1,CODE2,...", one row per month,
// blank fields = missing. Rows may arrive out of order; they are sorted and
// gaps become all-missing rows so the grid stays contiguous. Duplicate months,
// duplicate codes and unparseable fields are errors naming the offender.
//
// The release month is taken from the file name ("YYYY-MM.csv"); if the name
// does not parse as a month, the release defaults to one month after the last
// data month (appropriate for a "final" research file). Dates in the first
// column may be "YYYY-MM" or the FRED-MD style "M/D/YYYY"; a FRED-MD
// "Transform:" row is skipped (transform codes come from the series manifest).
Vintage parse_vintage(const std::string& path);

// One row of the series manifest CSV "code,tcode,lag_months,group".
struct ManifestEntry {
  std::string code;
  int tcode = 1;
  int lag_months = 1;
  std::string group;  // small | medium | large | extra
};

struct SeriesManifest {
  std::vector<ManifestEntry> entries;  // file order; model ordering follows it

  const ManifestEntry& find(const std::string& code) const;
  // Model series for a size, nested small ⊂ medium ⊂ large, in manifest order.
  std::vector<ManifestEntry> model_set(const std::string& size) const;
  // Everything not in `used` (for factor extraction), in manifest order.
  std::vector<ManifestEntry> complement(const std::vector<ManifestEntry>& used) const;
};

SeriesManifest parse_manifest(const std::string& path);

// Applies a transform code to a monthly series (NaN = missing):
//   1 level, 2 first difference, 4 log, 5 dlog, 6 d2log.
// Differencing consumes leading months: the result starts 1 month later for
// codes 2 and 5, 2 months later for code 6. A missing input propagates to
// every output that depends on it. Log codes require strictly positive
// observed values. Unknown codes and too-short series are errors.
// `values` starts at `start`; the returned pair is (new start, transformed).
std::pair<Month, Eigen::VectorXd> apply_transform(Month start, const Eigen::VectorXd& values,
                                                  int tcode);

// Pseudo-real-time truncation: what a vintage released in `asof` would have
// contained if series `s` is published with lag_profile[s] months of delay,
// i.e. data through asof - lag_profile[s]. Values after the cutoff become
// missing; trailing all-missing rows are dropped; release is set to `asof`.
// Codes absent from lag_profile use `default_lag`. Errors if nothing remains.
Vintage truncate_final_vintage(const Vintage& final_vintage, Month asof,
                               const std::map<std::string, int>& lag_profile, int default_lag);

}  // namespace rtbvar

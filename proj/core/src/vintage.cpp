#include "rtbvar/vintage.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <set>
#include <stdexcept>

#include "rtbvar/csv.hpp"

namespace rtbvar {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// "YYYY-MM" or FRED-MD's "M/D/YYYY".
Month parse_row_date(const std::string& field) {
  if (field.find('/') == std::string::npos) return Month::parse(field);
  int m = 0, d = 0, y = 0;
  if (std::sscanf(field.c_str(), "%d/%d/%d", &m, &d, &y) != 3 || y < 1000)
    throw std::runtime_error("vintage: cannot parse date '" + field + "'");
  return Month(y, m);
}
}  // namespace

Eigen::Index Vintage::col(const std::string& code) const {
  for (size_t j = 0; j < codes.size(); ++j)
    if (codes[j] == code) return static_cast<Eigen::Index>(j);
  throw std::runtime_error("vintage: no series named '" + code + "'");
}

Vintage parse_vintage(const std::string& path) {
  auto rows = read_csv(path);
  if (rows.size() < 2) throw std::runtime_error("vintage file has no data rows: " + path);
  const auto& header = rows[0];
  if (header.empty() || (header[0] != "date" && header[0] != "sasdate"))
    throw std::runtime_error("vintage header must start with 'date': " + path);

  Vintage v;
  std::set<std::string> seen;
  for (size_t j = 1; j < header.size(); ++j) {
    if (header[j].empty())
      throw std::runtime_error("vintage: empty series code in header of " + path);
    if (!seen.insert(header[j]).second)
      throw std::runtime_error("vintage: duplicate series code '" + header[j] + "' in " + path);
    v.codes.push_back(header[j]);
  }

  // Collect (month, fields) pairs, skipping a FRED-MD transform row.
  std::vector<std::pair<Month, const std::vector<std::string>*>> data;
  for (size_t i = 1; i < rows.size(); ++i) {
    if (!rows[i].empty() && rows[i][0].rfind("Transform", 0) == 0) continue;
    if (rows[i].size() != header.size())
      throw std::runtime_error("vintage: row " + std::to_string(i) + " has " +
                               std::to_string(rows[i].size()) + " fields, expected " +
                               std::to_string(header.size()) + " in " + path);
    data.emplace_back(parse_row_date(rows[i][0]), &rows[i]);
  }
  if (data.empty()) throw std::runtime_error("vintage file has no data rows: " + path);

  std::sort(data.begin(), data.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (size_t i = 1; i < data.size(); ++i)
    if (data[i].first == data[i - 1].first)
      throw std::runtime_error("vintage: duplicate month " + data[i].first.str() + " in " + path);

  v.start = data.front().first;
  const int n = data.back().first - v.start + 1;
  v.values = Eigen::MatrixXd::Constant(n, static_cast<Eigen::Index>(v.codes.size()), kNaN);
  for (const auto& [m, fields] : data) {
    Eigen::Index r = m - v.start;
    for (size_t j = 1; j < fields->size(); ++j) {
      try {
        v.values(r, static_cast<Eigen::Index>(j - 1)) = parse_double_field((*fields)[j]);
      } catch (const std::exception& e) {
        throw std::runtime_error(std::string(e.what()) + " (series '" + v.codes[j - 1] +
                                 "', month " + m.str() + ", file " + path + ")");
      }
    }
  }

  // Release month: from the file name when it is "YYYY-MM.csv", otherwise one
  // month past the data (a final/most-recent research file).
  std::string stem = std::filesystem::path(path).stem().string();
  try {
    v.release = Month::parse(stem);
  } catch (const std::exception&) {
    v.release = v.start + static_cast<int>(v.n_months());
  }
  return v;
}

const ManifestEntry& SeriesManifest::find(const std::string& code) const {
  for (const auto& e : entries)
    if (e.code == code) return e;
  throw std::runtime_error("manifest: no series named '" + code + "'");
}

std::vector<ManifestEntry> SeriesManifest::model_set(const std::string& size) const {
  int level;
  if (size == "small")
    level = 0;
  else if (size == "medium")
    level = 1;
  else if (size == "large")
    level = 2;
  else
    throw std::runtime_error("manifest: unknown model size '" + size + "'");
  std::vector<ManifestEntry> out;
  for (const auto& e : entries) {
    int g = e.group == "small" ? 0 : e.group == "medium" ? 1 : e.group == "large" ? 2 : 3;
    if (g <= level) out.push_back(e);
  }
  return out;
}

std::vector<ManifestEntry> SeriesManifest::complement(
    const std::vector<ManifestEntry>& used) const {
  std::set<std::string> used_codes;
  for (const auto& e : used) used_codes.insert(e.code);
  std::vector<ManifestEntry> out;
  for (const auto& e : entries)
    if (!used_codes.count(e.code)) out.push_back(e);
  return out;
}

SeriesManifest parse_manifest(const std::string& path) {
  auto rows = read_csv(path);
  if (rows.empty()) throw std::runtime_error("empty series manifest: " + path);
  size_t i0 = 0;
  if (rows[0].size() >= 1 && rows[0][0] == "code") i0 = 1;  // optional header
  SeriesManifest m;
  std::set<std::string> seen;
  for (size_t i = i0; i < rows.size(); ++i) {
    if (rows[i].size() != 4)
      throw std::runtime_error("manifest: row " + std::to_string(i) +
                               " must be code,tcode,lag_months,group in " + path);
    ManifestEntry e;
    e.code = rows[i][0];
    e.tcode = std::stoi(rows[i][1]);
    e.lag_months = std::stoi(rows[i][2]);
    e.group = rows[i][3];
    if (e.code.empty()) throw std::runtime_error("manifest: empty code at row " + std::to_string(i));
    if (!seen.insert(e.code).second)
      throw std::runtime_error("manifest: duplicate series code '" + e.code + "'");
    if (e.group != "small" && e.group != "medium" && e.group != "large" && e.group != "extra")
      throw std::runtime_error("manifest: unknown group '" + e.group + "' for series '" + e.code +
                               "'");
    if (e.lag_months < 0)
      throw std::runtime_error("manifest: negative lag for series '" + e.code + "'");
    m.entries.push_back(std::move(e));
  }
  return m;
}

std::pair<Month, Eigen::VectorXd> apply_transform(Month start, const Eigen::VectorXd& values,
                                                  int tcode) {
  const Eigen::Index n = values.size();
  auto logged = [&]() {
    Eigen::VectorXd out(n);
    for (Eigen::Index t = 0; t < n; ++t) {
      double x = values[t];
      if (std::isnan(x)) {
        out[t] = kNaN;
      } else {
        if (x <= 0.0)
          throw std::runtime_error("transform: nonpositive value " + std::to_string(x) +
                                   " under log transform at " + (start + (int)t).str());
        out[t] = std::log(x);
      }
    }
    return out;
  };
  auto diff = [](const Eigen::VectorXd& x) {
    // NaN arithmetic handles missing propagation: NaN - anything = NaN.
    return Eigen::VectorXd(x.tail(x.size() - 1) - x.head(x.size() - 1));
  };

  switch (tcode) {
    case 1:
      return {start, values};
    case 2:
      if (n < 2) throw std::runtime_error("transform: series too short for differencing");
      return {start + 1, diff(values)};
    case 4:
      return {start, logged()};
    case 5:
      if (n < 2) throw std::runtime_error("transform: series too short for differencing");
      return {start + 1, diff(logged())};
    case 6:
      if (n < 3) throw std::runtime_error("transform: series too short for double differencing");
      return {start + 2, diff(diff(logged()))};
    default:
      throw std::runtime_error("transform: unknown code " + std::to_string(tcode) +
                               " (supported: 1,2,4,5,6)");
  }
}

Vintage truncate_final_vintage(const Vintage& final_vintage, Month asof,
                               const std::map<std::string, int>& lag_profile, int default_lag) {
  Vintage v = final_vintage;
  v.release = asof;
  Month last_kept = v.start - 1;
  for (Eigen::Index j = 0; j < v.n_series(); ++j) {
    auto it = lag_profile.find(v.codes[j]);
    int lag = it != lag_profile.end() ? it->second : default_lag;
    Month cutoff = asof - lag;
    if (cutoff < v.start)
      throw std::runtime_error("truncate_final_vintage: asof " + asof.str() +
                               " leaves no data for series '" + v.codes[j] + "'");
    for (Eigen::Index t = 0; t < v.n_months(); ++t)
      if (v.month_at(t) > cutoff) v.values(t, j) = kNaN;
    Month series_last = std::min(cutoff, v.start + static_cast<int>(v.n_months()) - 1);
    last_kept = std::max(last_kept, series_last);
  }
  const Eigen::Index keep = last_kept - v.start + 1;
  if (keep <= 0) throw std::runtime_error("truncate_final_vintage: nothing left as of " + asof.str());
  v.values.conservativeResize(keep, Eigen::NoChange);
  return v;
}

}  // namespace rtbvar

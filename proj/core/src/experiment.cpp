#include "rtbvar/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <limits>
#include <mutex>
#include <set>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

#include "rtbvar/csv.hpp"
#include "rtbvar/factors.hpp"
#include "rtbvar/forecast.hpp"
#include "rtbvar/panel.hpp"
#include "rtbvar/scores.hpp"
#include "rtbvar/vintage.hpp"

namespace rtbvar {

namespace fs = std::filesystem;
using nlohmann::json;

// ---------------------------------------------------------------------------
// Model specifications

std::string ModelSpec::id() const {
  return size + (pca ? "-pca" : "") + (tvp ? "-tvp" : "-cp");
}

ModelSpec ModelSpec::parse(const std::string& s) {
  ModelSpec spec;
  std::vector<std::string> tokens;
  size_t pos = 0;
  while (pos <= s.size()) {
    size_t dash = s.find('-', pos);
    if (dash == std::string::npos) dash = s.size();
    tokens.push_back(s.substr(pos, dash - pos));
    pos = dash + 1;
  }
  if (tokens.size() < 2 || tokens.size() > 3)
    throw std::runtime_error("bad model spec '" + s + "'");
  spec.size = tokens[0];
  if (spec.size != "small" && spec.size != "medium" && spec.size != "large")
    throw std::runtime_error("bad model size in spec '" + s + "'");
  size_t i = 1;
  if (tokens[i] == "pca") {
    spec.pca = true;
    ++i;
  }
  if (i >= tokens.size()) throw std::runtime_error("bad model spec '" + s + "'");
  if (tokens[i] == "tvp")
    spec.tvp = true;
  else if (tokens[i] == "cp")
    spec.tvp = false;
  else
    throw std::runtime_error("bad dynamics token in spec '" + s + "'");
  if (i + 1 != tokens.size()) throw std::runtime_error("bad model spec '" + s + "'");
  return spec;
}

std::vector<ModelSpec> all_model_specs() {
  std::vector<ModelSpec> out;
  for (const char* size : {"small", "medium", "large"})
    for (bool pca : {false, true})
      for (bool tvp : {false, true}) out.push_back(ModelSpec{size, tvp, pca});
  return out;
}

// ---------------------------------------------------------------------------
// Configuration

namespace {

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key()))
      throw std::runtime_error("config: unknown key '" + it.key() + "' in " + where);
}

Eigen::VectorXd json_vector(const json& j) {
  Eigen::VectorXd v(j.size());
  Eigen::Index i = 0;
  for (const auto& x : j) v[i++] = x.get<double>();
  return v;
}

Eigen::MatrixXd json_matrix(const json& j) {
  const Eigen::Index r = static_cast<Eigen::Index>(j.size());
  if (r == 0) return {};
  const Eigen::Index c = static_cast<Eigen::Index>(j.at(0).size());
  Eigen::MatrixXd m(r, c);
  for (Eigen::Index i = 0; i < r; ++i) {
    if (static_cast<Eigen::Index>(j.at(i).size()) != c)
      throw std::runtime_error("config: ragged matrix");
    for (Eigen::Index k = 0; k < c; ++k) m(i, k) = j.at(i).at(k).get<double>();
  }
  return m;
}

SyntheticSpec parse_synth(const json& j) {
  check_keys(j,
             {"n_series", "start", "warmup", "n_vintages", "post_months", "revision_noise_sd",
              "noise_relative", "revision_window", "lag_months", "diag", "a1", "intercept",
              "shock_sd"},
             "synthetic");
  SyntheticSpec s;
  if (j.contains("n_series")) s.n_series = j["n_series"].get<int>();
  if (j.contains("start")) s.start = Month::parse(j["start"].get<std::string>());
  if (j.contains("warmup")) s.warmup = j["warmup"].get<int>();
  if (j.contains("n_vintages")) s.n_vintages = j["n_vintages"].get<int>();
  if (j.contains("post_months")) s.post_months = j["post_months"].get<int>();
  if (j.contains("revision_noise_sd")) s.revision_noise_sd = j["revision_noise_sd"].get<double>();
  if (j.contains("noise_relative")) s.noise_relative = j["noise_relative"].get<bool>();
  if (j.contains("revision_window")) s.revision_window = j["revision_window"].get<int>();
  if (j.contains("lag_months")) s.lag_months = j["lag_months"].get<std::vector<int>>();
  if (j.contains("diag"))
    s.a1 = j["diag"].get<double>() * Eigen::MatrixXd::Identity(s.n_series, s.n_series);
  if (j.contains("a1")) s.a1 = json_matrix(j["a1"]);
  if (j.contains("intercept")) s.intercept = json_vector(j["intercept"]);
  if (j.contains("shock_sd")) s.shock_sd = json_vector(j["shock_sd"]);
  return s;
}

json synth_json(const SyntheticSpec& s) {
  json j;
  j["n_series"] = s.n_series;
  j["start"] = s.start.str();
  j["warmup"] = s.warmup;
  j["n_vintages"] = s.n_vintages;
  j["post_months"] = s.post_months;
  j["revision_noise_sd"] = s.revision_noise_sd;
  j["noise_relative"] = s.noise_relative;
  j["revision_window"] = s.revision_window;
  j["lag_months"] = s.lag_months;
  if (s.a1.size()) {
    std::vector<std::vector<double>> rows;
    for (Eigen::Index i = 0; i < s.a1.rows(); ++i)
      rows.emplace_back(s.a1.row(i).begin(), s.a1.row(i).end());
    j["a1"] = rows;
  }
  if (s.intercept.size())
    j["intercept"] = std::vector<double>(s.intercept.begin(), s.intercept.end());
  if (s.shock_sd.size())
    j["shock_sd"] = std::vector<double>(s.shock_sd.begin(), s.shock_sd.end());
  return j;
}

}  // namespace

ExperimentConfig load_config(const std::string& path) {
  json j = json::parse(read_text_file(path));
  check_keys(j,
             {"dataset", "data_dir", "manifest", "final_vintage", "sample_start", "holdout",
              "specs", "pca_k", "lags", "sampler", "horizons", "default_lag", "lag_overrides",
              "modes", "seed", "jobs", "store_draws", "synthetic"},
             "top level");
  ExperimentConfig cfg;
  if (j.contains("dataset")) cfg.dataset = j["dataset"].get<std::string>();
  if (!j.contains("data_dir")) throw std::runtime_error("config: data_dir is required");
  cfg.data_dir = j["data_dir"].get<std::string>();
  if (!j.contains("manifest")) throw std::runtime_error("config: manifest is required");
  cfg.manifest_path = j["manifest"].get<std::string>();
  if (j.contains("final_vintage")) cfg.final_vintage = j["final_vintage"].get<std::string>();
  if (j.contains("sample_start")) cfg.sample_start = Month::parse(j["sample_start"].get<std::string>());
  if (j.contains("holdout")) {
    check_keys(j["holdout"], {"start", "end"}, "holdout");
    cfg.holdout_start = Month::parse(j["holdout"].at("start").get<std::string>());
    cfg.holdout_end = Month::parse(j["holdout"].at("end").get<std::string>());
  }
  if (j.contains("specs")) {
    cfg.specs.clear();
    for (const auto& s : j["specs"]) {
      if (s.is_string())
        cfg.specs.push_back(ModelSpec::parse(s.get<std::string>()));
      else {
        check_keys(s, {"size", "tvp", "pca"}, "specs");
        ModelSpec spec;
        spec.size = s.at("size").get<std::string>();
        if (s.contains("tvp")) spec.tvp = s["tvp"].get<bool>();
        if (s.contains("pca")) spec.pca = s["pca"].get<bool>();
        cfg.specs.push_back(spec);
      }
    }
  }
  if (j.contains("pca_k")) cfg.pca_k = j["pca_k"].get<int>();
  if (j.contains("lags")) cfg.sampler.lags = j["lags"].get<int>();
  if (j.contains("sampler")) {
    check_keys(j["sampler"], {"draws", "burn", "thin"}, "sampler");
    if (j["sampler"].contains("draws")) cfg.sampler.draws = j["sampler"]["draws"].get<int>();
    if (j["sampler"].contains("burn")) cfg.sampler.burn = j["sampler"]["burn"].get<int>();
    if (j["sampler"].contains("thin")) cfg.sampler.thin = j["sampler"]["thin"].get<int>();
  }
  if (j.contains("horizons")) cfg.horizons = j["horizons"].get<std::vector<int>>();
  if (j.contains("default_lag")) cfg.default_lag = j["default_lag"].get<int>();
  if (j.contains("lag_overrides"))
    for (auto it = j["lag_overrides"].begin(); it != j["lag_overrides"].end(); ++it)
      cfg.lag_overrides[it.key()] = it.value().get<int>();
  if (j.contains("modes")) {
    cfg.modes = j["modes"].get<std::vector<std::string>>();
    for (const auto& m : cfg.modes)
      if (m != "realtime" && m != "pseudo")
        throw std::runtime_error("config: unknown mode '" + m + "'");
  }
  if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("jobs")) cfg.jobs = j["jobs"].get<int>();
  if (j.contains("store_draws")) cfg.store_draws = j["store_draws"].get<bool>();
  if (j.contains("synthetic")) cfg.synth = parse_synth(j["synthetic"]);
  if (cfg.holdout_end < cfg.holdout_start)
    throw std::runtime_error("config: holdout end precedes start");
  if (cfg.horizons.empty() || !std::is_sorted(cfg.horizons.begin(), cfg.horizons.end()) ||
      cfg.horizons.front() < 1)
    throw std::runtime_error("config: horizons must be ascending and >= 1");
  if (cfg.specs.empty()) throw std::runtime_error("config: no model specs");
  if (cfg.modes.empty()) throw std::runtime_error("config: no information sets");
  return cfg;
}

std::string config_canonical_json(const ExperimentConfig& cfg) {
  json j;  // nlohmann objects keep keys sorted, so dump() is canonical
  j["dataset"] = cfg.dataset;
  j["data_dir"] = cfg.data_dir;
  j["manifest"] = cfg.manifest_path;
  j["final_vintage"] = cfg.final_vintage;
  j["sample_start"] = cfg.sample_start.str();
  j["holdout"] = {{"start", cfg.holdout_start.str()}, {"end", cfg.holdout_end.str()}};
  std::vector<std::string> ids;
  for (const auto& s : cfg.specs) ids.push_back(s.id());
  j["specs"] = ids;
  j["pca_k"] = cfg.pca_k;
  j["lags"] = cfg.sampler.lags;
  j["sampler"] = {{"draws", cfg.sampler.draws}, {"burn", cfg.sampler.burn}, {"thin", cfg.sampler.thin}};
  j["horizons"] = cfg.horizons;
  j["default_lag"] = cfg.default_lag;
  j["lag_overrides"] = cfg.lag_overrides;
  j["modes"] = cfg.modes;
  j["seed"] = cfg.seed;
  j["store_draws"] = cfg.store_draws;
  j["synthetic"] = synth_json(cfg.synth);
  return j.dump();
}

std::uint64_t config_digest(const ExperimentConfig& cfg) {
  std::string s = config_canonical_json(cfg);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// ---------------------------------------------------------------------------
// Running cells

namespace {

std::string find_final_vintage(const ExperimentConfig& cfg) {
  if (!cfg.final_vintage.empty()) return cfg.final_vintage;
  std::string best_path;
  Month best{0, 1};
  bool found = false;
  for (const auto& entry : fs::directory_iterator(cfg.data_dir)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".csv") continue;
    std::string stem = entry.path().stem().string();
    Month m{0, 1};
    try {
      m = Month::parse(stem);
    } catch (const std::exception&) {
      continue;  // manifest.csv and friends
    }
    if (!found || best < m) {
      best = m;
      best_path = entry.path().string();
      found = true;
    }
  }
  if (!found)
    throw std::runtime_error("no vintage files (YYYY-MM.csv) found in " + cfg.data_dir);
  return best_path;
}

std::map<std::string, int> lag_profile_of(const SeriesManifest& manifest,
                                          const ExperimentConfig& cfg) {
  std::map<std::string, int> profile;
  for (const auto& e : manifest.entries) profile[e.code] = e.lag_months;
  for (const auto& [code, lag] : cfg.lag_overrides) profile[code] = lag;
  return profile;
}

// Focus block: the first three small-group series in manifest order.
std::vector<ManifestEntry> focus_entries(const SeriesManifest& manifest) {
  std::vector<ManifestEntry> small = manifest.model_set("small");
  if (small.size() > 3) small.resize(3);
  if (small.empty()) throw std::runtime_error("manifest has no small-group series");
  return small;
}

// Rebuilds `wide` on the model panel's grid: rows beyond the wide panel's
// coverage become missing. Both panels share the same start month.
Panel align_to_grid(const Panel& wide, const Panel& model) {
  if (wide.start != model.start)
    throw std::runtime_error("align_to_grid: start month mismatch");
  if (wide.n_months() == model.n_months()) return wide;
  Panel out;
  out.start = model.start;
  out.codes = wide.codes;
  const Eigen::Index t = model.n_months(), n = wide.n_series();
  out.values = Eigen::MatrixXd::Constant(t, n, std::numeric_limits<double>::quiet_NaN());
  out.mask = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>::Constant(t, n, false);
  const Eigen::Index copy = std::min(t, wide.n_months());
  out.values.topRows(copy) = wide.values.topRows(copy);
  out.mask.topRows(copy) = wide.mask.topRows(copy);
  return out;
}

// Factor candidates: series the vintage carries that have at least two
// observed, transformable values with nonzero variance on the sample grid.
std::vector<ManifestEntry> usable_factor_series(const Vintage& v,
                                                const std::vector<ManifestEntry>& candidates,
                                                Month sample_start) {
  std::vector<ManifestEntry> out;
  for (const auto& e : candidates) {
    Eigen::Index col = -1;
    for (Eigen::Index j = 0; j < v.n_series(); ++j)
      if (v.codes[static_cast<size_t>(j)] == e.code) {
        col = j;
        break;
      }
    if (col < 0) continue;
    try {
      auto [t_start, series] = apply_transform(v.start, v.values.col(col), e.tcode);
      double sum = 0.0, sum2 = 0.0;
      int n = 0;
      for (Eigen::Index t = 0; t < series.size(); ++t) {
        if (t_start + static_cast<int>(t) < sample_start) continue;
        if (!std::isfinite(series[t])) continue;
        sum += series[t];
        sum2 += series[t] * series[t];
        ++n;
      }
      if (n < 2) continue;
      double var = (sum2 - sum * sum / n) / (n - 1);
      if (var < 1e-12) continue;
      out.push_back(e);
    } catch (const std::exception&) {
      continue;  // not transformable in this vintage (e.g. nonpositive values)
    }
  }
  return out;
}

struct CellSpec {
  std::string mode;
  ModelSpec spec;
  Month month;
};

std::string cell_dir_of(const std::string& out_dir, const CellSpec& c) {
  return out_dir + "/cells/" + c.mode + "/" + c.spec.id() + "/" + c.month.str();
}

void persist_cell(const std::string& dir, const CellSpec& c, const PredictiveDraws& pd,
                  const std::vector<ManifestEntry>& focus, std::uint64_t cell_seed) {
  fs::create_directories(dir);
  const Eigen::Index m = static_cast<Eigen::Index>(pd.codes.size());
  const Eigen::Index nh = static_cast<Eigen::Index>(pd.horizons.size());

  std::vector<Eigen::Index> focus_cols;
  for (const auto& e : focus) {
    Eigen::Index col = -1;
    for (Eigen::Index j = 0; j < m; ++j)
      if (pd.codes[static_cast<size_t>(j)] == e.code) {
        col = j;
        break;
      }
    if (col < 0) throw std::runtime_error("focus series " + e.code + " missing from panel");
    focus_cols.push_back(col);
  }
  const Eigen::Index f = static_cast<Eigen::Index>(focus_cols.size());

  std::string fc = "draw,horizon,series,value\n";
  for (int s = 0; s < pd.n_draws(); ++s)
    for (Eigen::Index a = 0; a < nh; ++a)
      for (Eigen::Index j = 0; j < m; ++j)
        fc += std::to_string(s) + "," + std::to_string(pd.horizons[static_cast<size_t>(a)]) +
              "," + pd.codes[static_cast<size_t>(j)] + "," +
              format_double(pd.values[static_cast<size_t>(s)](a, j)) + "\n";
  write_text_file(dir + "/forecasts.csv", fc);

  std::string mo = "draw,horizon";
  for (Eigen::Index a = 0; a < f; ++a) mo += ",mu" + std::to_string(a + 1);
  for (Eigen::Index a = 0; a < f; ++a)
    for (Eigen::Index b = a; b < f; ++b)
      mo += ",c" + std::to_string(a + 1) + std::to_string(b + 1);
  mo += "\n";
  for (int s = 0; s < pd.n_draws(); ++s)
    for (Eigen::Index a = 0; a < nh; ++a) {
      mo += std::to_string(s) + "," + std::to_string(pd.horizons[static_cast<size_t>(a)]);
      for (Eigen::Index x = 0; x < f; ++x)
        mo += "," + format_double(pd.means[static_cast<size_t>(s)](a, focus_cols[static_cast<size_t>(x)]));
      const Eigen::MatrixXd& cov = pd.covs[static_cast<size_t>(s)][static_cast<size_t>(a)];
      for (Eigen::Index x = 0; x < f; ++x)
        for (Eigen::Index y = x; y < f; ++y)
          mo += "," + format_double(cov(focus_cols[static_cast<size_t>(x)],
                                        focus_cols[static_cast<size_t>(y)]));
      mo += "\n";
    }
  write_text_file(dir + "/moments_focus.csv", mo);

  json cj;
  cj["model"] = c.spec.id();
  cj["size"] = c.spec.size;
  cj["tvp"] = c.spec.tvp;
  cj["pca"] = c.spec.pca;
  cj["info_set"] = c.mode;
  cj["month"] = c.month.str();
  cj["origin"] = pd.origin.str();
  cj["seed"] = cell_seed;
  cj["n_draws"] = pd.n_draws();
  cj["horizons"] = pd.horizons;
  cj["codes"] = pd.codes;
  json fj = json::array();
  for (Eigen::Index x = 0; x < f; ++x) {
    Eigen::Index col = focus_cols[static_cast<size_t>(x)];
    fj.push_back({{"code", pd.codes[static_cast<size_t>(col)]},
                  {"mean", pd.std_info.mean[col]},
                  {"sd", pd.std_info.sd[col]},
                  {"col", col}});
  }
  cj["focus"] = fj;
  json tj;
  for (int h : pd.horizons) tj[std::to_string(h)] = (pd.origin + h).str();
  cj["targets"] = tj;
  write_text_file(dir + "/cell.json", cj.dump(2) + "\n");
}

void run_cell(const ExperimentConfig& cfg, const CellSpec& c, const SeriesManifest& manifest,
              const Vintage& final_vintage, const std::map<std::string, int>& lag_profile,
              const std::vector<ManifestEntry>& focus, const std::string& out_dir) {
  Vintage vintage;
  if (c.mode == "realtime") {
    std::string path = cfg.data_dir + "/" + c.month.str() + ".csv";
    if (!fs::exists(path)) throw std::runtime_error("missing vintage file " + path);
    vintage = parse_vintage(path);
  } else {
    vintage = truncate_final_vintage(final_vintage, c.month, lag_profile, cfg.default_lag);
  }

  std::vector<ManifestEntry> model_series = manifest.model_set(c.spec.size);
  Panel panel = build_panel(vintage, model_series, cfg.sample_start);
  standardize(panel);

  if (c.spec.pca) {
    std::vector<ManifestEntry> others =
        usable_factor_series(vintage, manifest.complement(model_series), cfg.sample_start);
    if (others.empty())
      throw std::runtime_error("no usable series outside the model for factor extraction");
    Panel wide = build_panel(vintage, others, cfg.sample_start);
    wide = align_to_grid(wide, panel);
    standardize(wide);
    int k = std::min<int>(cfg.pca_k, static_cast<int>(wide.n_series()));
    FactorSet factors = extract_pcs(wide, k);
    panel = augment_panel(panel, factors);
  }

  SamplerConfig scfg = cfg.sampler;
  scfg.tvp = c.spec.tvp;
  // The chain seed deliberately ignores the information set: matched
  // information sets must reuse identical chains so that identical inputs
  // yield identical outputs.
  std::uint64_t cell_seed = mix_seed(cfg.seed, c.spec.id() + "|" + c.month.str());
  DrawStore store = run_chain(panel, scfg, cell_seed);

  Rng fc_rng(mix_seed(cell_seed, "forecast"));
  PredictiveDraws pd = draw_forecasts(store, cfg.horizons, fc_rng);

  std::string dir = cell_dir_of(out_dir, c);
  persist_cell(dir, c, pd, focus, cell_seed);
  if (cfg.store_draws) save_draw_store(store, dir + "/draws");
}

}  // namespace

std::vector<std::string> run_experiment(const ExperimentConfig& cfg, const std::string& out_dir) {
  SeriesManifest manifest = parse_manifest(cfg.manifest_path);
  std::string final_path = find_final_vintage(cfg);
  Vintage final_vintage = parse_vintage(final_path);
  std::map<std::string, int> lag_profile = lag_profile_of(manifest, cfg);
  std::vector<ManifestEntry> focus = focus_entries(manifest);

  std::vector<CellSpec> cells;
  for (Month m = cfg.holdout_start; m <= cfg.holdout_end; m = m + 1)
    for (const auto& spec : cfg.specs)
      for (const auto& mode : cfg.modes) cells.push_back(CellSpec{mode, spec, m});

  std::atomic<size_t> next{0};
  std::mutex failures_mutex;
  std::vector<std::string> failures;
  auto worker = [&]() {
    for (;;) {
      size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      const CellSpec& c = cells[i];
      try {
        run_cell(cfg, c, manifest, final_vintage, lag_profile, focus, out_dir);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(failures_mutex);
        failures.push_back(c.mode + "/" + c.spec.id() + "/" + c.month.str() + ": " + e.what());
      }
    }
  };
  int jobs = std::max(1, cfg.jobs);
  jobs = std::min<int>(jobs, static_cast<int>(cells.size()));
  std::vector<std::thread> pool;
  for (int t = 1; t < jobs; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  std::sort(failures.begin(), failures.end());

  fs::create_directories(out_dir);
  if (!failures.empty()) {
    std::string text = "cell,error\n";
    for (const auto& f : failures) {
      size_t sep = f.find(": ");
      text += f.substr(0, sep) + "," + f.substr(sep + 2) + "\n";
    }
    write_text_file(out_dir + "/failures.csv", text);
  }

  json rm;
  char digest_hex[32];
  std::snprintf(digest_hex, sizeof(digest_hex), "%016llx",
                static_cast<unsigned long long>(config_digest(cfg)));
  rm["config_digest"] = digest_hex;
  rm["seed"] = cfg.seed;
  rm["dataset"] = cfg.dataset;
  rm["final_vintage"] = final_path;
  rm["modes"] = cfg.modes;
  rm["horizons"] = cfg.horizons;
  std::vector<std::string> ids;
  for (const auto& s : cfg.specs) ids.push_back(s.id());
  rm["specs"] = ids;
  std::vector<std::string> months;
  for (Month m = cfg.holdout_start; m <= cfg.holdout_end; m = m + 1) months.push_back(m.str());
  rm["months"] = months;
  std::vector<std::string> focus_codes;
  for (const auto& e : focus) focus_codes.push_back(e.code);
  rm["focus"] = focus_codes;
  rm["n_cells"] = cells.size();
  rm["n_failures"] = failures.size();
  write_text_file(out_dir + "/run_manifest.json", rm.dump(2) + "\n");
  return failures;
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

struct CellScores {
  // per horizon -> per variable (focus codes then "joint") -> (abs_fe, lpl);
  // abs_fe is NaN for the joint block.
  std::map<int, std::map<std::string, std::pair<double, double>>> by_horizon;
  Month origin{1900, 1};
  bool present = false;
};

struct RealizedSeries {
  Month start{1900, 1};
  Eigen::VectorXd values;

  bool at(Month m, double* out) const {
    int idx = m - start;
    if (idx < 0 || idx >= values.size()) return false;
    if (!std::isfinite(values[idx])) return false;
    *out = values[idx];
    return true;
  }
};

CellScores score_cell(const std::string& dir,
                      const std::map<std::string, RealizedSeries>& realized,
                      const std::vector<std::string>& focus_codes,
                      const std::vector<int>& horizons, std::vector<std::string>& warnings) {
  CellScores cs;
  if (!fs::exists(dir + "/cell.json")) return cs;
  json cj = json::parse(read_text_file(dir + "/cell.json"));
  cs.origin = Month::parse(cj.at("origin").get<std::string>());
  const int n_draws = cj.at("n_draws").get<int>();
  const size_t f = cj.at("focus").size();
  if (f != focus_codes.size()) throw std::runtime_error("focus block mismatch in " + dir);
  Eigen::VectorXd mean_shift(static_cast<Eigen::Index>(f)), scale(static_cast<Eigen::Index>(f));
  for (size_t x = 0; x < f; ++x) {
    const json& fx = cj.at("focus").at(x);
    if (fx.at("code").get<std::string>() != focus_codes[x])
      throw std::runtime_error("focus order mismatch in " + dir);
    mean_shift[static_cast<Eigen::Index>(x)] = fx.at("mean").get<double>();
    scale[static_cast<Eigen::Index>(x)] = fx.at("sd").get<double>();
  }

  // Point forecasts: mean over draws of the simulated values (original units).
  std::map<int, Eigen::Index> h_pos;
  for (size_t a = 0; a < horizons.size(); ++a) h_pos[horizons[a]] = static_cast<Eigen::Index>(a);
  std::map<std::string, Eigen::Index> f_pos;
  for (size_t x = 0; x < f; ++x) f_pos[focus_codes[x]] = static_cast<Eigen::Index>(x);
  Eigen::MatrixXd point_sum = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(horizons.size()),
                                                    static_cast<Eigen::Index>(f));
  Eigen::MatrixXd point_n = Eigen::MatrixXd::Zero(point_sum.rows(), point_sum.cols());
  {
    auto rows = read_csv(dir + "/forecasts.csv");
    for (size_t r = 1; r < rows.size(); ++r) {
      const auto& row = rows[r];
      if (row.size() != 4) throw std::runtime_error("bad forecasts.csv row in " + dir);
      auto fp = f_pos.find(row[2]);
      if (fp == f_pos.end()) continue;
      int h = std::stoi(row[1]);
      auto hp = h_pos.find(h);
      if (hp == h_pos.end()) continue;
      point_sum(hp->second, fp->second) += parse_double_field(row[3]);
      point_n(hp->second, fp->second) += 1.0;
    }
  }

  // Density moments: standardized per-draw means and covariances of the focus
  // block, one row per (draw, horizon).
  const Eigen::Index fi = static_cast<Eigen::Index>(f);
  std::map<int, std::vector<std::pair<Eigen::VectorXd, Eigen::MatrixXd>>> mix;
  {
    auto rows = read_csv(dir + "/moments_focus.csv");
    const size_t expect = 2 + f + f * (f + 1) / 2;
    for (size_t r = 1; r < rows.size(); ++r) {
      const auto& row = rows[r];
      if (row.size() != expect) throw std::runtime_error("bad moments_focus.csv row in " + dir);
      int h = std::stoi(row[1]);
      if (!h_pos.count(h)) continue;
      Eigen::VectorXd mu(fi);
      for (Eigen::Index x = 0; x < fi; ++x)
        mu[x] = parse_double_field(row[2 + static_cast<size_t>(x)]);
      Eigen::MatrixXd cov(fi, fi);
      size_t pos = 2 + f;
      for (Eigen::Index x = 0; x < fi; ++x)
        for (Eigen::Index y = x; y < fi; ++y) {
          double v = parse_double_field(row[pos++]);
          cov(x, y) = v;
          cov(y, x) = v;
        }
      mix[h].emplace_back(std::move(mu), std::move(cov));
    }
  }

  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (int h : horizons) {
    Month target = cs.origin + h;
    auto& slot = cs.by_horizon[h];
    const auto& components = mix[h];
    if (static_cast<int>(components.size()) != n_draws)
      throw std::runtime_error("moment row count mismatch in " + dir);
    bool all_found = true;
    Eigen::VectorXd joint_realized(fi);
    for (size_t x = 0; x < f; ++x) {
      double r;
      if (!realized.at(focus_codes[x]).at(target, &r)) {
        warnings.push_back("target " + target.str() + " for " + focus_codes[x] +
                           " not in final vintage; skipped");
        all_found = false;
        continue;
      }
      joint_realized[static_cast<Eigen::Index>(x)] = r;
      Eigen::Index hp = h_pos[h], xp = static_cast<Eigen::Index>(x);
      double point = point_n(hp, xp) > 0 ? point_sum(hp, xp) / point_n(hp, xp) : nan;
      double fe = std::isfinite(point) ? abs_fe(r, point) : nan;
      std::vector<std::pair<double, double>> marg;
      marg.reserve(components.size());
      for (const auto& [mu, cov] : components) marg.emplace_back(mu[xp], cov(xp, xp));
      double lpl = marginal_lpl(r, marg, mean_shift[xp], scale[xp]);
      slot[focus_codes[x]] = {fe, lpl};
    }
    if (all_found) {
      double jl = joint_lpl(joint_realized, components, mean_shift, scale);
      slot["joint"] = {nan, jl};
    }
  }
  cs.present = true;
  return cs;
}

std::string csv_cell(double v) { return std::isfinite(v) ? format_double(v) : ""; }

}  // namespace

void evaluate_experiment(const ExperimentConfig& cfg, const std::string& out_dir) {
  SeriesManifest manifest = parse_manifest(cfg.manifest_path);
  std::vector<ManifestEntry> focus = focus_entries(manifest);
  std::vector<std::string> focus_codes;
  for (const auto& e : focus) focus_codes.push_back(e.code);
  std::vector<std::string> variables = focus_codes;
  variables.push_back("joint");

  std::string final_path = find_final_vintage(cfg);
  Vintage final_vintage = parse_vintage(final_path);
  std::map<std::string, RealizedSeries> realized;
  for (const auto& e : focus) {
    auto [start, series] = apply_transform(final_vintage.start,
                                           final_vintage.values.col(final_vintage.col(e.code)),
                                           e.tcode);
    realized[e.code] = RealizedSeries{start, series};
  }

  std::vector<std::string> spec_ids;
  for (const auto& s : cfg.specs) spec_ids.push_back(s.id());

  // mode -> model -> month -> scores
  std::map<std::string, std::map<std::string, std::map<int, CellScores>>> table;
  std::vector<std::string> warnings;
  for (const auto& mode : cfg.modes)
    for (const auto& id : spec_ids)
      for (Month m = cfg.holdout_start; m <= cfg.holdout_end; m = m + 1) {
        std::string dir = out_dir + "/cells/" + mode + "/" + id + "/" + m.str();
        CellScores cs = score_cell(dir, realized, focus_codes, cfg.horizons, warnings);
        if (!cs.present) warnings.push_back("cell " + mode + "/" + id + "/" + m.str() + " missing; skipped");
        table[mode][id][m.index()] = std::move(cs);
      }
  std::sort(warnings.begin(), warnings.end());
  warnings.erase(std::unique(warnings.begin(), warnings.end()), warnings.end());
  for (const auto& w : warnings) std::cerr << "evaluate: warning: " << w << "\n";

  fs::create_directories(out_dir + "/scores");

  // ---- scores.csv: every available per-origin score
  {
    std::string text = "info_set,model,horizon,variable,origin,abs_fe,lpl\n";
    for (const auto& mode : cfg.modes)
      for (const auto& id : spec_ids)
        for (const auto& [midx, cs] : table[mode][id]) {
          if (!cs.present) continue;
          for (int h : cfg.horizons) {
            auto it = cs.by_horizon.find(h);
            if (it == cs.by_horizon.end()) continue;
            for (const auto& var : variables) {
              auto vt = it->second.find(var);
              if (vt == it->second.end()) continue;
              text += mode + "," + id + "," + std::to_string(h) + "," + var + "," +
                      cs.origin.str() + "," + csv_cell(vt->second.first) + "," +
                      csv_cell(vt->second.second) + "\n";
            }
          }
        }
    write_text_file(out_dir + "/scores/scores.csv", text);
  }

  // ---- aligned series over origins where every (mode, model) has the score
  // kind: "density" uses lpl (higher better), "point" uses abs_fe (lower better).
  struct Aligned {
    std::vector<Month> origins;
    // mode -> model -> per-origin and cumulative series
    std::map<std::string, std::map<std::string, std::vector<double>>> raw, cum;
  };
  auto build_aligned = [&](int h, const std::string& var, bool density) {
    Aligned al;
    std::vector<Month> kept_months;
    for (Month m = cfg.holdout_start; m <= cfg.holdout_end; m = m + 1) {
      bool ok = true;
      bool have_origin = false;
      Month origin{1900, 1};
      for (const auto& mode : cfg.modes) {
        for (const auto& id : spec_ids) {
          const CellScores& cs = table[mode][id][m.index()];
          auto it = cs.present ? cs.by_horizon.find(h) : cs.by_horizon.end();
          if (!cs.present || it == cs.by_horizon.end() || !it->second.count(var)) {
            ok = false;
            break;
          }
          double v = density ? it->second.at(var).second : it->second.at(var).first;
          if (!std::isfinite(v)) {
            ok = false;
            break;
          }
          // Cells at the same vintage month must agree on the forecast origin,
          // otherwise the cross-model comparison would mix target months.
          if (have_origin && cs.origin != origin) {
            ok = false;
            break;
          }
          origin = cs.origin;
          have_origin = true;
        }
        if (!ok) break;
      }
      if (ok) {
        al.origins.push_back(origin);
        kept_months.push_back(m);
      }
    }
    for (const auto& mode : cfg.modes)
      for (const auto& id : spec_ids) {
        std::vector<double> raw;
        for (const Month& m : kept_months) {
          const CellScores& cs = table[mode][id][m.index()];
          const auto& slot = cs.by_horizon.at(h).at(var);
          raw.push_back(density ? slot.second : slot.first);
        }
        al.cum[mode][id] = cumulate(raw);
        al.raw[mode][id] = std::move(raw);
      }
    return al;
  };

  std::string cum_text = "info_set,kind,horizon,variable,model,origin,value\n";
  std::string rank_text = "info_set,kind,horizon,variable,origin,model,rank\n";
  std::string tau_text = "kind,horizon,variable,origin,tau\n";
  std::string rel_text = "kind,horizon,variable,model,origin,value\n";
  const bool both_modes = std::count(cfg.modes.begin(), cfg.modes.end(), "realtime") &&
                          std::count(cfg.modes.begin(), cfg.modes.end(), "pseudo");

  for (int h : cfg.horizons)
    for (const auto& var : variables)
      for (bool density : {true, false}) {
        if (!density && var == "joint") continue;
        const std::string kind = density ? "density" : "point";
        Aligned al = build_aligned(h, var, density);
        if (al.origins.empty()) continue;
        const size_t n = al.origins.size();

        for (const auto& mode : cfg.modes)
          for (const auto& id : spec_ids)
            for (size_t t = 0; t < n; ++t)
              cum_text += mode + "," + kind + "," + std::to_string(h) + "," + var + "," + id +
                          "," + al.origins[t].str() + "," +
                          format_double(al.cum[mode][id][t]) + "\n";

        // per-origin model ranks on the cumulative criterion
        std::map<std::string, std::vector<std::vector<double>>> ranks_by_mode;
        for (const auto& mode : cfg.modes) {
          std::vector<std::vector<double>> per_origin;
          for (size_t t = 0; t < n; ++t) {
            std::vector<double> vals;
            for (const auto& id : spec_ids) vals.push_back(al.cum[mode][id][t]);
            per_origin.push_back(rank_models(
                vals, density ? RankDirection::higher_better : RankDirection::lower_better));
          }
          ranks_by_mode[mode] = per_origin;
          for (size_t t = 0; t < n; ++t)
            for (size_t s = 0; s < spec_ids.size(); ++s)
              rank_text += mode + "," + kind + "," + std::to_string(h) + "," + var + "," +
                           al.origins[t].str() + "," + spec_ids[s] + "," +
                           format_double(ranks_by_mode[mode][t][s]) + "\n";
        }

        if (both_modes) {
          for (size_t t = 0; t < n; ++t) {
            double tau = kendall_tau(ranks_by_mode["realtime"][t], ranks_by_mode["pseudo"][t]);
            tau_text += kind + "," + std::to_string(h) + "," + var + "," + al.origins[t].str() +
                        "," + csv_cell(tau) + "\n";
          }
          for (const auto& id : spec_ids) {
            std::vector<double> rel = relative_series(
                al.cum["realtime"][id], al.cum["pseudo"][id],
                density ? RelativeKind::density_diff : RelativeKind::point_ratio);
            for (size_t t = 0; t < n; ++t)
              rel_text += kind + "," + std::to_string(h) + "," + var + "," + id + "," +
                          al.origins[t].str() + "," + csv_cell(rel[t]) + "\n";
          }
        }
      }
  write_text_file(out_dir + "/scores/cumulative.csv", cum_text);
  write_text_file(out_dir + "/scores/ranks.csv", rank_text);
  write_text_file(out_dir + "/scores/tau.csv", tau_text);
  write_text_file(out_dir + "/scores/relative.csv", rel_text);

  // ---- summary tables
  // Per (mode, model, variable, horizon): average log score and RMSE over the
  // aligned origins, plus cross-model ranks of both.
  struct Summary {
    double avg_lps = std::numeric_limits<double>::quiet_NaN();
    double rms = std::numeric_limits<double>::quiet_NaN();
    double rank_lps = std::numeric_limits<double>::quiet_NaN();
    double rank_rms = std::numeric_limits<double>::quiet_NaN();
  };
  // mode -> model -> var -> h -> Summary
  std::map<std::string, std::map<std::string, std::map<std::string, std::map<int, Summary>>>> sm;
  for (int h : cfg.horizons)
    for (const auto& var : variables) {
      Aligned dens = build_aligned(h, var, true);
      for (const auto& mode : cfg.modes) {
        if (!dens.origins.empty()) {
          std::vector<double> avgs;
          for (const auto& id : spec_ids)
            avgs.push_back(dens.cum[mode][id].back() / static_cast<double>(dens.origins.size()));
          std::vector<double> rk = rank_models(avgs, RankDirection::higher_better);
          for (size_t s = 0; s < spec_ids.size(); ++s) {
            sm[mode][spec_ids[s]][var][h].avg_lps = avgs[s];
            sm[mode][spec_ids[s]][var][h].rank_lps = rk[s];
          }
        }
      }
      if (var == "joint") continue;
      Aligned pt = build_aligned(h, var, false);
      if (pt.origins.empty()) continue;
      for (const auto& mode : cfg.modes) {
        std::vector<double> rmses;
        for (const auto& id : spec_ids) rmses.push_back(rmse(pt.raw[mode][id]));
        std::vector<double> rk = rank_models(rmses, RankDirection::lower_better);
        for (size_t s = 0; s < spec_ids.size(); ++s) {
          sm[mode][spec_ids[s]][var][h].rms = rmses[s];
          sm[mode][spec_ids[s]][var][h].rank_rms = rk[s];
        }
      }
    }

  auto summary_header = [&]() {
    std::string head = "model,variable";
    for (int h : cfg.horizons)
      head += ",avg_lps_h" + std::to_string(h) + ",rank_lps_h" + std::to_string(h) + ",rmse_h" +
              std::to_string(h) + ",rank_rmse_h" + std::to_string(h);
    return head + "\n";
  };
  for (const auto& mode : cfg.modes) {
    std::string text = summary_header();
    for (const auto& id : spec_ids)
      for (const auto& var : variables) {
        text += id + "," + var;
        for (int h : cfg.horizons) {
          const Summary& s = sm[mode][id][var][h];
          text += "," + csv_cell(s.avg_lps) + "," + csv_cell(s.rank_lps) + "," +
                  csv_cell(s.rms) + "," + csv_cell(s.rank_rms);
        }
        text += "\n";
      }
    write_text_file(out_dir + "/scores/summary_" + mode + ".csv", text);
  }

  {
    std::string head = "model,variable,row";
    for (int h : cfg.horizons)
      head += ",lps_h" + std::to_string(h) + ",lps_rank_h" + std::to_string(h) + ",rmse_h" +
              std::to_string(h) + ",rmse_rank_h" + std::to_string(h);
    std::string text = head + "\n";
    const std::string level_mode =
        std::count(cfg.modes.begin(), cfg.modes.end(), "realtime") ? "realtime" : cfg.modes.front();
    for (const auto& id : spec_ids)
      for (const auto& var : variables) {
        text += id + "," + var + ",level";
        for (int h : cfg.horizons) {
          const Summary& s = sm[level_mode][id][var][h];
          text += "," + csv_cell(s.avg_lps) + "," + csv_cell(s.rank_lps) + "," +
                  csv_cell(s.rms) + "," + csv_cell(s.rank_rms);
        }
        text += "\n";
        // second row: real-time minus pseudo log score (RMSE as a ratio), with
        // the pseudo ranks alongside; cells stay empty when only one
        // information set ran, so the table keeps its two-row shape.
        text += id + "," + var + ",relative";
        for (int h : cfg.horizons) {
          const double nan = std::numeric_limits<double>::quiet_NaN();
          double dl = nan, dr = nan, rank_l = nan, rank_r = nan;
          if (both_modes) {
            const Summary& rt = sm["realtime"][id][var][h];
            const Summary& ps = sm["pseudo"][id][var][h];
            dl = rt.avg_lps - ps.avg_lps;
            dr = ps.rms == 0.0 ? nan : rt.rms / ps.rms;
            rank_l = ps.rank_lps;
            rank_r = ps.rank_rms;
          }
          text += "," + csv_cell(dl) + "," + csv_cell(rank_l) + "," + csv_cell(dr) + "," +
                  csv_cell(rank_r);
        }
        text += "\n";
      }
    write_text_file(out_dir + "/scores/summary_table.csv", text);
  }
}

// ---------------------------------------------------------------------------
// Report

void report_experiment(const std::string& out_dir) {
  fs::create_directories(out_dir + "/report");
  auto forward = [&](const std::string& from, const std::string& to,
                     const std::string& fallback_header) {
    std::string text;
    if (fs::exists(out_dir + "/scores/" + from))
      text = read_text_file(out_dir + "/scores/" + from);
    else
      text = fallback_header;
    write_text_file(out_dir + "/report/" + to, text);
  };
  forward("summary_table.csv", "summary_table.csv", "model,variable,row\n");
  forward("tau.csv", "tau_series.csv", "kind,horizon,variable,origin,tau\n");
  forward("ranks.csv", "rank_series.csv", "info_set,kind,horizon,variable,origin,model,rank\n");
  forward("relative.csv", "relative_cumlps.csv", "kind,horizon,variable,model,origin,value\n");
}

}  // namespace rtbvar

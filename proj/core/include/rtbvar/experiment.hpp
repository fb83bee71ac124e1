#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "rtbvar/month.hpp"
#include "rtbvar/sampler.hpp"
#include "rtbvar/synthetic.hpp"

namespace rtbvar {

// One model specification: VAR size, coefficient dynamics, factor augmentation.
struct ModelSpec {
  std::string size = "small";  // small | medium | large
  bool tvp = false;
  bool pca = false;

  std::string id() const;                        // e.g. "small-cp", "medium-pca-tvp"
  static ModelSpec parse(const std::string& s);  // inverse of id()
};

// The twelve standard specifications: sizes x {cp,tvp} x {plain,pca}.
std::vector<ModelSpec> all_model_specs();

// A full out-of-sample experiment: which vintages, which models, which
// information sets, and the sampler settings shared by every cell.
struct ExperimentConfig {
  std::string dataset = "synthetic";
  std::string data_dir;        // directory of vintage CSVs
  std::string manifest_path;   // series manifest CSV
  std::string final_vintage;   // explicit path; empty -> latest release in data_dir
  Month sample_start{1995, 1};
  Month holdout_start{2006, 1};
  Month holdout_end{2006, 12};
  std::vector<ModelSpec> specs = all_model_specs();
  int pca_k = 5;
  SamplerConfig sampler;  // lags/draws/burn/thin; tvp is overridden per spec
  std::vector<int> horizons = {1, 3, 12};
  int default_lag = 1;
  std::map<std::string, int> lag_overrides;
  std::vector<std::string> modes = {"realtime", "pseudo"};
  std::uint64_t seed = 20260101;
  int jobs = 1;
  bool store_draws = false;
  SyntheticSpec synth;  // used by the synth subcommand / test fixtures
};

// Reads a JSON config file. Unknown keys are errors (typos should not pass
// silently); everything except data_dir and manifest has a default.
ExperimentConfig load_config(const std::string& path);

// Canonical JSON of the config (sorted keys) and its FNV-1a digest; the digest
// goes into run_manifest.json so runs can be matched to their settings.
std::string config_canonical_json(const ExperimentConfig& cfg);
std::uint64_t config_digest(const ExperimentConfig& cfg);

// Runs every (holdout month x spec x information set) cell: loads the cell's
// vintage (real-time file or pseudo truncation of the final vintage), builds
// and standardizes the model panel, optionally augments it with principal
// components of the remaining series, runs the posterior sampler and persists
// the predictive output under out_dir/cells/. A cell's chain seed mixes the
// master seed with the spec id and origin month only, so matched information
// sets reuse identical chains. Failed cells are recorded in failures.csv and
// reported in the return value instead of aborting the sweep.
// Returns the list of failed cells ("mode/spec/month: error").
std::vector<std::string> run_experiment(const ExperimentConfig& cfg, const std::string& out_dir);

// Scores every persisted cell against realizations taken from the final
// vintage and writes the scores/ tables: per-origin scores, cumulative
// series, per-origin model ranks, rank correlations between information sets,
// relative performance series, and the per-information-set summary tables.
// Cells whose target months lie beyond the final vintage are skipped with a
// warning on stderr.
void evaluate_experiment(const ExperimentConfig& cfg, const std::string& out_dir);

// Collects the scores/ tables into the report/ directory (the deliverable
// set: summary table, rank series, rank-correlation series, relative
// cumulative log scores). An empty scores directory yields header-only files.
void report_experiment(const std::string& out_dir);

}  // namespace rtbvar

// Command-line front end: generate synthetic vintage archives, run
// out-of-sample forecasting experiments, score them, and collect reports.
#include <cstdint>
#include <iostream>
#include <stdexcept>
#include <string>

#include <CLI11.hpp>

#include "rtbvar/experiment.hpp"
#include "rtbvar/synthetic.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int jobs = 0;
  bool store_draws = false;
};

rtbvar::ExperimentConfig load_with_overrides(const CommonArgs& args) {
  rtbvar::ExperimentConfig cfg = rtbvar::load_config(args.config_path);
  if (args.seed_set) cfg.seed = args.seed;
  if (args.jobs > 0) cfg.jobs = args.jobs;
  if (args.store_draws) cfg.store_draws = true;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rtbvar: real-time Bayesian VAR forecasting experiments"};
  app.require_subcommand(1);

  CommonArgs args;

  CLI::App* synth = app.add_subcommand(
      "synth", "Generate a synthetic vintage archive from the config's synthetic block");
  synth->add_option("--config", args.config_path, "experiment config JSON")->required();
  synth->add_option("--out", args.out_dir, "output vintage directory")->required();
  auto* synth_seed = synth->add_option("--seed", args.seed, "override the config seed");

  CLI::App* run = app.add_subcommand("run", "Run every (month x model x information set) cell");
  run->add_option("--config", args.config_path, "experiment config JSON")->required();
  run->add_option("--out", args.out_dir, "experiment output directory")->required();
  auto* run_seed = run->add_option("--seed", args.seed, "override the config seed");
  run->add_option("--jobs", args.jobs, "worker threads (overrides config)");
  run->add_flag("--store-draws", args.store_draws, "persist full posterior draw stores");

  CLI::App* evaluate =
      app.add_subcommand("evaluate", "Score persisted cells against the final vintage");
  evaluate->add_option("--config", args.config_path, "experiment config JSON")->required();
  evaluate->add_option("--out", args.out_dir, "experiment output directory")->required();

  CLI::App* report = app.add_subcommand("report", "Collect score tables into report/");
  report->add_option("--out", args.out_dir, "experiment output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (synth->parsed()) {
      args.seed_set = synth_seed->count() > 0;
      rtbvar::ExperimentConfig cfg = load_with_overrides(args);
      rtbvar::generate_synthetic_vintages(cfg.synth, args.out_dir, cfg.seed);
      std::cout << "wrote synthetic vintages to " << args.out_dir << "\n";
    } else if (run->parsed()) {
      args.seed_set = run_seed->count() > 0;
      rtbvar::ExperimentConfig cfg = load_with_overrides(args);
      std::vector<std::string> failures = rtbvar::run_experiment(cfg, args.out_dir);
      if (!failures.empty()) {
        std::cerr << failures.size() << " cell(s) failed:\n";
        for (const auto& f : failures) std::cerr << "  " << f << "\n";
        return 1;
      }
      std::cout << "all cells completed\n";
    } else if (evaluate->parsed()) {
      rtbvar::ExperimentConfig cfg = rtbvar::load_config(args.config_path);
      rtbvar::evaluate_experiment(cfg, args.out_dir);
      std::cout << "wrote score tables to " << args.out_dir << "/scores\n";
    } else if (report->parsed()) {
      rtbvar::report_experiment(args.out_dir);
      std::cout << "wrote report tables to " << args.out_dir << "/report\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

#include <iostream>

#include <CLI11.hpp>

#include "lpr/runner.hpp"

using namespace lpr;

int main(int argc, char** argv) {
  CLI::App app{"Experiments on square functions over disjoint frequency intervals"};
  app.require_subcommand(1);

  std::string experiment;
  std::string config_path;
  std::string out;
  std::uint64_t seed = 7;
  std::size_t jobs = 1;
  auto* run = app.add_subcommand("run", "Run an experiment and write summary.json, cases.csv and plot.csv");
  run->add_option("--experiment", experiment, "Experiment id")->required();
  run->add_option("--config", config_path, "JSON config (defaults when omitted)");
  run->add_option("--seed", seed, "Master seed");
  run->add_option("--out", out, "Output directory")->required();
  run->add_option("--jobs", jobs, "Parallel width (LPR_JOBS overrides)")->check(CLI::PositiveNumber);

  std::size_t case_id = 0;
  std::string replay_dir;
  auto* replay = app.add_subcommand("replay", "Recompute one case of a recorded run and compare");
  replay->add_option("--case", case_id, "Case id")->required();
  replay->add_option("--out", replay_dir, "Directory of the recorded run")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : runner::kValidation;
  }

  if (*run) {
    runner::RunManifest m;
    try {
      m.experiment = config::parse_experiment(experiment);
    } catch (const ConfigError& e) {
      std::cerr << "validation error: " << e.what() << "\n";
      return runner::kValidation;
    }
    m.config_path = config_path;
    m.out = out;
    m.seed = seed;
    m.jobs = runner::jobs_from_env(jobs);
    return runner::run_experiment(m, std::cerr);
  }
  return runner::replay_case(case_id, replay_dir, std::cerr);
}

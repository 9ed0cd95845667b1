// lesbox: pseudo-spectral solver for fractionally smoothed incompressible
// flow models on the periodic box, with built-in verification suites.
#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "lesbox/config.hpp"
#include "lesbox/runner.hpp"
#include "lesbox/verify.hpp"
#include <lesbox/version.hpp>

int main(int argc, char** argv) {
  CLI::App app{"pseudo-spectral solver for fractionally smoothed "
               "incompressible flow models"};
  app.set_version_flag("--version", std::string(lesbox::version_string));
  app.require_subcommand(1);

  std::string config_path;
  std::string output_dir;
  std::string suite;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int workers = 1;

  CLI::App* run = app.add_subcommand("run", "integrate one configuration");
  run->add_option("config", config_path, "JSON configuration file")
      ->required();
  run->add_option("--output-dir", output_dir,
                  "override the configured output directory");
  run->add_option("--seed", seed, "override the configured seed")
      ->each([&](const std::string&) { seed_set = true; });

  CLI::App* verify = app.add_subcommand(
      "verify", "run a built-in verification suite");
  verify
      ->add_option("suite", suite,
                   "one of: filter, identities, budget, reduction")
      ->required();

  CLI::App* sweep = app.add_subcommand(
      "sweep", "run a filter-scale convergence sweep");
  sweep->add_option("config", config_path, "JSON configuration file")
      ->required();
  sweep->add_option("--output-dir", output_dir,
                    "override the configured output directory");
  sweep->add_option("--seed", seed, "override the configured seed")
      ->each([&](const std::string&) { seed_set = true; });
  sweep->add_option("--workers", workers,
                    "number of concurrent member runs")
      ->check(CLI::Range(1, 256));

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      lesbox::RunConfig cfg = lesbox::load_run_config(config_path, false);
      if (seed_set) cfg.seed = seed;
      return lesbox::command_run(cfg, output_dir);
    }
    if (verify->parsed()) {
      const lesbox::SuiteReport rep = lesbox::run_suite(suite);
      std::fputs(lesbox::to_text(rep).c_str(), stdout);
      return rep.pass ? 0 : 1;
    }
    if (sweep->parsed()) {
      lesbox::RunConfig cfg = lesbox::load_run_config(config_path, true);
      if (seed_set) cfg.seed = seed;
      return lesbox::command_sweep(cfg, output_dir, workers);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}

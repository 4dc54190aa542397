// Experiment runner: train the detector stack, sweep it against the
// closed-form baseline, or dump a demo episode for plotting.

#include <exception>
#include <iostream>
#include <string>

#include "cli_setup.hpp"
#include "ousg/harness.hpp"

int main(int argc, char** argv) {
  CLI::App app{"threshold-crossing detection on OU series with adaptive sampling"};
  app.fallthrough();

  ousg::ExperimentConfig cfg;
  ousg::bind_experiment_options(app, cfg);
  bool paper_scale = false;
  app.add_flag("--paper-scale", paper_scale, "use 10000 test episodes");

  CLI::App* train = app.add_subcommand("train", "train hierarchies for every N in the grid");
  CLI::App* sweep = app.add_subcommand("sweep", "run the rho x N sweep against the baseline");
  CLI::App* demo = app.add_subcommand("demo", "dump one episode with sampling instants");
  std::string dump_series;
  demo->add_option("--dump-series", dump_series, "also write the raw series, one value per line");
  app.require_subcommand(1);

  CLI11_PARSE(app, argc, argv);
  if (paper_scale && app.count("--episodes") == 0) cfg.episodes_test = 10000;

  try {
    if (train->parsed()) {
      ousg::cmd_train(cfg);
    } else if (sweep->parsed()) {
      ousg::cmd_sweep(cfg);
    } else {
      ousg::cmd_demo(cfg, dump_series);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
